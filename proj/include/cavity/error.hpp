#pragma once

#include <stdexcept>
#include <string>

namespace cavity {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// The numerical machinery could not meet its contract (integrator failure,
/// truncation criterion not satisfied).
class NumericalError : public std::runtime_error {
public:
  NumericalError(const std::string& criterion, const std::string& what, double time = 0.0)
      : std::runtime_error(criterion + ": " + what), criterion_(criterion), time_(time) {}

  const std::string& criterion() const { return criterion_; }
  double time() const { return time_; }

private:
  std::string criterion_;
  double time_;
};

/// Invalid or unreadable configuration.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace cavity
