#pragma once

#include "cavity/error.hpp"

namespace cavity {

/// Physical constants in atomic units. Only the particle mass is configurable.
class PhysicalConstants {
public:
  static constexpr double hbar = 1.0;
  static constexpr double c = 137.035999;

  explicit PhysicalConstants(double mass = 1.0) : mass_(mass) {
    if (!(mass > 0.0)) throw DomainError("particle mass must be positive");
  }

  double mass() const { return mass_; }

private:
  double mass_;
};

}  // namespace cavity
