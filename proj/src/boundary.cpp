#include "cavity/boundary.hpp"

#include <cmath>
#include <numbers>

namespace cavity {

WallMotion::WallMotion(double L0, double q, double omega) : L0_(L0), q_(q), omega_(omega) {
  if (!std::isfinite(L0) || !std::isfinite(q) || !std::isfinite(omega))
    throw DomainError("wall motion parameters must be finite");
  if (!(L0 > 0.0)) throw DomainError("L0 must be positive");
  if (!(omega > 0.0)) throw DomainError("omega must be positive");
  if (!(2.0 * std::abs(q) < L0)) throw DomainError("amplitude must satisfy |q| < L0/2");
}

double length(const WallMotion& m, double t) {
  return m.L0() + m.q() * (std::cos(m.omega() * t) - 1.0);
}

double length_dot(const WallMotion& m, double t) {
  return -m.q() * m.omega() * std::sin(m.omega() * t);
}

double length_ddot(const WallMotion& m, double t) {
  return -m.q() * m.omega() * m.omega() * std::cos(m.omega() * t);
}

double omega_squared(const WallMotion& m, double t) {
  return -length_ddot(m, t) / length(m, t);
}

double period(const WallMotion& m) { return 2.0 * std::numbers::pi / m.omega(); }

double light_crossing_time(const WallMotion& m, const PhysicalConstants&) {
  return m.L0() / PhysicalConstants::c;
}

}  // namespace cavity
