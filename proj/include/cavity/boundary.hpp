#pragma once

#include "cavity/constants.hpp"

namespace cavity {

/// Wall trajectory L(t) = L0 + q (cos(omega t) - 1).
///
/// The wall starts at rest at L0 and is periodic with T = 2 pi / omega. The
/// amplitude is restricted to 0 <= |q| < L0/2 so that L(t) stays positive
/// and L0 (L0 - 2q) > 0. Negative q is accepted (wall moves outward first);
/// the same bound applies to |q|.
///
/// Only the cosine family is provided. A new family must supply analytic
/// L, L' and L'' and extend `Family`.
class WallMotion {
public:
  enum class Family { cosine };

  WallMotion(double L0, double q, double omega);

  double L0() const { return L0_; }
  double q() const { return q_; }
  double omega() const { return omega_; }
  Family family() const { return Family::cosine; }

  bool operator==(const WallMotion&) const = default;

private:
  double L0_;
  double q_;
  double omega_;
};

double length(const WallMotion& motion, double t);
double length_dot(const WallMotion& motion, double t);
double length_ddot(const WallMotion& motion, double t);

/// Harmonic frequency squared that keeps the moving-wall basis exact,
/// Omega^2(t) = -L''(t) / L(t). Negative on part of the cycle when q != 0.
double omega_squared(const WallMotion& motion, double t);

double period(const WallMotion& motion);

/// Time for light to cross the resting cavity, L0 / c.
double light_crossing_time(const WallMotion& motion, const PhysicalConstants& constants);

}  // namespace cavity
