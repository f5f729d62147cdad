#include "cavity/basis.hpp"

#include <cmath>
#include <numbers>

#include "cavity/quadrature.hpp"

namespace cavity {
namespace {

constexpr double pi = std::numbers::pi;

// Antiderivative of 1 / (a + b cos(theta))^2 in theta, continuous across
// periods; a > |b|.
double cosine_antiderivative(double a, double b, double theta) {
  const double r2 = a * a - b * b;
  const double r = std::sqrt(r2);
  const double k = std::round(theta / (2.0 * pi));
  const double phi = theta - 2.0 * pi * k;  // in [-pi, pi]
  const double beta = std::sqrt((a - b) / (a + b));
  const double f1 = 2.0 / r * std::atan2(beta * std::sin(0.5 * phi), std::cos(0.5 * phi)) +
                    2.0 * pi * k / r;
  return -b * std::sin(theta) / (r2 * (a + b * std::cos(theta))) + a / r2 * f1;
}

}  // namespace

double phase_integral(const WallMotion& motion, double t0, double t) {
  if (t < t0) throw DomainError("phase_integral requires t >= t0");
  if (t == t0) return 0.0;
  switch (motion.family()) {
    case WallMotion::Family::cosine: {
      const double a = motion.L0() - motion.q();
      const double b = motion.q();
      const double w = motion.omega();
      return (cosine_antiderivative(a, b, w * t) - cosine_antiderivative(a, b, w * t0)) / w;
    }
  }
  return phase_integral_numeric(motion, t0, t);
}

double phase_integral_numeric(const WallMotion& motion, double t0, double t) {
  if (t < t0) throw DomainError("phase_integral requires t >= t0");
  return integrate(
      [&](double s) {
        const double l = length(motion, s);
        return 1.0 / (l * l);
      },
      // values are O(T / L^2) ~ 1e-4, so the absolute target is scaled down
      t0, t, 1e-15);
}

double basis_phase(const WallMotion& motion, const PhysicalConstants& constants, int n,
                   double t) {
  const double nn = static_cast<double>(n) * n;
  return PhysicalConstants::hbar * pi * pi * nn / (2.0 * constants.mass()) *
         phase_integral(motion, 0.0, t);
}

std::complex<double> psi(const WallMotion& motion, const PhysicalConstants& constants,
                         BasisMode mode, double x, double t) {
  const double l = length(motion, t);
  const double slack = 1e-12 * l;
  if (!(x >= -slack && x <= l + slack)) throw DomainError("psi: x outside [0, L(t)]");
  const double chirp =
      constants.mass() * length_dot(motion, t) * x * x / (2.0 * PhysicalConstants::hbar * l);
  const double phase = chirp - basis_phase(motion, constants, mode.n(), t);
  return std::sqrt(2.0 / l) * std::sin(mode.n() * pi * x / l) * std::polar(1.0, phase);
}

double x2_diagonal_coefficient(int n) {
  const double nn = static_cast<double>(n) * n;
  return (2.0 * nn * pi * pi - 3.0) / (6.0 * nn * pi * pi);
}

double mu_total(const WallMotion& motion, const PhysicalConstants& constants, BasisMode mode) {
  return basis_phase(motion, constants, mode.n(), period(motion));
}

double mu_I_closed_form(double L0, double q, double omega, BasisMode mode,
                        const PhysicalConstants& constants) {
  if (!(L0 > 0.0) || !(omega > 0.0)) throw DomainError("mu_I_closed_form: L0, omega > 0");
  if (!(2.0 * std::abs(q) < L0)) throw DomainError("mu_I_closed_form: requires |q| < L0/2");
  const double nn = static_cast<double>(mode.n()) * mode.n();
  return PhysicalConstants::hbar * pi * pi * pi * nn * (L0 - q) /
         (constants.mass() * omega * std::pow(L0 * (L0 - 2.0 * q), 1.5));
}

double wrap_phase(double phase) {
  double w = std::fmod(phase, 2.0 * pi);
  if (w < 0.0) w += 2.0 * pi;
  return w;
}

double energy_expectation(const WallMotion& motion, const PhysicalConstants& constants,
                          BasisMode mode, double t) {
  const double m = constants.mass();
  const double hbar = PhysicalConstants::hbar;
  const double nn = static_cast<double>(mode.n()) * mode.n();
  const double l = length(motion, t);
  const double ld = length_dot(motion, t);
  const double ldd = length_ddot(motion, t);
  const double cn = x2_diagonal_coefficient(mode.n());
  // kinetic: hbar^2 (n pi / L)^2 / 2m + m L'^2 c_n / 2 (chirp); potential: m Omega^2 L^2 c_n / 2
  return hbar * hbar * pi * pi * nn / (2.0 * m * l * l) + 0.5 * m * cn * (ld * ld - l * ldd);
}

double delta_dynamical(const WallMotion& motion, const PhysicalConstants& constants,
                       BasisMode mode) {
  return integrate(
             [&](double t) { return energy_expectation(motion, constants, mode, t); }, 0.0,
             period(motion), 1e-12) /
         PhysicalConstants::hbar;
}

double gamma_geometric(const WallMotion& motion, const PhysicalConstants& constants,
                       BasisMode mode) {
  const double prefactor =
      constants.mass() * x2_diagonal_coefficient(mode.n()) / (2.0 * PhysicalConstants::hbar);
  const double integral = integrate(
      [&](double t) {
        const double ld = length_dot(motion, t);
        return length(motion, t) * length_ddot(motion, t) - ld * ld;
      },
      0.0, period(motion), 1e-12);
  return prefactor * integral;
}

PhaseDecomposition decompose_phase(const WallMotion& motion, const PhysicalConstants& constants,
                                   BasisMode mode) {
  const double mu = mu_total(motion, constants, mode);
  const double gamma = gamma_geometric(motion, constants, mode);
  return {mu, mu - gamma, gamma};
}

double delta_case3(const WallMotion& motion_potential, const WallMotion& motion_boundary,
                   const PhysicalConstants& constants, BasisMode mode) {
  if (motion_potential.L0() != motion_boundary.L0())
    throw DomainError("delta_case3: motions must share the initial length L0");
  const double m = constants.mass();
  const double hbar = PhysicalConstants::hbar;
  const double nn = static_cast<double>(mode.n()) * mode.n();
  const double cn = x2_diagonal_coefficient(mode.n());
  const double T = period(motion_boundary);
  const double first = hbar * pi * pi * nn / (2.0 * m) * phase_integral(motion_boundary, 0.0, T);
  const double second = integrate(
      [&](double t) {
        const double l2 = length(motion_boundary, t);
        const double ld2 = length_dot(motion_boundary, t);
        return ld2 * ld2 + omega_squared(motion_potential, t) * l2 * l2;
      },
      0.0, T, 1e-12);
  return first + m * cn / (2.0 * hbar) * second;
}

}  // namespace cavity
