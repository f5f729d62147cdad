#pragma once

#include <complex>

#include "cavity/boundary.hpp"

namespace cavity {

/// Positive mode index of the moving-wall basis.
class BasisMode {
public:
  explicit BasisMode(int n) : n_(n) {
    if (n < 1) throw DomainError("mode index must be >= 1");
  }
  int n() const { return n_; }
  bool operator==(const BasisMode&) const = default;

private:
  int n_;
};

/// Cyclic phase split into dynamical and geometric parts; mu == delta + gamma.
struct PhaseDecomposition {
  double mu;
  double delta;
  double gamma;
};

/// Integral of L(t')^-2 over [t0, t], from the closed antiderivative.
double phase_integral(const WallMotion& motion, double t0, double t);

/// Same integral by adaptive quadrature; the route used for wall families
/// without a closed antiderivative.
double phase_integral_numeric(const WallMotion& motion, double t0, double t);

/// Exact moving-wall basis function psi_n(x, t), started at t0 = 0.
/// Throws DomainError for x outside [0, L(t)].
std::complex<double> psi(const WallMotion& motion, const PhysicalConstants& constants,
                         BasisMode mode, double x, double t);

/// Dynamical phase accumulated by psi_n between 0 and t: hbar pi^2 n^2 I(t) / (2m).
double basis_phase(const WallMotion& motion, const PhysicalConstants& constants, int n, double t);

/// (2 n^2 pi^2 - 3) / (6 n^2 pi^2): <x^2> of psi_n in units of L^2.
double x2_diagonal_coefficient(int n);

/// Total phase increment over one period (unwrapped, positive).
double mu_total(const WallMotion& motion, const PhysicalConstants& constants, BasisMode mode);

/// Closed form of mu_total for the cosine wall.
double mu_I_closed_form(double L0, double q, double omega, BasisMode mode,
                        const PhysicalConstants& constants);

/// Reduce a phase to [0, 2 pi).
double wrap_phase(double phase);

/// <psi_n | H | psi_n>(t) for the cavity whose frequency matches its wall.
double energy_expectation(const WallMotion& motion, const PhysicalConstants& constants,
                          BasisMode mode, double t);

double delta_dynamical(const WallMotion& motion, const PhysicalConstants& constants,
                       BasisMode mode);

/// Geometric part: (m c_n / 2 hbar) * integral over a period of L L'' - L'^2,
/// with c_n = x2_diagonal_coefficient(n).
double gamma_geometric(const WallMotion& motion, const PhysicalConstants& constants,
                       BasisMode mode);

/// (mu, mu - gamma, gamma).
PhaseDecomposition decompose_phase(const WallMotion& motion, const PhysicalConstants& constants,
                                   BasisMode mode);

/// Dynamical phase of psi_n built on `motion_boundary` but evolving in the
/// harmonic potential of `motion_potential`. Both motions must share L0.
double delta_case3(const WallMotion& motion_potential, const WallMotion& motion_boundary,
                   const PhysicalConstants& constants, BasisMode mode);

}  // namespace cavity
