#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cavity/basis.hpp"

namespace cavity {

/// Case-III setup: harmonic potential sourced by `motion_potential` (L1,
/// Omega1^2) inside a cavity whose wall follows `motion_boundary` (L2), expanded
/// in the exact basis of L2.
struct CoupledSystemConfig {
  WallMotion motion_potential;
  WallMotion motion_boundary;
  PhysicalConstants constants;
  BasisMode n_init{2};
  int k_max = 16;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int t_samples = 401;

  /// Throws DomainError if the invariants do not hold: k_max >= n_init,
  /// shared L0 and omega, positive tolerances, t_samples >= 2.
  void validate() const;
};

struct IntegratorStats {
  long steps = 0;
  double min_step = 0.0;
  double max_step = 0.0;
};

/// Sampled coefficients a_k(t_i), k = 1..k_max, on a uniform grid over [0, T].
struct CoefficientTrajectory {
  std::vector<double> times;
  Eigen::MatrixXcd coeffs;  // row i: sample t_i; column k-1: mode k
  double norm_drift = 0.0;  // max_i |sum_k |a_k(t_i)|^2 - 1|
  double top_amplitude = 0.0;  // max_i |a_{k_max}(t_i)|
  IntegratorStats stats;

  int k_max() const { return static_cast<int>(coeffs.cols()); }
  std::complex<double> a(std::size_t sample, int k) const {
    return coeffs(static_cast<Eigen::Index>(sample), k - 1);
  }
  /// Index of the sample at time t (to within 1e-9 T); DomainError otherwise.
  std::size_t sample_index(double t) const;
};

/// <psi_j^II | x^2 | psi_k^II>(t), including the relative basis phase.
std::complex<double> x2_matrix_element(const WallMotion& motion_boundary,
                                       const PhysicalConstants& constants, int j, int k,
                                       double t);

/// Real part of the x^2 matrix in units of L^2 with basis phases stripped:
/// entry (j-1, k-1) is 8 j k (-1)^(j+k) / (pi^2 (k^2 - j^2)^2), or the
/// diagonal coefficient for j == k.
Eigen::MatrixXd x2_reduced_matrix(int k_max);

/// Integrates the truncated coupled system
///   da_j/dt = (-i/hbar) (m/2) (Omega1^2 - Omega2^2) sum_k M_jk(t) a_k
/// from a_k(0) = delta_{k,n} over one period with an adaptive Dormand-Prince
/// 5(4) pair. Throws NumericalError("integrator", ...) on step-size underflow.
CoefficientTrajectory evolve_coefficients(const CoupledSystemConfig& config);

struct AdiabaticPhase {
  double mu_ad;        // reported value
  double mu_II;        // first term: cyclic phase of the L2 cavity
  double correction;   // mu_ad - mu_II
  double quadrature;   // mu_ad from direct quadrature of the diagonal-only solution
  double regime_ratio; // |q2 - q1| / |q1| (infinite for q1 == 0)
  bool closed_form_used;
};

/// Cyclic phase when only the initial mode is kept (diagonal coupling).
/// Uses the cosine closed form when both walls share omega and |q1| is not
/// tiny, cross-checked against quadrature.
AdiabaticPhase adiabatic_phase(const WallMotion& motion_potential,
                               const WallMotion& motion_boundary,
                               const PhysicalConstants& constants, BasisMode mode);

/// Phase of the evolved state read from its dominant coefficient:
/// mu_II - arg(a_n(T)).
double coefficient_phase(const CoefficientTrajectory& trajectory,
                         const CoupledSystemConfig& config);

/// phi(x, t) = sum_k a_k(t) psi_k^II(x, t) on the grid; t must be a sample time.
std::vector<std::complex<double>> reconstruct_wavefunction(
    const CoefficientTrajectory& trajectory, const WallMotion& motion_boundary,
    const PhysicalConstants& constants, std::span<const double> x_grid, double t);

}  // namespace cavity
