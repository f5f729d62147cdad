#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cavity/dynamics.hpp"

namespace cavity {

/// Positions (x_min, x_max] used when reading the local phase.
struct Window {
  double x_min;
  double x_max;
};

/// Default reporting window near the static wall: (0, L0/10].
Window default_window(const WallMotion& motion);

/// Local phase of the evolved state relative to the initial one near x = 0.
struct PhaseProfile {
  std::vector<double> x_values;
  std::vector<double> mu_III;  // unwrapped along x
  double mu_I = 0.0;
  std::vector<double> delta_mu;  // mu_III - mu_I
};

/// -arg(phi_T / phi_0), shifted by a multiple of 2 pi onto the branch nearest
/// `reference`.
double local_phase(std::complex<double> phi_0, std::complex<double> phi_T, double reference);

/// Phase profile on the grid points inside `window`. Points where
/// |phi_0| < 1e-3 max|phi_0| are dropped; the first kept point is placed on the
/// branch nearest mu_I and the rest are unwrapped along x.
/// Throws DomainError if no point survives.
PhaseProfile extract_phase_profile(std::span<const double> x_grid,
                                   std::span<const std::complex<double>> phi_0,
                                   std::span<const std::complex<double>> phi_T, double mu_I,
                                   Window window);

/// Evolved case-III profile at t = T on `points` uniformly spaced positions of
/// the window, with mu_I the cyclic phase of the potential's own cavity.
PhaseProfile case3_phase_profile(const CoupledSystemConfig& config,
                                 const CoefficientTrajectory& trajectory, Window window,
                                 int points = 256);

struct ConvergenceRow {
  int k_max;
  double mu_III;
  double delta_prev;  // mu_III(k_max) - mu_III(previous k_max); NaN for the first row
};

struct ConvergenceTable {
  double reference_x = 0.0;
  double mu_I = 0.0;
  std::vector<ConvergenceRow> rows;

  /// |mu_III(k) - mu_III(k + step)| if both truncations were run.
  std::optional<double> shift(int k, int step = 4) const;
};

/// First antinode of the initial mode, L0 / (2n).
double default_reference_x(const CoupledSystemConfig& config);

/// Runs the case-III evolution for every truncation in `k_max_list`
/// (strictly increasing) and reads the local phase at `reference_x`.
/// Runs are independent and execute concurrently; rows come back ordered by k_max.
ConvergenceTable convergence_study(const CoupledSystemConfig& config,
                                   std::span<const int> k_max_list,
                                   std::optional<double> reference_x = std::nullopt);

/// Forward-wave velocity of mode n: n pi hbar / (m L(t)) + L'(t) / 2.
double mode_velocity(const WallMotion& motion, const PhysicalConstants& constants, BasisMode mode,
                     double t);

/// Period average of mode_velocity.
double mode_velocity_average(const WallMotion& motion, const PhysicalConstants& constants,
                             BasisMode mode);

/// Matrices of P and P^2 in the moving-wall basis at time t (modes 1..k_max).
struct MomentumMatrices {
  Eigen::MatrixXcd p;
  Eigen::MatrixXcd p2;
};
MomentumMatrices momentum_matrices(const WallMotion& motion_boundary,
                                   const PhysicalConstants& constants, int k_max, double t);

struct VelocityReport {
  std::vector<double> mode_v_over_c;  // period-averaged <v_k>/c for k = 1..k_max
  double mean_v_over_c = 0.0;
  double std_v_over_c = 0.0;
  std::vector<double> times;
  std::vector<double> mean_v;  // <P>/m at each sample
  std::vector<double> std_v;   // sqrt(<P^2> - <P>^2)/m at each sample
};

/// Velocity mean and spread of the reconstructed state, time-averaged over
/// the trajectory with the trapezoidal rule.
VelocityReport velocity_stats(const CoefficientTrajectory& trajectory,
                              const WallMotion& motion_boundary,
                              const PhysicalConstants& constants);

struct CausalityReport {
  bool causal;
  double margin;  // tau - T
  double period;
  double crossing_time;
};

/// Whether a full wall cycle completes before light crosses the cavity.
CausalityReport causality_check(const WallMotion& motion, const PhysicalConstants& constants);

}  // namespace cavity
