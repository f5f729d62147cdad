#include "cavity/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>

#include "cavity/quadrature.hpp"

namespace cavity {
namespace {

constexpr double pi = std::numbers::pi;
constexpr double node_threshold = 1e-3;

double sign_power(int e) { return (e % 2 == 0) ? 1.0 : -1.0; }

double trapezoid(const std::vector<double>& t, const std::vector<double>& f) {
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
  return s;
}

}  // namespace

Window default_window(const WallMotion& motion) { return {0.0, motion.L0() / 10.0}; }

double local_phase(std::complex<double> phi_0, std::complex<double> phi_T, double reference) {
  const double raw = -std::arg(phi_T / phi_0);
  return raw + 2.0 * pi * std::round((reference - raw) / (2.0 * pi));
}

PhaseProfile extract_phase_profile(std::span<const double> x_grid,
                                   std::span<const std::complex<double>> phi_0,
                                   std::span<const std::complex<double>> phi_T, double mu_I,
                                   Window window) {
  if (phi_0.size() != x_grid.size() || phi_T.size() != x_grid.size())
    throw DomainError("extract_phase_profile: samples must share the grid");
  double peak = 0.0;
  for (const auto& v : phi_0) peak = std::max(peak, std::abs(v));

  PhaseProfile out;
  out.mu_I = mu_I;
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    const double x = x_grid[i];
    if (!(x > window.x_min && x <= window.x_max)) continue;
    if (std::abs(phi_0[i]) < node_threshold * peak) continue;
    const double anchor = out.mu_III.empty() ? mu_I : out.mu_III.back();
    out.x_values.push_back(x);
    out.mu_III.push_back(local_phase(phi_0[i], phi_T[i], anchor));
  }
  if (out.x_values.empty())
    throw DomainError("extract_phase_profile: window lies entirely in node-exclusion zones");
  out.delta_mu.reserve(out.mu_III.size());
  for (double mu : out.mu_III) out.delta_mu.push_back(mu - mu_I);
  return out;
}

PhaseProfile case3_phase_profile(const CoupledSystemConfig& config,
                                 const CoefficientTrajectory& trajectory, Window window,
                                 int points) {
  if (points < 1) throw DomainError("case3_phase_profile: points must be >= 1");
  std::vector<double> x(points);
  for (int i = 0; i < points; ++i)
    x[i] = window.x_min + (window.x_max - window.x_min) * (i + 1) / points;
  const double T = trajectory.times.back();
  const auto phi_0 = reconstruct_wavefunction(trajectory, config.motion_boundary,
                                              config.constants, x, trajectory.times.front());
  const auto phi_T =
      reconstruct_wavefunction(trajectory, config.motion_boundary, config.constants, x, T);
  const double mu_I = mu_total(config.motion_potential, config.constants, config.n_init);
  return extract_phase_profile(x, phi_0, phi_T, mu_I, window);
}

std::optional<double> ConvergenceTable::shift(int k, int step) const {
  const auto find = [&](int key) -> const ConvergenceRow* {
    for (const auto& r : rows)
      if (r.k_max == key) return &r;
    return nullptr;
  };
  const auto* a = find(k);
  const auto* b = find(k + step);
  if (!a || !b) return std::nullopt;
  return std::abs(a->mu_III - b->mu_III);
}

double default_reference_x(const CoupledSystemConfig& config) {
  return config.motion_boundary.L0() / (2.0 * config.n_init.n());
}

ConvergenceTable convergence_study(const CoupledSystemConfig& config,
                                   std::span<const int> k_max_list,
                                   std::optional<double> reference_x) {
  if (!std::is_sorted(k_max_list.begin(), k_max_list.end()) ||
      std::adjacent_find(k_max_list.begin(), k_max_list.end()) != k_max_list.end())
    throw DomainError("convergence_study: k_max list must be strictly increasing");

  ConvergenceTable table;
  table.reference_x = reference_x.value_or(default_reference_x(config));
  table.mu_I = mu_total(config.motion_potential, config.constants, config.n_init);
  const std::vector<double> x{table.reference_x};

  std::vector<std::future<double>> runs;
  runs.reserve(k_max_list.size());
  for (int k : k_max_list) {
    CoupledSystemConfig run = config;
    run.k_max = k;
    run.t_samples = 2;
    run.validate();
    runs.push_back(std::async(std::launch::async, [run, x, mu_I = table.mu_I] {
      const auto traj = evolve_coefficients(run);
      const auto phi_0 = reconstruct_wavefunction(traj, run.motion_boundary, run.constants, x,
                                                   traj.times.front());
      const auto phi_T = reconstruct_wavefunction(traj, run.motion_boundary, run.constants, x,
                                                  traj.times.back());
      return local_phase(phi_0[0], phi_T[0], mu_I);
    }));
  }

  double prev = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const double mu = runs[i].get();
    table.rows.push_back({k_max_list[i], mu, mu - prev});
    prev = mu;
  }
  return table;
}

double mode_velocity(const WallMotion& motion, const PhysicalConstants& constants, BasisMode mode,
                     double t) {
  return mode.n() * pi * PhysicalConstants::hbar / (constants.mass() * length(motion, t)) +
         0.5 * length_dot(motion, t);
}

double mode_velocity_average(const WallMotion& motion, const PhysicalConstants& constants,
                             BasisMode mode) {
  const double T = period(motion);
  return integrate([&](double t) { return mode_velocity(motion, constants, mode, t); }, 0.0, T,
                   1e-12) /
         T;
}

MomentumMatrices momentum_matrices(const WallMotion& motion_boundary,
                                   const PhysicalConstants& constants, int k_max, double t) {
  const double m = constants.mass();
  const double hbar = PhysicalConstants::hbar;
  const double l = length(motion_boundary, t);
  const double ld = length_dot(motion_boundary, t);
  const Eigen::MatrixXd x2 = x2_reduced_matrix(k_max);

  std::vector<double> theta(k_max);
  for (int k = 1; k <= k_max; ++k) theta[k - 1] = basis_phase(motion_boundary, constants, k, t);

  MomentumMatrices out{Eigen::MatrixXcd(k_max, k_max), Eigen::MatrixXcd(k_max, k_max)};
  for (int j = 1; j <= k_max; ++j) {
    for (int k = 1; k <= k_max; ++k) {
      // x_jk / L, D_jk = <u_j|u_k'> * L, and G_jk - G_kj with G_jk = <x u_j|u_k'>
      double x_red = 0.5;
      double deriv = 0.0;
      double g_anti = 0.0;
      if (j != k) {
        const double s = sign_power(j + k);
        const double d = static_cast<double>(j * j - k * k);
        x_red = 4.0 * j * k * (s - 1.0) / (pi * pi * d * d);
        deriv = 2.0 * j * k * (1.0 - s) / d;
        g_anti = -4.0 * s * j * k / d;
      }
      const auto phase = std::polar(1.0, theta[j - 1] - theta[k - 1]);
      const std::complex<double> p(m * ld * x_red, -hbar * deriv / l);
      double p2_re = m * m * ld * ld * x2(j - 1, k - 1);
      if (j == k) p2_re += hbar * hbar * (k * pi / l) * (k * pi / l);
      const std::complex<double> p2(p2_re, -hbar * m * ld / l * g_anti);
      out.p(j - 1, k - 1) = phase * p;
      out.p2(j - 1, k - 1) = phase * p2;
    }
  }
  return out;
}

VelocityReport velocity_stats(const CoefficientTrajectory& trajectory,
                              const WallMotion& motion_boundary,
                              const PhysicalConstants& constants) {
  const int kmax = trajectory.k_max();
  const double m = constants.mass();
  const double c = PhysicalConstants::c;

  VelocityReport out;
  out.mode_v_over_c.reserve(kmax);
  for (int k = 1; k <= kmax; ++k)
    out.mode_v_over_c.push_back(mode_velocity_average(motion_boundary, constants, BasisMode(k)) /
                                c);

  out.times = trajectory.times;
  for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
    const auto mats = momentum_matrices(motion_boundary, constants, kmax, trajectory.times[i]);
    const Eigen::VectorXcd a = trajectory.coeffs.row(static_cast<Eigen::Index>(i)).transpose();
    const double p = a.dot(mats.p * a).real();
    const double p2 = a.dot(mats.p2 * a).real();
    out.mean_v.push_back(p / m);
    out.std_v.push_back(std::sqrt(std::max(p2 - p * p, 0.0)) / m);
  }
  const double span = out.times.back() - out.times.front();
  out.mean_v_over_c = trapezoid(out.times, out.mean_v) / span / c;
  out.std_v_over_c = trapezoid(out.times, out.std_v) / span / c;
  return out;
}

CausalityReport causality_check(const WallMotion& motion, const PhysicalConstants& constants) {
  const double T = period(motion);
  const double tau = light_crossing_time(motion, constants);
  return {T < tau, tau - T, T, tau};
}

}  // namespace cavity
