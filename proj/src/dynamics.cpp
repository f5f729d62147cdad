#include "cavity/dynamics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "cavity/quadrature.hpp"

namespace cavity {
namespace {

constexpr double pi = std::numbers::pi;
using State = std::vector<std::complex<double>>;

double sign_power(int e) { return (e % 2 == 0) ? 1.0 : -1.0; }

// Right-hand side of the coupled system. M_jk = L2^2 S_jk e^{i theta_j} e^{-i theta_k}
// with theta_k the basis phase of mode k, so the product costs one real
// matrix-vector multiply per evaluation.
class CoupledRhs {
public:
  explicit CoupledRhs(const CoupledSystemConfig& cfg)
      : cfg_(cfg),
        reduced_(x2_reduced_matrix(cfg.k_max)),
        phase_rate_(cfg.k_max),
        rotated_re_(cfg.k_max),
        rotated_im_(cfg.k_max) {
    for (int k = 1; k <= cfg.k_max; ++k)
      phase_rate_[k - 1] =
          PhysicalConstants::hbar * pi * pi * k * k / (2.0 * cfg.constants.mass());
  }

  void operator()(const State& a, State& dadt, double t) {
    const auto& bnd = cfg_.motion_boundary;
    const double l2 = length(bnd, t);
    const double detuning = omega_squared(cfg_.motion_potential, t) - omega_squared(bnd, t);
    const std::complex<double> coef(0.0, -0.5 * cfg_.constants.mass() * detuning * l2 * l2 /
                                              PhysicalConstants::hbar);
    const double integral = phase_integral(bnd, 0.0, t);
    const auto n = static_cast<Eigen::Index>(a.size());
    phases_.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      phases_[k] = std::polar(1.0, -phase_rate_[k] * integral);
      const auto b = phases_[k] * a[k];
      rotated_re_[k] = b.real();
      rotated_im_[k] = b.imag();
    }
    const Eigen::VectorXd yr = reduced_ * rotated_re_;
    const Eigen::VectorXd yi = reduced_ * rotated_im_;
    for (Eigen::Index j = 0; j < n; ++j)
      dadt[j] = coef * std::conj(phases_[j]) * std::complex<double>(yr[j], yi[j]);
  }

private:
  const CoupledSystemConfig& cfg_;
  Eigen::MatrixXd reduced_;
  Eigen::VectorXd phase_rate_;
  Eigen::VectorXd rotated_re_;
  Eigen::VectorXd rotated_im_;
  std::vector<std::complex<double>> phases_;
};

}  // namespace

void CoupledSystemConfig::validate() const {
  if (k_max < n_init.n()) throw DomainError("k_max must be >= the initial mode index");
  if (motion_potential.L0() != motion_boundary.L0())
    throw DomainError("potential and boundary motions must share L0");
  if (motion_potential.omega() != motion_boundary.omega())
    throw DomainError("potential and boundary motions must share the period");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("tolerances must be positive");
  if (t_samples < 2) throw DomainError("t_samples must be >= 2");
}

std::size_t CoefficientTrajectory::sample_index(double t) const {
  if (times.empty()) throw DomainError("empty trajectory");
  const double span = times.back() - times.front();
  const double tol = 1e-9 * (span > 0.0 ? span : 1.0);
  if (t < times.front() - tol || t > times.back() + tol)
    throw DomainError("time outside the trajectory range");
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::abs(times[i] - t) <= tol) return i;
  throw DomainError("time is not a trajectory sample");
}

Eigen::MatrixXd x2_reduced_matrix(int k_max) {
  Eigen::MatrixXd s(k_max, k_max);
  for (int j = 1; j <= k_max; ++j) {
    for (int k = 1; k <= k_max; ++k) {
      if (j == k) {
        s(j - 1, k - 1) = x2_diagonal_coefficient(j);
      } else {
        const double d = static_cast<double>(k * k - j * j);
        s(j - 1, k - 1) = 8.0 * j * k * sign_power(j + k) / (pi * pi * d * d);
      }
    }
  }
  return s;
}

std::complex<double> x2_matrix_element(const WallMotion& motion_boundary,
                                       const PhysicalConstants& constants, int j, int k,
                                       double t) {
  if (j < 1 || k < 1) throw DomainError("matrix element indices must be >= 1");
  const double l = length(motion_boundary, t);
  if (j == k) return x2_diagonal_coefficient(j) * l * l;
  const double d = static_cast<double>(k * k - j * j);
  const double magnitude = 8.0 * j * k * sign_power(j + k) * l * l / (pi * pi * d * d);
  const double theta = PhysicalConstants::hbar * pi * pi * d / (2.0 * constants.mass()) *
                       phase_integral(motion_boundary, 0.0, t);
  return magnitude * std::polar(1.0, -theta);
}

CoefficientTrajectory evolve_coefficients(const CoupledSystemConfig& config) {
  namespace odeint = boost::numeric::odeint;
  config.validate();

  const int kmax = config.k_max;
  const double T = period(config.motion_boundary);
  const auto samples = static_cast<std::size_t>(config.t_samples);

  CoefficientTrajectory out;
  out.times.resize(samples);
  for (std::size_t i = 0; i < samples; ++i)
    out.times[i] = T * static_cast<double>(i) / static_cast<double>(samples - 1);
  out.times.back() = T;
  out.coeffs = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(samples), kmax);

  State a(kmax, {0.0, 0.0});
  a[config.n_init.n() - 1] = 1.0;
  auto record = [&](std::size_t i, const State& s) {
    for (int k = 0; k < kmax; ++k) out.coeffs(static_cast<Eigen::Index>(i), k) = s[k];
  };
  record(0, a);

  CoupledRhs rhs(config);
  auto stepper = odeint::make_dense_output(config.abs_tol, config.rel_tol,
                                           odeint::runge_kutta_dopri5<State>());
  const double min_step = 1e-13 * T;
  stepper.initialize(a, 0.0, T / 1000.0);
  out.stats.min_step = std::numeric_limits<double>::infinity();

  State sample(kmax);
  for (std::size_t i = 1; i < samples; ++i) {
    while (stepper.current_time() < out.times[i]) {
      try {
        stepper.do_step(std::ref(rhs));
      } catch (const odeint::odeint_error& e) {
        throw NumericalError("integrator", std::string("step control failed: ") + e.what(),
                             stepper.current_time());
      }
      const double h = stepper.current_time() - stepper.previous_time();
      ++out.stats.steps;
      out.stats.min_step = std::min(out.stats.min_step, h);
      out.stats.max_step = std::max(out.stats.max_step, h);
      if (h < min_step || !std::isfinite(stepper.current_state()[0].real()))
        throw NumericalError("integrator", "step size underflow", stepper.current_time());
    }
    stepper.calc_state(out.times[i], sample);
    record(i, sample);
  }

  for (Eigen::Index i = 0; i < out.coeffs.rows(); ++i) {
    out.norm_drift = std::max(out.norm_drift, std::abs(out.coeffs.row(i).squaredNorm() - 1.0));
    out.top_amplitude = std::max(out.top_amplitude, std::abs(out.coeffs(i, kmax - 1)));
  }
  return out;
}

AdiabaticPhase adiabatic_phase(const WallMotion& motion_potential,
                               const WallMotion& motion_boundary,
                               const PhysicalConstants& constants, BasisMode mode) {
  if (motion_potential.L0() != motion_boundary.L0())
    throw DomainError("adiabatic_phase: motions must share L0");
  const double m = constants.mass();
  const double hbar = PhysicalConstants::hbar;
  const double half_cn = 0.5 * x2_diagonal_coefficient(mode.n());
  const double T = period(motion_boundary);

  AdiabaticPhase out{};
  out.mu_II = mu_total(motion_boundary, constants, mode);

  const double diag_integral = integrate(
      [&](double t) {
        const double l2 = length(motion_boundary, t);
        return l2 * length_ddot(motion_boundary, t) + omega_squared(motion_potential, t) * l2 * l2;
      },
      0.0, T, 1e-12);
  const double nn = static_cast<double>(mode.n()) * mode.n();
  out.quadrature = hbar * pi * pi * nn / (2.0 * m) *
                       phase_integral_numeric(motion_boundary, 0.0, T) +
                   m * half_cn / hbar * diag_integral;

  const double L0 = motion_boundary.L0();
  const double q1 = motion_potential.q();
  const double q2 = motion_boundary.q();
  const double w = motion_boundary.omega();
  out.regime_ratio = q1 != 0.0 ? std::abs(q2 - q1) / std::abs(q1)
                               : std::numeric_limits<double>::infinity();

  // The closed form divides by q1^2 and cancels to O(q1^2) in the numerator.
  out.closed_form_used = motion_potential.omega() == w && std::abs(q1) >= 1e-3 * L0;
  if (out.closed_form_used) {
    const double root = std::sqrt(L0 * (L0 - 2.0 * q1));
    const double dq = q1 - q2;
    out.correction = m / hbar * half_cn * 2.0 * pi * w * L0 * L0 * (root - L0 + q1) * dq * dq /
                     (q1 * q1 * root);
    out.mu_II = mu_I_closed_form(L0, q2, w, mode, constants);
    out.mu_ad = out.mu_II + out.correction;
  } else {
    out.mu_ad = out.quadrature;
    out.correction = out.mu_ad - out.mu_II;
  }
  return out;
}

double coefficient_phase(const CoefficientTrajectory& trajectory,
                         const CoupledSystemConfig& config) {
  const auto last = trajectory.times.size() - 1;
  const double mu_II = mu_total(config.motion_boundary, config.constants, config.n_init);
  return mu_II - std::arg(trajectory.a(last, config.n_init.n()));
}

std::vector<std::complex<double>> reconstruct_wavefunction(
    const CoefficientTrajectory& trajectory, const WallMotion& motion_boundary,
    const PhysicalConstants& constants, std::span<const double> x_grid, double t) {
  const std::size_t idx = trajectory.sample_index(t);
  const double ts = trajectory.times[idx];
  const double l = length(motion_boundary, ts);
  const double slack = 1e-12 * l;
  const double m = constants.mass();
  const double chirp_rate = m * length_dot(motion_boundary, ts) / (2.0 * PhysicalConstants::hbar * l);
  const double norm = std::sqrt(2.0 / l);

  const int kmax = trajectory.k_max();
  std::vector<std::complex<double>> weights(kmax);
  for (int k = 1; k <= kmax; ++k)
    weights[k - 1] = trajectory.a(idx, k) *
                     std::polar(norm, -basis_phase(motion_boundary, constants, k, ts));

  std::vector<std::complex<double>> out(x_grid.size());
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    const double x = x_grid[i];
    if (!(x >= -slack && x <= l + slack))
      throw DomainError("reconstruct_wavefunction: x outside [0, L2(t)]");
    std::complex<double> sum = 0.0;
    for (int k = 1; k <= kmax; ++k) sum += weights[k - 1] * std::sin(k * pi * x / l);
    out[i] = sum * std::polar(1.0, chirp_rate * x * x);
  }
  return out;
}

}  // namespace cavity
