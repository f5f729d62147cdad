#pragma once

// Reference computations that share no code with the library: fixed-panel
// Gauss-Legendre quadrature, finite differences and a Crank-Nicolson solver
// of the cavity Schrodinger equation in the dilated frame.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

inline constexpr double hbar = 1.0;
inline constexpr double c_light = 137.035999;
inline constexpr double pi = std::numbers::pi;

struct Wall {
  double L0, q, omega;
  double L(double t) const { return L0 + q * (std::cos(omega * t) - 1.0); }
  double Ld(double t) const { return -q * omega * std::sin(omega * t); }
  double Ldd(double t) const { return -q * omega * omega * std::cos(omega * t); }
  double T() const { return 2.0 * pi / omega; }
};

// Composite 5-point Gauss-Legendre on `panels` equal panels.
template <class F>
auto gl(F&& f, double a, double b, int panels = 200) {
  static constexpr std::array<double, 5> x{0.0, -0.5384693101056831, 0.5384693101056831,
                                           -0.9061798459386640, 0.9061798459386640};
  static constexpr std::array<double, 5> w{0.5688888888888889, 0.4786286704993665,
                                           0.4786286704993665, 0.2369268850561891,
                                           0.2369268850561891};
  const double h = (b - a) / panels;
  decltype(f(a)) sum{};
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int i = 0; i < 5; ++i) sum += w[i] * f(mid + 0.5 * h * x[i]);
  }
  return sum * (0.5 * h);
}

// I(t) = integral_0^t L^-2, by brute-force quadrature.
inline double phase_integral(const Wall& w, double t, int panels = 2000) {
  return gl([&](double s) { return 1.0 / (w.L(s) * w.L(s)); }, 0.0, t, panels);
}

inline double c_n(int n) {
  const double a = n * n * pi * pi;
  return (2.0 * a - 3.0) / (6.0 * a);
}

// Moving-wall basis function with its time phase theta supplied.
inline cplx psi_with_phase(const Wall& w, double m, int n, double x, double t, double theta) {
  const double L = w.L(t);
  const double chirp = m * w.Ld(t) * x * x / (2.0 * hbar * L);
  return std::sqrt(2.0 / L) * std::polar(1.0, chirp - theta) * std::sin(n * pi * x / L);
}

inline cplx psi(const Wall& w, double m, int n, double x, double t) {
  const double theta = hbar * pi * pi * n * n / (2.0 * m) * phase_integral(w, t);
  return psi_with_phase(w, m, n, x, t, theta);
}

// Crank-Nicolson in y = x / L_b(t). Solves
//   i hbar chi_t = -hbar^2/(2 m L^2) chi_yy + (m/2) L^2 (L''/L + Omega_p^2) y^2 chi
// on N intervals with chi(0) = chi(1) = 0. Omega_p^2 = -L_p''/L_p.
class DilatedCN {
public:
  DilatedCN(Wall potential, Wall boundary, double m, int intervals)
      : wp_(potential), wb_(boundary), m_(m), N_(intervals), chi_(intervals + 1) {}

  void set_mode(int n) {
    for (int i = 0; i <= N_; ++i) chi_[i] = std::sqrt(2.0) * std::sin(n * pi * y(i));
  }
  double y(int i) const { return static_cast<double>(i) / N_; }
  const std::vector<cplx>& chi() const { return chi_; }

  void advance(double t0, double t1, int steps) {
    const double dt = (t1 - t0) / steps;
    for (int s = 0; s < steps; ++s) step(t0 + (s + 0.5) * dt, dt);
  }

  // |integral_0^1 sqrt(2) sin(k pi y) chi dy| = |a_k| for the basis of the boundary wall.
  cplx overlap(int k) const {
    cplx sum = 0.0;
    for (int i = 1; i < N_; ++i) sum += std::sqrt(2.0) * std::sin(k * pi * y(i)) * chi_[i];
    return sum / static_cast<double>(N_);
  }

  // phi(x) at time t from chi by linear interpolation in y.
  cplx phi(double x, double t) const {
    const double L = wb_.L(t);
    const double yy = x / L * N_;
    const int i = std::min(static_cast<int>(yy), N_ - 1);
    const double f = yy - i;
    const cplx c = (1.0 - f) * chi_[i] + f * chi_[i + 1];
    return std::polar(1.0 / std::sqrt(L), m_ * wb_.Ld(t) * x * x / (2.0 * hbar * L)) * c;
  }

private:
  void step(double tm, double dt) {
    const double L = wb_.L(tm);
    const double h = 1.0 / N_;
    const double kin = hbar * hbar / (2.0 * m_ * L * L * h * h);
    const double om2 = -wp_.Ldd(tm) / wp_.L(tm);
    const double vcoef = 0.5 * m_ * L * L * (wb_.Ldd(tm) / L + om2);
    const int n = N_ - 1;
    const cplx half = cplx(0.0, dt / (2.0 * hbar));
    std::vector<cplx> diag(n), rhs(n);
    const cplx off = -half * kin;  // A = 1 + i dt H / 2 hbar, off-diagonal
    for (int r = 0; r < n; ++r) {
      const int i = r + 1;
      const double yy = y(i);
      const double hd = 2.0 * kin + vcoef * yy * yy;
      diag[r] = 1.0 + half * hd;
      rhs[r] = (1.0 - half * hd) * chi_[i] + half * kin * (chi_[i - 1] + chi_[i + 1]);
    }
    // Thomas algorithm with constant off-diagonals
    std::vector<cplx> cp(n), dp(n);
    cp[0] = off / diag[0];
    dp[0] = rhs[0] / diag[0];
    for (int r = 1; r < n; ++r) {
      const cplx den = diag[r] - off * cp[r - 1];
      cp[r] = off / den;
      dp[r] = (rhs[r] - off * dp[r - 1]) / den;
    }
    chi_[n] = dp[n - 1];
    for (int r = n - 2; r >= 0; --r) chi_[r + 1] = dp[r] - cp[r] * chi_[r + 2];
    chi_[0] = chi_[N_] = 0.0;
  }

  Wall wp_, wb_;
  double m_;
  int N_;
  std::vector<cplx> chi_;
};

}  // namespace oracle
