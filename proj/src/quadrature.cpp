#include "cavity/quadrature.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace cavity {
namespace {

struct Panel {
  double a;
  double b;
  double value;
  double error;
  double l1;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel kronrod_panel(const std::function<double(double)>& f, double a, double b) {
  using kronrod_rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  using gauss_rule = boost::math::quadrature::gauss<double, 7>;
  static const auto& nodes = kronrod_rule::abscissa();
  static const auto& wk = kronrod_rule::weights();
  static const auto& wg = gauss_rule::weights();

  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f0 = f(mid);
  double kronrod = wk[0] * f0;
  double l1 = wk[0] * std::abs(f0);
  double gauss = wg[0] * f0;  // Gauss nodes are the centre and the even Kronrod nodes
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double fl = f(mid - half * nodes[i]);
    const double fr = f(mid + half * nodes[i]);
    kronrod += wk[i] * (fl + fr);
    l1 += wk[i] * (std::abs(fl) + std::abs(fr));
    if (i % 2 == 0) gauss += wg[i / 2] * (fl + fr);
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half), l1 * std::abs(half)};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol) {
  if (a == b) return 0.0;
  constexpr int max_panels = 4000;
  constexpr double eps = std::numeric_limits<double>::epsilon();

  std::priority_queue<Panel> panels;
  panels.push(kronrod_panel(f, a, b));
  double value = panels.top().value;
  double error = panels.top().error;
  double l1 = panels.top().l1;

  for (int count = 1; count < max_panels; ++count) {
    // no point refining below a few ulps of the integral of |f|
    if (error <= std::max(abs_tol, 50.0 * eps * l1)) break;
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = kronrod_panel(f, worst.a, mid);
    const Panel right = kronrod_panel(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    panels.push(left);
    panels.push(right);
  }
  return value;
}

}  // namespace cavity
