#pragma once

#include <functional>

namespace cavity {

/// Globally adaptive Gauss-Kronrod (7/15) integration of a smooth integrand
/// on [a, b]. Refines until the error estimate reaches abs_tol, or a few ulps
/// of the integral of |f| when that is larger.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12);

}  // namespace cavity
