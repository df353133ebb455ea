#pragma once

#include <functional>

namespace aoisched {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod integration on a finite
/// interval. Subdivides the worst interval until the summed error estimate is
/// below `rel_tol * |value|` (or `abs_tol`), or `max_intervals` is reached.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol = 1e-13, double abs_tol = 0.0,
                                    int max_intervals = 4000);

}  // namespace aoisched
