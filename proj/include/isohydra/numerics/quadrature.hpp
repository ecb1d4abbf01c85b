#pragma once

#include <cstddef>
#include <functional>

namespace isohydra {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  std::size_t intervals = 0;
};

// Globally adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b]. The
// interval with the largest error estimate is bisected until the summed
// estimate drops below tol (or below ~100 ulp of the result when tol is
// tighter than rounding allows). Throws NonConvergence, naming the worst
// subinterval, once a bisection would exceed max_depth.
QuadResult adaptive_quad(const std::function<double(double)>& f, double a, double b, double tol,
                         int max_depth = 60);

// Integral over [a, inf) through the map x = a + t / (1 - t), t in [0, 1).
QuadResult adaptive_quad_to_infinity(const std::function<double(double)>& f, double a, double tol,
                                     int max_depth = 60);

}  // namespace isohydra
