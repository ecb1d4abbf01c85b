#pragma once

#include <vector>

#include "isohydra/numerics/grid.hpp"

namespace isohydra {

enum class Direction { forward, backward };

// Solution of u'' = (V - E) u on a uniform grid. Values are stored with a
// per-node logarithmic scale: u_true[i] = u.values[i] * exp(log_scale[i]).
// d1 and d2 are stored on the same per-node scale.
struct OdeSolution {
  FunctionTable u;
  std::vector<double> log_scale;

  double true_value(std::size_t i) const;
  double true_slope(std::size_t i) const;
};

// Numerov integration in the given direction from the first (forward) or last
// (backward) node. The second starting value comes from a fourth-order Taylor
// step using stencil derivatives of the potential. The running solution is
// renormalized whenever |u| exceeds renorm_threshold.
OdeSolution ode_integrate_schrodinger(const FunctionTable& potential, double energy, double init_value,
                                      double init_slope, Direction direction,
                                      double renorm_threshold = 1e150);

// Same, started from known values at the first two nodes in the direction of
// integration.
OdeSolution ode_integrate_schrodinger_two_point(const FunctionTable& potential, double energy, double u0,
                                                double u1, Direction direction,
                                                double renorm_threshold = 1e150);

}  // namespace isohydra
