#pragma once

#include <vector>

#include "isohydra/numerics/grid.hpp"

namespace isohydra {

// A smooth test function with analytic derivatives through order four.
struct TestFunction {
  FunctionTable f;  // with d1, d2
  std::vector<double> d3, d4;
};

// (1 - t^2)^8 with t = (r - a - w/2) / (w/2) on [a, a + w], zero elsewhere.
// The bump is C^7, so second-order operators applied twice stay smooth enough
// for five-point stencils.
TestFunction make_bump(const Grid& grid, double a, double width = 4.0);

}  // namespace isohydra
