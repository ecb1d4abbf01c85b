#pragma once

#include <span>
#include <vector>

#include "isohydra/numerics/grid.hpp"

namespace isohydra {

// Returns a copy of `table` with d1 (order 1) or d1 and d2 (order 2) filled
// in by five-point stencils. On uniform spacing the interior stencils equal
// the Richardson extrapolation of central differences at h and 2h; boundary
// nodes use one-sided stencils.
FunctionTable differentiate(const FunctionTable& table, int order);

// Stencil derivative of raw values on the grid nodes.
std::vector<double> derivative(const Grid& grid, std::span<const double> values, int order);

// Same on arbitrary strictly increasing nodes (no grid invariants). Throws
// GridTooCoarse with fewer than five nodes.
std::vector<double> derivative_on_nodes(std::span<const double> nodes, std::span<const double> values,
                                        int order);

}  // namespace isohydra
