#include "isohydra/numerics/finite_difference.hpp"

#include <algorithm>

#include "isohydra/error.hpp"
#include "fornberg.hpp"

namespace isohydra {

namespace {

void check_order(int order) {
  if (order != 1 && order != 2) throw Error(ErrorCode::domain, "derivative order must be 1 or 2");
}

}  // namespace

std::vector<double> derivative(const Grid& grid, std::span<const double> values, int order) {
  check_order(order);
  if (values.size() != grid.size()) throw Error(ErrorCode::domain, "value count does not match grid");
  const auto st = grid.stencils(order);
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& s = st[i];
    double acc = 0.0;
    for (int j = 0; j < 5; ++j) acc += s.w[j] * values[s.first + j];
    out[i] = acc;
  }
  return out;
}

std::vector<double> derivative_on_nodes(std::span<const double> nodes, std::span<const double> values,
                                        int order) {
  check_order(order);
  const std::size_t n = nodes.size();
  if (n < 5) throw Error(ErrorCode::grid_too_coarse, "differentiation needs at least 5 nodes");
  if (values.size() != n) throw Error(ErrorCode::domain, "value count does not match node count");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t first = i < 2 ? 0 : std::min(i - 2, n - 5);
    double w[3][5];
    detail::fornberg_weights(nodes[i], &nodes[first], w);
    double acc = 0.0;
    for (int j = 0; j < 5; ++j) acc += w[order][j] * values[first + j];
    out[i] = acc;
  }
  return out;
}

FunctionTable differentiate(const FunctionTable& table, int order) {
  check_order(order);
  table.validate();
  if (table.size() < 5) throw Error(ErrorCode::grid_too_coarse, "differentiation needs at least 5 nodes");
  FunctionTable out = table;
  out.d1 = derivative(table.grid, table.values, 1);
  if (order == 2) out.d2 = derivative(table.grid, table.values, 2);
  return out;
}

}  // namespace isohydra
