#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace isohydra {

enum class GridScheme { uniform, log_then_uniform };

// Radial grid with immutable shared node storage; copies are cheap.
//
// log_then_uniform places nodes geometrically on [r_min, 1] and uniformly on
// [1, r_max], with the node split chosen so the spacing is continuous at r = 1.
class Grid {
 public:
  Grid(double r_min, double r_max, std::size_t n_points,
       GridScheme scheme = GridScheme::log_then_uniform);

  static Grid uniform(double r_min, double r_max, std::size_t n_points) {
    return Grid(r_min, r_max, n_points, GridScheme::uniform);
  }

  double r_min() const noexcept;
  double r_max() const noexcept;
  std::size_t size() const noexcept;
  GridScheme scheme() const noexcept;

  std::span<const double> nodes() const noexcept;
  double operator[](std::size_t i) const noexcept { return nodes()[i]; }

  // True when all spacings are equal (uniform scheme, or a log_then_uniform
  // grid that degenerated to its uniform part).
  bool is_uniform() const noexcept;
  // Spacing of a uniform grid; throws for non-uniform grids.
  double spacing() const;

  // Composite Simpson weights, built per segment in the variable in which the
  // segment is uniform.
  std::span<const double> weights() const;

  // Five-point finite-difference weights per node (order 1 and 2). Stencils
  // are centred on interior nodes and one-sided at the two ends of the grid.
  struct Stencil {
    std::size_t first;  // index of the first of the five nodes
    double w[5];
  };
  std::span<const Stencil> stencils(int order) const;

  bool same_as(const Grid& other) const noexcept { return impl_ == other.impl_; }

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// Values of a scalar function on a grid, with optional first and second
// derivatives.
struct FunctionTable {
  Grid grid;
  std::vector<double> values;
  std::optional<std::vector<double>> d1;
  std::optional<std::vector<double>> d2;

  explicit FunctionTable(Grid g) : grid(std::move(g)), values(grid.size(), 0.0) {}
  FunctionTable(Grid g, std::vector<double> v);

  std::size_t size() const noexcept { return values.size(); }
  double r(std::size_t i) const noexcept { return grid[i]; }
  bool has_derivatives() const noexcept { return d1.has_value() && d2.has_value(); }
  // Throws ErrorCode::domain when the invariant sizes do not hold.
  void validate() const;
};

struct ToleranceConfig {
  double quad_tol = 1e-10;
  double ode_tol = 1e-10;
  double residual_tol = 1e-6;
  double fd_step_scale = 1e-4;

  void validate() const;
};

}  // namespace isohydra
