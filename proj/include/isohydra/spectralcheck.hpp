#pragma once

#include <functional>
#include <string>
#include <vector>

#include "isohydra/hydrogen.hpp"
#include "isohydra/numerics/bump.hpp"
#include "isohydra/numerics/grid.hpp"

namespace isohydra::spectralcheck {

enum class Method { fd_tridiagonal, numerov_shooting };

// -d^2/dr^2 + V with Dirichlet conditions at both ends of the potential's
// grid. Non-uniform grids are resampled onto a uniform grid with the same
// number of nodes by local cubic interpolation.
struct EigenProblem {
  FunctionTable potential;
  int n_levels = 4;
  Method method = Method::fd_tridiagonal;
  bool want_vectors = false;  // fd only
  // The box stands in for the half line (0, inf): wall shifts enter the
  // tolerance and turning points beyond r_max/2 raise warnings.
  bool half_line = true;
};

struct SolveResult {
  hydrogen::Spectrum spectrum;       // source = numeric
  std::vector<double> raw;           // levels on the finest grid, before extrapolation
  std::vector<double> coarse;        // levels at step 2h
  std::vector<double> tolerance;     // certified per-level tolerance
  std::vector<double> order_ratio;   // (E_2h - E_4h) / (E_h - E_2h), about 4 for fd, 16 for Numerov
  std::vector<FunctionTable> vectors;  // unit-norm eigenvectors on the uniform grid, if requested
  std::vector<std::string> warnings;
  Grid grid;  // uniform grid actually used
};

// Three-point finite differences, lowest levels by Sturm-sequence bisection,
// eigenvectors by inverse iteration. Levels are computed at steps h, 2h and
// 4h; the reported value is the Richardson extrapolation of h and 2h, and the
// tolerance is |R(h) - R(2h)| plus the estimated shift from the Dirichlet wall
// at r_min. Throws ConvergenceFailure naming the level.
SolveResult eigensolve_fd(const EigenProblem& problem);

// Numerov integration from both ends, matched at the outermost classical
// turning point through a normalized Wronskian; levels bracketed by node
// counts and refined by Brent's method at steps h and 2h. Throws
// BracketFailure when a level cannot be bracketed.
SolveResult eigensolve_shooting(const EigenProblem& problem);

SolveResult eigensolve(const EigenProblem& problem);

// Resampling used by the solvers.
FunctionTable resample_uniform(const FunctionTable& table);

// Operator acting on a table that carries d1 and d2.
using Operator = std::function<FunctionTable(const FunctionTable&)>;

// max over the tests of ||H_left (O chi) - O (H_right chi)||_inf / ||O chi||_inf,
// with (O chi)'' from stencils and H_right chi differentiated analytically from
// the test-function derivatives (V_right' and V_right'' from the table's d1 and
// d2, or stencils when absent).
double intertwining_residual(const FunctionTable& v_left, const FunctionTable& v_right, const Operator& op,
                             const std::vector<TestFunction>& tests);

// Pairwise inner products with the grid's quadrature weights; with
// `normalize` each state is first scaled to unit norm.
std::vector<std::vector<double>> gram_matrix(const std::vector<FunctionTable>& states, bool normalize = false);
double max_identity_deviation(const std::vector<std::vector<double>>& gram);

// ||-psi'' + V psi - E psi||_inf / ||psi''| + |V psi| + |E psi|||_inf with psi''
// from stencils, over nodes where |psi| exceeds `floor` times its maximum.
double eigen_residual(const FunctionTable& potential, const FunctionTable& psi, double energy,
                      double floor = 0.0);

// max |a - c b| / max |a| with c = <a, b> / <b, b> under the grid's
// quadrature weights, optionally over nodes where mask is false.
double proportionality_residual(const FunctionTable& a, const FunctionTable& b, const std::vector<bool>& mask = {});

// Local maxima of psi^2 above `threshold` times the global maximum.
struct Extremum {
  double r;
  double value;
};
std::vector<Extremum> density_maxima(const FunctionTable& psi, double threshold = 1e-3);

// Per-level comparison of a numeric spectrum against expected energies, by
// sorted order.
struct LevelComparison {
  double expected;
  double numeric;
  double error;
  double tolerance;
  bool pass;
};
std::vector<LevelComparison> compare_levels(const SolveResult& result, const std::vector<double>& expected,
                                            double tolerance_factor = 1.0);

// Numeric levels of `result` lying within `window` of `energy`.
std::vector<double> levels_near(const SolveResult& result, double energy, double window);

}  // namespace isohydra::spectralcheck
