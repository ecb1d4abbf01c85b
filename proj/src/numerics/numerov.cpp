#include "isohydra/numerics/numerov.hpp"

#include <cmath>

#include "isohydra/error.hpp"
#include "isohydra/numerics/finite_difference.hpp"

namespace isohydra {

namespace {

OdeSolution integrate(const FunctionTable& potential, double energy, double u0, double u1,
                      Direction direction, double threshold, double start_slope, bool have_slope) {
  const Grid& grid = potential.grid;
  if (!grid.is_uniform()) throw Error(ErrorCode::domain, "Numerov integration needs a uniform grid");
  potential.validate();
  const std::size_t n = grid.size();
  const double h = grid.spacing();
  // The recurrence runs in extended precision: rounding errors excite the
  // second solution, which may outgrow the integrated one by many orders.
  const long double h12 = static_cast<long double>(h) * h / 12.0L;

  std::vector<long double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = static_cast<long double>(potential.values[i]) - energy;

  // Work in "step" order k = 0..n-1, mapped onto node indices.
  const bool fwd = direction == Direction::forward;
  auto node = [&](std::size_t k) { return fwd ? k : n - 1 - k; };

  OdeSolution sol{FunctionTable(grid), std::vector<double>(n, 0.0)};
  auto& u = sol.u.values;
  auto& ls = sol.log_scale;
  double scale = 0.0;
  u[node(0)] = u0;
  u[node(1)] = u1;
  long double prev = u0, cur = u1;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const long double fp = f[node(k - 1)], fc = f[node(k)], fn = f[node(k + 1)];
    long double next = (2.0L * cur * (1.0L + 5.0L * h12 * fc) - prev * (1.0L - h12 * fp)) / (1.0L - h12 * fn);
    if (std::fabs(next) > threshold) {
      prev /= threshold;
      cur /= threshold;
      next /= threshold;
      scale += std::log(threshold);
      // Node k keeps its value on the new scale so neighbours stay consistent
      // for derivative reconstruction.
      u[node(k)] = cur;
      ls[node(k)] = scale;
    }
    if (!std::isfinite(next)) throw Error(ErrorCode::non_convergence, "Numerov step produced a non-finite value", grid[node(k + 1)]);
    u[node(k + 1)] = next;
    ls[node(k + 1)] = scale;
    prev = cur;
    cur = next;
  }

  auto at_scale = [&](std::size_t j, double target) { return u[j] * std::exp(ls[j] - target); };
  std::vector<double> d1(n), d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = f[i] * u[i];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double s = ls[i];
    const double up = at_scale(i + 1, s), um = at_scale(i - 1, s);
    d1[i] = (up - um) / (2.0 * h) - h / 12.0 * (f[i + 1] * up - f[i - 1] * um);
  }
  for (std::size_t i : {std::size_t{0}, n - 1}) {
    const std::size_t first = i == 0 ? 0 : n - 5;
    std::vector<double> vals(5), xs(5);
    for (int j = 0; j < 5; ++j) {
      vals[j] = at_scale(first + j, ls[i]);
      xs[j] = grid[first + j];
    }
    const auto d = derivative_on_nodes(xs, vals, 1);
    d1[i] = d[i - first];
  }
  if (have_slope) d1[node(0)] = start_slope * std::exp(-ls[node(0)]);
  sol.u.d1 = std::move(d1);
  sol.u.d2 = std::move(d2);
  return sol;
}

}  // namespace

double OdeSolution::true_value(std::size_t i) const { return u.values[i] * std::exp(log_scale[i]); }
double OdeSolution::true_slope(std::size_t i) const { return (*u.d1)[i] * std::exp(log_scale[i]); }

OdeSolution ode_integrate_schrodinger(const FunctionTable& potential, double energy, double init_value,
                                      double init_slope, Direction direction, double renorm_threshold) {
  const Grid& grid = potential.grid;
  if (!grid.is_uniform()) throw Error(ErrorCode::domain, "Numerov integration needs a uniform grid");
  const std::size_t n = grid.size();
  const bool fwd = direction == Direction::forward;
  const std::size_t s = fwd ? 0 : n - 1;
  const double h = fwd ? grid.spacing() : -grid.spacing();

  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = potential.values[i] - energy;
  const auto f1 = derivative(grid, f, 1);
  const auto f2 = derivative(grid, f, 2);
  const double u = init_value, up = init_slope;
  const double u2 = f[s] * u;
  const double u3 = f1[s] * u + f[s] * up;
  const double u4 = f2[s] * u + 2.0 * f1[s] * up + f[s] * u2;
  const double next = u + h * up + h * h / 2.0 * u2 + h * h * h / 6.0 * u3 + h * h * h * h / 24.0 * u4;
  return integrate(potential, energy, u, next, direction, renorm_threshold, init_slope, true);
}

OdeSolution ode_integrate_schrodinger_two_point(const FunctionTable& potential, double energy, double u0,
                                                double u1, Direction direction, double renorm_threshold) {
  return integrate(potential, energy, u0, u1, direction, renorm_threshold, 0.0, false);
}

}  // namespace isohydra
