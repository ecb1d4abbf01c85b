#include "isohydra/numerics/grid.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "isohydra/error.hpp"
#include "fornberg.hpp"

namespace isohydra {

namespace {

void add_simpson(std::vector<double>& w, std::size_t first, std::size_t intervals,
                 const std::vector<double>& jac, double dt) {
  // Integrates over nodes first..first+intervals with weights in t, times jac.
  if (intervals == 0) return;
  auto put = [&](std::size_t k, double c) { w[first + k] += c * dt * jac[first + k]; };
  if (intervals == 1) {
    put(0, 0.5);
    put(1, 0.5);
    return;
  }
  std::size_t simpson = intervals;
  if (intervals % 2 == 1) simpson = intervals - 3;
  for (std::size_t k = 0; k + 2 <= simpson; k += 2) {
    put(k, 1.0 / 3.0);
    put(k + 1, 4.0 / 3.0);
    put(k + 2, 1.0 / 3.0);
  }
  if (simpson != intervals) {
    const std::size_t k = simpson;
    put(k, 3.0 / 8.0);
    put(k + 1, 9.0 / 8.0);
    put(k + 2, 9.0 / 8.0);
    put(k + 3, 3.0 / 8.0);
  }
}

}  // namespace

struct Grid::Impl {
  double r_min = 0, r_max = 0;
  GridScheme scheme = GridScheme::uniform;
  std::vector<double> nodes;
  std::vector<double> weights;
  bool uniform = false;
  double h = 0;

  mutable std::once_flag stencil_once;
  mutable std::vector<Stencil> stencil1, stencil2;

  void build_stencils() const {
    const std::size_t n = nodes.size();
    stencil1.resize(n);
    stencil2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t first = i < 2 ? 0 : std::min(i - 2, n - 5);
      double out[3][5];
      detail::fornberg_weights(nodes[i], &nodes[first], out);
      stencil1[i].first = first;
      stencil2[i].first = first;
      for (int j = 0; j < 5; ++j) {
        stencil1[i].w[j] = out[1][j];
        stencil2[i].w[j] = out[2][j];
      }
    }
  }
};

Grid::Grid(double r_min, double r_max, std::size_t n_points, GridScheme scheme) {
  if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max)) {
    std::ostringstream os;
    os << "grid requires 0 < r_min < r_max (got r_min=" << r_min << ", r_max=" << r_max << ")";
    throw Error(ErrorCode::domain, os.str());
  }
  if (n_points < 16) throw Error(ErrorCode::domain, "grid requires at least 16 points");

  auto impl = std::make_shared<Impl>();
  impl->r_min = r_min;
  impl->r_max = r_max;
  impl->scheme = scheme;
  auto& x = impl->nodes;
  x.resize(n_points);
  std::vector<double> jac(n_points, 1.0);
  std::vector<double>& w = impl->weights;
  w.assign(n_points, 0.0);
  const std::size_t intervals = n_points - 1;

  std::size_t n_log = 0;
  if (scheme == GridScheme::log_then_uniform) {
    if (r_max <= 1.0) {
      n_log = intervals;
    } else if (r_min < 1.0) {
      const double L = std::log(1.0 / r_min);
      const double U = r_max - 1.0;
      n_log = static_cast<std::size_t>(std::lround(static_cast<double>(intervals) * L / (L + U)));
      n_log = std::clamp<std::size_t>(n_log, 2, intervals - 2);
    }
  }

  if (n_log == 0) {
    const double h = (r_max - r_min) / static_cast<double>(intervals);
    for (std::size_t i = 0; i < n_points; ++i) x[i] = r_min + h * static_cast<double>(i);
    x.back() = r_max;
    impl->uniform = true;
    impl->h = h;
    add_simpson(w, 0, intervals, jac, h);
  } else {
    const double top = std::min(1.0, r_max);
    const double dx = std::log(top / r_min) / static_cast<double>(n_log);
    for (std::size_t i = 0; i <= n_log; ++i) {
      x[i] = r_min * std::exp(dx * static_cast<double>(i));
      jac[i] = x[i];
    }
    x[0] = r_min;
    x[n_log] = top;
    jac[n_log] = top;
    add_simpson(w, 0, n_log, jac, dx);
    const std::size_t n_uni = intervals - n_log;
    if (n_uni > 0) {
      const double h = (r_max - top) / static_cast<double>(n_uni);
      for (std::size_t j = 1; j <= n_uni; ++j) {
        x[n_log + j] = top + h * static_cast<double>(j);
      }
      x.back() = r_max;
      std::vector<double> ones(n_points, 1.0);
      add_simpson(w, n_log, n_uni, ones, h);
    }
  }
  impl_ = std::move(impl);
}

double Grid::r_min() const noexcept { return impl_->r_min; }
double Grid::r_max() const noexcept { return impl_->r_max; }
std::size_t Grid::size() const noexcept { return impl_->nodes.size(); }
GridScheme Grid::scheme() const noexcept { return impl_->scheme; }
std::span<const double> Grid::nodes() const noexcept { return impl_->nodes; }
bool Grid::is_uniform() const noexcept { return impl_->uniform; }

double Grid::spacing() const {
  if (!impl_->uniform) throw Error(ErrorCode::domain, "grid spacing requested on a non-uniform grid");
  return impl_->h;
}

std::span<const double> Grid::weights() const { return impl_->weights; }

std::span<const Grid::Stencil> Grid::stencils(int order) const {
  std::call_once(impl_->stencil_once, [this] { impl_->build_stencils(); });
  if (order == 1) return impl_->stencil1;
  if (order == 2) return impl_->stencil2;
  throw Error(ErrorCode::domain, "stencil order must be 1 or 2");
}

FunctionTable::FunctionTable(Grid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  validate();
}

void FunctionTable::validate() const {
  const std::size_t n = grid.size();
  if (values.size() != n) throw Error(ErrorCode::domain, "function table size does not match its grid");
  if (d1 && d1->size() != n) throw Error(ErrorCode::domain, "first-derivative column size mismatch");
  if (d2 && d2->size() != n) throw Error(ErrorCode::domain, "second-derivative column size mismatch");
}

void ToleranceConfig::validate() const {
  if (!(quad_tol > 0) || !(ode_tol > 0) || !(residual_tol > 0) || !(fd_step_scale > 0))
    throw Error(ErrorCode::domain, "all tolerances must be strictly positive");
  if (quad_tol > 1e-6) throw Error(ErrorCode::domain, "quad_tol must not exceed 1e-6");
}

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::domain: return "DomainError";
    case ErrorCode::non_convergence: return "NonConvergence";
    case ErrorCode::grid_too_coarse: return "GridTooCoarse";
    case ErrorCode::branch_mismatch: return "BranchMismatch";
    case ErrorCode::singular_family: return "SingularFamily";
    case ErrorCode::missing_derivatives: return "MissingDerivatives";
    case ErrorCode::combination_zero: return "CombinationZero";
    case ErrorCode::certificate_failure: return "CertificateFailure";
    case ErrorCode::convergence_failure: return "ConvergenceFailure";
    case ErrorCode::bracket_failure: return "BracketFailure";
  }
  return "UnknownError";
}

}  // namespace isohydra
