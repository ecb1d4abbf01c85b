#include "isohydra/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "isohydra/error.hpp"
#include "isohydra/factorization.hpp"
#include "isohydra/families.hpp"
#include "isohydra/hydrogen.hpp"
#include "isohydra/numerics/special_functions.hpp"
#include "isohydra/spectralcheck.hpp"
#include "run_internal.hpp"

namespace isohydra::run {

const char* to_string(Family family) noexcept {
  switch (family) {
    case Family::unset: return "unset";
    case Family::hydrogen: return "hydrogen";
    case Family::two_param: return "two-param";
    case Family::fernandez: return "fernandez";
    case Family::intermediate: return "intermediate";
  }
  return "unknown";
}

std::optional<Family> family_from_string(std::string_view name) {
  for (Family f : {Family::hydrogen, Family::two_param, Family::fernandez, Family::intermediate})
    if (name == to_string(f)) return f;
  return std::nullopt;
}

const char* to_string(seeds::GammaVariant variant) noexcept {
  return variant == seeds::GammaVariant::four_over_r ? "four_over_r" : "one_over_r";
}

std::optional<seeds::GammaVariant> variant_from_string(std::string_view name) {
  if (name == "four_over_r") return seeds::GammaVariant::four_over_r;
  if (name == "one_over_r") return seeds::GammaVariant::one_over_r;
  return std::nullopt;
}

void RunConfig::validate() const {
  tol.validate();
  if (levels < 1 || levels > 12) throw Error(ErrorCode::domain, "--levels must be between 1 and 12");
  if (r_min && !(*r_min > 0.0 && std::isfinite(*r_min))) throw Error(ErrorCode::domain, "--rmin must be > 0");
  if (r_max && !std::isfinite(*r_max)) throw Error(ErrorCode::domain, "--rmax must be finite");
  if (r_max && !(*r_max > (r_min ? *r_min : 0.0)))
    throw Error(ErrorCode::domain, "--rmax must exceed --rmin");
  if (points && *points < 16) throw Error(ErrorCode::domain, "--points must be at least 16");
  switch (family) {
    case Family::unset:
      return;
    case Family::hydrogen:
      if (l < 0) throw Error(ErrorCode::domain, "hydrogen needs --l >= 0");
      return;
    case Family::two_param:
      seeds::FamilyParams::two_param(l, nu1, nu2).validate();
      return;
    case Family::intermediate:
      seeds::FamilyParams::intermediate(l, nu2).validate();
      return;
    case Family::fernandez:
      if (l < 1) throw Error(ErrorCode::domain, "fernandez needs --l >= 1");
      if (!gamma && !gamma_sup) throw Error(ErrorCode::domain, "fernandez needs --gamma VALUE or --gamma sup");
      if (gamma && !std::isfinite(*gamma)) throw Error(ErrorCode::domain, "--gamma must be finite");
      if (gamma && *gamma == 0.0) throw Error(ErrorCode::domain, "--gamma must be nonzero");
      return;
  }
}

double RunConfig::gamma_value() const {
  if (gamma_sup) return families::fernandez_supremum(l);
  if (!gamma) throw Error(ErrorCode::domain, "gamma is not set");
  return *gamma;
}

void RunConfig::set_tolerance(std::string_view key, double value) {
  if (key == "quad_tol") tol.quad_tol = value;
  else if (key == "ode_tol") tol.ode_tol = value;
  else if (key == "residual_tol") tol.residual_tol = value;
  else if (key == "fd_step_scale") tol.fd_step_scale = value;
  else
    throw Error(ErrorCode::domain, "unknown tolerance key '" + std::string(key) +
                                       "' (expected quad_tol, ode_tol, residual_tol or fd_step_scale)");
}

namespace detail {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Grid tabulation_grid(const RunConfig& c, int n_deep) {
  const double r_min = c.r_min.value_or(1e-4);
  const double r_max = c.r_max.value_or(std::max(60.0, 4.0 * n_deep * n_deep + 40.0 * n_deep));
  const std::size_t points = c.points.value_or(std::max<std::size_t>(32000, static_cast<std::size_t>(200.0 * r_max)));
  return Grid(r_min, r_max, points);
}

Grid eigen_grid(const RunConfig& c, int n_deep) {
  const double r_min = c.r_min.value_or(1e-8);
  const double r_max = c.r_max.value_or(40.0 * n_deep * n_deep);
  const std::size_t points = c.points.value_or(static_cast<std::size_t>(std::ceil(100.0 * (r_max - r_min))) + 1);
  return Grid::uniform(r_min, r_max, points);
}

std::vector<std::pair<std::string, std::string>> metadata(const RunConfig& c, const Grid& grid) {
  std::vector<std::pair<std::string, std::string>> m{{"version", ISOHYDRA_VERSION}, {"family", to_string(c.family)},
                                                     {"l", std::to_string(c.l)}};
  switch (c.family) {
    case Family::two_param:
      m.emplace_back("nu1", format_double(c.nu1));
      m.emplace_back("nu2", format_double(c.nu2));
      break;
    case Family::intermediate:
      m.emplace_back("nu2", format_double(c.nu2));
      break;
    case Family::fernandez:
      m.emplace_back("gamma", c.gamma_sup ? "sup" : format_double(*c.gamma));
      m.emplace_back("gamma_value", format_double(c.gamma_value()));
      break;
    default:
      break;
  }
  m.emplace_back("gamma_variant", to_string(c.variant));
  m.emplace_back("grid_scheme", grid.scheme() == GridScheme::uniform ? "uniform" : "log_then_uniform");
  m.emplace_back("r_min", format_double(grid.r_min()));
  m.emplace_back("r_max", format_double(grid.r_max()));
  m.emplace_back("points", std::to_string(grid.size()));
  m.emplace_back("quad_tol", format_double(c.tol.quad_tol));
  m.emplace_back("ode_tol", format_double(c.tol.ode_tol));
  m.emplace_back("residual_tol", format_double(c.tol.residual_tol));
  m.emplace_back("fd_step_scale", format_double(c.tol.fd_step_scale));
  return m;
}

int base_index(const RunConfig& c) {
  switch (c.family) {
    case Family::hydrogen: return c.l;
    case Family::two_param: return c.l - 2;
    default: return c.l - 1;
  }
}

families::DeformedPotential deformed(const RunConfig& c, const Grid& grid) {
  switch (c.family) {
    case Family::two_param:
      return families::v_tilde_two_param(seeds::FamilyParams::two_param(c.l, c.nu1, c.nu2), grid, c.tol);
    case Family::intermediate:
      return factorization::v_star(c.l, c.nu2, grid, c.tol);
    case Family::fernandez:
      return families::fernandez_potential(c.l, c.gamma_value(), grid);
    case Family::hydrogen:
      return {c.l, {}, hydrogen::potential_table(c.l, grid)};
    case Family::unset:
      break;
  }
  throw Error(ErrorCode::domain, "--family is required for this command");
}

std::vector<Level> tower(const RunConfig& c) {
  std::vector<Level> out;
  const auto add = [&](int n, bool present) { out.push_back({n, -1.0 / (double(n) * n), present}); };
  int present = 0;
  switch (c.family) {
    case Family::hydrogen:
      for (int n = c.l + 1; present < c.levels; ++n, ++present) add(n, true);
      break;
    case Family::two_param:
      // -1/(l-1)^2, -1/l^2, then the tower of V_l
      for (int n = c.l - 1; present < c.levels; ++n, ++present) add(n, true);
      break;
    case Family::fernandez:
      // isospectral to V_{l-1}; at the supremum its ground level is removed
      add(c.l, !c.gamma_sup);
      present = c.gamma_sup ? 0 : 1;
      for (int n = c.l + 1; present < c.levels; ++n, ++present) add(n, true);
      break;
    case Family::intermediate:
      // V_{l-1} tower without -1/l^2
      add(c.l - 1, true);
      add(c.l, false);
      present = 1;
      for (int n = c.l + 1; present < c.levels; ++n, ++present) add(n, true);
      break;
    case Family::unset:
      throw Error(ErrorCode::domain, "--family is required for this command");
  }
  return out;
}

int deepest(const std::vector<Level>& levels) {
  int n = 1;
  for (const auto& lv : levels) n = std::max(n, lv.n);
  return n;
}

namespace {

double quadrature_norm(const FunctionTable& f) {
  double norm = 0.0;
  const auto w = f.grid.weights();
  for (std::size_t i = 0; i < f.size(); ++i) norm += w[i] * f.values[i] * f.values[i];
  return std::sqrt(norm);
}

// Abraham-Moses states of V_{l-1} + 2 (u^2/D)' with u = r^l e^{-r/l} and
// D = gamma - int_0^r u^2: ground u/D, mapped psi_n + (u/D) int_0^r u psi_n.
std::vector<NamedState> fernandez_states(const RunConfig& c, const Grid& grid) {
  const int l = c.l, a = 2 * l + 1;
  const double gamma = c.gamma_value();
  const double sup = families::fernandez_supremum(l);
  const double excess = c.gamma_sup ? 0.0 : gamma - sup;
  families::fernandez_potential(l, gamma, grid);  // throws for 0 <= gamma < sup
  // log(u / D)
  std::vector<double> log_ud(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    const double log_u = l * std::log(r) - r / l;
    log_ud[i] = excess == 0.0 ? log_u - std::log(sup) - log_regularized_upper_gamma(a, 2.0 * r / l)
                              : log_u - std::log(std::fabs(excess + sup * regularized_upper_gamma(a, 2.0 * r / l)));
  }
  // D keeps the sign of gamma
  const double sign = gamma < 0.0 ? -1.0 : 1.0;

  std::vector<NamedState> out;
  if (!c.gamma_sup) {
    // int u^2 / D^2 = 1/D(inf) - 1/D(0) = sup / (gamma (gamma - sup))
    const double scale = std::sqrt(gamma * (gamma - sup) / sup);
    FunctionTable g(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) g.values[i] = scale * std::exp(log_ud[i]);
    const double norm = quadrature_norm(g);
    out.push_back({"ground", std::move(g), -1.0 / (double(l) * l), norm});
  }
  const int n_top = l + c.levels - (c.gamma_sup ? 0 : 1);
  for (int n = l + 1; n <= n_top; ++n) {
    // psi_n = C x^l e^{-x/n} sum_k a_k x^k, so u psi_n = C sum_k a_k x^{2l+k} e^{-beta x}
    const int m = n - l, alpha = 2 * l - 1;
    const double C = hydrogen::radial_normalization(n, l - 1);
    const double beta = 1.0 / l + 1.0 / n;
    std::vector<double> coef(m + 1);
    for (int k = 0; k <= m; ++k) {
      const double binom =
          std::exp(log_factorial(m + alpha) - log_factorial(m - k) - log_factorial(alpha + k));
      // x^{2l+k} e^{-beta x} integrates to (2l+k)! / beta^{2l+k+1}
      coef[k] = (k % 2 ? -1.0 : 1.0) * binom / factorial(k) * std::pow(2.0 / n, k) * C *
                std::exp(log_factorial(2 * l + k) - (2 * l + k + 1) * std::log(beta));
    }
    const auto psi = hydrogen::radial_eigenfunction(n, l - 1, grid);
    FunctionTable t(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double x = beta * grid[i];
      // head below the integrand peak, minus the tail above it (the total
      // vanishes by orthogonality to u)
      double I = 0.0;
      if (x <= 2 * l + m + 1.0) {
        for (int k = 0; k <= m; ++k) I += coef[k] * regularized_lower_gamma(2 * l + k + 1, x);
      } else {
        for (int k = 0; k <= m; ++k) I -= coef[k] * regularized_upper_gamma(2 * l + k + 1, x);
      }
      t.values[i] = psi.values[i] + sign * std::exp(log_ud[i]) * I;
    }
    const double norm = quadrature_norm(t);
    out.push_back({"mapped_n" + std::to_string(n), std::move(t), -1.0 / (double(n) * n), norm});
  }
  return out;
}

}  // namespace

std::vector<NamedState> states(const RunConfig& c, const Grid& grid) {
  std::vector<NamedState> out;
  const auto add_family = [&](const seeds::SeedPair& sp, int n_top, const std::string& prefix, bool with_m1) {
    if (with_m1) {
      auto k = families::psi_kernel_m1(sp);
      out.push_back({prefix + "kernel_m1", std::move(k.state), k.energy, k.measured_norm});
    }
    auto k0 = families::psi_kernel_0(sp);
    out.push_back({prefix + "kernel_0", std::move(k0.state), k0.energy, k0.measured_norm});
    const auto op = families::make_operator_A(sp, c.variant);
    for (int n = sp.params.l + 1; n <= n_top; ++n) {
      auto m = families::psi_tilde_mapped(n, sp, op);
      out.push_back({prefix + "mapped_n" + std::to_string(n), std::move(m.state), -1.0 / (double(n) * n),
                     m.measured_norm});
    }
  };
  switch (c.family) {
    case Family::hydrogen:
      for (int n = c.l + 1; n <= c.l + c.levels; ++n) {
        auto psi = hydrogen::radial_eigenfunction(n, c.l, grid);
        const double norm = quadrature_norm(psi);
        out.push_back({"hydrogen_n" + std::to_string(n), std::move(psi), -1.0 / (double(n) * n), norm});
      }
      break;
    case Family::two_param: {
      const auto sp = seeds::make_seed_pair(seeds::FamilyParams::two_param(c.l, c.nu1, c.nu2), grid, c.tol);
      add_family(sp, c.l + std::max(0, c.levels - 2), "", true);
      break;
    }
    case Family::fernandez:
      out = fernandez_states(c, grid);
      break;
    case Family::intermediate: {
      const auto sp = seeds::make_seed_pair(seeds::FamilyParams::intermediate(c.l, c.nu2), grid, c.tol);
      for (auto& s : factorization::psi_star_states(sp, c.l + c.levels - 1)) {
        std::string label = s.label == "psi*_{l-1,-1}" ? "star_m1" : "star_n" + s.label.substr(6, s.label.find(',') - 6);
        // normalized numerically; the reported norm is the one after scaling
        const double norm = quadrature_norm(s.state);
        out.push_back({label, std::move(s.state), s.energy, norm});
      }
      break;
    }
    case Family::unset:
      throw Error(ErrorCode::domain, "--family is required for this command");
  }
  return out;
}

}  // namespace detail

Table potential_table(const RunConfig& c) {
  c.validate();
  const Grid grid = detail::tabulation_grid(c, 1);
  const auto dp = detail::deformed(c, grid);
  const auto base = hydrogen::potential_table(detail::base_index(c), grid);
  Table t;
  t.names = {"r", "V_base", "V_deformed", "delta"};
  t.columns.assign(4, std::vector<double>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    t.columns[0][i] = grid[i];
    t.columns[1][i] = base.values[i];
    t.columns[2][i] = dp.table.values[i];
    t.columns[3][i] = dp.table.values[i] - base.values[i];
  }
  t.metadata = detail::metadata(c, grid);
  t.metadata.emplace_back("base_l", std::to_string(detail::base_index(c)));
  return t;
}

Table states_table(const RunConfig& c) {
  c.validate();
  int n_deep = 1;
  switch (c.family) {
    case Family::hydrogen: n_deep = c.l + c.levels; break;
    case Family::two_param: n_deep = c.l + std::max(0, c.levels - 2); break;
    case Family::fernandez: n_deep = c.l + c.levels; break;
    case Family::intermediate: n_deep = c.l + c.levels - 1; break;
    case Family::unset: break;
  }
  const Grid grid = detail::tabulation_grid(c, std::max(n_deep, c.l + 1));
  const auto st = detail::states(c, grid);
  Table t;
  t.names.push_back("r");
  t.columns.emplace_back(grid.nodes().begin(), grid.nodes().end());
  t.metadata = detail::metadata(c, grid);
  for (const auto& s : st) {
    if (!(std::fabs(s.norm - 1.0) <= 1e-8)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "state " << s.label << " has quadrature norm " << s.norm
          << ", not 1 within 1e-8; increase --rmax or --points";
      throw Error(ErrorCode::certificate_failure, msg.str());
    }
    std::vector<double> density(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) density[i] = s.state.values[i] * s.state.values[i];
    t.names.push_back("psi_" + s.label);
    t.columns.push_back(s.state.values);
    t.names.push_back("density_" + s.label);
    t.columns.push_back(std::move(density));
    t.metadata.emplace_back("energy_" + s.label, detail::format_double(s.energy));
    t.metadata.emplace_back("norm_" + s.label, detail::format_double(s.norm));
  }
  return t;
}

Table spectrum_table(const RunConfig& c) {
  c.validate();
  const auto levels = detail::tower(c);
  const Grid grid = detail::eigen_grid(c, detail::deepest(levels));
  const auto dp = detail::deformed(c, grid);
  const int n_present = static_cast<int>(std::count_if(levels.begin(), levels.end(), [](const auto& lv) { return lv.present; }));
  const auto fd = spectralcheck::eigensolve({dp.table, n_present, spectralcheck::Method::fd_tridiagonal, false});
  const auto sh = spectralcheck::eigensolve({dp.table, n_present, spectralcheck::Method::numerov_shooting, false});

  Table t;
  t.names = {"n", "analytic", "present", "fd", "fd_tolerance", "fd_error", "shooting", "shooting_tolerance",
             "shooting_error", "nearest_distance"};
  t.columns.assign(t.names.size(), {});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::size_t k = 0;
  std::vector<std::string> missing;
  for (const auto& lv : levels) {
    const auto push = [&](std::initializer_list<double> row) {
      std::size_t j = 0;
      for (double v : row) t.columns[j++].push_back(v);
    };
    if (lv.present) {
      const double ef = fd.spectrum[k], es = sh.spectrum[k];
      push({double(lv.n), lv.energy, 1.0, ef, fd.tolerance[k], std::fabs(ef - lv.energy), es, sh.tolerance[k],
            std::fabs(es - lv.energy), std::fabs(ef - lv.energy)});
      ++k;
    } else {
      double nearest = std::numeric_limits<double>::infinity();
      for (double e : fd.spectrum.energies()) nearest = std::min(nearest, std::fabs(e - lv.energy));
      for (double e : sh.spectrum.energies()) nearest = std::min(nearest, std::fabs(e - lv.energy));
      push({double(lv.n), lv.energy, 0.0, nan, nan, nan, nan, nan, nan, nearest});
      missing.push_back(detail::format_double(lv.energy));
    }
  }
  t.metadata = detail::metadata(c, grid);
  t.metadata.emplace_back("base_l", std::to_string(detail::base_index(c)));
  if (!missing.empty()) {
    std::string joined;
    for (const auto& m : missing) joined += (joined.empty() ? "" : " ") + m;
    t.metadata.emplace_back("missing_levels", joined);
  }
  for (const auto& w : fd.warnings) t.metadata.emplace_back("warning", w);
  return t;
}

}  // namespace isohydra::run
