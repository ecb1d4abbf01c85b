#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "isohydra/numerics/grid.hpp"
#include "isohydra/seeds.hpp"

namespace isohydra::run {

enum class Family { unset, hydrogen, two_param, fernandez, intermediate };

const char* to_string(Family family) noexcept;
// Accepts hydrogen, two-param, fernandez, intermediate.
std::optional<Family> family_from_string(std::string_view name);

const char* to_string(seeds::GammaVariant variant) noexcept;
std::optional<seeds::GammaVariant> variant_from_string(std::string_view name);

// One front-end request. Unset grid fields take defaults that depend on the
// command (tabulation or eigensolve) and on the deepest requested level.
struct RunConfig {
  Family family = Family::unset;
  int l = 0;
  double nu1 = 0.0;
  double nu2 = 0.0;
  std::optional<double> gamma;  // Fernandez parameter
  bool gamma_sup = false;       // gamma = supremum (Abraham-Moses boundary)
  std::optional<double> r_min, r_max;
  std::optional<std::size_t> points;
  int levels = 4;
  ToleranceConfig tol;
  seeds::GammaVariant variant = seeds::GammaVariant::four_over_r;

  // Throws Domain with an actionable message. Family::unset passes (verify
  // runs the default sweep).
  void validate() const;
  // gamma_l with the supremum resolved; throws Domain when not set.
  double gamma_value() const;
  // Sets one tolerance by key: quad_tol, ode_tol, residual_tol, fd_step_scale.
  void set_tolerance(std::string_view key, double value);
};

// Named columns of equal length plus ordered metadata.
struct Table {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  std::vector<std::pair<std::string, std::string>> metadata;

  std::size_t rows() const noexcept { return columns.empty() ? 0 : columns.front().size(); }
};

// r, V_base, V_deformed, delta.
Table potential_table(const RunConfig& config);
// r, then psi_<label> and density_<label> per state. Throws
// CertificateFailure when a quadrature norm misses 1 by more than 1e-8.
Table states_table(const RunConfig& config);
// One row per level of the comparison tower: n, analytic, present, then value,
// tolerance and absolute error for fd and shooting. Absent levels (present =
// 0) carry NaN numerics and the distance to the nearest numeric level.
Table spectrum_table(const RunConfig& config);

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct SpectrumRecord {
  std::string potential;
  std::string method;
  std::vector<double> analytic;
  std::vector<double> numeric;
  std::vector<double> tolerance;
  std::vector<double> error;
};

struct GridInfo {
  std::string role;  // eigen, operator, ...
  std::string scheme;
  double r_min = 0.0, r_max = 0.0;
  std::size_t points = 0;
};

struct Report {
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<GridInfo> grids;
  ToleranceConfig tol;
  std::vector<Check> checks;
  std::vector<SpectrumRecord> spectra;
  std::vector<std::string> notes;

  bool passed() const noexcept;
  // Names of the failed checks.
  std::vector<std::string> failures() const;
};

// Full certificate and spectral suite for the configured family, or the
// default sweep (l in {2, 3}, nu1, nu2 in {-10, -1, -0.1}, intermediate family
// at nu2 = 2 and the one-parameter limits) when the family is unset. Library
// errors inside a check become failed checks named after it.
Report verify(const RunConfig& config);

// {version, params, grid, tolerances, checks: [{name, value, threshold,
// pass}], spectra, notes, passed}; non-finite numbers become null.
std::string report_json(const Report& report);

}  // namespace isohydra::run
