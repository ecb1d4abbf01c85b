#include "isohydra.h"

#include <cmath>
#include <exception>
#include <limits>
#include <new>
#include <string>
#include <utility>

#include "isohydra/error.hpp"
#include "isohydra/run.hpp"

struct ihy_config {
  isohydra::run::RunConfig config;
};

struct ihy_table {
  isohydra::run::Table table;
};

struct ihy_report {
  isohydra::run::Report report;
  std::string json;
};

namespace {

thread_local std::string last_error;
thread_local double last_radius = std::numeric_limits<double>::quiet_NaN();

ihy_status fail(ihy_status status, std::string message, double radius = std::numeric_limits<double>::quiet_NaN()) {
  last_error = std::move(message);
  last_radius = radius;
  return status;
}

void clear() {
  last_error.clear();
  last_radius = std::numeric_limits<double>::quiet_NaN();
}

ihy_status status_of(isohydra::ErrorCode code) {
  using isohydra::ErrorCode;
  switch (code) {
    case ErrorCode::domain:
    case ErrorCode::grid_too_coarse:
      return IHY_DOMAIN;
    case ErrorCode::singular_family:
    case ErrorCode::combination_zero:
      return IHY_SINGULAR;
    case ErrorCode::non_convergence:
    case ErrorCode::branch_mismatch:
    case ErrorCode::certificate_failure:
    case ErrorCode::convergence_failure:
    case ErrorCode::bracket_failure:
      return IHY_NUMERICAL;
    case ErrorCode::missing_derivatives:
      return IHY_INTERNAL;
  }
  return IHY_INTERNAL;
}

// Runs f, translating exceptions into status codes and the thread-local error.
template <class F>
ihy_status guarded(F&& f) {
  clear();
  try {
    return f();
  } catch (const isohydra::Error& e) {
    return fail(status_of(e.code()), std::string(isohydra::to_string(e.code())) + ": " + e.what(), e.radius());
  } catch (const std::bad_alloc&) {
    return fail(IHY_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(IHY_INTERNAL, e.what());
  } catch (...) {
    return fail(IHY_INTERNAL, "unknown exception");
  }
}

ihy_status null_argument(const char* what) { return fail(IHY_INVALID_ARGUMENT, std::string(what) + " is null"); }

template <class F>
ihy_status with_config(ihy_config* c, F&& f) {
  if (!c) return null_argument("config");
  return guarded([&] {
    f(c->config);
    return IHY_OK;
  });
}

template <class Build>
ihy_status make_table(const ihy_config* c, ihy_table** out, Build&& build) {
  if (!c) return null_argument("config");
  if (!out) return null_argument("output pointer");
  *out = nullptr;
  return guarded([&] {
    *out = new ihy_table{build(c->config)};
    return IHY_OK;
  });
}

}  // namespace

extern "C" {

const char* ihy_version(void) { return ISOHYDRA_VERSION; }

const char* ihy_status_name(ihy_status status) {
  switch (status) {
    case IHY_OK: return "ok";
    case IHY_VERIFICATION_FAILED: return "verification_failed";
    case IHY_DOMAIN: return "domain";
    case IHY_SINGULAR: return "singular";
    case IHY_NUMERICAL: return "numerical";
    case IHY_INVALID_ARGUMENT: return "invalid_argument";
    case IHY_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* ihy_last_error(void) { return last_error.c_str(); }
double ihy_last_error_radius(void) { return last_radius; }

ihy_status ihy_config_create(ihy_config** out) {
  if (!out) return null_argument("output pointer");
  *out = nullptr;
  return guarded([&] {
    *out = new ihy_config{};
    return IHY_OK;
  });
}

void ihy_config_destroy(ihy_config* config) { delete config; }

ihy_status ihy_config_set_family(ihy_config* config, const char* family) {
  if (!family) return null_argument("family");
  const auto f = isohydra::run::family_from_string(family);
  if (!f) return fail(IHY_INVALID_ARGUMENT, std::string("unknown family '") + family + "'");
  return with_config(config, [&](auto& c) { c.family = *f; });
}

ihy_status ihy_config_set_l(ihy_config* config, int l) {
  return with_config(config, [&](auto& c) { c.l = l; });
}

ihy_status ihy_config_set_nu1(ihy_config* config, double nu1) {
  return with_config(config, [&](auto& c) { c.nu1 = nu1; });
}

ihy_status ihy_config_set_nu2(ihy_config* config, double nu2) {
  return with_config(config, [&](auto& c) { c.nu2 = nu2; });
}

ihy_status ihy_config_set_gamma(ihy_config* config, double gamma) {
  return with_config(config, [&](auto& c) {
    c.gamma = gamma;
    c.gamma_sup = false;
  });
}

ihy_status ihy_config_set_gamma_sup(ihy_config* config) {
  return with_config(config, [&](auto& c) {
    c.gamma.reset();
    c.gamma_sup = true;
  });
}

ihy_status ihy_config_set_rmin(ihy_config* config, double r_min) {
  return with_config(config, [&](auto& c) { c.r_min = r_min; });
}

ihy_status ihy_config_set_rmax(ihy_config* config, double r_max) {
  return with_config(config, [&](auto& c) { c.r_max = r_max; });
}

ihy_status ihy_config_set_points(ihy_config* config, size_t points) {
  return with_config(config, [&](auto& c) { c.points = points; });
}

ihy_status ihy_config_set_levels(ihy_config* config, int levels) {
  return with_config(config, [&](auto& c) { c.levels = levels; });
}

ihy_status ihy_config_set_tolerance(ihy_config* config, const char* key, double value) {
  if (!key) return null_argument("key");
  return with_config(config, [&](auto& c) { c.set_tolerance(key, value); });
}

ihy_status ihy_config_set_gamma_variant(ihy_config* config, const char* variant) {
  if (!variant) return null_argument("variant");
  const auto v = isohydra::run::variant_from_string(variant);
  if (!v) return fail(IHY_INVALID_ARGUMENT, std::string("unknown gamma variant '") + variant + "'");
  return with_config(config, [&](auto& c) { c.variant = *v; });
}

ihy_status ihy_config_validate(const ihy_config* config) {
  if (!config) return null_argument("config");
  return guarded([&] {
    config->config.validate();
    return IHY_OK;
  });
}

ihy_status ihy_potential_table(const ihy_config* config, ihy_table** out) {
  return make_table(config, out, isohydra::run::potential_table);
}

ihy_status ihy_states_table(const ihy_config* config, ihy_table** out) {
  return make_table(config, out, isohydra::run::states_table);
}

ihy_status ihy_spectrum_table(const ihy_config* config, ihy_table** out) {
  return make_table(config, out, isohydra::run::spectrum_table);
}

void ihy_table_destroy(ihy_table* table) { delete table; }

size_t ihy_table_rows(const ihy_table* table) { return table ? table->table.rows() : 0; }

size_t ihy_table_columns(const ihy_table* table) { return table ? table->table.names.size() : 0; }

const char* ihy_table_column_name(const ihy_table* table, size_t column) {
  if (!table || column >= table->table.names.size()) return nullptr;
  return table->table.names[column].c_str();
}

const double* ihy_table_column(const ihy_table* table, size_t column) {
  if (!table || column >= table->table.columns.size()) return nullptr;
  return table->table.columns[column].data();
}

size_t ihy_table_metadata_count(const ihy_table* table) { return table ? table->table.metadata.size() : 0; }

const char* ihy_table_metadata_key(const ihy_table* table, size_t index) {
  if (!table || index >= table->table.metadata.size()) return nullptr;
  return table->table.metadata[index].first.c_str();
}

const char* ihy_table_metadata_value(const ihy_table* table, size_t index) {
  if (!table || index >= table->table.metadata.size()) return nullptr;
  return table->table.metadata[index].second.c_str();
}

ihy_status ihy_verify(const ihy_config* config, ihy_report** out) {
  if (!config) return null_argument("config");
  if (!out) return null_argument("output pointer");
  *out = nullptr;
  return guarded([&] {
    auto* r = new ihy_report{isohydra::run::verify(config->config), {}};
    try {
      r->json = isohydra::run::report_json(r->report);
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
    if (r->report.passed()) return IHY_OK;
    std::string names;
    for (const auto& f : r->report.failures()) names += (names.empty() ? "" : ", ") + f;
    return fail(IHY_VERIFICATION_FAILED, "failed checks: " + names);
  });
}

void ihy_report_destroy(ihy_report* report) { delete report; }

int ihy_report_passed(const ihy_report* report) { return report && report->report.passed() ? 1 : 0; }

const char* ihy_report_json(const ihy_report* report) { return report ? report->json.c_str() : nullptr; }

size_t ihy_report_check_count(const ihy_report* report) { return report ? report->report.checks.size() : 0; }

ihy_status ihy_report_check(const ihy_report* report, size_t index, const char** name, double* value,
                            double* threshold, int* pass) {
  if (!report) return null_argument("report");
  if (index >= report->report.checks.size()) return fail(IHY_INVALID_ARGUMENT, "check index out of range");
  clear();
  const auto& c = report->report.checks[index];
  if (name) *name = c.name.c_str();
  if (value) *value = c.value;
  if (threshold) *threshold = c.threshold;
  if (pass) *pass = c.pass ? 1 : 0;
  return IHY_OK;
}

}  // extern "C"
