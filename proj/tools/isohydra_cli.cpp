#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "isohydra.h"
#include "json.hpp"

namespace {

using nlohmann::json;

enum Exit { exit_pass = 0, exit_failure = 1, exit_usage = 2, exit_singular = 3 };

int exit_code(ihy_status s) {
  switch (s) {
    case IHY_OK: return exit_pass;
    case IHY_DOMAIN:
    case IHY_INVALID_ARGUMENT: return exit_usage;
    case IHY_SINGULAR: return exit_singular;
    default: return exit_failure;
  }
}

int report_error(ihy_status s) {
  std::string msg = ihy_last_error();
  const double r = ihy_last_error_radius();
  if (s == IHY_SINGULAR && std::isfinite(r)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, " [radius r=%.17g]", r);
    msg += buf;
  }
  std::cerr << "isohydra: " << msg << "\n";
  return exit_code(s);
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json json_number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Writes next to the target and renames, so readers never see a partial file.
bool write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return static_cast<bool>(std::cout);
  }
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) {
      std::cerr << "isohydra: cannot write " << tmp.string() << ": " << std::strerror(errno) << "\n";
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      return false;
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::cerr << "isohydra: cannot rename onto " << path << ": " << ec.message() << "\n";
    std::filesystem::remove(tmp, ec);
    return false;
  }
  return true;
}

struct Options {
  std::string family;
  std::optional<int> l;
  std::optional<double> nu1, nu2;
  std::string gamma;
  std::optional<double> r_min, r_max;
  std::optional<std::size_t> points;
  std::optional<int> levels;
  std::string format;
  std::string out;
  std::vector<std::string> tol;
  std::string variant;
};

// Returns IHY_OK or the failing status with the thread error set.
ihy_status configure(ihy_config* c, const Options& o) {
  ihy_status s = IHY_OK;
  const auto step = [&](ihy_status r) {
    if (s == IHY_OK) s = r;
  };
  if (!o.family.empty()) step(ihy_config_set_family(c, o.family.c_str()));
  if (o.l) step(ihy_config_set_l(c, *o.l));
  if (o.nu1) step(ihy_config_set_nu1(c, *o.nu1));
  if (o.nu2) step(ihy_config_set_nu2(c, *o.nu2));
  if (!o.gamma.empty()) {
    if (o.gamma == "sup") {
      step(ihy_config_set_gamma_sup(c));
    } else {
      std::size_t used = 0;
      double g = 0.0;
      try {
        g = std::stod(o.gamma, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != o.gamma.size()) {
        std::cerr << "isohydra: --gamma expects a number or 'sup', got '" << o.gamma << "'\n";
        return IHY_INVALID_ARGUMENT;
      }
      step(ihy_config_set_gamma(c, g));
    }
  }
  if (o.r_min) step(ihy_config_set_rmin(c, *o.r_min));
  if (o.r_max) step(ihy_config_set_rmax(c, *o.r_max));
  if (o.points) step(ihy_config_set_points(c, *o.points));
  if (o.levels) step(ihy_config_set_levels(c, *o.levels));
  if (!o.variant.empty()) step(ihy_config_set_gamma_variant(c, o.variant.c_str()));
  for (const auto& kv : o.tol) {
    const auto eq = kv.find('=');
    std::size_t used = 0;
    double v = 0.0;
    if (eq != std::string::npos) {
      try {
        v = std::stod(kv.substr(eq + 1), &used);
      } catch (const std::exception&) {
        used = 0;
      }
    }
    if (eq == std::string::npos || used == 0 || used != kv.size() - eq - 1) {
      std::cerr << "isohydra: --tol expects KEY=VALUE, got '" << kv << "'\n";
      return IHY_INVALID_ARGUMENT;
    }
    step(ihy_config_set_tolerance(c, kv.substr(0, eq).c_str(), v));
  }
  if (s == IHY_OK) s = ihy_config_validate(c);
  return s;
}

std::string table_csv(const ihy_table* t, const std::string& command, const std::string& emitted_at) {
  std::ostringstream os;
  os << "# command=" << command << "\n";
  for (std::size_t i = 0; i < ihy_table_metadata_count(t); ++i)
    os << "# " << ihy_table_metadata_key(t, i) << "=" << ihy_table_metadata_value(t, i) << "\n";
  os << "# emitted_at=" << emitted_at << "\n";
  const std::size_t nc = ihy_table_columns(t), nr = ihy_table_rows(t);
  for (std::size_t j = 0; j < nc; ++j) os << (j ? "," : "") << ihy_table_column_name(t, j);
  os << "\n";
  std::vector<const double*> cols(nc);
  for (std::size_t j = 0; j < nc; ++j) cols[j] = ihy_table_column(t, j);
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nc; ++j) os << (j ? "," : "") << format_double(cols[j][i]);
    os << "\n";
  }
  return os.str();
}

std::string table_json(const ihy_table* t, const std::string& command, const std::string& emitted_at) {
  json meta = json::object();
  json warnings = json::array();
  for (std::size_t i = 0; i < ihy_table_metadata_count(t); ++i) {
    const std::string key = ihy_table_metadata_key(t, i);
    if (key == "warning")
      warnings.push_back(ihy_table_metadata_value(t, i));
    else
      meta[key] = ihy_table_metadata_value(t, i);
  }
  if (!warnings.empty()) meta["warnings"] = warnings;
  json columns = json::array(), data = json::object();
  const std::size_t nr = ihy_table_rows(t);
  for (std::size_t j = 0; j < ihy_table_columns(t); ++j) {
    const std::string name = ihy_table_column_name(t, j);
    const double* col = ihy_table_column(t, j);
    json values = json::array();
    for (std::size_t i = 0; i < nr; ++i) values.push_back(json_number(col[i]));
    columns.push_back(name);
    data[name] = std::move(values);
  }
  json doc{{"command", command}, {"metadata", meta}, {"emitted_at", emitted_at}, {"columns", columns}, {"data", data}};
  return doc.dump(1) + "\n";
}

std::string checks_csv(const ihy_report* r, const json& report, const std::string& emitted_at) {
  std::ostringstream os;
  os << "# command=verify\n";
  for (const auto& [k, v] : report["params"].items()) os << "# " << k << "=" << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  os << "# version=" << ihy_version() << "\n";
  os << "# passed=" << (ihy_report_passed(r) ? "true" : "false") << "\n";
  os << "# emitted_at=" << emitted_at << "\n";
  os << "name,value,threshold,pass\n";
  for (std::size_t i = 0; i < ihy_report_check_count(r); ++i) {
    const char* name = nullptr;
    double value = 0.0, threshold = 0.0;
    int pass = 0;
    ihy_report_check(r, i, &name, &value, &threshold, &pass);
    os << name << "," << format_double(value) << "," << format_double(threshold) << "," << pass << "\n";
  }
  return os.str();
}

int run_table(const std::string& command, const Options& o) {
  ihy_config* c = nullptr;
  ihy_status s = ihy_config_create(&c);
  if (s != IHY_OK) return report_error(s);
  s = configure(c, o);
  if (s != IHY_OK) {
    ihy_config_destroy(c);
    return *ihy_last_error() ? report_error(s) : exit_code(s);
  }
  ihy_table* t = nullptr;
  if (command == "potential")
    s = ihy_potential_table(c, &t);
  else if (command == "states")
    s = ihy_states_table(c, &t);
  else
    s = ihy_spectrum_table(c, &t);
  ihy_config_destroy(c);
  if (s != IHY_OK) return report_error(s);
  const std::string emitted = utc_now();
  const std::string text = o.format == "json" ? table_json(t, command, emitted) : table_csv(t, command, emitted);
  ihy_table_destroy(t);
  return write_output(o.out, text) ? exit_pass : exit_failure;
}

int run_verify(const Options& o) {
  ihy_config* c = nullptr;
  ihy_status s = ihy_config_create(&c);
  if (s != IHY_OK) return report_error(s);
  s = configure(c, o);
  if (s != IHY_OK) {
    ihy_config_destroy(c);
    return *ihy_last_error() ? report_error(s) : exit_code(s);
  }
  ihy_report* r = nullptr;
  s = ihy_verify(c, &r);
  ihy_config_destroy(c);
  if (!r) return report_error(s);

  json report = json::parse(ihy_report_json(r));
  const std::string emitted = utc_now();
  std::string text;
  if (o.format == "csv") {
    text = checks_csv(r, report, emitted);
  } else {
    report["emitted_at"] = emitted;
    text = report.dump(1) + "\n";
  }
  std::size_t failed = 0;
  for (std::size_t i = 0; i < ihy_report_check_count(r); ++i) {
    const char* name = nullptr;
    double value = 0.0, threshold = 0.0;
    int pass = 0;
    ihy_report_check(r, i, &name, &value, &threshold, &pass);
    if (!pass) {
      ++failed;
      std::cerr << "FAIL " << name << " value=" << format_double(value) << " threshold=" << format_double(threshold)
                << "\n";
    }
  }
  std::cerr << "verify: " << ihy_report_check_count(r) << " checks, " << failed << " failed\n";
  ihy_report_destroy(r);
  if (!write_output(o.out, text)) return exit_failure;
  return s == IHY_OK ? exit_pass : exit_failure;
}

void add_options(CLI::App* sub, Options& o) {
  sub->add_option("--family", o.family, "hydrogen, two-param, fernandez or intermediate")
      ->check(CLI::IsMember({"hydrogen", "two-param", "fernandez", "intermediate"}));
  sub->add_option("--l", o.l, "azimuthal index of the base potential V_l");
  sub->add_option("--nu1", o.nu1, "first deformation parameter");
  sub->add_option("--nu2", o.nu2, "second deformation parameter");
  sub->add_option("--gamma", o.gamma, "Fernandez parameter gamma_l, or 'sup'");
  sub->add_option("--rmin", o.r_min, "first grid node");
  sub->add_option("--rmax", o.r_max, "last grid node");
  sub->add_option("--points", o.points, "number of grid nodes");
  sub->add_option("--levels", o.levels, "number of levels or mapped states");
  sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", o.out, "output path (stdout when omitted)");
  sub->add_option("--tol", o.tol, "tolerance override KEY=VAL (quad_tol, ode_tol, residual_tol, fd_step_scale)")
      ->take_all()
      ->allow_extra_args(false);
  sub->add_option("--gamma-variant", o.variant, "intertwiner gamma variant")
      ->check(CLI::IsMember({"four_over_r", "one_over_r"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isospectral hydrogen-like potentials: tabulation and verification"};
  app.set_version_flag("--version", std::string(ihy_version()));
  app.require_subcommand(1);
  Options o;
  auto* potential = app.add_subcommand("potential", "tabulate V_base, V_deformed and their difference");
  auto* states = app.add_subcommand("states", "tabulate normalized eigenstates and densities");
  auto* spectrum = app.add_subcommand("spectrum", "analytic against numeric bound-state levels");
  auto* verify = app.add_subcommand("verify", "run the certificate and spectral checks");
  for (auto* sub : {potential, states, spectrum, verify}) add_options(sub, o);
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }
  // tables default to csv, reports to json
  if (o.format.empty()) o.format = *verify ? "json" : "csv";
  if (*verify) return run_verify(o);
  for (auto* sub : {potential, states, spectrum})
    if (*sub) return run_table(sub->get_name(), o);
  return exit_usage;
}
