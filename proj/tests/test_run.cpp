#include <algorithm>
#include <cmath>
#include <string>

#include "doctest.h"
#include "isohydra/run.hpp"
#include "json.hpp"
#include "test_util.hpp"

using namespace isohydra;
using run::Family;
using run::RunConfig;

namespace {

std::size_t column(const run::Table& t, const std::string& name) {
  const auto it = std::find(t.names.begin(), t.names.end(), name);
  REQUIRE(it != t.names.end());
  return std::size_t(it - t.names.begin());
}

std::string meta(const run::Table& t, const std::string& key) {
  for (const auto& [k, v] : t.metadata)
    if (k == key) return v;
  return {};
}

RunConfig two_param(int l, double nu1, double nu2) {
  RunConfig c;
  c.family = Family::two_param;
  c.l = l;
  c.nu1 = nu1;
  c.nu2 = nu2;
  return c;
}

}  // namespace

TEST_SUITE("run") {
  TEST_CASE("family and variant names round-trip") {
    for (Family f : {Family::hydrogen, Family::two_param, Family::fernandez, Family::intermediate})
      CHECK(run::family_from_string(run::to_string(f)) == f);
    CHECK_FALSE(run::family_from_string("two_param").has_value());
    CHECK(run::variant_from_string("one_over_r") == seeds::GammaVariant::one_over_r);
    CHECK_FALSE(run::variant_from_string("four").has_value());
  }

  TEST_CASE("config validation") {
    testutil::require_error(ErrorCode::domain, [] { two_param(3, 0.0, 1.5).validate(); });
    testutil::require_error(ErrorCode::domain, [] { two_param(1, 0.0, 0.0).validate(); });
    RunConfig c = two_param(3, -1.0, -1.0);
    c.levels = 0;
    testutil::require_error(ErrorCode::domain, [&] { c.validate(); });
    c.levels = 4;
    c.r_min = 5.0;
    c.r_max = 2.0;
    testutil::require_error(ErrorCode::domain, [&] { c.validate(); });
    RunConfig f;
    f.family = Family::fernandez;
    f.l = 2;
    testutil::require_error(ErrorCode::domain, [&] { f.validate(); });
    f.gamma_sup = true;
    CHECK_NOTHROW(f.validate());
    CHECK(f.gamma_value() > 0.0);
    CHECK_NOTHROW(RunConfig{}.validate());
  }

  TEST_CASE("tolerance keys") {
    RunConfig c;
    c.set_tolerance("residual_tol", 1e-5);
    CHECK(c.tol.residual_tol == 1e-5);
    testutil::require_error(ErrorCode::domain, [&] { c.set_tolerance("bogus", 1.0); });
    c.set_tolerance("quad_tol", -1.0);
    testutil::require_error(ErrorCode::domain, [&] { c.validate(); });
  }

  TEST_CASE("potential table columns and the undeformed limit") {
    RunConfig c = two_param(3, 0.0, 0.0);
    c.points = 2000;
    const auto t = run::potential_table(c);
    REQUIRE(t.names.size() == 4);
    CHECK(t.names[0] == "r");
    CHECK(t.rows() == 2000);
    const auto& delta = t.columns[column(t, "delta")];
    for (double d : delta) REQUIRE(std::fabs(d) < 1e-12);
    CHECK(meta(t, "family") == "two-param");
  }

  TEST_CASE("singular potentials report their radius") {
    RunConfig c;
    c.family = Family::fernandez;
    c.l = 2;
    c.gamma = 0.25;
    const auto e = testutil::error_of([&] { run::potential_table(c); });
    REQUIRE(e.has_value());
    CHECK(e->code() == ErrorCode::singular_family);
    CHECK(std::isfinite(e->radius()));
  }

  TEST_CASE("states table carries unit-norm states") {
    const auto t = run::states_table(two_param(2, -1.0, -1.0));
    CHECK(t.names[0] == "r");
    CHECK(t.names.size() >= 3);
    bool any = false;
    for (const auto& [k, v] : t.metadata)
      if (k.rfind("norm_", 0) == 0) {
        any = true;
        CHECK(std::fabs(std::stod(v) - 1.0) <= 1e-8);
      }
    CHECK(any);
  }

  TEST_CASE("states table refuses a grid that breaks the norm gate") {
    RunConfig c = two_param(2, -1.0, -1.0);
    c.points = 200;
    const auto e = testutil::error_of([&] { run::states_table(c); });
    REQUIRE(e.has_value());
    CHECK(e->code() == ErrorCode::certificate_failure);
  }

  TEST_CASE("intermediate spectrum marks the missing level") {
    RunConfig c;
    c.family = Family::intermediate;
    c.l = 3;
    c.nu2 = 2.0;
    const auto t = run::spectrum_table(c);
    const auto& n = t.columns[column(t, "analytic")];
    const auto& present = t.columns[column(t, "present")];
    bool found = false;
    for (std::size_t i = 0; i < t.rows(); ++i)
      if (std::fabs(n[i] + 1.0 / 9.0) < 1e-15) {
        found = true;
        CHECK(present[i] == 0.0);
      }
    CHECK(found);
  }

  TEST_CASE("verify passes for a sweep member and emits parseable json") {
    const auto rep = run::verify(two_param(2, -1.0, -0.1));
    CHECK(rep.passed());
    CHECK(rep.failures().empty());
    CHECK(rep.checks.size() > 10);
    const auto j = nlohmann::json::parse(run::report_json(rep));
    CHECK(j["passed"] == true);
    CHECK(j["checks"].size() == rep.checks.size());
  }

  TEST_CASE("the wrong gamma variant fails the intertwining check") {
    RunConfig c = two_param(3, -1.0, -1.0);
    c.variant = seeds::GammaVariant::one_over_r;
    const auto rep = run::verify(c);
    CHECK_FALSE(rep.passed());
    const auto f = rep.failures();
    const auto named = [](const std::string& n) {
      const std::string key = ".intertwining_residual";
      return n.size() >= key.size() && n.compare(n.size() - key.size(), key.size(), key) == 0;
    };
    CHECK(std::any_of(f.begin(), f.end(), named));
  }
}
