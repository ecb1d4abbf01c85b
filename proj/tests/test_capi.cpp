#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <string>

#include "isohydra.h"

namespace {

ihy_config* make_config(const char* family, int l) {
  ihy_config* c = nullptr;
  REQUIRE(ihy_config_create(&c) == IHY_OK);
  REQUIRE(ihy_config_set_family(c, family) == IHY_OK);
  REQUIRE(ihy_config_set_l(c, l) == IHY_OK);
  return c;
}

long find_column(const ihy_table* t, const char* name) {
  for (size_t j = 0; j < ihy_table_columns(t); ++j)
    if (std::strcmp(ihy_table_column_name(t, j), name) == 0) return long(j);
  return -1;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::strlen(ihy_version()) > 0);
  CHECK(std::string(ihy_status_name(IHY_SINGULAR)) == "singular");
  CHECK(std::string(ihy_status_name(IHY_OK)) == "ok");
}

TEST_CASE("null handles and unknown names") {
  CHECK(ihy_config_create(nullptr) == IHY_INVALID_ARGUMENT);
  CHECK(ihy_config_set_l(nullptr, 2) == IHY_INVALID_ARGUMENT);
  CHECK(ihy_potential_table(nullptr, nullptr) == IHY_INVALID_ARGUMENT);
  ihy_config* c = nullptr;
  REQUIRE(ihy_config_create(&c) == IHY_OK);
  CHECK(ihy_config_set_family(c, "helium") == IHY_INVALID_ARGUMENT);
  CHECK(std::string(ihy_last_error()).find("helium") != std::string::npos);
  CHECK(ihy_config_set_gamma_variant(c, "two_over_r") == IHY_INVALID_ARGUMENT);
  CHECK(ihy_config_set_tolerance(c, "bogus", 1.0) == IHY_DOMAIN);
  ihy_config_destroy(c);
  ihy_table_destroy(nullptr);
  ihy_report_destroy(nullptr);
  ihy_config_destroy(nullptr);
}

TEST_CASE("domain errors") {
  ihy_config* c = make_config("two-param", 3);
  REQUIRE(ihy_config_set_nu2(c, 1.5) == IHY_OK);
  CHECK(ihy_config_validate(c) == IHY_DOMAIN);
  ihy_table* t = nullptr;
  CHECK(ihy_potential_table(c, &t) == IHY_DOMAIN);
  CHECK(t == nullptr);
  ihy_config_destroy(c);
}

TEST_CASE("singular family reports the radius") {
  ihy_config* c = make_config("fernandez", 2);
  REQUIRE(ihy_config_set_gamma(c, 0.25) == IHY_OK);
  ihy_table* t = nullptr;
  CHECK(ihy_potential_table(c, &t) == IHY_SINGULAR);
  CHECK(std::isfinite(ihy_last_error_radius()));
  CHECK(ihy_last_error_radius() > 0.0);
  ihy_config_destroy(c);
}

TEST_CASE("potential table through the handle") {
  ihy_config* c = make_config("two-param", 2);
  REQUIRE(ihy_config_set_nu1(c, -1.0) == IHY_OK);
  REQUIRE(ihy_config_set_nu2(c, -1.0) == IHY_OK);
  REQUIRE(ihy_config_set_points(c, 1000) == IHY_OK);
  ihy_table* t = nullptr;
  REQUIRE(ihy_potential_table(c, &t) == IHY_OK);
  CHECK(ihy_table_rows(t) == 1000);
  CHECK(ihy_table_columns(t) == 4);
  const long r = find_column(t, "r"), d = find_column(t, "delta"), vb = find_column(t, "V_base"),
             vd = find_column(t, "V_deformed");
  REQUIRE(r == 0);
  REQUIRE(d >= 0);
  const double* dc = ihy_table_column(t, size_t(d));
  const double* bc = ihy_table_column(t, size_t(vb));
  const double* ec = ihy_table_column(t, size_t(vd));
  for (size_t i = 0; i < ihy_table_rows(t); ++i) REQUIRE(dc[i] == ec[i] - bc[i]);
  CHECK(ihy_table_column(t, 99) == nullptr);
  CHECK(ihy_table_column_name(t, 99) == nullptr);
  bool family = false;
  for (size_t i = 0; i < ihy_table_metadata_count(t); ++i)
    if (std::string(ihy_table_metadata_key(t, i)) == "family")
      family = std::string(ihy_table_metadata_value(t, i)) == "two-param";
  CHECK(family);
  ihy_table_destroy(t);
  ihy_config_destroy(c);
}

TEST_CASE("states of the Fernandez family at the supremum") {
  ihy_config* c = make_config("fernandez", 2);
  REQUIRE(ihy_config_set_gamma_sup(c) == IHY_OK);
  REQUIRE(ihy_config_set_levels(c, 3) == IHY_OK);
  ihy_table* t = nullptr;
  REQUIRE(ihy_states_table(c, &t) == IHY_OK);
  CHECK(find_column(t, "psi_ground") == -1);
  CHECK(ihy_table_columns(t) == 1 + 2 * 3);
  ihy_table_destroy(t);
  ihy_config_destroy(c);
}

TEST_CASE("verify: pass, fail and check access") {
  ihy_config* c = make_config("hydrogen", 1);
  ihy_report* rep = nullptr;
  REQUIRE(ihy_verify(c, &rep) == IHY_OK);
  CHECK(ihy_report_passed(rep) == 1);
  REQUIRE(ihy_report_check_count(rep) > 0);
  const char* name = nullptr;
  double value = 0.0, threshold = 0.0;
  int pass = 0;
  REQUIRE(ihy_report_check(rep, 0, &name, &value, &threshold, &pass) == IHY_OK);
  CHECK(name != nullptr);
  CHECK(pass == 1);
  CHECK(ihy_report_check(rep, 100000, &name, &value, &threshold, &pass) == IHY_INVALID_ARGUMENT);
  CHECK(std::string(ihy_report_json(rep)).find("\"passed\"") != std::string::npos);
  ihy_report_destroy(rep);
  ihy_config_destroy(c);

  c = make_config("two-param", 3);
  REQUIRE(ihy_config_set_nu1(c, -1.0) == IHY_OK);
  REQUIRE(ihy_config_set_nu2(c, -1.0) == IHY_OK);
  REQUIRE(ihy_config_set_gamma_variant(c, "one_over_r") == IHY_OK);
  rep = nullptr;
  CHECK(ihy_verify(c, &rep) == IHY_VERIFICATION_FAILED);
  REQUIRE(rep != nullptr);
  CHECK(ihy_report_passed(rep) == 0);
  CHECK(std::string(ihy_last_error()).find("intertwining_residual") != std::string::npos);
  ihy_report_destroy(rep);
  ihy_config_destroy(c);
}
