#include <cmath>
#include <vector>

#include "doctest.h"
#include "isohydra/families.hpp"
#include "isohydra/hydrogen.hpp"
#include "isohydra/numerics/quadrature.hpp"
#include "isohydra/spectralcheck.hpp"
#include "test_util.hpp"

using namespace isohydra;
using seeds::FamilyParams;
using testutil::rel;

namespace {

// max |a - b| relative to the nodewise magnitude |V_base| + |a - V_base|.
double potential_gap(const FunctionTable& a, const FunctionTable& b, int base_l) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double r = a.grid[i];
    const double scale = std::fabs(base_l * (base_l + 1.0) / (r * r)) + 2.0 / r +
                         std::fabs(a.values[i] - hydrogen::potential_v(base_l, r));
    worst = std::max(worst, std::fabs(a.values[i] - b.values[i]) / scale);
  }
  return worst;
}

}  // namespace

TEST_SUITE("families") {
  TEST_CASE("nu1 = nu2 = 0 reproduces V_{l-2}") {
    const Grid g(1e-6, 120.0, 20000);
    for (int l : {2, 3, 4}) {
      const auto dp = families::v_tilde_two_param(FamilyParams::two_param(l, 0.0, 0.0), g);
      CHECK(dp.base_l == l - 2);
      double worst = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double v = hydrogen::potential_v(l - 2, g[i]);
        worst = std::max(worst, std::fabs(dp.table.values[i] - v) / (std::fabs(v) + 2.0 / g[i]));
      }
      CHECK(worst < 1e-12);
    }
  }

  TEST_CASE("deformed potential matches the Crum construction") {
    const Grid g(1e-6, 120.0, 40000);
    for (double nu : {-10.0, -1.0, -0.1}) {
      const auto sp = seeds::make_seed_pair(FamilyParams::two_param(3, nu, nu), g);
      const auto vt = families::v_tilde_two_param(sp).table;
      CHECK(potential_gap(families::crum_potential(sp), vt, 1) < 1e-6);
    }
  }

  TEST_CASE("deformation is localized and vanishes at large r") {
    const Grid g(1e-4, 200.0, 20000);
    const auto vt = families::v_tilde_two_param(FamilyParams::two_param(3, -10.0, -10.0), g).table;
    const auto v1 = hydrogen::potential_table(1, g);
    const std::size_t last = g.size() - 1;
    CHECK(std::fabs(vt.values[last] - v1.values[last]) < 1e-3);
    double peak = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) peak = std::max(peak, std::fabs(vt.values[i] - v1.values[i]));
    CHECK(peak > 1e-2);
  }

  TEST_CASE("mapped prefactor closed form") {
    for (int l : {2, 3})
      for (int n = l + 1; n < l + 5; ++n) {
        const double N = double(n) * n, L = double(l) * l;
        CHECK(families::mapped_prefactor(n, l) ==
              doctest::Approx(l * (l - 1.0) * N / std::sqrt((N - L) * (N - L + 2.0 * l - 1.0))));
      }
  }

  TEST_CASE("kernel and mapped states are normalized eigenstates of V~") {
    const Grid g(1e-6, 300.0, 40000);
    const auto sp = seeds::make_seed_pair(FamilyParams::two_param(3, -1.0, -10.0), g);
    const auto vt = families::v_tilde_two_param(sp).table;
    const auto k0 = families::psi_kernel_0(sp);
    const auto km = families::psi_kernel_m1(sp);
    CHECK(k0.energy == doctest::Approx(-1.0 / 9.0));
    CHECK(km.energy == doctest::Approx(-1.0 / 4.0));
    CHECK(std::fabs(k0.measured_norm - 1.0) < 1e-6);
    CHECK(std::fabs(km.measured_norm - 1.0) < 1e-6);
    CHECK(spectralcheck::eigen_residual(vt, k0.state, k0.energy, 1e-6) < 1e-6);
    CHECK(spectralcheck::eigen_residual(vt, km.state, km.energy, 1e-6) < 1e-6);
    const auto op = families::make_operator_A(sp);
    for (int n = 4; n <= 6; ++n) {
      const auto m = families::psi_tilde_mapped(n, sp, op);
      CHECK(std::fabs(m.measured_norm - 1.0) < 1e-6);
      CHECK(m.prefactor == doctest::Approx(families::mapped_prefactor(n, 3)));
      CHECK(spectralcheck::eigen_residual(vt, m.state, -1.0 / (n * n), 1e-6) < 1e-6);
    }
  }

  TEST_CASE("A^dagger annihilates the kernel states") {
    const Grid g(1e-6, 150.0, 40000);
    const auto sp = seeds::make_seed_pair(FamilyParams::two_param(3, -1.0, -1.0), g);
    const auto op = families::make_operator_A(sp);
    for (const auto& k : {families::psi_kernel_0(sp), families::psi_kernel_m1(sp)}) {
      const auto out = families::apply_A_adjoint(op, k.state);
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] < 0.05 || g[i] > 60.0) continue;
        num = std::max(num, std::fabs(out.values[i]));
        den = std::max(den, std::fabs((*k.state.d2)[i]));
      }
      CHECK(num / den < 1e-6);
    }
  }

  TEST_CASE("A needs derivative tables") {
    const Grid g(1e-3, 40.0, 2000);
    const auto op = families::make_operator_A(seeds::make_seed_pair(FamilyParams::two_param(2, -1.0, -1.0), g));
    FunctionTable bare(g);
    testutil::require_error(ErrorCode::missing_derivatives, [&] { families::apply_A(op, bare); });
  }

  TEST_CASE("spectrum of V~") {
    const auto s = families::spectrum_tilde(3, 3);
    REQUIRE(s.size() == 5);
    CHECK(s[0] == doctest::Approx(-0.25));
    CHECK(s[1] == doctest::Approx(-1.0 / 9.0));
    CHECK(s[2] == doctest::Approx(-1.0 / 16.0));
    CHECK(s[4] == doctest::Approx(-1.0 / 36.0));
  }

  TEST_CASE("Fernandez supremum and nu2 map") {
    for (int l : {1, 2, 3}) {
      // int_0^inf x^{2l} e^{-2x/l} dx by quadrature
      const auto q = adaptive_quad_to_infinity(
          [l](double x) { return std::pow(x, 2 * l) * std::exp(-2.0 * x / l); }, 0.0, 1e-12);
      CHECK(rel(families::fernandez_supremum(l), q.value) < 1e-10);
      CHECK(families::nu2_from_gamma(l, 0.5) == doctest::Approx(q.value / 0.5).epsilon(1e-10));
    }
  }

  TEST_CASE("Fernandez potential is singular for 0 <= gamma < sup, at the zero of the denominator") {
    const Grid g(1e-4, 60.0, 4000);
    const int l = 2;
    const double gamma = 0.25;
    const auto e = testutil::error_of([&] { families::fernandez_potential(l, gamma, g); });
    REQUIRE(e.has_value());
    CHECK(e->code() == ErrorCode::singular_family);
    const double r0 = e->radius();
    REQUIRE(std::isfinite(r0));
    const auto head = adaptive_quad(
        [l](double x) { return std::pow(x, 2 * l) * std::exp(-2.0 * x / l); }, 0.0, r0, 1e-14);
    CHECK(rel(head.value, gamma) < 1e-8);
  }

  TEST_CASE("Fernandez against the two-parameter family with nu1 = 0") {
    const Grid g(1e-6, 120.0, 40000);
    for (const int l : {2, 3}) {
      for (const double gamma : {-5.0, -0.1, 1.5 * families::fernandez_supremum(l)}) {
        CAPTURE(l);
        CAPTURE(gamma);
        const auto vf = families::fernandez_potential(l, gamma, g);
        CHECK(vf.base_l == l - 1);
        const auto vt = families::v_tilde_two_param(
            FamilyParams::two_param(l + 1, 0.0, families::nu2_from_gamma(l, gamma)), g);
        CHECK(potential_gap(vf.table, vt.table, l - 1) < 1e-8);
      }
    }
  }

  TEST_CASE("Fernandez tends to V_{l-1} as gamma grows") {
    const Grid g(1e-6, 120.0, 20000);
    const auto vf = families::fernandez_potential(2, 1e8, g).table;
    CHECK(potential_gap(vf, hydrogen::potential_table(1, g), 1) < 1e-4);
  }

  TEST_CASE("Fernandez at the supremum is regular") {
    const Grid g(1e-4, 200.0, 20000);
    const auto vf = families::fernandez_potential(2, families::fernandez_supremum(2), g);
    for (double v : vf.table.values) REQUIRE(std::isfinite(v));
  }
}
