#include <cmath>
#include <vector>

#include "doctest.h"
#include "isohydra/seeds.hpp"
#include "test_util.hpp"

using namespace isohydra;
using seeds::FamilyParams;
using testutil::rel;

namespace {

const double kNus[] = {-10.0, -1.0, -0.1};

}  // namespace

TEST_SUITE("seeds") {
  TEST_CASE("constants c and d") {
    for (int l : {2, 3, 5}) {
      const double L = l, m = l - 1.0;
      const auto cd = seeds::c_d_constants(l);
      CHECK(cd.c == doctest::Approx(std::pow(2 * L - 1, 2) / (4 * std::pow(L * m, 4))));
      // d = -(E1 + E2) = 1/l^2 + 1/(l-1)^2
      CHECK(cd.d == doctest::Approx(1.0 / (L * L) + 1.0 / (m * m)).epsilon(1e-14));
      CHECK(seeds::seed_energy_1(l) == doctest::Approx(-1.0 / (L * L)));
      CHECK(seeds::seed_energy_2(l) == doctest::Approx(-1.0 / (m * m)));
    }
  }

  TEST_CASE("parameter domains") {
    testutil::require_error(ErrorCode::domain, [] { FamilyParams::two_param(3, 1.5, 0.0); });
    testutil::require_error(ErrorCode::domain, [] { FamilyParams::two_param(3, 0.0, 1.0); });
    testutil::require_error(ErrorCode::domain, [] { FamilyParams::two_param(1, 0.0, 0.0); });
    testutil::require_error(ErrorCode::domain, [] { FamilyParams::intermediate(3, 0.5); });
    testutil::require_error(ErrorCode::domain, [] { FamilyParams::two_param(3, NAN, 0.0); });
    CHECK(FamilyParams::intermediate(3, 2.0).family == seeds::FamilyKind::intermediate);
    CHECK(FamilyParams::two_param(4, 0, 0).pole() == 12.0);
    CHECK_NOTHROW(FamilyParams::unchecked(3, 5.0, 5.0));
  }

  TEST_CASE("undeformed seeds are exact") {
    const Grid g(1e-6, 60.0, 4000);
    const auto sp = seeds::make_seed_pair(FamilyParams::two_param(3, 0.0, 0.0), g);
    const double p = 6.0;
    for (std::size_t i = 0; i < g.size(); i += 37) {
      CHECK(sp.g1.values[i] == 1.0);
      CHECK(sp.omega.values[i] == 1.0);
      CHECK(sp.g2_scaled.values[i] == doctest::Approx(1.0 - g[i] / p).epsilon(1e-14));
    }
  }

  TEST_CASE("seed Schroedinger residuals are below 1e-6") {
    for (int l : {2, 3}) {
      const Grid g(1e-6, 30.0 * l + 30.0, 40000);
      for (double nu1 : kNus)
        for (double nu2 : kNus) {
          CAPTURE(l);
          CAPTURE(nu1);
          CAPTURE(nu2);
          const auto sp = seeds::make_seed_pair(FamilyParams::two_param(l, nu1, nu2), g);
          const auto [r1, r2] = seeds::seed_residuals(sp);
          CHECK(r1.pointwise < 1e-6);
          CHECK(r2.pointwise < 1e-6);
        }
    }
  }

  TEST_CASE("g2 dual path: quadrature and Numerov continuation agree on the overlap window") {
    for (int l : {2, 3, 4, 6}) {
      for (double nu2 : {-10.0, -0.1, 0.5, 2.0}) {
        CAPTURE(l);
        CAPTURE(nu2);
        const auto params = nu2 > 1.0 ? FamilyParams::intermediate(l, nu2) : FamilyParams::two_param(l, -1.0, nu2);
        const seeds::SeedModel model(params, 40.0 * l);
        REQUIRE(model.has_continuation());
        CHECK(model.overlap_mismatch() < 1e-8);
      }
    }
  }

  TEST_CASE("finite-part form agrees with the direct quadrature below the pole") {
    const auto params = FamilyParams::two_param(3, -1.0, -10.0);
    const seeds::SeedModel model(params, 100.0);
    const double p = params.pole();
    for (double t : {0.5, 0.8, 0.9, 0.95}) {
      const auto [q, qd] = model.g2_quadrature(t * p);
      const auto [f, fd] = model.g2_finite_part(t * p);
      CHECK(std::fabs(q - f) < 1e-11 * std::max(1.0, std::fabs(q)));
      CHECK(std::fabs(qd - fd) < 1e-10 * std::max(1.0, std::fabs(qd)));
    }
  }

  TEST_CASE("G / (1 - r/p) tends to 1 - nu2") {
    for (double nu2 : {-10.0, -1.0, 0.5}) {
      const auto params = FamilyParams::two_param(3, 0.0, nu2);
      const double p = params.pole();
      const double r = 40.0 * p;
      const seeds::SeedModel model(params, r);
      const auto s = model.at(r);
      CHECK(std::fabs(s.G / (1.0 - r / p) - (1.0 - nu2)) < 1e-10);
    }
  }

  TEST_CASE("gamma constant equals d") {
    const Grid g(1e-6, 120.0, 40000);
    for (int l : {2, 3}) {
      const auto sp = seeds::make_seed_pair(FamilyParams::two_param(l, -1.0, -10.0), g);
      const auto m = seeds::measured_gamma_constant(sp);
      CHECK(m.samples > 100);
      CHECK(std::fabs(m.mean - seeds::c_d_constants(l).d) < 1e-7);
      CHECK(m.spread < 1e-6);
    }
  }

  TEST_CASE("alpha' closed form against Richardson differences") {
    const auto params = FamilyParams::two_param(3, -1.0, -0.1);
    for (double r : {0.3, 1.0, 4.0, 9.0, 20.0}) {
      CAPTURE(r);
      const double a = seeds::alpha_prime(params, r), s = seeds::alpha_prime_stencil(params, r);
      CHECK(std::fabs(a - s) < 1e-7 * std::max(1.0, std::fabs(a)));
    }
  }

  TEST_CASE("beta asymptote") {
    // alpha -> (1-2l)/(l(l-1)) and beta = alpha + (2l-1)/r
    const int l = 3;
    const auto params = FamilyParams::two_param(l, -1.0, -1.0);
    const double limit = (1.0 - 2.0 * l) / (l * (l - 1.0));
    const double r = 30.0 * l;
    CHECK(std::fabs(seeds::beta_eval(params, r) - (2.0 * l - 1.0) / r - limit) < 1e-3);
    CHECK(std::fabs(seeds::alpha_eval(params, r) - limit) < 1e-3);
  }

  TEST_CASE("gamma variants differ by 3/(2r)") {
    const auto params = FamilyParams::two_param(2, -1.0, -1.0);
    const double r = 2.5;
    const double g4 = seeds::gamma_coeff(params, r, seeds::GammaVariant::four_over_r);
    const double g1 = seeds::gamma_coeff(params, r, seeds::GammaVariant::one_over_r);
    CHECK(g4 - g1 == doctest::Approx(1.5 / r));
  }

  TEST_CASE("intermediate seeds have a Wronskian zero") {
    const Grid g(1e-6, 120.0, 20000);
    const auto sp = seeds::make_seed_pair(FamilyParams::intermediate(3, 2.0), g);
    REQUIRE_FALSE(sp.wronskian_zeros().empty());
    const auto e = testutil::error_of([&] { seeds::require_regular_wronskian(sp); });
    REQUIRE(e.has_value());
    CHECK(e->code() == ErrorCode::singular_family);
    CHECK(std::isfinite(e->radius()));
    CHECK(e->radius() == doctest::Approx(sp.wronskian_zeros().front()));
  }

  TEST_CASE("two-parameter Wronskian stays regular on the sweep") {
    const Grid g(1e-6, 150.0, 20000);
    for (double nu1 : kNus)
      for (double nu2 : kNus) {
        const auto sp = seeds::make_seed_pair(FamilyParams::two_param(3, nu1, nu2), g);
        CHECK(sp.wronskian_zeros().empty());
        CHECK(sp.g1_zeros().empty());
      }
  }

  TEST_CASE("pointwise evaluators match the tabulated pair") {
    const auto params = FamilyParams::two_param(3, -10.0, -1.0);
    const Grid g(1e-4, 40.0, 4000);
    const auto sp = seeds::make_seed_pair(params, g);
    for (std::size_t i : {100u, 1500u, 3000u}) {
      CHECK(rel(seeds::g1_eval(params, g[i]), sp.g1.values[i]) < 1e-10);
      CHECK(std::fabs(seeds::wronskian_g(params, g[i]) - sp.wronskian_g.values[i]) <
            1e-9 * std::max(1.0, std::fabs(sp.wronskian_g.values[i])));
    }
  }
}
