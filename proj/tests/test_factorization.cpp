#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "isohydra/factorization.hpp"
#include "isohydra/hydrogen.hpp"
#include "isohydra/numerics/bump.hpp"
#include "isohydra/numerics/special_functions.hpp"
#include "isohydra/spectralcheck.hpp"
#include "test_util.hpp"

using namespace isohydra;
using seeds::FamilyParams;

namespace {

Grid operator_grid(int l) { return Grid(1e-6, 30.0 * l + 30.0, 40000); }

}  // namespace

TEST_SUITE("factorization") {
  TEST_CASE("first-order operators on exponentials") {
    const Grid g(1e-3, 20.0, 4000);
    FunctionTable w(g), psi(g);
    w.d1 = std::vector<double>(g.size(), 0.0);
    psi.d1 = std::vector<double>(g.size());
    psi.d2 = std::vector<double>(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      w.values[i] = 0.7;
      psi.values[i] = std::exp(-0.7 * g[i]);
      (*psi.d1)[i] = -0.7 * psi.values[i];
      (*psi.d2)[i] = 0.49 * psi.values[i];
    }
    const factorization::FirstOrderOp b{w};
    const auto zero = factorization::apply_b(b, psi);
    const auto twice = factorization::apply_b_adjoint(b, psi);
    for (std::size_t i = 0; i < g.size(); i += 100) {
      CHECK(std::fabs(zero.values[i]) < 1e-15);
      CHECK(twice.values[i] == doctest::Approx(1.4 * psi.values[i]));
    }
  }

  TEST_CASE("kernel_from_f integrates f into a normalized exponential") {
    // f = 2/r - 1 gives r^2 e^{-r}, norm^2 = 4!/2^5
    const Grid g(1e-6, 80.0, 20000);
    FunctionTable f(g);
    f.d1 = std::vector<double>(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      f.values[i] = 2.0 / g[i] - 1.0;
      (*f.d1)[i] = -2.0 / (g[i] * g[i]);
    }
    const auto k = factorization::kernel_from_f(f, 2.0);
    const double c = 1.0 / std::sqrt(factorial(4) / 32.0);
    for (std::size_t i = 0; i < g.size(); i += 500) {
      const double exact = c * g[i] * g[i] * std::exp(-g[i]);
      CHECK(std::fabs(k.values[i] - exact) < 1e-9);
    }
  }

  TEST_CASE("w1 and f add up to beta") {
    const Grid g = operator_grid(3);
    const auto sp = seeds::make_seed_pair(FamilyParams::two_param(3, -1.0, -1.0), g);
    const auto fac = factorization::factorize(sp, 1.0, 0.0);
    const auto co = seeds::coefficients(sp);
    for (std::size_t i = 100; i < g.size(); i += 997)
      CHECK(fac.b1.w.values[i] + fac.b2.w.values[i] == doctest::Approx(co.beta.values[i]).epsilon(1e-10));
  }

  TEST_CASE("a combination with a sign change is rejected") {
    const Grid g = operator_grid(3);
    const auto sp = seeds::make_seed_pair(FamilyParams::two_param(3, -1.0, -10.0), g);
    REQUIRE_FALSE(sp.g2_zeros().empty());
    const auto e = testutil::error_of([&] { factorization::f_general(sp, 0.0, 1.0); });
    REQUIRE(e.has_value());
    CHECK(e->code() == ErrorCode::combination_zero);
    CHECK(std::isfinite(e->radius()));
    CHECK_NOTHROW(factorization::f_general(sp, 1.0, 0.0));
  }

  TEST_CASE("certificate: Riccati, delta2 and the four Hamiltonian identities") {
    for (int l : {2, 3}) {
      for (double nu : {-10.0, -1.0, -0.1}) {
        CAPTURE(l);
        CAPTURE(nu);
        const auto sp = seeds::make_seed_pair(FamilyParams::two_param(l, nu, nu), operator_grid(l));
        const auto cert = factorization::evaluate_certificate(sp);
        CHECK(cert.delta1 == doctest::Approx(-1.0 / ((l - 1.0) * (l - 1.0))));
        CHECK(cert.riccati_residual < 1e-6);
        CHECK(std::fabs(cert.delta2 + 1.0 / (l * l)) < 1e-8);
        CHECK(cert.delta2 > cert.delta1);
        for (double h : cert.hamiltonian_residuals) CHECK(h < 1e-6);
        CHECK(cert.passed());
      }
    }
  }

  TEST_CASE("riccati_certificate throws when a residual exceeds tolerance") {
    ToleranceConfig strict;
    strict.residual_tol = 1e-15;
    testutil::require_error(ErrorCode::certificate_failure, [&] {
      factorization::riccati_certificate(FamilyParams::two_param(3, -1.0, -1.0), operator_grid(3), strict);
    });
  }

  TEST_CASE("b2 b1 does not depend on the seed combination") {
    const Grid g = operator_grid(3);
    const auto sp = seeds::make_seed_pair(FamilyParams::two_param(3, -0.1, -0.1), g);
    const auto chi = make_bump(g, 6.0).f;
    // at this nu only combinations with c1 c2 < 0 or c2 = 0 stay zero-free
    CHECK(factorization::singular_radii(sp, 1.0, 1.0).size() == 1);
    CHECK(factorization::singular_radii(sp, 0.0, 1.0).size() == 1);
    CHECK(factorization::product_invariance(sp, chi, {1.0, 0.0}, {1.0, -1.0}) < 1e-7);
    CHECK(factorization::product_invariance(sp, chi, {1.0, 0.0}, {3.0, -1.0}) < 1e-7);
  }

  TEST_CASE("b2 b1 equals A on test functions") {
    const Grid g = operator_grid(2);
    const auto sp = seeds::make_seed_pair(FamilyParams::two_param(2, -1.0, -0.1), g);
    const auto fac = factorization::factorize(sp, 1.0, 0.0);
    const auto op = families::make_operator_A(sp);
    const auto chi = make_bump(g, 2.0).f;
    const auto a = factorization::apply_product(fac, chi);
    const auto b = families::apply_A(op, chi);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      num = std::max(num, std::fabs(a.values[i] - b.values[i]));
      den = std::max(den, std::fabs(b.values[i]));
    }
    CHECK(num / den < 1e-8);
  }

  TEST_CASE("chain states against the second-order construction") {
    for (double nu : {-10.0, -1.0}) {
      const auto sp = seeds::make_seed_pair(FamilyParams::two_param(3, nu, nu), operator_grid(3));
      const auto eq = factorization::chain_state_equivalence(sp, {1.0, 0.0}, 6);
      CHECK(eq.labels.size() == eq.residuals.size());
      CHECK(eq.labels.size() >= 3);
      CHECK(eq.worst() < 1e-6);
    }
  }

  TEST_CASE("V* dual formulas and its domain") {
    const Grid g = operator_grid(3);
    const auto sp = seeds::make_seed_pair(FamilyParams::intermediate(3, 2.0), g);
    const auto vs = factorization::v_star(sp);
    CHECK(vs.kind == families::DeformedKind::intermediate);
    CHECK(vs.base_l == 2);
    const auto susy = factorization::v_star_susy(sp);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = g[i];
      const double scale = 6.0 / (r * r) + 2.0 / r + std::fabs(vs.table.values[i] - hydrogen::potential_v(2, r));
      worst = std::max(worst, std::fabs(vs.table.values[i] - susy.values[i]) / scale);
    }
    CHECK(worst < 1e-8);
    testutil::require_error(ErrorCode::domain, [&] {
      factorization::v_star(seeds::make_seed_pair(FamilyParams::two_param(3, -1.0, -1.0), g));
    });
  }

  TEST_CASE("psi* states are orthonormal eigenstates of V*") {
    const Grid g(1e-6, 300.0, 40000);
    const auto sp = seeds::make_seed_pair(FamilyParams::intermediate(3, 2.0), g);
    const auto vs = factorization::v_star(sp).table;
    const auto st = factorization::psi_star_states(sp, 6);
    REQUIRE(st.size() == 4);
    CHECK(st[0].energy == doctest::Approx(-0.25));
    CHECK(st[1].energy == doctest::Approx(-1.0 / 16.0));
    std::vector<FunctionTable> set;
    for (const auto& s : st) {
      CHECK(spectralcheck::eigen_residual(vs, s.state, s.energy, 1e-6) < 1e-6);
      set.push_back(s.state);
    }
    CHECK(spectralcheck::max_identity_deviation(spectralcheck::gram_matrix(set)) < 1e-6);
  }
}
