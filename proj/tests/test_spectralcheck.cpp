#include <cmath>
#include <vector>

#include "doctest.h"
#include "isohydra/hydrogen.hpp"
#include "isohydra/numerics/bump.hpp"
#include "isohydra/spectralcheck.hpp"
#include "test_util.hpp"

using namespace isohydra;
namespace sc = isohydra::spectralcheck;

TEST_SUITE("spectralcheck") {
  TEST_CASE("fd levels of V_1 within their certified tolerance") {
    const auto v = hydrogen::potential_table(1, Grid::uniform(1e-8, 160.0, 16001));
    const auto res = sc::eigensolve_fd({v, 4, sc::Method::fd_tridiagonal});
    REQUIRE(res.spectrum.size() == 4);
    CHECK(res.spectrum.source == hydrogen::SpectrumSource::numeric);
    for (int k = 0; k < 4; ++k) {
      const double exact = -1.0 / ((k + 2.0) * (k + 2.0));
      CAPTURE(k);
      CHECK(std::fabs(res.spectrum[k] - exact) <= res.tolerance[k]);
      CHECK(res.order_ratio[k] == doctest::Approx(4.0).epsilon(0.15));
    }
  }

  TEST_CASE("shooting levels for l = 0, 1, 2") {
    for (int l : {0, 1, 2}) {
      const auto v = hydrogen::potential_table(l, Grid::uniform(1e-8, 400.0, 40001));
      const auto res = sc::eigensolve_shooting({v, 4, sc::Method::numerov_shooting});
      for (int k = 0; k < 4; ++k) {
        const double exact = -1.0 / ((l + k + 1.0) * (l + k + 1.0));
        CAPTURE(l);
        CAPTURE(k);
        CHECK(std::fabs(res.spectrum[k] - exact) <= res.tolerance[k]);
        CHECK(std::fabs(res.spectrum[k] - exact) < 1e-7);
      }
    }
  }

  TEST_CASE("fd and shooting agree and the dispatcher follows the method") {
    const auto v = hydrogen::potential_table(2, Grid(1e-6, 300.0, 20000));
    const auto a = sc::eigensolve({v, 3, sc::Method::fd_tridiagonal});
    const auto b = sc::eigensolve({v, 3, sc::Method::numerov_shooting});
    CHECK(a.grid.is_uniform());
    for (int k = 0; k < 3; ++k) CHECK(std::fabs(a.spectrum[k] - b.spectrum[k]) < 1e-5);
  }

  TEST_CASE("shifted harmonic well with two walls") {
    // V = (r - 8)^2 on [0.01, 16]: levels 1, 3, 5, 7 up to wall effects ~e^{-64}
    const Grid g = Grid::uniform(0.01, 16.0, 8001);
    FunctionTable v(g);
    for (std::size_t i = 0; i < g.size(); ++i) v.values[i] = (g[i] - 8.0) * (g[i] - 8.0);
    for (auto m : {sc::Method::fd_tridiagonal, sc::Method::numerov_shooting}) {
      const auto res = sc::eigensolve({v, 4, m, false, false});
      for (int k = 0; k < 4; ++k) CHECK(std::fabs(res.spectrum[k] - (2.0 * k + 1.0)) < 1e-7);
    }
  }

  TEST_CASE("fd eigenvectors overlap the analytic states") {
    const auto v = hydrogen::potential_table(1, Grid::uniform(1e-8, 200.0, 20001));
    const auto res = sc::eigensolve_fd({v, 3, sc::Method::fd_tridiagonal, true});
    REQUIRE(res.vectors.size() == 3);
    for (int k = 0; k < 3; ++k) {
      const auto psi = hydrogen::radial_eigenfunction(k + 2, 1, res.grid);
      const auto gm = sc::gram_matrix({res.vectors[k], psi});
      CHECK(std::fabs(gm[0][1]) > 1.0 - 1e-5);
    }
  }

  TEST_CASE("turning points beyond half the box raise warnings") {
    const auto v = hydrogen::potential_table(1, Grid::uniform(1e-8, 40.0, 4001));
    const auto res = sc::eigensolve_fd({v, 3, sc::Method::fd_tridiagonal});
    CHECK_FALSE(res.warnings.empty());
  }

  TEST_CASE("resampling reproduces cubics") {
    const Grid g(1e-3, 10.0, 500);
    FunctionTable f(g);
    for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = g[i] * g[i] * g[i] - 2.0 * g[i];
    const auto u = sc::resample_uniform(f);
    REQUIRE(u.grid.is_uniform());
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double r = u.grid[i];
      REQUIRE(std::fabs(u.values[i] - (r * r * r - 2.0 * r)) < 1e-9 * (1.0 + r * r * r));
    }
  }

  TEST_CASE("intertwining residual: exact identities and a negative control") {
    const Grid g(1e-3, 30.0, 12000);
    const auto v = hydrogen::potential_table(1, g);
    std::vector<TestFunction> tests{make_bump(g, 2.0), make_bump(g, 6.0)};
    const sc::Operator identity = [](const FunctionTable& x) { return x; };
    CHECK(sc::intertwining_residual(v, v, identity, tests) < 1e-6);
    const auto w = hydrogen::potential_table(2, g);
    CHECK(sc::intertwining_residual(w, v, identity, tests) > 1e-2);
  }

  TEST_CASE("Gram matrix and proportionality") {
    const Grid g(1e-6, 200.0, 20000);
    std::vector<FunctionTable> set{hydrogen::radial_eigenfunction(2, 1, g), hydrogen::radial_eigenfunction(3, 1, g)};
    FunctionTable twice = set[0];
    for (double& x : twice.values) x *= 2.0;
    CHECK(sc::max_identity_deviation(sc::gram_matrix({twice, set[1]}, true)) < 1e-10);
    CHECK(sc::max_identity_deviation(sc::gram_matrix({twice, set[1]})) > 1.0);
    CHECK(sc::proportionality_residual(twice, set[0]) < 1e-14);
    CHECK(sc::proportionality_residual(set[1], set[0]) > 0.1);
  }

  TEST_CASE("density maxima of hydrogen states") {
    const Grid g(1e-6, 200.0, 20000);
    CHECK(sc::density_maxima(hydrogen::radial_eigenfunction(1, 0, g)).size() == 1);
    const auto m3 = sc::density_maxima(hydrogen::radial_eigenfunction(3, 0, g));
    REQUIRE(m3.size() == 3);
    CHECK(m3[0].r < m3[1].r);
    CHECK(m3[2].value > m3[0].value);
    // 1s peaks at r = 1
    CHECK(sc::density_maxima(hydrogen::radial_eigenfunction(1, 0, g))[0].r == doctest::Approx(1.0).epsilon(1e-3));
  }

  TEST_CASE("level comparison helpers") {
    const auto v = hydrogen::potential_table(1, Grid::uniform(1e-8, 160.0, 16001));
    const auto res = sc::eigensolve_fd({v, 3, sc::Method::fd_tridiagonal});
    const auto cmp = sc::compare_levels(res, {-0.25, -1.0 / 9.0, -1.0 / 16.0});
    REQUIRE(cmp.size() == 3);
    for (const auto& c : cmp) CHECK(c.pass);
    const auto bad = sc::compare_levels(res, {-0.26, -1.0 / 9.0, -1.0 / 16.0});
    CHECK_FALSE(bad[0].pass);
    CHECK(sc::levels_near(res, -1.0 / 9.0, 1e-3).size() == 1);
    CHECK(sc::levels_near(res, -0.2, 1e-3).empty());
  }

  TEST_CASE("eigen residual separates eigenstates from wrong energies") {
    const Grid g(1e-4, 200.0, 20000);
    const auto v = hydrogen::potential_table(1, g);
    const auto psi = hydrogen::radial_eigenfunction(3, 1, g);
    CHECK(sc::eigen_residual(v, psi, -1.0 / 9.0, 1e-6) < 1e-7);
    CHECK(sc::eigen_residual(v, psi, -1.0 / 8.0, 1e-6) > 1e-3);
  }
}
