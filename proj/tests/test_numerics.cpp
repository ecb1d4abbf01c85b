#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "isohydra/numerics/bump.hpp"
#include "isohydra/numerics/finite_difference.hpp"
#include "isohydra/numerics/grid.hpp"
#include "isohydra/numerics/numerov.hpp"
#include "isohydra/numerics/quadrature.hpp"
#include "isohydra/numerics/special_functions.hpp"
#include "test_util.hpp"

using namespace isohydra;
using testutil::rel;

namespace {

// P(a, x) oracle in long double: e^{-x} sum_{k >= a} x^k / k! below the peak,
// 1 - e^{-x} sum_{k < a} x^k / k! above it.
double lower_gamma_oracle(int a, double xd) {
  const long double x = xd;
  long double term = std::exp(-x), sum = 0.0L;
  if (xd < a) {
    for (int k = 1; k <= a; ++k) term *= x / k;
    for (int k = a; k < a + 400; ++k) {
      sum += term;
      term *= x / (k + 1);
    }
    return static_cast<double>(sum);
  }
  for (int k = 0; k < a; ++k) {
    sum += term;
    term *= x / (k + 1);
  }
  return static_cast<double>(1.0L - sum);
}

}  // namespace

TEST_SUITE("numerics") {
  TEST_CASE("uniform grid nodes and spacing") {
    const Grid g = Grid::uniform(0.5, 10.5, 101);
    CHECK(g.size() == 101);
    CHECK(g.is_uniform());
    CHECK(g.spacing() == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(g[0] == 0.5);
    CHECK(g[100] == 10.5);
    CHECK(g.r_min() == 0.5);
    CHECK(g.r_max() == 10.5);
  }

  TEST_CASE("log_then_uniform grid is increasing with continuous spacing at r = 1") {
    const Grid g(1e-6, 100.0, 5000);
    CHECK(g.scheme() == GridScheme::log_then_uniform);
    CHECK_FALSE(g.is_uniform());
    CHECK(g[0] == doctest::Approx(1e-6).epsilon(1e-12));
    CHECK(g[g.size() - 1] == doctest::Approx(100.0).epsilon(1e-14));
    std::size_t split = 0;
    for (std::size_t i = 1; i < g.size(); ++i) {
      REQUIRE(g[i] > g[i - 1]);
      if (g[i - 1] < 1.0 && g[i] >= 1.0) split = i;
    }
    REQUIRE(split > 1);
    // dr = r d(ln r) at r = 1: the log step equals the uniform step
    const double dx = std::log(g[split - 1] / g[split - 2]);
    const double h_right = g[split + 1] - g[split];
    CHECK(rel(dx, h_right) < 1e-3);
  }

  TEST_CASE("grid construction rejects bad ranges") {
    testutil::require_error(ErrorCode::domain, [] { Grid(2.0, 1.0, 100); });
    testutil::require_error(ErrorCode::domain, [] { Grid(0.1, 1.0, 8); });
  }

  TEST_CASE("copies share node storage") {
    const Grid a(1e-3, 10.0, 200);
    const Grid b = a;
    CHECK(a.same_as(b));
    CHECK_FALSE(a.same_as(Grid(1e-3, 10.0, 200)));
  }

  TEST_CASE("quadrature weights integrate r^2 e^{-r} at fourth order on both schemes") {
    // exact value over [0, 60] is 2 - e^{-60}(60^2 + 2 60 + 2)
    const auto error = [](const Grid& g) {
      double s = 0.0;
      const auto w = g.weights();
      for (std::size_t i = 0; i < g.size(); ++i) s += w[i] * g[i] * g[i] * std::exp(-g[i]);
      return std::fabs(s - 2.0);
    };
    for (auto scheme : {GridScheme::log_then_uniform, GridScheme::uniform}) {
      const double coarse = error(Grid(1e-9, 60.0, 4001, scheme));
      const double fine = error(Grid(1e-9, 60.0, 8001, scheme));
      CHECK(coarse < 1e-8);
      CHECK(coarse / fine > 12.0);
    }
  }

  TEST_CASE("stencil derivatives of sin on a log grid") {
    const Grid g(1e-4, 20.0, 8000);
    FunctionTable f(g);
    for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = std::sin(g[i]);
    const auto d = differentiate(f, 2);
    REQUIRE(d.has_derivatives());
    double e1 = 0.0, e2 = 0.0, e2_end = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      e1 = std::max(e1, std::fabs((*d.d1)[i] - std::cos(g[i])));
      const double e = std::fabs((*d.d2)[i] + std::sin(g[i]));
      if (i >= 2 && i + 2 < g.size()) e2 = std::max(e2, e);
      else e2_end = std::max(e2_end, e);
    }
    CHECK(e1 < 1e-8);
    CHECK(e2 < 1e-6);
    // one-sided stencils lose an order
    CHECK(e2_end < 1e-4);
  }

  TEST_CASE("five-point stencils are exact for quartics on arbitrary nodes") {
    const std::vector<double> x{0.1, 0.25, 0.3, 0.55, 0.9, 1.4, 1.45, 2.0};
    std::vector<double> y;
    for (double t : x) y.push_back(3.0 * t * t * t * t - t * t + 2.0);
    const auto d1 = derivative_on_nodes(x, y, 1);
    const auto d2 = derivative_on_nodes(x, y, 2);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double t = x[i];
      CHECK(d1[i] == doctest::Approx(12.0 * t * t * t - 2.0 * t).epsilon(1e-9));
      CHECK(d2[i] == doctest::Approx(36.0 * t * t - 2.0).epsilon(1e-8));
    }
    testutil::require_error(ErrorCode::grid_too_coarse,
                            [] { derivative_on_nodes(std::vector<double>{0, 1, 2, 3}, std::vector<double>{0, 1, 4, 9}, 1); });
  }

  TEST_CASE("adaptive Gauss-Kronrod quadrature") {
    const auto r = adaptive_quad([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-13);
    CHECK(std::fabs(r.value - 2.0) < 1e-13);
    const auto g = adaptive_quad_to_infinity([](double x) { return std::exp(-x * x); }, 0.0, 1e-13);
    CHECK(std::fabs(g.value - std::sqrt(std::numbers::pi) / 2.0) < 1e-12);
    // integrable endpoint singularity
    const auto s = adaptive_quad([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10);
    CHECK(std::fabs(s.value - 2.0) < 1e-8);
    testutil::require_error(ErrorCode::domain, [] { adaptive_quad([](double) { return 1.0; }, 1.0, 0.0, 1e-8); });
  }

  TEST_CASE("regularized incomplete gamma against a long double series") {
    for (int a : {1, 3, 5, 7, 11, 21}) {
      for (double x : {1e-3, 0.1, 1.0, 2.5, 5.0, 10.0, 20.0, 40.0}) {
        const double p = regularized_lower_gamma(a, x), q = regularized_upper_gamma(a, x);
        const double po = lower_gamma_oracle(a, x);
        CAPTURE(a);
        CAPTURE(x);
        if (po > 1e-300) CHECK(rel(p, po) < 1e-12);
        CHECK(std::fabs(p + q - 1.0) < 1e-15);
        CHECK(p >= 0.0);
        CHECK(q >= 0.0);
      }
    }
    testutil::require_error(ErrorCode::domain, [] { regularized_lower_gamma(0, 1.0); });
    testutil::require_error(ErrorCode::domain, [] { regularized_upper_gamma(2, -1.0); });
  }

  TEST_CASE("incomplete gamma is monotone in x") {
    double prev = 0.0;
    for (double x = 0.0; x < 60.0; x += 0.01) {
      const double p = regularized_lower_gamma(7, x);
      REQUIRE(p >= prev);
      prev = p;
    }
  }

  TEST_CASE("log Q stays finite where Q underflows") {
    // Q(a, x) = e^{-x} sum_{k < a} x^k / k!, dominated by the last term.
    const int a = 5;
    const double x = 900.0;
    long double s = 0.0L, t = 1.0L;
    for (int k = 0; k < a; ++k) {
      s += t;
      t *= static_cast<long double>(x) / (k + 1);
    }
    const double oracle = -x + static_cast<double>(std::log(s));
    CHECK(regularized_upper_gamma(a, x) == 0.0);
    CHECK(std::fabs(log_regularized_upper_gamma(a, x) - oracle) < 1e-12 * std::fabs(oracle));
    CHECK(std::fabs(log_regularized_upper_gamma(a, 3.0) - std::log(regularized_upper_gamma(a, 3.0))) < 1e-14);
  }

  TEST_CASE("factorials") {
    CHECK(factorial(0) == 1.0);
    CHECK(factorial(10) == 3628800.0);
    CHECK(log_factorial(20) == doctest::Approx(std::lgamma(21.0)).epsilon(1e-14));
    testutil::require_error(ErrorCode::domain, [] { factorial(-1); });
  }

  TEST_CASE("bumps: compact support and analytic derivatives") {
    const Grid g = Grid::uniform(0.0025, 10.0, 4000);
    const auto b = make_bump(g, 3.0, 4.0);
    const auto st = derivative(g, b.f.values, 2);
    const auto d3 = derivative(g, *b.f.d2, 1);
    const auto d4 = derivative(g, *b.f.d2, 2);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] <= 3.0 || g[i] >= 7.0) {
        REQUIRE(b.f.values[i] == 0.0);
        continue;
      }
      REQUIRE(std::fabs(st[i] - (*b.f.d2)[i]) < 1e-7);
      REQUIRE(std::fabs(d3[i] - b.d3[i]) < 1e-6);
      REQUIRE(std::fabs(d4[i] - b.d4[i]) < 1e-5);
    }
    CHECK(b.f.values[1999] == doctest::Approx(1.0));  // centre r = 5
    testutil::require_error(ErrorCode::domain, [&] { make_bump(g, 1.0, 0.0); });
  }

  TEST_CASE("Numerov reproduces the harmonic ground state") {
    // u'' = (r^2 - 1) u with u = e^{-r^2 / 2}
    const Grid g = Grid::uniform(1e-3, 4.0, 4001);
    FunctionTable v(g);
    for (std::size_t i = 0; i < g.size(); ++i) v.values[i] = g[i] * g[i];
    const double u0 = std::exp(-0.5e-6);
    const auto sol = ode_integrate_schrodinger(v, 1.0, u0, -1e-3 * u0, Direction::forward);
    double err = 0.0;
    for (std::size_t i = 0; i < g.size(); i += 10) {
      const double exact = std::exp(-0.5 * g[i] * g[i]);
      if (g[i] <= 3.0) err = std::max(err, std::fabs(sol.true_value(i) - exact) / exact);
    }
    CHECK(err < 1e-7);
  }

  TEST_CASE("Numerov backward with renormalization tracks a growing solution") {
    // u'' = u integrated backward from e^{-x}: grows like e^{-x} towards 0
    const Grid g = Grid::uniform(1e-2, 400.01, 40001);
    FunctionTable v(g);
    for (double& x : v.values) x = 1.0;
    const double x_end = g.r_max();
    const auto sol =
        ode_integrate_schrodinger_two_point(v, 0.0, 1.0, std::exp(g.spacing()), Direction::backward, 1e100);
    // u(x) = e^{x_end - x}
    const double log_u0 = std::log(std::fabs(sol.u.values[0])) + sol.log_scale[0];
    CHECK(std::fabs(log_u0 - (x_end - g[0])) < 1e-6 * x_end);
  }
}
