#include <cmath>
#include <vector>

#include "doctest.h"
#include "isohydra/hydrogen.hpp"
#include "isohydra/numerics/finite_difference.hpp"
#include "isohydra/numerics/special_functions.hpp"
#include "isohydra/spectralcheck.hpp"
#include "test_util.hpp"

using namespace isohydra;
using testutil::rel;

namespace {

// Explicit sum L_m^a(x) = sum_k (-1)^k C(m + a, m - k) x^k / k! in long
// double, with sum_k |term_k| as the cancellation scale.
struct LaguerreSum {
  double value;
  double scale;
};

LaguerreSum laguerre_sum(int m, int a, double x) {
  long double s = 0.0L, scale = 0.0L;
  for (int k = 0; k <= m; ++k) {
    const long double c =
        std::exp(std::lgamma((long double)(m + a + 1)) - std::lgamma((long double)(m - k + 1)) -
                 std::lgamma((long double)(a + k + 1)) - std::lgamma((long double)(k + 1)));
    const long double term = c * std::pow((long double)x, k);
    s += (k % 2 ? -term : term);
    scale += term;
  }
  return {double(s), double(scale)};
}

// Textbook constant of psi = c r^{l+1} e^{-r/n} L(2r/n):
// c = (2/n)^{l+1} sqrt((n-l-1)! / (2n (n+l)!)) (2/n)^{1/2}.
double normalization_closed_form(int n, int l) {
  return std::pow(2.0 / n, l + 1.5) * std::sqrt(std::tgamma(n - l + 0.0) / (2.0 * n * std::tgamma(n + l + 1.0)));
}

}  // namespace

TEST_SUITE("hydrogen") {
  TEST_CASE("potential and energies") {
    CHECK(hydrogen::potential_v(2, 0.5) == doctest::Approx(6.0 / 0.25 - 4.0));
    CHECK(hydrogen::potential_v_d1(1, 2.0) == doctest::Approx(-2.0 * 2.0 / 8.0 + 2.0 / 4.0));
    CHECK(hydrogen::energy(1, 1) == doctest::Approx(-0.25));
    CHECK(hydrogen::energy(3, 2) == doctest::Approx(-1.0 / 25.0));
    const auto s = hydrogen::spectrum(1, 3);
    REQUIRE(s.size() == 3);
    CHECK(s[0] == doctest::Approx(-1.0 / 4.0));
    CHECK(s[2] == doctest::Approx(-1.0 / 16.0));
    CHECK(s.source == hydrogen::SpectrumSource::analytic);
  }

  TEST_CASE("quantum numbers and spectrum invariants") {
    const auto q = hydrogen::QuantumNumbers::from_nl(4, 1);
    CHECK(q.k == 3);
    CHECK(q.n() == 4);
    testutil::require_error(ErrorCode::domain, [] { hydrogen::QuantumNumbers::from_nl(2, 2); });
    hydrogen::Spectrum bad{{{"a", -0.1}, {"b", -0.2}}};
    testutil::require_error(ErrorCode::domain, [&] { bad.validate(); });
    hydrogen::Spectrum positive{{{"a", 0.1}}};
    testutil::require_error(ErrorCode::domain, [&] { positive.validate(); });
  }

  TEST_CASE("Laguerre recurrence against the explicit sum") {
    for (int m : {0, 1, 2, 5, 9})
      for (int a : {1, 3, 5, 7})
        for (double x : {0.0, 0.3, 1.7, 6.0, 15.0}) {
          CAPTURE(m);
          CAPTURE(a);
          CAPTURE(x);
          const auto o = laguerre_sum(m, a, x);
          CHECK(std::fabs(hydrogen::laguerre(m, a, x) - o.value) < 1e-13 * o.scale);
        }
  }

  TEST_CASE("normalization constant against the closed form") {
    for (int l : {0, 1, 2, 3})
      for (int n = l + 1; n <= l + 5; ++n) {
        CAPTURE(n);
        CAPTURE(l);
        CHECK(rel(hydrogen::radial_normalization(n, l), normalization_closed_form(n, l)) < 1e-12);
      }
  }

  TEST_CASE("eigenfunctions are orthonormal and positive near the origin") {
    const Grid g(1e-6, 400.0, 40000);
    for (int l : {0, 1, 3}) {
      std::vector<FunctionTable> set;
      for (int n = l + 1; n <= l + 5; ++n) {
        set.push_back(hydrogen::radial_eigenfunction(n, l, g));
        CHECK(set.back().values[5] > 0.0);
      }
      CHECK(spectralcheck::max_identity_deviation(spectralcheck::gram_matrix(set)) < 1e-9);
    }
  }

  TEST_CASE("tabulated derivatives agree with stencils and the radial equation") {
    const Grid g(1e-3, 80.0, 20000);
    const auto psi = hydrogen::radial_eigenfunction(4, 1, g);
    REQUIRE(psi.has_derivatives());
    const auto d1 = derivative(g, psi.values, 1);
    double e = 0.0, m = 0.0;
    for (std::size_t i = 2; i + 2 < g.size(); ++i) {
      e = std::max(e, std::fabs(d1[i] - (*psi.d1)[i]));
      m = std::max(m, std::fabs((*psi.d1)[i]));
    }
    CHECK(e / m < 1e-8);
    const auto v = hydrogen::potential_table(1, g);
    CHECK(spectralcheck::eigen_residual(v, psi, -1.0 / 16.0, 1e-6) < 1e-7);
    CHECK(hydrogen::radial_value(4, 1, g[100]) == doctest::Approx(psi.values[100]).epsilon(1e-13));
  }
}
