#include "isohydra/numerics/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "isohydra/error.hpp"

namespace isohydra {

namespace {

// Neumaier's variant of Kahan summation.
struct CompensatedSum {
  double sum = 0.0;
  double c = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v))
      c += (sum - t) + v;
    else
      c += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

void check_args(int a, double x) {
  if (a < 1) throw Error(ErrorCode::domain, "incomplete gamma order must be >= 1");
  if (!(x >= 0.0)) throw Error(ErrorCode::domain, "incomplete gamma argument must be >= 0");
}

// e^{-x} sum_{m=0}^{a-1} x^m / m!
double finite_sum(int a, double x) {
  if (x == 0.0) return 1.0;
  const double lx = std::log(x);
  CompensatedSum s;
  for (int m = 0; m < a; ++m) s.add(std::exp(-x + m * lx - std::lgamma(m + 1.0)));
  return s.value();
}

// e^{-x} sum_{m>=a} x^m / m!, used when x < a so that P keeps its relative
// precision; terms decrease monotonically for m > x.
double tail_series(int a, double x) {
  if (x == 0.0) return 0.0;
  const double lx = std::log(x);
  double term = std::exp(-x + a * lx - std::lgamma(a + 1.0));
  CompensatedSum s;
  for (int m = a; m < a + 2000; ++m) {
    s.add(term);
    if (term < std::numeric_limits<double>::epsilon() * 1e-3 * s.value()) break;
    term *= x / (m + 1.0);
  }
  return s.value();
}

}  // namespace

double regularized_lower_gamma(int a, double x) {
  check_args(a, x);
  if (std::isinf(x)) return 1.0;
  if (x < a) return std::min(1.0, tail_series(a, x));
  return std::clamp(1.0 - finite_sum(a, x), 0.0, 1.0);
}

double regularized_upper_gamma(int a, double x) {
  check_args(a, x);
  if (std::isinf(x)) return 0.0;
  if (x < a) return std::clamp(1.0 - tail_series(a, x), 0.0, 1.0);
  return std::min(1.0, finite_sum(a, x));
}

double log_regularized_upper_gamma(int a, double x) {
  check_args(a, x);
  if (std::isinf(x)) return -INFINITY;
  if (x < a) return std::log(regularized_upper_gamma(a, x));
  // log sum_{m<a} x^m/m! by factoring out the largest term (m = a-1 for x >= a).
  const double lx = std::log(x);
  const double top = (a - 1) * lx - std::lgamma(double(a));
  CompensatedSum s;
  for (int m = 0; m < a; ++m) s.add(std::exp(m * lx - std::lgamma(m + 1.0) - top));
  return -x + top + std::log(s.value());
}

double log_factorial(int n) {
  if (n < 0) throw Error(ErrorCode::domain, "factorial of a negative integer");
  return std::lgamma(n + 1.0);
}

double factorial(int n) {
  if (n < 0) throw Error(ErrorCode::domain, "factorial of a negative integer");
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace isohydra
