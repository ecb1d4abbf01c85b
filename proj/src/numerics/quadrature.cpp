#include "isohydra/numerics/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "isohydra/error.hpp"

namespace isohydra {

namespace {

constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  int depth;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment kronrod(const std::function<double(double)>& f, double a, double b, int depth) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    kron += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  kron *= h;
  gauss *= h;
  double err = std::fabs(kron - gauss);
  // QUADPACK-style rescaling of the raw Gauss/Kronrod difference.
  if (err > 0.0) err = std::fabs(err) * std::min(1.0, std::pow(200.0 * err / (std::fabs(kron) + 1e-300), 1.5));
  err = std::max(err, 50.0 * 2.22e-16 * std::fabs(kron));
  if (!std::isfinite(kron)) {
    std::ostringstream os;
    os << "non-finite integrand on [" << a << ", " << b << "]";
    throw Error(ErrorCode::non_convergence, os.str(), c);
  }
  return {a, b, kron, err, depth};
}

}  // namespace

QuadResult adaptive_quad(const std::function<double(double)>& f, double a, double b, double tol,
                         int max_depth) {
  if (!(a < b)) {
    if (a == b) return {};
    throw Error(ErrorCode::domain, "adaptive_quad requires a < b");
  }
  if (!(tol > 0)) throw Error(ErrorCode::domain, "adaptive_quad requires a positive tolerance");

  std::priority_queue<Segment> heap;
  Segment first = kronrod(f, a, b, 0);
  double total = first.value;
  double total_err = first.error;
  heap.push(first);
  // Tolerances below the rounding floor are capped at ~100 ulp of the result.
  while (total_err > std::max(tol, 1e2 * 2.22e-16 * std::fabs(total))) {
    Segment worst = heap.top();
    if (worst.depth >= max_depth) {
      std::ostringstream os;
      os << "adaptive_quad: subdivision depth " << max_depth << " exceeded; worst subinterval ["
         << worst.a << ", " << worst.b << "] error " << worst.error;
      throw Error(ErrorCode::non_convergence, os.str(), 0.5 * (worst.a + worst.b));
    }
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Segment left = kronrod(f, worst.a, mid, worst.depth + 1);
    Segment right = kronrod(f, mid, worst.b, worst.depth + 1);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    // Re-sum occasionally to limit drift of the running totals.
    if (heap.size() % 64 == 0) {
      auto copy = heap;
      total = 0;
      total_err = 0;
      while (!copy.empty()) {
        total += copy.top().value;
        total_err += copy.top().error;
        copy.pop();
      }
    }
  }
  return {total, total_err, heap.size()};
}

QuadResult adaptive_quad_to_infinity(const std::function<double(double)>& f, double a, double tol,
                                     int max_depth) {
  auto mapped = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double s = 1.0 - t;
    const double x = a + t / s;
    const double v = f(x) / (s * s);
    return std::isfinite(v) ? v : 0.0;
  };
  return adaptive_quad(mapped, 0.0, 1.0, tol, max_depth);
}

}  // namespace isohydra
