#include "isohydra/numerics/bump.hpp"

#include <array>
#include <cmath>

#include "isohydra/error.hpp"

namespace isohydra {

namespace {

constexpr int kPower = 8;
constexpr int kDegree = 2 * kPower;

// Coefficients of (1 - t^2)^kPower in ascending powers of t.
std::array<double, kDegree + 1> bump_coefficients() {
  std::array<double, kDegree + 1> c{};
  double binom = 1.0;
  for (int k = 0; k <= kPower; ++k) {
    c[2 * k] = (k % 2 ? -1.0 : 1.0) * binom;
    binom = binom * (kPower - k) / (k + 1);
  }
  return c;
}

}  // namespace

TestFunction make_bump(const Grid& grid, double a, double width) {
  if (!(width > 0.0)) throw Error(ErrorCode::domain, "bump width must be positive");
  const std::size_t n = grid.size();
  TestFunction tf{FunctionTable(grid), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  tf.f.d1 = std::vector<double>(n, 0.0);
  tf.f.d2 = std::vector<double>(n, 0.0);
  auto c = bump_coefficients();
  const double half = 0.5 * width, centre = a + half, scale = 1.0 / half;
  std::array<std::vector<double>*, 5> out{&tf.f.values, &*tf.f.d1, &*tf.f.d2, &tf.d3, &tf.d4};
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (grid[i] - centre) * scale;
    if (std::fabs(t) >= 1.0) continue;
    auto poly = c;
    double factor = 1.0;
    for (int m = 0; m <= 4; ++m) {
      double v = 0.0;
      for (int k = kDegree - m; k >= 0; --k) v = v * t + poly[k];
      (*out[m])[i] = v * factor;
      for (int k = 0; k < kDegree - m; ++k) poly[k] = poly[k + 1] * (k + 1);
      poly[kDegree - m] = 0.0;
      factor *= scale;
    }
  }
  return tf;
}

}  // namespace isohydra
