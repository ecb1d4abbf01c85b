#pragma once

#include <algorithm>

namespace isohydra::detail {

// Fornberg's recursion for finite-difference weights of derivatives 0..2 at z
// on arbitrary nodes x[0..4].
inline void fornberg_weights(double z, const double* x, double out[3][5]) {
  constexpr int n = 5;
  constexpr int m = 2;
  double c[m + 1][n] = {};
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        }
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      }
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  for (int k = 0; k <= m; ++k)
    for (int j = 0; j < n; ++j) out[k][j] = c[k][j];
}

}  // namespace isohydra::detail
