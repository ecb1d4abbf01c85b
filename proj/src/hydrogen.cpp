#include "isohydra/hydrogen.hpp"

#include <cmath>
#include <mutex>
#include <map>
#include <sstream>

#include "isohydra/error.hpp"
#include "isohydra/numerics/quadrature.hpp"

namespace isohydra::hydrogen {

QuantumNumbers QuantumNumbers::from_nl(int n, int l) {
  QuantumNumbers q{l, n - l};
  q.validate();
  return q;
}

void QuantumNumbers::validate() const {
  if (l < 0) throw Error(ErrorCode::domain, "azimuthal number l must be >= 0");
  if (k < 1) throw Error(ErrorCode::domain, "radial label k must be >= 1");
}

std::vector<double> Spectrum::energies() const {
  std::vector<double> e;
  e.reserve(entries.size());
  for (const auto& x : entries) e.push_back(x.energy);
  return e;
}

void Spectrum::validate() const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!(entries[i].energy < 0.0)) throw Error(ErrorCode::domain, "spectrum entry is not a bound state");
    if (i > 0 && !(entries[i].energy > entries[i - 1].energy))
      throw Error(ErrorCode::domain, "spectrum energies must be strictly increasing");
  }
}

double potential_v(int l, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::domain, "potential evaluated at r <= 0", r);
  return l * (l + 1.0) / (r * r) - 2.0 / r;
}

double potential_v_d1(int l, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::domain, "potential evaluated at r <= 0", r);
  return -2.0 * l * (l + 1.0) / (r * r * r) + 2.0 / (r * r);
}

FunctionTable potential_table(int l, const Grid& grid) {
  FunctionTable t(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) t.values[i] = potential_v(l, grid[i]);
  return t;
}

double energy(int l, int k) {
  QuantumNumbers{l, k}.validate();
  const double n = l + k;
  return -1.0 / (n * n);
}

Spectrum spectrum(int l, int k_max) {
  Spectrum s;
  for (int k = 1; k <= k_max; ++k) {
    std::ostringstream label;
    label << "E_" << l << "," << k;
    s.entries.push_back({label.str(), energy(l, k)});
  }
  return s;
}

double laguerre(int m, double alpha, double x) {
  if (m < 0) throw Error(ErrorCode::domain, "Laguerre degree must be >= 0");
  if (m == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < m; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

void check_nl(int n, int l) {
  if (l < 0) throw Error(ErrorCode::domain, "l must be >= 0");
  if (n <= l) throw Error(ErrorCode::domain, "radial eigenfunction needs n > l");
}

double unnormalized(int n, int l, double r) {
  return std::pow(r, l + 1) * std::exp(-r / n) * laguerre(n - l - 1, 2 * l + 1, 2.0 * r / n);
}

}  // namespace

double radial_normalization(int n, int l) {
  check_nl(n, l);
  static std::mutex mu;
  static std::map<std::pair<int, int>, double> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find({n, l}); it != cache.end()) return it->second;
  }
  auto sq = [&](double r) {
    const double v = unnormalized(n, l, r);
    return v * v;
  };
  // Split at a few multiples of n so the mapped tail is smooth.
  const double cut = 4.0 * n * n;
  const double head = adaptive_quad(sq, 0.0, cut, 1e-15).value;
  const double tail = adaptive_quad_to_infinity(sq, cut, 1e-15).value;
  double c = 1.0 / std::sqrt(head + tail);
  // Positive near the origin: L_m^alpha(0) > 0 already, so c > 0 suffices.
  std::lock_guard lock(mu);
  cache[{n, l}] = c;
  return c;
}

double radial_value(int n, int l, double r) {
  return radial_normalization(n, l) * unnormalized(n, l, r);
}

FunctionTable radial_eigenfunction(int n, int l, const Grid& grid) {
  check_nl(n, l);
  const double c = radial_normalization(n, l);
  const int m = n - l - 1;
  const double e = -1.0 / (static_cast<double>(n) * n);
  FunctionTable t(grid);
  std::vector<double> d1(grid.size()), d2(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    const double x = 2.0 * r / n;
    const double L = laguerre(m, 2 * l + 1, x);
    const double dL = m > 0 ? -laguerre(m - 1, 2 * l + 2, x) : 0.0;
    const double pre = c * std::pow(r, l) * std::exp(-r / n);
    t.values[i] = pre * r * L;
    d1[i] = pre * ((l + 1.0 - r / n) * L + r * (2.0 / n) * dL);
    d2[i] = (potential_v(l, r) - e) * t.values[i];
  }
  t.d1 = std::move(d1);
  t.d2 = std::move(d2);
  return t;
}

}  // namespace isohydra::hydrogen
