#include "isohydra/spectralcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "isohydra/error.hpp"
#include "isohydra/numerics/finite_difference.hpp"

namespace isohydra::spectralcheck {

namespace {

constexpr int kMaxLevels = 12;

void validate(const EigenProblem& problem) {
  problem.potential.validate();
  if (problem.n_levels < 1 || problem.n_levels > kMaxLevels)
    throw Error(ErrorCode::domain, "n_levels must be in 1..12");
  if (problem.potential.size() < 64) throw Error(ErrorCode::grid_too_coarse, "eigenproblems need >= 64 nodes");
  for (double v : problem.potential.values)
    if (!std::isfinite(v)) throw Error(ErrorCode::domain, "potential is not finite");
}

// Potential restricted to every `stride`-th node of a uniform grid.
struct Sub {
  double r0, h;
  std::vector<double> v;  // all nodes, boundaries included
};

Sub subsample(const FunctionTable& pot, std::size_t stride) {
  const double h = pot.grid.spacing() * stride;
  Sub s{pot.grid.r_min(), h, {}};
  for (std::size_t i = 0; i < pot.size(); i += stride) s.v.push_back(pot.values[i]);
  return s;
}

// Number of eigenvalues of the Dirichlet matrix below x.
std::size_t sturm_count(const Sub& s, double x) {
  const double e2 = 1.0 / (s.h * s.h * s.h * s.h);
  const double diag = 2.0 / (s.h * s.h);
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 1; i + 1 < s.v.size(); ++i) {
    q = (diag + s.v[i] - x) - (i > 1 ? e2 / q : 0.0);
    if (q == 0.0) q = -std::numeric_limits<double>::min();
    if (q < 0.0) ++count;
  }
  return count;
}

double bisect_level(const Sub& s, std::size_t k, double lo, double hi) {
  if (sturm_count(s, lo) > k || sturm_count(s, hi) <= k) {
    std::ostringstream msg;
    msg << "level " << k << " is not inside the Gershgorin interval";
    throw Error(ErrorCode::convergence_failure, msg.str());
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(s, mid) > k) hi = mid; else lo = mid;
    if (hi - lo < 1e-15 * std::max(1.0, std::fabs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> fd_levels(const Sub& s, int n_levels) {
  if (s.v.size() < static_cast<std::size_t>(n_levels) + 2)
    throw Error(ErrorCode::grid_too_coarse, "too few interior nodes for the requested levels");
  const double diag = 2.0 / (s.h * s.h), off = 1.0 / (s.h * s.h);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 1; i + 1 < s.v.size(); ++i) {
    lo = std::min(lo, diag + s.v[i] - 2.0 * off);
    hi = std::max(hi, diag + s.v[i] + 2.0 * off);
  }
  std::vector<double> out;
  double floor_lo = lo;
  for (int k = 0; k < n_levels; ++k) {
    const double e = bisect_level(s, k, floor_lo, hi);
    if (!std::isfinite(e)) {
      std::ostringstream msg;
      msg << "bisection failed for level " << k;
      throw Error(ErrorCode::convergence_failure, msg.str());
    }
    out.push_back(e);
    floor_lo = lo;
  }
  return out;
}

// Solves (T - sigma) x = b for the Dirichlet matrix by LU with partial
// pivoting.
std::vector<double> tridiagonal_solve(const Sub& s, double sigma, std::vector<double> b) {
  const std::size_t m = s.v.size() - 2;
  const double off = -1.0 / (s.h * s.h), diag = 2.0 / (s.h * s.h);
  std::vector<double> d(m), du(m, 0.0), du2(m, 0.0), dl(m, off);
  for (std::size_t i = 0; i < m; ++i) d[i] = diag + s.v[i + 1] - sigma;
  for (std::size_t i = 0; i + 1 < m; ++i) du[i] = off;
  const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (std::fabs(d[i]) >= std::fabs(dl[i])) {
      if (d[i] == 0.0) d[i] = tiny;
      const double f = dl[i] / d[i];
      dl[i] = f;
      d[i + 1] -= f * du[i];
      b[i + 1] -= f * b[i];
    } else {
      const double f = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = f;
      const double t = du[i];
      du[i] = d[i + 1];
      d[i + 1] = t - f * d[i + 1];
      if (i + 2 < m) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du[i + 1];
      }
      std::swap(b[i], b[i + 1]);
      b[i + 1] -= f * b[i];
    }
  }
  if (d[m - 1] == 0.0) d[m - 1] = tiny;
  std::vector<double> x(m);
  for (std::size_t j = m; j-- > 0;) {
    double v = b[j];
    if (j + 1 < m) v -= du[j] * x[j + 1];
    if (j + 2 < m) v -= du2[j] * x[j + 2];
    x[j] = v / d[j];
  }
  return x;
}

// Unit-norm (sum h u^2 = 1) eigenvector by inverse iteration, sign fixed so
// the first significant entry is positive. Returned with the boundary zeros.
std::vector<double> inverse_iteration(const Sub& s, double lambda) {
  const std::size_t m = s.v.size() - 2;
  const double sigma = lambda + 1e-10 * std::max(1.0, std::fabs(lambda));
  std::vector<double> x(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = 1.0 + 0.1 * std::sin(0.37 * i);
  for (int it = 0; it < 4; ++it) {
    x = tridiagonal_solve(s, sigma, x);
    double nrm = 0.0;
    for (double v : x) nrm = std::max(nrm, std::fabs(v));
    for (double& v : x) v /= nrm;
  }
  double ss = 0.0;
  for (double v : x) ss += v * v;
  const double scale = 1.0 / std::sqrt(ss * s.h);
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::fabs(v));
  double sign = 1.0;
  for (double v : x)
    if (std::fabs(v) > 1e-3 * peak) {
      sign = v > 0 ? 1.0 : -1.0;
      break;
    }
  std::vector<double> out(m + 2, 0.0);
  for (std::size_t i = 0; i < m; ++i) out[i + 1] = sign * scale * x[i];
  return out;
}

// Energy shifts from the two Dirichlet walls of a unit-norm eigenvector: at
// r_min the half-line level sits lower by about u'(r_min)^2 r_min, at r_max
// higher by about u'(r_max)^2 / (2 kappa). Doubled as a margin for the
// one-sided slope estimate.
double wall_shift(const Sub& s, const std::vector<double>& u, double energy) {
  const double left = u[1] / s.h, right = u[u.size() - 2] / s.h;
  const double kappa = std::sqrt(std::max(-energy, 1e-6));
  return 2.0 * (left * left * s.r0 + right * right / (2.0 * kappa));
}

double outer_turning_point(const Sub& s, double energy) {
  for (std::size_t i = s.v.size() - 1; i > 0; --i)
    if (s.v[i] < energy) return s.r0 + i * s.h;
  return s.r0;
}

hydrogen::Spectrum make_spectrum(const std::vector<double>& e) {
  hydrogen::Spectrum sp;
  sp.source = hydrogen::SpectrumSource::numeric;
  for (std::size_t k = 0; k < e.size(); ++k) sp.entries.push_back({"level " + std::to_string(k), e[k]});
  return sp;
}

// ---- Numerov shooting ----

struct Shot {
  long double a, b;  // solution at the matching node and the next one
  std::size_t nodes;
};

// First node at which Numerov is started. Near a centrifugal singularity
// h^2 V / 12 approaches 1 at the first interior nodes; the integration then
// starts further out from the regular power law r^{s}.
struct Start {
  std::size_t i0;
  double s;  // exponent of the starting power law; 0 means u(r_0) = 0
  // With u(r_0) = 0 at r_0 -> 0, (V - E) u still tends to (r V)(r_0) u'(0);
  // this is the Numerov term f_0 u_0 per unit u_1.
  long double f0u0 = 0.0L;
};

Start numerov_start(const Sub& s) {
  const double h2 = s.h * s.h;
  std::size_t i0 = 0;
  for (std::size_t i = 1; i + 1 < s.v.size(); ++i)
    if (h2 * std::fabs(s.v[i]) / 12.0 > 0.1) i0 = i;
    else break;
  if (i0 == 0) {
    const double c0 = s.r0 < 1e-3 * s.h ? s.r0 * s.v[0] : 0.0;
    // u ~ a r (1 + c0 r / 2) near the origin
    const double r1 = s.r0 + s.h;
    return {0, 0.0, -static_cast<long double>(h2) / 12.0L * c0 / (r1 * (1.0 + 0.5 * c0 * r1))};
  }
  const double r = s.r0 + (i0 + 1) * s.h;
  const double c = std::max(0.0, r * r * s.v[i0 + 1]);
  return {i0 + 1, 0.5 + std::sqrt(0.25 + c), 0.0L};
}

// Forward solution from the start, up to node `last`; returns the values at
// m and m + 1 and the number of sign changes on (r_0, r_last].
Shot shoot_forward(const Sub& s, const Start& st, double energy, std::size_t m, std::size_t last) {
  const long double h12 = static_cast<long double>(s.h) * s.h / 12.0L;
  auto f = [&](std::size_t i) { return 1.0L - h12 * (s.v[i] - energy); };
  long double prev, cur;
  if (st.s == 0.0) {
    prev = 0.0L;
    cur = s.h;
  } else {
    const double r0 = s.r0 + st.i0 * s.h;
    prev = 1.0L;
    cur = std::pow(static_cast<long double>((r0 + s.h) / r0), static_cast<long double>(st.s));
  }
  long double um = 0.0L, um1 = 0.0L;
  const auto record = [&](std::size_t idx, long double v) {
    if (idx == m) um = v;
    if (idx == m + 1) um1 = v;
  };
  record(st.i0, prev);
  record(st.i0 + 1, cur);
  std::size_t nodes = 0;
  for (std::size_t k = st.i0 + 1; k < last; ++k) {
    const long double back = (st.s == 0.0 && k == 1) ? st.f0u0 * cur : f(k - 1) * prev;
    const long double next = ((12.0L - 10.0L * f(k)) * cur - back) / f(k + 1);
    if (next != 0.0L && (next < 0.0L) != (cur < 0.0L)) ++nodes;
    prev = cur;
    cur = next;
    record(k + 1, cur);
    const long double mag = std::fabs(cur);
    if (mag > 1e1000L) {
      prev /= mag;
      cur /= mag;
      um /= mag;
      um1 /= mag;
    }
  }
  return {um, um1, nodes};
}

Shot shoot_backward(const Sub& s, double energy, std::size_t m) {
  const long double h12 = static_cast<long double>(s.h) * s.h / 12.0L;
  const std::size_t n = s.v.size();
  auto f = [&](std::size_t i) { return 1.0L - h12 * (s.v[i] - energy); };
  long double prev = 0.0L, cur = 1e-300L;
  long double um = 0.0L, um1 = 0.0L;
  if (n - 2 == m + 1) um1 = cur;
  for (std::size_t k = n - 2; k > m; --k) {
    const long double next = ((12.0L - 10.0L * f(k)) * cur - f(k + 1) * prev) / f(k - 1);
    prev = cur;
    cur = next;
    if (k - 1 == m + 1) um1 = cur;
    if (k - 1 == m) um = cur;
    const long double mag = std::fabs(cur);
    if (mag > 1e1000L) {
      prev /= mag;
      cur /= mag;
      um /= mag;
      um1 /= mag;
    }
  }
  return {um, um1, 0};
}

std::size_t node_count(const Sub& s, const Start& st, double energy) {
  return shoot_forward(s, st, energy, s.v.size(), s.v.size() - 1).nodes;
}

std::size_t matching_node(const Sub& s, const Start& st, double energy) {
  std::size_t m = 0;
  for (std::size_t i = s.v.size() - 1; i > 0; --i)
    if (s.v[i] < energy) {
      m = i;
      break;
    }
  if (m == 0) m = std::min_element(s.v.begin() + 1, s.v.end() - 1) - s.v.begin();
  return std::clamp<std::size_t>(m, st.i0 + 2, s.v.size() - 4);
}

double mismatch(const Sub& s, const Start& st, double energy, std::size_t m) {
  const Shot o = shoot_forward(s, st, energy, m, m + 1);
  const Shot i = shoot_backward(s, energy, m);
  const long double w = o.b * i.a - o.a * i.b;
  const long double no = std::sqrt(o.a * o.a + o.b * o.b), ni = std::sqrt(i.a * i.a + i.b * i.b);
  return static_cast<double>(w / (no * ni));
}

double brent(const std::function<double(double)>& F, double a, double b, double fa, double fb) {
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < 200; ++it) {
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol = 2e-16 * std::fabs(b) + 1e-300, m = 0.5 * (c - b);
    if (std::fabs(m) <= tol || fb == 0.0) return b;
    if (std::fabs(e) >= tol && std::fabs(fa) > std::fabs(fb)) {
      double p, q, r;
      const double sv = fb / fa;
      if (a == c) {
        p = 2.0 * m * sv;
        q = 1.0 - sv;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = sv * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (sv - 1.0);
      }
      if (p > 0) q = -q; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::fabs(tol * q), std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::fabs(d) > tol ? d : (m > 0 ? tol : -tol);
    fb = F(b);
  }
  return b;
}

std::vector<double> shooting_levels(const Sub& s, int n_levels) {
  const Start st = numerov_start(s);
  double vmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = std::max<std::size_t>(st.i0, 1); i + 1 < s.v.size(); ++i) vmin = std::min(vmin, s.v[i]);
  double top = 0.0;
  for (int it = 0; node_count(s, st, top) < static_cast<std::size_t>(n_levels); ++it) {
    if (it > 60) throw Error(ErrorCode::bracket_failure, "cannot bracket the requested number of levels");
    top = top == 0.0 ? 1e-3 : 2.0 * top;
  }
  std::vector<double> out;
  for (int k = 0; k < n_levels; ++k) {
    double lo = vmin, hi = top;
    for (int it = 0; it < 200; ++it) {
      const std::size_t clo = node_count(s, st, lo), chi = node_count(s, st, hi);
      if (clo == static_cast<std::size_t>(k) && chi == static_cast<std::size_t>(k) + 1) break;
      if (hi - lo < 1e-13 * std::max(1.0, std::fabs(hi))) {
        std::ostringstream msg;
        msg << "node counts skip level " << k << " near E = " << hi;
        throw Error(ErrorCode::bracket_failure, msg.str());
      }
      const double mid = 0.5 * (lo + hi);
      if (node_count(s, st, mid) > static_cast<std::size_t>(k)) hi = mid; else lo = mid;
    }
    const std::size_t m = matching_node(s, st, hi);
    const auto F = [&](double e) { return mismatch(s, st, e, m); };
    const double flo = F(lo), fhi = F(hi);
    double e;
    if ((flo > 0) == (fhi > 0)) {
      // The matching function lost its sign change (a node of one solution at
      // the matching point); fall back to node-count bisection.
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::fabs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (node_count(s, st, mid) > static_cast<std::size_t>(k)) hi = mid; else lo = mid;
      }
      e = 0.5 * (lo + hi);
    } else {
      e = brent(F, lo, hi, flo, fhi);
    }
    out.push_back(e);
  }
  return out;
}

// Unit-norm Numerov eigenfunction at `energy` (forward solution rescaled to
// the backward one at the matching node), for the wall estimate.
std::vector<double> shooting_vector(const Sub& s, double energy) {
  const Start st = numerov_start(s);
  const std::size_t n = s.v.size(), m = matching_node(s, st, energy);
  const long double h12 = static_cast<long double>(s.h) * s.h / 12.0L;
  auto f = [&](std::size_t i) { return 1.0L - h12 * (s.v[i] - energy); };
  std::vector<long double> u(n, 0.0L);
  if (st.s == 0.0) {
    u[1] = s.h;
  } else {
    const double r0 = s.r0 + st.i0 * s.h;
    u[st.i0] = 1.0L;
    u[st.i0 + 1] = std::pow(static_cast<long double>((r0 + s.h) / r0), static_cast<long double>(st.s));
  }
  for (std::size_t k = st.i0 + 1; k < m + 1; ++k) {
    const long double back = (st.s == 0.0 && k == 1) ? st.f0u0 * u[1] : f(k - 1) * u[k - 1];
    u[k + 1] = ((12.0L - 10.0L * f(k)) * u[k] - back) / f(k + 1);
  }
  std::vector<long double> w(n, 0.0L);
  w[n - 2] = 1e-300L;
  for (std::size_t k = n - 2; k > m; --k) w[k - 1] = ((12.0L - 10.0L * f(k)) * w[k] - f(k + 1) * w[k + 1]) / f(k - 1);
  const long double scale = w[m] / u[m];
  for (std::size_t k = 0; k <= m; ++k) w[k] = u[k] * scale;
  long double ss = 0.0L;
  for (auto x : w) ss += x * x;
  const long double c = 1.0L / std::sqrt(ss * s.h);
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = static_cast<double>(w[k] * c);
  return out;
}

void turning_point_warnings(SolveResult& res, const Sub& s, bool half_line) {
  if (!half_line) return;
  const double r_max = s.r0 + (s.v.size() - 1) * s.h;
  for (std::size_t k = 0; k < res.spectrum.size(); ++k) {
    const double tp = outer_turning_point(s, res.spectrum[k]);
    if (tp > 0.5 * r_max) {
      std::ostringstream msg;
      msg << "level " << k << ": classical turning point " << tp << " beyond r_max/2";
      res.warnings.push_back(msg.str());
    }
  }
}

double local_cubic(std::span<const double> x, const std::vector<double>& y, double t) {
  const std::size_t n = x.size();
  std::size_t j = std::upper_bound(x.begin(), x.end(), t) - x.begin();
  j = std::clamp<std::size_t>(j, 2, n - 2) - 2;
  double sum = 0.0;
  for (std::size_t a = j; a < j + 4; ++a) {
    double w = 1.0;
    for (std::size_t b = j; b < j + 4; ++b)
      if (b != a) w *= (t - x[b]) / (x[a] - x[b]);
    sum += w * y[a];
  }
  return sum;
}

}  // namespace

FunctionTable resample_uniform(const FunctionTable& table) {
  if (table.grid.is_uniform()) return table;
  const Grid g = Grid::uniform(table.grid.r_min(), table.grid.r_max(), table.size());
  FunctionTable out(g);
  const auto x = table.grid.nodes();
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = local_cubic(x, table.values, g[i]);
  out.values.front() = table.values.front();
  out.values.back() = table.values.back();
  return out;
}

SolveResult eigensolve_fd(const EigenProblem& problem) {
  validate(problem);
  const FunctionTable pot = resample_uniform(problem.potential);
  const int nl = problem.n_levels;
  const Sub s1 = subsample(pot, 1), s2 = subsample(pot, 2), s4 = subsample(pot, 4);
  const auto e1 = fd_levels(s1, nl), e2 = fd_levels(s2, nl), e4 = fd_levels(s4, nl);
  SolveResult res{{}, e1, e2, {}, {}, {}, {}, pot.grid};
  std::vector<double> value(nl);
  for (int k = 0; k < nl; ++k) {
    const double r1 = (4.0 * e1[k] - e2[k]) / 3.0, r2 = (4.0 * e2[k] - e4[k]) / 3.0;
    const auto u = inverse_iteration(s1, e1[k]);
    value[k] = r1;
    const double wall = problem.half_line ? wall_shift(s1, u, e1[k]) : 0.0;
    // bisection resolves levels to about eps * ||T|| with ||T|| ~ 4 / h^2
    const double rounding = 16.0 * std::numeric_limits<double>::epsilon() * 4.0 / (s1.h * s1.h);
    res.tolerance.push_back(std::fabs(r1 - r2) + wall + rounding + 1e-12 * std::max(1.0, std::fabs(r1)));
    res.order_ratio.push_back((e2[k] - e4[k]) / (e1[k] - e2[k]));
    if (problem.want_vectors) res.vectors.emplace_back(pot.grid, u);
  }
  res.spectrum = make_spectrum(value);
  turning_point_warnings(res, s1, problem.half_line);
  return res;
}

SolveResult eigensolve_shooting(const EigenProblem& problem) {
  validate(problem);
  const FunctionTable pot = resample_uniform(problem.potential);
  const int nl = problem.n_levels;
  const Sub s1 = subsample(pot, 1), s2 = subsample(pot, 2), s4 = subsample(pot, 4);
  const auto e1 = shooting_levels(s1, nl), e2 = shooting_levels(s2, nl), e4 = shooting_levels(s4, nl);
  SolveResult res{{}, e1, e2, {}, {}, {}, {}, pot.grid};
  std::vector<double> value(nl);
  for (int k = 0; k < nl; ++k) {
    const double r1 = (16.0 * e1[k] - e2[k]) / 15.0, r2 = (16.0 * e2[k] - e4[k]) / 15.0;
    const auto u = shooting_vector(s1, e1[k]);
    value[k] = r1;
    const double wall = problem.half_line ? wall_shift(s1, u, e1[k]) : 0.0;
    res.tolerance.push_back(std::fabs(r1 - r2) + wall + 1e-12 * std::max(1.0, std::fabs(r1)));
    res.order_ratio.push_back((e2[k] - e4[k]) / (e1[k] - e2[k]));
  }
  res.spectrum = make_spectrum(value);
  turning_point_warnings(res, s1, problem.half_line);
  return res;
}

SolveResult eigensolve(const EigenProblem& problem) {
  return problem.method == Method::fd_tridiagonal ? eigensolve_fd(problem) : eigensolve_shooting(problem);
}

double intertwining_residual(const FunctionTable& v_left, const FunctionTable& v_right, const Operator& op,
                             const std::vector<TestFunction>& tests) {
  const Grid& grid = v_right.grid;
  if (!grid.same_as(v_left.grid)) throw Error(ErrorCode::domain, "potentials live on different grids");
  const auto vd1 = v_right.d1 ? *v_right.d1 : derivative(grid, v_right.values, 1);
  const auto vd2 = v_right.d2 ? *v_right.d2 : derivative(grid, v_right.values, 2);
  double worst = 0.0;
  for (const auto& t : tests) {
    const auto& c = t.f;
    if (!c.grid.same_as(grid) || !c.has_derivatives())
      throw Error(ErrorCode::missing_derivatives, "test functions need d1, d2 on the potential's grid");
    const std::size_t n = grid.size();
    FunctionTable h(grid);
    h.d1 = std::vector<double>(n);
    h.d2 = std::vector<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double V = v_right.values[i], f = c.values[i], f1 = (*c.d1)[i], f2 = (*c.d2)[i];
      h.values[i] = -f2 + V * f;
      (*h.d1)[i] = -t.d3[i] + vd1[i] * f + V * f1;
      (*h.d2)[i] = -t.d4[i] + vd2[i] * f + 2.0 * vd1[i] * f1 + V * f2;
    }
    const auto oc = op(c);
    const auto oh = op(h);
    const auto oc2 = derivative(grid, oc.values, 2);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      num = std::max(num, std::fabs(-oc2[i] + v_left.values[i] * oc.values[i] - oh.values[i]));
      den = std::max(den, std::fabs(oc.values[i]));
    }
    worst = std::max(worst, den > 0.0 ? num / den : num);
  }
  return worst;
}

std::vector<std::vector<double>> gram_matrix(const std::vector<FunctionTable>& states, bool normalize) {
  const std::size_t m = states.size();
  std::vector<std::vector<double>> g(m, std::vector<double>(m, 0.0));
  if (m == 0) return g;
  const Grid& grid = states.front().grid;
  for (const auto& s : states)
    if (!s.grid.same_as(grid)) throw Error(ErrorCode::domain, "states live on different grids");
  const auto w = grid.weights();
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a; b < m; ++b) {
      double sum = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) sum += w[i] * states[a].values[i] * states[b].values[i];
      g[a][b] = g[b][a] = sum;
    }
  if (normalize) {
    std::vector<double> d(m);
    for (std::size_t a = 0; a < m; ++a) d[a] = std::sqrt(g[a][a]);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) g[a][b] /= d[a] * d[b];
  }
  return g;
}

double max_identity_deviation(const std::vector<std::vector<double>>& gram) {
  double worst = 0.0;
  for (std::size_t a = 0; a < gram.size(); ++a)
    for (std::size_t b = 0; b < gram.size(); ++b)
      worst = std::max(worst, std::fabs(gram[a][b] - (a == b ? 1.0 : 0.0)));
  return worst;
}

double eigen_residual(const FunctionTable& potential, const FunctionTable& psi, double energy, double floor) {
  if (!potential.grid.same_as(psi.grid)) throw Error(ErrorCode::domain, "tables live on different grids");
  const auto d2 = derivative(psi.grid, psi.values, 2);
  double peak = 0.0;
  for (double v : psi.values) peak = std::max(peak, std::fabs(v));
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (std::fabs(psi.values[i]) < floor * peak) continue;
    const double vp = potential.values[i] * psi.values[i];
    num = std::max(num, std::fabs(-d2[i] + vp - energy * psi.values[i]));
    den = std::max(den, std::fabs(d2[i]) + std::fabs(vp) + std::fabs(energy * psi.values[i]));
  }
  return den > 0.0 ? num / den : num;
}

double proportionality_residual(const FunctionTable& a, const FunctionTable& b, const std::vector<bool>& mask) {
  if (!a.grid.same_as(b.grid)) throw Error(ErrorCode::domain, "tables live on different grids");
  const auto w = a.grid.weights();
  const auto skip = [&](std::size_t i) { return !mask.empty() && mask[i]; };
  double ab = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (skip(i)) continue;
    ab += w[i] * a.values[i] * b.values[i];
    bb += w[i] * b.values[i] * b.values[i];
  }
  if (!(bb > 0.0)) throw Error(ErrorCode::domain, "proportionality_residual: reference vanishes");
  const double c = ab / bb;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (skip(i)) continue;
    num = std::max(num, std::fabs(a.values[i] - c * b.values[i]));
    den = std::max(den, std::fabs(a.values[i]));
  }
  return den > 0.0 ? num / den : num;
}

std::vector<Extremum> density_maxima(const FunctionTable& psi, double threshold) {
  std::vector<double> rho(psi.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    rho[i] = psi.values[i] * psi.values[i];
    peak = std::max(peak, rho[i]);
  }
  std::vector<Extremum> out;
  for (std::size_t i = 1; i + 1 < rho.size(); ++i)
    if (rho[i] > rho[i - 1] && rho[i] >= rho[i + 1] && rho[i] > threshold * peak) out.push_back({psi.r(i), rho[i]});
  return out;
}

std::vector<LevelComparison> compare_levels(const SolveResult& result, const std::vector<double>& expected,
                                            double tolerance_factor) {
  std::vector<LevelComparison> out;
  for (std::size_t k = 0; k < expected.size(); ++k) {
    if (k >= result.spectrum.size()) {
      out.push_back({expected[k], std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity(),
                     0.0, false});
      continue;
    }
    const double num = result.spectrum[k], err = std::fabs(num - expected[k]);
    const double tol = tolerance_factor * result.tolerance[k];
    out.push_back({expected[k], num, err, tol, err <= tol});
  }
  return out;
}

std::vector<double> levels_near(const SolveResult& result, double energy, double window) {
  std::vector<double> out;
  for (double e : result.spectrum.energies())
    if (std::fabs(e - energy) < window) out.push_back(e);
  return out;
}

}  // namespace isohydra::spectralcheck
