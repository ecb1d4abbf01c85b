#include "isohydra/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "isohydra/error.hpp"
#include "isohydra/hydrogen.hpp"
#include "isohydra/numerics/finite_difference.hpp"

namespace isohydra::factorization {

namespace {

using seeds::SeedPair;
using seeds::SeedPoint;

void require_same_grid(const Grid& a, const Grid& b) {
  if (!a.same_as(b)) throw Error(ErrorCode::domain, "tables live on different grids");
}

double quadrature_norm(const Grid& grid, const std::vector<double>& v) {
  const auto w = grid.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * v[i] * v[i];
  return std::sqrt(s);
}

std::vector<double> sign_changes(const Grid& grid, const std::vector<double>& v) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (v[i] == 0.0) {
      out.push_back(grid[i]);
    } else if ((v[i] < 0.0) != (v[i + 1] < 0.0) && v[i + 1] != 0.0) {
      const double t = v[i] / (v[i] - v[i + 1]);
      out.push_back(grid[i] + t * (grid[i + 1] - grid[i]));
    }
  }
  return out;
}

// u = c1 g1 + c2 g2 up to a positive factor (e^{-r/p} when c2 != 0), with u'
// and u'' on the same scale.
struct Combo {
  double u, u1, u2;
};

Combo combination(const SeedPoint& s, double p, double c1, double c2) {
  if (c2 == 0.0) return {c1 * s.g1, c1 * s.g1_d1, c1 * s.g1_d2};
  const double sc = std::exp(-s.r / p);
  // g2' e^{-r/p} and g2'' e^{-r/p}; the first in its cancellation-free form.
  const double a = -s.r / (p * p) + s.G_dev / p + s.G_dev_d1;
  const double b = s.G_d2 + 2.0 * s.G_d1 / p + s.G / (p * p);
  return {c1 * s.g1 * sc + c2 * s.G, c1 * s.g1_d1 * sc + c2 * a, c1 * s.g1_d2 * sc + c2 * b};
}

void require_combination(double c1, double c2) {
  if (!std::isfinite(c1) || !std::isfinite(c2) || (c1 == 0.0 && c2 == 0.0))
    throw Error(ErrorCode::domain, "(c1, c2) must be finite and not both zero");
}

std::vector<double> combination_values(const SeedPair& seeds, double c1, double c2) {
  std::vector<double> u(seeds.grid.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    u[i] = combination(seeds.points[i], seeds.pole_location, c1, c2).u;
  return u;
}

void require_nonvanishing(const SeedPair& seeds, double c1, double c2) {
  const auto zeros = sign_changes(seeds.grid, combination_values(seeds, c1, c2));
  if (!zeros.empty()) {
    std::ostringstream msg;
    msg << "c1 g1 + c2 g2 vanishes near r = " << zeros.front() << " for (c1, c2) = (" << c1 << ", " << c2
        << ")";
    throw Error(ErrorCode::combination_zero, msg.str(), zeros.front());
  }
}

FunctionTable w1_table(const SeedPair& seeds, double c1, double c2) {
  const int l = seeds.params.l;
  const double p = seeds.pole_location;
  FunctionTable w(seeds.grid);
  w.d1 = std::vector<double>(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double r = seeds.grid[i];
    const Combo c = combination(seeds.points[i], p, c1, c2);
    const double ld = c.u1 / c.u;
    w.values[i] = l / r - 1.0 / l - ld;
    (*w.d1)[i] = -l / (r * r) - (c.u2 / c.u - ld * ld);
  }
  return w;
}

FunctionTable f_table(const SeedPair& seeds, double c1, double c2) {
  const int l = seeds.params.l;
  const double p = seeds.pole_location;
  FunctionTable f(seeds.grid);
  f.d1 = std::vector<double>(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = seeds.grid[i];
    const auto& s = seeds.points[i];
    const Combo c = combination(s, p, c1, c2);
    const auto d = seeds::derive(l, s);
    const double ld = c.u1 / c.u;
    f.values[i] = 1.0 / l - l / r + d.beta + ld;
    (*f.d1)[i] = d.alpha_d1 - (l - 1.0) / (r * r) + (c.u2 / c.u - ld * ld);
  }
  return f;
}

// w1' with the l/r part differentiated analytically and the rest by stencils.
std::vector<double> w1_prime_stencil(const SeedPair& seeds, const FunctionTable& w1) {
  const int l = seeds.params.l;
  const Grid& grid = seeds.grid;
  std::vector<double> rest(grid.size());
  for (std::size_t i = 0; i < rest.size(); ++i) rest[i] = w1.values[i] - l / grid[i];
  auto d = derivative(grid, rest, 1);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] -= l / (grid[i] * grid[i]);
  return d;
}

FunctionTable v_star_table(const SeedPair& seeds) {
  const int l = seeds.params.l;
  const double p = seeds.pole_location;
  FunctionTable v(seeds.grid);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = seeds.grid[i];
    const auto& s = seeds.points[i];
    const double a = -r / (p * p) + s.G_dev / p + s.G_dev_d1;
    const double b = s.G_d2 + 2.0 * s.G_d1 / p + s.G / (p * p);
    v.values[i] = l * (l - 1.0) / (r * r) - 2.0 / r + 2.0 * (a * a - b * s.G) / (s.G * s.G);
  }
  return v;
}

FunctionTable v_tilde_unchecked(const SeedPair& seeds) {
  const int l = seeds.params.l;
  FunctionTable v(seeds.grid);
  for (std::size_t i = 0; i < v.size(); ++i)
    v.values[i] = hydrogen::potential_v(l - 2, seeds.grid[i]) + 2.0 * seeds::derive(l, seeds.points[i]).alpha_d1;
  return v;
}

void require_star_domain(const SeedPair& seeds) {
  if (!(seeds.params.nu2 > 1.0))
    throw Error(ErrorCode::domain, "the intermediate potential needs nu2 > 1");
  const auto zeros = seeds.g2_zeros();
  if (!zeros.empty()) {
    std::ostringstream msg;
    msg << "g2 vanishes near r = " << zeros.front() << " (l=" << seeds.params.l << ", nu2=" << seeds.params.nu2
        << ")";
    throw Error(ErrorCode::singular_family, msg.str(), zeros.front());
  }
}

// Nodes within 2% (at least 80 local spacings) of a singular radius; stencil
// errors next to a pole fall off like (h / distance)^4.
std::vector<bool> singular_mask(const Grid& grid, const std::vector<double>& radii) {
  std::vector<bool> mask(grid.size(), false);
  for (double r0 : radii) {
    const auto nodes = grid.nodes();
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), r0);
    const std::size_t k = std::min<std::size_t>(it - nodes.begin(), grid.size() - 1);
    const double h = grid[std::min(k + 1, grid.size() - 1)] - grid[k > 0 ? k - 1 : 0];
    const double half = std::max(0.02 * std::max(1.0, r0), 40.0 * h);
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (std::fabs(grid[i] - r0) < half) mask[i] = true;
  }
  return mask;
}

// max |a - b| / max |b| over unmasked nodes.
double relative_difference(const std::vector<double>& a, const std::vector<double>& b,
                           const std::vector<bool>& mask) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (mask[i]) continue;
    num = std::max(num, std::fabs(a[i] - b[i]));
    den = std::max(den, std::fabs(b[i]));
  }
  return den > 0.0 ? num / den : num;
}

std::vector<double> hamiltonian_on(const FunctionTable& v, const FunctionTable& chi) {
  std::vector<double> out(chi.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = -(*chi.d2)[i] + v.values[i] * chi.values[i];
  return out;
}

std::vector<double> plus_shift(const FunctionTable& t, const FunctionTable& chi, double delta) {
  std::vector<double> out(t.values);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += delta * chi.values[i];
  return out;
}

// max |a - c b| / max |a| with c = <a, b> / <b, b> on the grid weights.
double proportionality_residual(const Grid& grid, const std::vector<double>& a, const std::vector<double>& b) {
  const auto w = grid.weights();
  double ab = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += w[i] * a[i] * b[i];
    bb += w[i] * b[i] * b[i];
  }
  const double c = ab / bb;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::fabs(a[i] - c * b[i]));
    den = std::max(den, std::fabs(a[i]));
  }
  return num / den;
}

}  // namespace

FunctionTable apply_b(const FirstOrderOp& b, const FunctionTable& psi) {
  require_same_grid(b.w.grid, psi.grid);
  if (!psi.d1) throw Error(ErrorCode::missing_derivatives, "apply_b needs d1");
  const auto& w = b.w.values;
  const auto& wd = *b.w.d1;
  FunctionTable out(psi.grid);
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = (*psi.d1)[i] + w[i] * psi.values[i];
  if (psi.d2) {
    out.d1 = std::vector<double>(out.size());
    for (std::size_t i = 0; i < out.size(); ++i)
      (*out.d1)[i] = (*psi.d2)[i] + wd[i] * psi.values[i] + w[i] * (*psi.d1)[i];
  }
  return out;
}

FunctionTable apply_b_adjoint(const FirstOrderOp& b, const FunctionTable& chi) {
  require_same_grid(b.w.grid, chi.grid);
  if (!chi.d1) throw Error(ErrorCode::missing_derivatives, "apply_b_adjoint needs d1");
  const auto& w = b.w.values;
  const auto& wd = *b.w.d1;
  FunctionTable out(chi.grid);
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = -(*chi.d1)[i] + w[i] * chi.values[i];
  if (chi.d2) {
    out.d1 = std::vector<double>(out.size());
    for (std::size_t i = 0; i < out.size(); ++i)
      (*out.d1)[i] = -(*chi.d2)[i] + wd[i] * chi.values[i] + w[i] * (*chi.d1)[i];
  }
  return out;
}

FunctionTable f_general(const SeedPair& seeds, double c1, double c2) {
  require_combination(c1, c2);
  require_nonvanishing(seeds, c1, c2);
  return f_table(seeds, c1, c2);
}

FunctionTable f_general(const seeds::FamilyParams& params, double c1, double c2, const Grid& grid,
                        const ToleranceConfig& tol) {
  return f_general(seeds::make_seed_pair(params, grid, tol), c1, c2);
}

FirstOrderOp w1_eval(const SeedPair& seeds, double c1, double c2) {
  require_combination(c1, c2);
  require_nonvanishing(seeds, c1, c2);
  return {w1_table(seeds, c1, c2)};
}

FirstOrderOp w1_eval(const seeds::FamilyParams& params, double c1, double c2, const Grid& grid,
                     const ToleranceConfig& tol) {
  return w1_eval(seeds::make_seed_pair(params, grid, tol), c1, c2);
}

Factorization factorize(const SeedPair& seeds, double c1, double c2) {
  require_combination(c1, c2);
  require_nonvanishing(seeds, c1, c2);
  return {{w1_table(seeds, c1, c2)}, {f_table(seeds, c1, c2)}, c1, c2};
}

FunctionTable apply_product(const Factorization& fac, const FunctionTable& chi) {
  if (!chi.has_derivatives()) throw Error(ErrorCode::missing_derivatives, "apply_product needs d1 and d2");
  return apply_b(fac.b2, apply_b(fac.b1, chi));
}

FunctionTable kernel_from_f(const FunctionTable& f, double leading) {
  if (!f.d1) throw Error(ErrorCode::missing_derivatives, "kernel_from_f needs d1");
  const Grid& grid = f.grid;
  const std::size_t n = grid.size();
  std::vector<double> logv(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid[i];
    if (i > 0) {
      const double r0 = grid[i - 1], h = r - r0;
      const double g0 = f.values[i - 1] - leading / r0, g1 = f.values[i] - leading / r;
      const double d0 = (*f.d1)[i - 1] + leading / (r0 * r0), d1 = (*f.d1)[i] + leading / (r * r);
      acc += 0.5 * h * (g0 + g1) + h * h / 12.0 * (d0 - d1);
    }
    logv[i] = leading * std::log(r) + acc;
  }
  const double top = *std::max_element(logv.begin(), logv.end());
  FunctionTable out(grid);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = std::exp(logv[i] - top);
  const double norm = quadrature_norm(grid, out.values);
  out.d1 = std::vector<double>(n);
  out.d2 = std::vector<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] /= norm;
    (*out.d1)[i] = f.values[i] * out.values[i];
    (*out.d2)[i] = ((*f.d1)[i] + f.values[i] * f.values[i]) * out.values[i];
  }
  return out;
}

std::vector<double> singular_radii(const SeedPair& seeds, double c1, double c2) {
  auto radii = seeds.wronskian_zeros();
  const auto z = sign_changes(seeds.grid, combination_values(seeds, c1, c2));
  radii.insert(radii.end(), z.begin(), z.end());
  std::sort(radii.begin(), radii.end());
  return radii;
}

families::DeformedPotential v_star(const SeedPair& seeds) {
  require_star_domain(seeds);
  families::DeformedPotential dp{seeds.params.l - 1, seeds.params, v_star_table(seeds),
                                 families::DeformedKind::intermediate, 0.0};
  dp.validate();
  return dp;
}

families::DeformedPotential v_star(int l, double nu2, const Grid& grid, const ToleranceConfig& tol) {
  return v_star(seeds::make_seed_pair(seeds::FamilyParams::intermediate(l, nu2), grid, tol));
}

FunctionTable v_star_susy(const SeedPair& seeds) {
  const int l = seeds.params.l;
  const auto wd = w1_prime_stencil(seeds, w1_table(seeds, 0.0, 1.0));
  FunctionTable v(seeds.grid);
  for (std::size_t i = 0; i < v.size(); ++i) v.values[i] = hydrogen::potential_v(l, seeds.grid[i]) + 2.0 * wd[i];
  return v;
}

std::vector<StarState> psi_star_states(const SeedPair& seeds, int n_max) {
  require_star_domain(seeds);
  const int l = seeds.params.l;
  if (n_max < l + 1) throw Error(ErrorCode::domain, "psi_star_states needs n_max >= l + 1");
  const Grid& grid = seeds.grid;
  const std::size_t n = grid.size();
  const auto vs = v_star_table(seeds);
  std::vector<StarState> out;

  // r^l e^{-r/l} / g2 = r^l e^{-r/(l-1)} / G
  StarState ground{"psi*_{l-1,-1}", FunctionTable(grid), seeds::seed_energy_2(l), 0.0};
  auto& g = ground.state;
  g.d1 = std::vector<double>(n);
  g.d2 = std::vector<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid[i];
    const auto& s = seeds.points[i];
    const double u = std::exp(l * std::log(r) - r / (l - 1.0));
    const double lu = l / r - 1.0 / (l - 1.0);
    const double u1 = u * lu, u2 = u * (lu * lu - l / (r * r));
    const double G = s.G, G1 = s.G_d1, G2 = s.G_d2;
    g.values[i] = u / G;
    (*g.d1)[i] = u1 / G - u * G1 / (G * G);
    (*g.d2)[i] = u2 / G - 2.0 * u1 * G1 / (G * G) - u * G2 / (G * G) + 2.0 * u * G1 * G1 / (G * G * G);
  }
  out.push_back(std::move(ground));

  const FirstOrderOp b1{w1_table(seeds, 0.0, 1.0)};
  for (int nn = l + 1; nn <= n_max; ++nn) {
    const auto psi = hydrogen::radial_eigenfunction(nn, l, grid);
    StarState st{"psi*_{" + std::to_string(nn) + ",l-1}", apply_b(b1, psi), -1.0 / (nn * double(nn)), 0.0};
    st.state.d2 = std::vector<double>(n);
    for (std::size_t i = 0; i < n; ++i) (*st.state.d2)[i] = (vs.values[i] - st.energy) * st.state.values[i];
    out.push_back(std::move(st));
  }

  for (auto& st : out) {
    st.norm_before = quadrature_norm(grid, st.state.values);
    const double k = 1.0 / st.norm_before;
    for (auto* v : {&st.state.values, &*st.state.d1, &*st.state.d2})
      for (double& x : *v) x *= k;
  }
  return out;
}

std::vector<StarState> psi_star_states(int l, double nu2, int n_max, const Grid& grid, const ToleranceConfig& tol) {
  return psi_star_states(seeds::make_seed_pair(seeds::FamilyParams::intermediate(l, nu2), grid, tol), n_max);
}

FactorizationCertificate evaluate_certificate(const SeedPair& seeds, const ToleranceConfig& tol) {
  tol.validate();
  const int l = seeds.params.l;
  const Grid& grid = seeds.grid;
  const std::size_t n = grid.size();
  FactorizationCertificate cert;
  cert.delta1 = seeds::seed_energy_2(l);
  cert.singular_radii = singular_radii(seeds, 0.0, 1.0);
  const auto mask = singular_mask(grid, cert.singular_radii);
  cert.masked_nodes = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));

  const FirstOrderOp b1{w1_table(seeds, 0.0, 1.0)};
  const FirstOrderOp b2{f_table(seeds, 0.0, 1.0)};
  const auto vstar = v_star_table(seeds);
  const auto vtilde = v_tilde_unchecked(seeds);

  // Riccati residual with w1' from stencils, independent of the analytic
  // second derivative of g2.
  const auto& w1 = b1.w.values;
  const auto w1d = w1_prime_stencil(seeds, b1.w);
  for (std::size_t i = 0; i < n; ++i) {
    if (mask[i]) continue;
    const double V = hydrogen::potential_v(l, grid[i]);
    const double res = -w1d[i] + w1[i] * w1[i] - V + cert.delta1;
    const double scale = std::fabs(w1d[i]) + w1[i] * w1[i] + std::fabs(V) + std::fabs(cert.delta1);
    cert.riccati_residual = std::max(cert.riccati_residual, std::fabs(res) / scale);
  }

  // delta2 from V* = w2^2 - w2' + delta2 where the seeds are well conditioned.
  const auto& w2 = b2.w.values;
  const auto& w2d = *b2.w.d1;
  const double r_hi = std::min(grid.r_max(), 30.0 * l);
  std::vector<double> samples;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask[i] || grid[i] < 0.5 || grid[i] > r_hi) continue;
    samples.push_back(vstar.values[i] - w2[i] * w2[i] + w2d[i]);
  }
  if (samples.empty()) throw Error(ErrorCode::grid_too_coarse, "no unmasked nodes in [0.5, 30 l] for delta2");
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= samples.size();
  cert.delta2 = mean;
  for (double x : samples) cert.delta2_spread = std::max(cert.delta2_spread, std::fabs(x - mean));

  std::vector<FunctionTable> tests{hydrogen::radial_eigenfunction(l + 1, l, grid)};
  std::vector<FunctionTable> bumps;
  for (double a : {2.0, 6.0, 12.0})
    if (a + 4.0 <= grid.r_max()) bumps.push_back(make_bump(grid, a).f);
  tests.insert(tests.end(), bumps.begin(), bumps.end());

  for (const auto& chi : bumps) {
    const auto Hl = hamiltonian_on(hydrogen::potential_table(l, grid), chi);
    const auto Hs = hamiltonian_on(vstar, chi);
    const auto Ht = hamiltonian_on(vtilde, chi);
    const double d2 = cert.delta2;
    const std::array<double, 4> r{
        relative_difference(plus_shift(apply_b_adjoint(b1, apply_b(b1, chi)), chi, cert.delta1), Hl, mask),
        relative_difference(plus_shift(apply_b(b1, apply_b_adjoint(b1, chi)), chi, cert.delta1), Hs, mask),
        relative_difference(plus_shift(apply_b_adjoint(b2, apply_b(b2, chi)), chi, d2), Hs, mask),
        relative_difference(plus_shift(apply_b(b2, apply_b_adjoint(b2, chi)), chi, d2), Ht, mask)};
    for (int k = 0; k < 4; ++k) cert.hamiltonian_residuals[k] = std::max(cert.hamiltonian_residuals[k], r[k]);
  }

  const Factorization fac{b1, b2, 0.0, 1.0};
  for (const auto& chi : tests) {
    const auto prod = apply_product(fac, chi);
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto d = seeds::derive(l, seeds.points[i]);
      a[i] = (*chi.d2)[i] + d.beta * (*chi.d1)[i] + d.gamma * chi.values[i];
    }
    cert.product_residual = std::max(cert.product_residual, relative_difference(prod.values, a, mask));
  }

  const auto check = [&](const char* name, double value) {
    if (!(value < tol.residual_tol)) {
      std::ostringstream msg;
      msg << name << " = " << value;
      cert.failures.push_back(msg.str());
    }
  };
  check("riccati_residual", cert.riccati_residual);
  check("product_residual", cert.product_residual);
  check("H_l = b1+ b1 + delta1", cert.hamiltonian_residuals[0]);
  check("H* = b1 b1+ + delta1", cert.hamiltonian_residuals[1]);
  check("H* = b2+ b2 + delta2", cert.hamiltonian_residuals[2]);
  check("H~ = b2 b2+ + delta2", cert.hamiltonian_residuals[3]);
  check("delta2_spread", cert.delta2_spread);
  if (!(cert.delta1 < cert.delta2)) cert.failures.push_back("delta1 < delta2 violated");
  return cert;
}

FactorizationCertificate riccati_certificate(const seeds::FamilyParams& params, const Grid& grid,
                                             const ToleranceConfig& tol) {
  auto cert = evaluate_certificate(seeds::make_seed_pair(params, grid, tol), tol);
  if (!cert.passed()) {
    std::ostringstream msg;
    msg << "factorization certificate failed:";
    for (const auto& f : cert.failures) msg << " [" << f << "]";
    throw Error(ErrorCode::certificate_failure, msg.str());
  }
  return cert;
}

double ChainEquivalence::worst() const noexcept {
  double m = 0.0;
  for (double r : residuals) m = std::max(m, r);
  return m;
}

ChainEquivalence chain_state_equivalence(const SeedPair& seeds, std::array<double, 2> basis, int n_max) {
  const bool on_g2 = basis[0] == 0.0 && basis[1] != 0.0;
  if (!on_g2 && !(basis[1] == 0.0 && basis[0] != 0.0))
    throw Error(ErrorCode::domain, "chain_state_equivalence needs basis (0, 1) or (1, 0)");
  seeds::require_regular_wronskian(seeds);
  const int l = seeds.params.l;
  const Grid& grid = seeds.grid;
  const std::size_t n = grid.size();
  const auto fac = factorize(seeds, basis[0], basis[1]);
  ChainEquivalence out;

  // exp(int w1) = r^l e^{-r/l} / u: psi' = w1 psi
  FunctionTable ground(grid);
  ground.d1 = std::vector<double>(n);
  std::vector<double> logv(n);
  const auto u = combination_values(seeds, basis[0], basis[1]);
  const double k = on_g2 ? l - 1.0 : double(l);  // u carries e^{-r/p} on the g2 branch
  for (std::size_t i = 0; i < n; ++i) logv[i] = l * std::log(grid[i]) - grid[i] / k - std::log(std::fabs(u[i]));
  const double top = *std::max_element(logv.begin(), logv.end());
  for (std::size_t i = 0; i < n; ++i) {
    ground.values[i] = std::exp(logv[i] - top);
    (*ground.d1)[i] = fac.b1.w.values[i] * ground.values[i];
  }
  const auto kernel = on_g2 ? families::psi_kernel_m1(seeds) : families::psi_kernel_0(seeds);
  out.labels.push_back(on_g2 ? "b2 psi*_{l-1,-1} ~ psi~_{l-2,-1}" : "b2 psi*_{l-1,0} ~ psi~_{l-2,0}");
  out.residuals.push_back(proportionality_residual(grid, apply_b(fac.b2, ground).values, kernel.state.values));

  const auto op = families::make_operator_A(seeds);
  for (int nn = l + 1; nn <= n_max; ++nn) {
    const auto psi = hydrogen::radial_eigenfunction(nn, l, grid);
    const auto chain = apply_product(fac, psi);
    const auto soit = families::psi_tilde_mapped(nn, seeds, op);
    out.labels.push_back("b2 b1 psi_{" + std::to_string(nn) + ",l} ~ psi~_{" + std::to_string(nn) + ",l-2}");
    out.residuals.push_back(proportionality_residual(grid, chain.values, soit.state.values));
  }
  return out;
}

double product_invariance(const SeedPair& seeds, const FunctionTable& chi, std::array<double, 2> c_a,
                          std::array<double, 2> c_b) {
  const auto pa = apply_product(factorize(seeds, c_a[0], c_a[1]), chi);
  const auto pb = apply_product(factorize(seeds, c_b[0], c_b[1]), chi);
  return relative_difference(pb.values, pa.values, std::vector<bool>(chi.size(), false));
}

}  // namespace isohydra::factorization
