#include "isohydra/families.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "isohydra/error.hpp"
#include "isohydra/numerics/finite_difference.hpp"
#include "isohydra/numerics/special_functions.hpp"

namespace isohydra::families {

namespace {

void require_same_grid(const Grid& a, const Grid& b) {
  if (!a.same_as(b)) throw Error(ErrorCode::domain, "tables live on different grids");
}

void require_derivatives(const FunctionTable& t, const char* what) {
  if (!t.has_derivatives())
    throw Error(ErrorCode::missing_derivatives, std::string(what) + " needs d1 and d2");
}

double quadrature_norm(const FunctionTable& t) {
  const auto w = t.grid.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) s += w[i] * t.values[i] * t.values[i];
  return std::sqrt(s);
}

// state = c * u(r) * v(r) / omega(r) with u = r^{l-1} e^{-r/k}; v is G or g1.
KernelState kernel_state(const seeds::SeedPair& seeds, double c, double k, bool use_G, double energy) {
  seeds::require_regular_wronskian(seeds);
  const int l = seeds.params.l;
  const Grid& grid = seeds.grid;
  const std::size_t n = grid.size();
  KernelState ks{FunctionTable(grid), energy, 0.0};
  auto& t = ks.state;
  t.d1 = std::vector<double>(n);
  t.d2 = std::vector<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = seeds.points[i];
    const double r = grid[i];
    const double u = std::exp((l - 1.0) * std::log(r) - r / k);
    const double lu = (l - 1.0) / r - 1.0 / k;
    const double u1 = u * lu;
    const double u2 = u * (lu * lu - (l - 1.0) / (r * r));
    const double g = use_G ? s.G : s.g1;
    const double g1 = use_G ? s.G_d1 : s.g1_d1;
    const double g2 = use_G ? s.G_d2 : s.g1_d2;
    const double O = s.omega, O1 = s.omega_d1, O2 = s.omega_d2;
    const double v = g / O;
    const double num = g1 * O - g * O1;
    const double v1 = num / (O * O);
    const double v2 = (g2 * O - g * O2) / (O * O) - 2.0 * O1 * num / (O * O * O);
    t.values[i] = c * u * v;
    (*t.d1)[i] = c * (u1 * v + u * v1);
    (*t.d2)[i] = c * (u2 * v + 2.0 * u1 * v1 + u * v2);
  }
  ks.measured_norm = quadrature_norm(t);
  return ks;
}

}  // namespace

void DeformedPotential::validate() const {
  table.validate();
  for (std::size_t i = 0; i < table.size(); ++i)
    if (!std::isfinite(table.values[i]))
      throw Error(ErrorCode::domain, "deformed potential is not finite", table.r(i));
}

OperatorA make_operator_A(const seeds::SeedPair& seeds, seeds::GammaVariant variant) {
  auto co = seeds::coefficients(seeds, variant);
  return OperatorA{std::move(co.beta), std::move(co.gamma), variant};
}

FunctionTable apply_A(const OperatorA& op, const FunctionTable& psi) {
  require_derivatives(psi, "apply_A");
  require_same_grid(op.beta.grid, psi.grid);
  FunctionTable out(psi.grid);
  for (std::size_t i = 0; i < psi.size(); ++i)
    out.values[i] = (*psi.d2)[i] + op.beta.values[i] * (*psi.d1)[i] + op.gamma.values[i] * psi.values[i];
  return out;
}

FunctionTable apply_A_adjoint(const OperatorA& op, const FunctionTable& chi) {
  require_derivatives(chi, "apply_A_adjoint");
  require_same_grid(op.beta.grid, chi.grid);
  if (!op.beta.d1) throw Error(ErrorCode::missing_derivatives, "adjoint of A needs beta'");
  FunctionTable out(chi.grid);
  for (std::size_t i = 0; i < chi.size(); ++i)
    out.values[i] = (*chi.d2)[i] - op.beta.values[i] * (*chi.d1)[i] +
                    (op.gamma.values[i] - (*op.beta.d1)[i]) * chi.values[i];
  return out;
}

DeformedPotential v_tilde_two_param(const seeds::SeedPair& seeds) {
  const auto co = seeds::coefficients(seeds);
  const int l = seeds.params.l;
  DeformedPotential dp{l - 2, seeds.params, FunctionTable(seeds.grid), DeformedKind::two_param, 0.0};
  for (std::size_t i = 0; i < seeds.grid.size(); ++i)
    dp.table.values[i] = hydrogen::potential_v(l - 2, seeds.grid[i]) + 2.0 * (*co.alpha.d1)[i];
  dp.validate();
  return dp;
}

DeformedPotential v_tilde_two_param(const seeds::FamilyParams& params, const Grid& grid,
                                    const ToleranceConfig& tol) {
  params.validate();
  if (params.family != seeds::FamilyKind::two_param)
    throw Error(ErrorCode::domain, "v_tilde_two_param needs two_param parameters");
  return v_tilde_two_param(seeds::make_seed_pair(params, grid, tol));
}

double mapped_prefactor(int n, int l) {
  if (l < 2 || n < l + 1) throw Error(ErrorCode::domain, "mapped states need l >= 2 and n >= l+1");
  const double n2 = double(n) * n, l2 = double(l) * l;
  return l * (l - 1.0) * n2 / std::sqrt((n2 - l2) * (n2 - l2 + 2.0 * l - 1.0));
}

MappedState psi_tilde_mapped(int n, const seeds::SeedPair& seeds, const OperatorA& op) {
  const int l = seeds.params.l;
  const double N = mapped_prefactor(n, l);
  FunctionTable psi = hydrogen::radial_eigenfunction(n, l, seeds.grid);
  FunctionTable a = apply_A(op, psi);
  for (double& v : a.values) v *= N;
  MappedState ms{std::move(a), N, 0.0};
  ms.measured_norm = quadrature_norm(ms.state);
  return ms;
}

MappedState psi_tilde_mapped(int n, const seeds::FamilyParams& params, const Grid& grid,
                             const ToleranceConfig& tol) {
  params.validate();
  mapped_prefactor(n, params.l);
  const auto sp = seeds::make_seed_pair(params, grid, tol);
  return psi_tilde_mapped(n, sp, make_operator_A(sp));
}

KernelState psi_kernel_0(const seeds::SeedPair& seeds) {
  const int l = seeds.params.l;
  const double p = l * (l - 1.0);
  const double K0 = std::sqrt((1.0 - seeds.params.nu1) * std::exp((2.0 * l + 1.0) * std::log(2.0 / l) - log_factorial(2 * l)) *
                              (2.0 * l - 1.0)) / p;
  // r^l e^{-r/l} g2 / W(g1,g2) = p^2 r^{l-1} e^{-r/l} G / omega
  return kernel_state(seeds, K0 * p * p, l, true, seeds::seed_energy_1(l));
}

KernelState psi_kernel_m1(const seeds::SeedPair& seeds) {
  const int l = seeds.params.l;
  const double p = l * (l - 1.0);
  const double K1 = std::sqrt((1.0 - seeds.params.nu2) *
                              std::exp((2.0 * l + 1.0) * std::log(2.0 / (l - 1.0)) - log_factorial(2 * l)) /
                              (2.0 * l) * (2.0 * l - 1.0)) / p;
  // r^l e^{-r/l} g1 / W(g2,g1) = -p^2 r^{l-1} e^{-r/(l-1)} g1 / omega
  return kernel_state(seeds, -K1 * p * p, l - 1.0, false, seeds::seed_energy_2(l));
}

KernelState psi_kernel_0(const seeds::FamilyParams& params, const Grid& grid, const ToleranceConfig& tol) {
  params.validate();
  return psi_kernel_0(seeds::make_seed_pair(params, grid, tol));
}

KernelState psi_kernel_m1(const seeds::FamilyParams& params, const Grid& grid, const ToleranceConfig& tol) {
  params.validate();
  return psi_kernel_m1(seeds::make_seed_pair(params, grid, tol));
}

hydrogen::Spectrum spectrum_tilde(int l, int k_max) {
  if (l < 2) throw Error(ErrorCode::domain, "deformed spectrum needs l >= 2");
  if (k_max < 1) throw Error(ErrorCode::domain, "k_max must be >= 1");
  hydrogen::Spectrum s;
  auto label = [l](int k) {
    std::ostringstream os;
    os << "E~_" << l - 2 << "," << k;
    return os.str();
  };
  s.entries.push_back({label(-1), -1.0 / ((l - 1.0) * (l - 1.0))});
  s.entries.push_back({label(0), -1.0 / (double(l) * l)});
  for (int k = 1; k <= k_max; ++k) s.entries.push_back({label(k), hydrogen::energy(l, k)});
  s.validate();
  return s;
}

double fernandez_supremum(int l) {
  if (l < 1) throw Error(ErrorCode::domain, "Fernandez family needs l >= 1");
  // Direct product so that the l = 1 value is exactly 1/4.
  return std::pow(l / 2.0, 2 * l + 1) * factorial(2 * l);
}

double nu2_from_gamma(int l, double gamma_l) {
  if (!std::isfinite(gamma_l) || gamma_l == 0.0) throw Error(ErrorCode::domain, "gamma_l must be finite and nonzero");
  return fernandez_supremum(l) / gamma_l;
}

DeformedPotential fernandez_potential(int l, double gamma_l, const Grid& grid) {
  const double sup = fernandez_supremum(l);
  if (!std::isfinite(gamma_l)) throw Error(ErrorCode::domain, "gamma_l must be finite");
  if (!(grid.r_min() > 0.0)) throw Error(ErrorCode::domain, "potential tables need r_min > 0", grid.r_min());
  const int a = 2 * l + 1;
  // gamma within rounding of the supremum is the boundary case itself.
  if (std::fabs(gamma_l - sup) <= 4.0 * std::numeric_limits<double>::epsilon() * sup) gamma_l = sup;
  if (gamma_l >= 0.0 && gamma_l < sup) {
    // gamma - int_0^r = 0  <=>  Q(2l+1, 2r/l) = 1 - gamma/sup; Q decreases in r.
    const double target = 1.0 - gamma_l / sup;
    double lo = 0.0, hi = 1.0;
    while (regularized_upper_gamma(a, 2.0 * hi / l) > target) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (regularized_upper_gamma(a, 2.0 * mid / l) > target ? lo : hi) = mid;
    }
    std::ostringstream msg;
    msg << "Fernandez denominator vanishes at r = " << hi << " (gamma_l = " << gamma_l
        << " lies in [0, " << sup << "))";
    throw Error(ErrorCode::singular_family, msg.str(), hi);
  }
  DeformedPotential dp{l - 1, seeds::FamilyParams::unchecked(l + 1, 0.0, sup / gamma_l), FunctionTable(grid),
                       DeformedKind::fernandez, gamma_l};
  const double excess = gamma_l - sup;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    const double log_u2 = 2.0 * l * std::log(r) - 2.0 * r / l;
    // q = u^2 / D with D = (gamma - sup) + sup Q(2l+1, 2r/l); D' = -u^2.
    double q;
    if (excess == 0.0) {
      q = std::exp(log_u2 - std::log(sup) - log_regularized_upper_gamma(a, 2.0 * r / l));
    } else {
      q = std::exp(log_u2) / (excess + sup * regularized_upper_gamma(a, 2.0 * r / l));
    }
    dp.table.values[i] = hydrogen::potential_v(l - 1, r) + 2.0 * q * (2.0 * l / r - 2.0 / l + q);
  }
  dp.validate();
  return dp;
}

FunctionTable crum_potential(const seeds::SeedPair& seeds) {
  const int l = seeds.params.l;
  const double p = seeds.pole_location;
  const Grid& grid = seeds.grid;
  // X = W(g1,g2) e^{-r/p} / r from the seeds and their first derivatives,
  // smooth and free of the exponential growth. Writing G/p + G' as
  // -r/p^2 + G_dev/p + G_dev' keeps the small-r cancellation exact.
  std::vector<double> logX(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    const auto& s = seeds.points[i];
    const double combo = -r / (p * p) + s.G_dev / p + s.G_dev_d1;
    const double X = (s.g1_d1 * s.G - s.g1 * combo) / r;
    logX[i] = std::log(std::fabs(X));
  }
  const auto d2 = derivative(grid, logX, 2);
  FunctionTable out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    out.values[i] = hydrogen::potential_v(l, r) - 2.0 * (2.0 * l - 1.0) / (r * r) - 2.0 * d2[i];
  }
  return out;
}

FunctionTable crum_state(const seeds::SeedPair& seeds, const FunctionTable& psi, double energy) {
  require_same_grid(seeds.grid, psi.grid);
  const int l = seeds.params.l;
  const double p = seeds.pole_location;
  const Grid& grid = seeds.grid;
  const double e1 = seeds::seed_energy_1(l), e2 = seeds::seed_energy_2(l);
  const auto psid = psi.d1 ? *psi.d1 : derivative(grid, psi.values, 1);
  FunctionTable out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    const auto& s = seeds.points[i];
    // Columns of the Wronskian matrices, with phi1 and phi2 divided by their
    // exponential envelopes (a common factor per column); rows are f, f', and
    // f'' - V f.
    const double s1 = -l / r + 1.0 / l;
    const double a0 = s.g1, a1 = s.g1_d1 + s1 * a0, a2 = -e1 * a0;
    const double b0 = s.G, b1 = s.G_d1 + s1 * b0 + b0 / p, b2 = -e2 * b0;
    const double c0 = psi.values[i], c1 = psid[i], c2 = -energy * c0;
    const double det3 = a0 * (b1 * c2 - b2 * c1) - b0 * (a1 * c2 - a2 * c1) + c0 * (a1 * b2 - a2 * b1);
    // a0 b1 - b0 a1 = g1 (G' + G/p) - G g1', with the cancellation removed.
    const double det2 = s.g1 * (-r / (p * p) + s.G_dev / p + s.G_dev_d1) - s.G * s.g1_d1;
    out.values[i] = det3 / det2;
  }
  return out;
}

}  // namespace isohydra::families
