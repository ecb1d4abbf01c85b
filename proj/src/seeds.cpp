#include "isohydra/seeds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "isohydra/error.hpp"
#include "isohydra/hydrogen.hpp"
#include "isohydra/numerics/finite_difference.hpp"
#include "isohydra/numerics/numerov.hpp"
#include "isohydra/numerics/quadrature.hpp"
#include "isohydra/numerics/special_functions.hpp"

namespace isohydra::seeds {

namespace {

constexpr double kSwitchFraction = 0.9;
constexpr double kAuxStartFraction = 0.4;
constexpr double kAuxStep = 2e-3;

void require_l(int l) {
  if (l < 2) throw Error(ErrorCode::domain, "seed functions need l >= 2");
}

void require_finite(double nu1, double nu2) {
  if (!std::isfinite(nu1) || !std::isfinite(nu2))
    throw Error(ErrorCode::domain, "family parameters must be finite");
}

// 1 - nu1 P(2l+1, 2r/l), written so neither limit loses digits.
double g1_closed(int l, double nu1, double r) {
  const double x = 2.0 * r / l;
  const double P = regularized_lower_gamma(2 * l + 1, x);
  if (P < 0.5) return 1.0 - nu1 * P;
  return (1.0 - nu1) + nu1 * regularized_upper_gamma(2 * l + 1, x);
}

// (2/l) (2r/l)^{2l} e^{-2r/l} / (2l)!  (the derivative of P(2l+1, 2r/l))
double rho1(int l, double r) {
  if (r == 0.0) return 0.0;
  return std::exp(std::log(2.0 / l) + 2.0 * l * std::log(2.0 * r / l) - 2.0 * r / l - log_factorial(2 * l));
}

double hermite5(double t, double h, double f0, double d0, double s0, double f1, double d1, double s1) {
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double h00 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
  const double h10 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
  const double h20 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
  const double h01 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
  const double h11 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
  const double h21 = 0.5 * (t3 - 2.0 * t4 + t5);
  return h00 * f0 + h * h10 * d0 + h * h * h20 * s0 + h01 * f1 + h * h11 * d1 + h * h * h21 * s1;
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
  if (!v.empty() && v.back() == 0.0) out.push_back(grid[v.size() - 1]);
  return out;
}

}  // namespace

FamilyParams FamilyParams::two_param(int l, double nu1, double nu2) {
  FamilyParams p{l, nu1, nu2, FamilyKind::two_param};
  p.validate();
  return p;
}

FamilyParams FamilyParams::intermediate(int l, double nu2) {
  FamilyParams p{l, 0.0, nu2, FamilyKind::intermediate};
  p.validate();
  return p;
}

FamilyParams FamilyParams::unchecked(int l, double nu1, double nu2) {
  require_l(l);
  require_finite(nu1, nu2);
  return FamilyParams{l, nu1, nu2, FamilyKind::two_param};
}

void FamilyParams::validate() const {
  require_l(l);
  require_finite(nu1, nu2);
  if (family == FamilyKind::two_param) {
    if (!(nu1 < 1.0) || !(nu2 < 1.0))
      throw Error(ErrorCode::domain, "two-parameter family needs nu1 < 1 and nu2 < 1");
  } else {
    if (!(nu2 > 1.0)) throw Error(ErrorCode::domain, "intermediate family needs nu2 > 1");
  }
}

CDConstants c_d_constants(int l) {
  require_l(l);
  const double L = l, m = l - 1.0, q = 2.0 * l - 1.0;
  return {q * q / (4.0 * std::pow(L, 4) * std::pow(m, 4)), (1.0 + q * q) / (2.0 * L * L * m * m)};
}

double seed_energy_1(int l) {
  require_l(l);
  return -1.0 / (double(l) * l);
}

double seed_energy_2(int l) {
  require_l(l);
  return -1.0 / ((l - 1.0) * (l - 1.0));
}

Derived derive(int l, const SeedPoint& s, GammaVariant variant) {
  const double p = l * (l - 1.0), q = 2.0 * l - 1.0, r = s.r;
  const double ratio = s.omega_d1 / s.omega;
  Derived d{};
  d.alpha = -q / p - ratio;
  d.alpha_d1 = -s.omega_d2 / s.omega + ratio * ratio;
  d.beta = d.alpha + q / r;
  d.beta_d1 = d.alpha_d1 - q / (r * r);
  const double dd = c_d_constants(l).d;
  const double two_gamma =
      d.alpha * d.alpha - d.alpha_d1 + 2.0 * q * d.alpha / r + 2.0 * l * (l - 2.0) / (r * r) + 4.0 / r - dd;
  d.gamma = 0.5 * two_gamma;
  if (variant == GammaVariant::one_over_r) d.gamma -= 1.5 / r;
  return d;
}

double g2_value(int l, const SeedPoint& s) {
  return std::exp(s.r / (l * (l - 1.0))) * s.G;
}

double g2_d1_value(int l, const SeedPoint& s) {
  const double p = l * (l - 1.0);
  return std::exp(s.r / p) * (s.G / p + s.G_d1);
}

double wronskian_value(int l, const SeedPoint& s) {
  const double p = l * (l - 1.0);
  return s.r / (p * p) * std::exp(s.r / p) * s.omega;
}

SeedModel::SeedModel(const FamilyParams& params, double r_max, const ToleranceConfig& tol)
    : params_(params), r_max_(r_max), tol_(tol) {
  require_l(params.l);
  require_finite(params.nu1, params.nu2);
  tol.validate();
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw Error(ErrorCode::domain, "seed model needs 0 < r_max < inf");
  const int l = params.l;
  p_ = l * (l - 1.0);
  C_ = std::exp((2.0 * l - 1.0) * std::log(2.0 / (l - 1.0)) - log_factorial(2 * l - 1));
  CFp_ = std::exp(std::log(C_) + 2.0 * l * std::log(p_) - 2.0 * l);
  switch_ = kSwitchFraction * p_;
  if (params.nu2 == 0.0 || r_max < switch_) return;

  const auto fp = [this](double x) { return finite_part_integrand(x); };
  K_switch_ = adaptive_quad(fp, 0.0, switch_, tol.quad_tol).value;

  // Numerov integration of phi2 seeded with two quadrature values at 0.9 p:
  // inward over the overlap window, where phi2 dominates the second solution,
  // and outward across the pole.
  const double h = kAuxStep * std::clamp(std::pow(tol.ode_tol / 1e-10, 0.25), 0.25, 4.0);
  const double end = std::max(switch_, std::min(r_max, 3.0 * p_)) + 6.0 * h;
  const auto m_back = static_cast<std::size_t>(std::ceil((switch_ - kAuxStartFraction * p_) / h));
  const auto m_fwd = std::max<std::size_t>(static_cast<std::size_t>(std::ceil((end - switch_) / h)), 4);
  aux_step_ = h;
  aux_start_ = switch_ - m_back * h;
  const Grid back = Grid::uniform(aux_start_, switch_ + h, m_back + 2);
  const Grid fwd = Grid::uniform(switch_, switch_ + m_fwd * h, m_fwd + 1);

  const double mu_e = 1.0 / (l - 1.0);
  auto phi2_at = [&](double r) {
    return std::exp(-l * std::log(r) + r * mu_e) * g2_quadrature(r).first;
  };
  const double u_seed = phi2_at(switch_), u_next = phi2_at(switch_ + h);
  const OdeSolution inward = ode_integrate_schrodinger_two_point(
      hydrogen::potential_table(l, back), seed_energy_2(l), u_next, u_seed, Direction::backward);
  const OdeSolution outward = ode_integrate_schrodinger_two_point(
      hydrogen::potential_table(l, fwd), seed_energy_2(l), u_seed, u_next, Direction::forward);

  const std::size_t n = m_back + m_fwd + 1;
  aux_G_.resize(n);
  aux_G1_.resize(n);
  aux_G2_.resize(n);
  auto store = [&](std::size_t i, const OdeSolution& sol, std::size_t j) {
    const double r = sol.u.grid[j];
    const double scale = std::exp(sol.log_scale[j] + l * std::log(r) - r * mu_e);
    const double mu = l / r - mu_e;
    const double G = sol.u.values[j] * scale;
    const double Gd = ((*sol.u.d1)[j] + mu * sol.u.values[j]) * scale;
    aux_G_[i] = G;
    aux_G1_[i] = Gd;
    aux_G2_[i] = (2.0 * l / r - 2.0 * mu_e) * Gd + 2.0 * mu_e * G / r;
  };
  for (std::size_t i = 0; i < m_back; ++i) store(i, inward, i);
  for (std::size_t j = 0; j <= m_fwd; ++j) store(m_back + j, outward, j);

  // Relative max-norm distance of {G, G'} between two branches on [a, b].
  auto compare = [](auto&& first, auto&& second, double a, double b) {
    constexpr int kSamples = 41;
    double max_g = 0.0, max_gd = 0.0, dg = 0.0, dgd = 0.0;
    for (int k = 0; k < kSamples; ++k) {
      const double r = a + (b - a) * k / (kSamples - 1.0);
      const auto [u, ud] = first(r);
      const auto [v, vd] = second(r);
      max_g = std::max(max_g, std::fabs(u));
      max_gd = std::max(max_gd, std::fabs(ud));
      dg = std::max(dg, std::fabs(u - v));
      dgd = std::max(dgd, std::fabs(ud - vd));
    }
    return std::max(dg / max_g, dgd / max_gd);
  };
  const auto quad = [this](double r) { return g2_quadrature(r); };
  const auto cont = [this](double r) { return g2_continued(r); };
  const auto fin = [this](double r) { return g2_finite_part(r); };
  mismatch_ = compare(quad, cont, 0.5 * p_, switch_);
  const double hi = std::min(r_max, 3.0 * p_);
  if (hi > switch_) cont_mismatch_ = compare(fin, cont, switch_, hi);
  if (!(mismatch_ <= 100.0 * tol.ode_tol)) {
    std::ostringstream msg;
    msg << "g2 quadrature and ODE continuation disagree by " << mismatch_ << " (relative) on ["
        << 0.5 * p_ << ", " << switch_ << "]";
    throw Error(ErrorCode::branch_mismatch, msg.str(), switch_);
  }
}

double SeedModel::integrand(double x) const {
  if (x <= 0.0) return 0.0;
  const int l = params_.l;
  const double d = p_ - x;
  return std::exp(std::log(C_) + 2.0 * l * std::log(x) - 2.0 * x / (l - 1.0)) / (d * d);
}

// C (F(x) - F(p)) / (x - p)^2 with F(x)/F(p) = exp(2l (log1p(t) - t)), t = x/p - 1.
double SeedModel::finite_part_integrand(double x) const {
  const int l = params_.l;
  const double t = (x - p_) / p_;
  if (std::fabs(t) < 1e-6) return CFp_ * (-l + 4.0 * l * t / 3.0) / (p_ * p_);
  double lambda;
  if (std::fabs(t) < 0.1) {
    // log1p(t) - t = sum_{k>=2} (-1)^{k+1} t^k / k
    lambda = 0.0;
    double term = -t * t;
    for (int k = 2; k < 40; ++k) {
      lambda += term / k;
      term *= -t;
      if (std::fabs(term) < 1e-18 * std::fabs(lambda)) break;
    }
  } else {
    lambda = t <= -1.0 ? -INFINITY : std::log1p(t) - t;
  }
  return CFp_ * std::expm1(2.0 * l * lambda) / (p_ * p_ * t * t);
}

double SeedModel::scaled_e2(double r) const {
  if (r <= 0.0) return 0.0;
  const int l = params_.l;
  return std::exp(std::log(C_) + (2.0 * l - 1.0) * std::log(r) - 2.0 * r / (l - 1.0));
}

std::pair<double, double> SeedModel::g2_quadrature(double r) const {
  if (!(r >= 0.0) || !(r < p_)) throw Error(ErrorCode::domain, "quadrature branch of g2 needs 0 <= r < l(l-1)", r);
  const double J = r == 0.0 ? 0.0 : adaptive_quad([this](double x) { return integrand(x); }, 0.0, r, tol_.quad_tol).value;
  const SeedPoint s = below(r, J);
  return {s.G, s.G_d1};
}

std::pair<double, double> SeedModel::g2_finite_part(double r) const {
  if (!(r >= 0.0)) throw Error(ErrorCode::domain, "radius must be nonnegative", r);
  const double K = adaptive_quad([this](double x) { return finite_part_integrand(x); }, 0.0, r, tol_.quad_tol).value;
  const SeedPoint s = beyond(r, K);
  return {s.G, s.G_d1};
}

std::pair<double, double> SeedModel::g2_continued(double r) const {
  if (aux_G_.empty()) throw Error(ErrorCode::domain, "no ODE continuation for these parameters", r);
  const int l = params_.l;
  const double x = (r - aux_start_) / aux_step_;
  if (!(x >= 0.0) || x > aux_G_.size() - 1.0)
    throw Error(ErrorCode::domain, "radius outside the ODE continuation range", r);
  const auto j = std::min(static_cast<std::size_t>(x), aux_G_.size() - 2);
  const double t = x - j, h = aux_step_;
  const double ra = aux_start_ + j * h, rb = ra + h;
  const double mu_e = 1.0 / (l - 1.0);
  // Third derivative from differentiating the ODE for G.
  auto third = [&](std::size_t i, double rr) {
    return (2.0 * l / rr - 2.0 * mu_e) * aux_G2_[i] + (-2.0 * l / (rr * rr) + 2.0 * mu_e / rr) * aux_G1_[i] -
           2.0 * mu_e * aux_G_[i] / (rr * rr);
  };
  const double G = hermite5(t, h, aux_G_[j], aux_G1_[j], aux_G2_[j], aux_G_[j + 1], aux_G1_[j + 1], aux_G2_[j + 1]);
  const double Gd = hermite5(t, h, aux_G1_[j], aux_G2_[j], third(j, ra), aux_G1_[j + 1], aux_G2_[j + 1], third(j + 1, rb));
  return {G, Gd};
}

// M = -p^2 (G/p + G') / r, the factor of g1 in the reduced Wronskian.
SeedPoint SeedModel::below(double r, double J) const {
  const double nu2 = params_.nu2, p = p_;
  const double E2 = scaled_e2(r);
  const double G = (1.0 - r / p) * (1.0 + nu2 * J);
  const double Gd = -(1.0 + nu2 * J) / p + nu2 * r * E2 / (p * (p - r));
  const double M = (1.0 + nu2 * J) - nu2 * p * E2 / (p - r);
  SeedPoint s = assemble(r, G, Gd, M, (1.0 - r / p) * nu2 * J);
  s.G_dev_d1 = -nu2 * J / p + nu2 * r * E2 / (p * (p - r));
  return s;
}

SeedPoint SeedModel::beyond(double r, double K) const {
  const double nu2 = params_.nu2, p = p_;
  const double S = 1.0 + nu2 * (K - CFp_ / p);
  const double R = finite_part_integrand(r);
  const double G = (p - r) / p * S + nu2 * CFp_ / p;
  const double Gd = -S / p + (p - r) / p * nu2 * R;
  const double M = r == 0.0 ? 1.0 : S - nu2 * CFp_ / r - nu2 * p * (p - r) * R / r;
  SeedPoint s = assemble(r, G, Gd, M, (p - r) / p * (S - 1.0) + nu2 * CFp_ / p);
  s.G_dev_d1 = -(S - 1.0) / p + (p - r) / p * nu2 * R;
  return s;
}

SeedPoint SeedModel::assemble(double r, double G, double Gd, double M, double G_dev) const {
  const int l = params_.l;
  const double nu1 = params_.nu1, nu2 = params_.nu2, p = p_, q = 2.0 * l - 1.0;
  SeedPoint s;
  s.r = r;
  s.g1 = g1_closed(l, nu1, r);
  s.g1_dev = -nu1 * regularized_lower_gamma(2 * l + 1, 2.0 * r / l);
  s.G = G;
  s.G_d1 = Gd;
  s.G_dev = G_dev;
  if (r == 0.0) {
    s.G_d2 = 0.0;
    s.omega = 1.0;
    return s;
  }
  const double rho = rho1(l, r);
  s.g1_d1 = -nu1 * rho;
  s.g1_d2 = s.g1_d1 * (2.0 * l / r - 2.0 / l);
  s.G_d2 = (2.0 * l / r - 2.0 / (l - 1.0)) * Gd + 2.0 * G / ((l - 1.0) * r);

  const double E2 = scaled_e2(r);
  const double pr = p * p / r;
  s.omega = s.g1 * M + pr * s.g1_d1 * G;

  const double A = -nu2 * s.g1 * E2;
  const double B = (pr - p) * s.g1_d1 * G;
  s.omega_d1 = q * (A + B) / r;
  const double Ad = -nu2 * (s.g1_d1 * E2 + s.g1 * E2 * (q / r - 2.0 / (l - 1.0)));
  const double Bd = -(pr / r) * s.g1_d1 * G + (pr - p) * (s.g1_d2 * G + s.g1_d1 * Gd);
  s.omega_d2 = q * ((Ad + Bd) / r - (A + B) / (r * r));
  return s;
}

SeedPoint SeedModel::at(double r) const {
  if (!(r >= 0.0) || r > r_max_ * (1.0 + 1e-12)) throw Error(ErrorCode::domain, "radius outside the seed model range", r);
  if (params_.nu2 == 0.0) return assemble(r, 1.0 - r / p_, -1.0 / p_, 1.0, 0.0);
  const auto f = [this](double x) { return integrand(x); };
  const auto fp = [this](double x) { return finite_part_integrand(x); };
  if (r < switch_) return below(r, r == 0.0 ? 0.0 : adaptive_quad(f, 0.0, r, tol_.quad_tol).value);
  return beyond(r, K_switch_ + adaptive_quad(fp, switch_, r, tol_.quad_tol).value);
}

std::vector<SeedPoint> SeedModel::sample(std::span<const double> nodes) const {
  std::vector<SeedPoint> out;
  out.reserve(nodes.size());
  const auto f = [this](double x) { return integrand(x); };
  const auto fp = [this](double x) { return finite_part_integrand(x); };
  const double span_beyond = std::max(r_max_ - switch_, 1.0);
  double J = 0.0, K = K_switch_, last = 0.0, last_beyond = switch_;
  for (const double r : nodes) {
    if (r < last) throw Error(ErrorCode::domain, "seed sample nodes must be ascending", r);
    if (!(r <= r_max_ * (1.0 + 1e-12))) throw Error(ErrorCode::domain, "radius outside the seed model range", r);
    if (params_.nu2 == 0.0) {
      out.push_back(assemble(r, 1.0 - r / p_, -1.0 / p_, 1.0, 0.0));
    } else if (r < switch_) {
      if (r > last) J += adaptive_quad(f, last, r, tol_.quad_tol * std::max((r - last) / switch_, 1e-6)).value;
      out.push_back(below(r, J));
    } else {
      if (r > last_beyond)
        K += adaptive_quad(fp, last_beyond, r, tol_.quad_tol * std::max((r - last_beyond) / span_beyond, 1e-6)).value;
      last_beyond = r;
      out.push_back(beyond(r, K));
    }
    last = r;
  }
  return out;
}

FunctionTable SeedPair::g2() const {
  const double p = pole_location;
  FunctionTable t(grid);
  t.d1 = std::vector<double>(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double e = std::exp(grid[i] / p);
    t.values[i] = e * points[i].G;
    (*t.d1)[i] = e * (points[i].G / p + points[i].G_d1);
  }
  return t;
}

FunctionTable SeedPair::phi1() const {
  const int l = params.l;
  const double E = seed_energy_1(l);
  FunctionTable t(grid);
  t.d1 = std::vector<double>(grid.size());
  t.d2 = std::vector<double>(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    const double h = std::exp(-l * std::log(r) + r / l);
    const auto& s = points[i];
    t.values[i] = h * s.g1;
    (*t.d1)[i] = h * (s.g1 * (-l / r + 1.0 / l) + s.g1_d1);
    (*t.d2)[i] = (hydrogen::potential_v(l, r) - E) * t.values[i];
  }
  return t;
}

FunctionTable SeedPair::phi2() const {
  const int l = params.l;
  const double E = seed_energy_2(l), mu = 1.0 / (l - 1.0);
  FunctionTable t(grid);
  t.d1 = std::vector<double>(grid.size());
  t.d2 = std::vector<double>(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    const double m = std::exp(-l * std::log(r) + r * mu);
    const auto& s = points[i];
    t.values[i] = m * s.G;
    (*t.d1)[i] = m * (s.G * (-l / r + mu) + s.G_d1);
    (*t.d2)[i] = (hydrogen::potential_v(l, r) - E) * t.values[i];
  }
  return t;
}

std::vector<double> SeedPair::wronskian_zeros() const { return sign_changes(grid, omega.values); }
std::vector<double> SeedPair::g2_zeros() const { return sign_changes(grid, g2_scaled.values); }
std::vector<double> SeedPair::g1_zeros() const { return sign_changes(grid, g1.values); }

SeedPair make_seed_pair(const FamilyParams& params, const Grid& grid, const ToleranceConfig& tol) {
  if (!(grid.r_min() > 0.0)) throw Error(ErrorCode::domain, "seed tables need r_min > 0", grid.r_min());
  const SeedModel model(params, grid.r_max(), tol);
  SeedPair sp{params,
              grid,
              model.sample(grid.nodes()),
              FunctionTable(grid),
              FunctionTable(grid),
              FunctionTable(grid),
              FunctionTable(grid),
              params.pole(),
              model.overlap_mismatch(),
              model.continuation_mismatch()};
  const std::size_t n = grid.size();
  const int l = params.l;
  const double p = params.pole(), K = (1.0 - 2.0 * l) / (p * p);
  for (auto* t : {&sp.g1, &sp.g2_scaled, &sp.omega}) {
    t->d1 = std::vector<double>(n);
    t->d2 = std::vector<double>(n);
  }
  sp.wronskian_g.d1 = std::vector<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = sp.points[i];
    const double r = grid[i];
    sp.g1.values[i] = s.g1;
    (*sp.g1.d1)[i] = s.g1_d1;
    (*sp.g1.d2)[i] = s.g1_d2;
    sp.g2_scaled.values[i] = s.G;
    (*sp.g2_scaled.d1)[i] = s.G_d1;
    (*sp.g2_scaled.d2)[i] = s.G_d2;
    sp.omega.values[i] = s.omega;
    (*sp.omega.d1)[i] = s.omega_d1;
    (*sp.omega.d2)[i] = s.omega_d2;
    const double W = wronskian_value(l, s);
    sp.wronskian_g.values[i] = W;
    (*sp.wronskian_g.d1)[i] = 2.0 * (l / r - 1.0 / l) * W + K * s.g1 * g2_value(l, s);
  }
  return sp;
}

void require_regular_wronskian(const SeedPair& seeds) {
  for (std::size_t i = 0; i < seeds.omega.size(); ++i)
    if (!std::isfinite(seeds.omega.values[i]))
      throw Error(ErrorCode::singular_family, "non-finite Wronskian", seeds.grid[i]);
  const auto zeros = seeds.wronskian_zeros();
  if (!zeros.empty()) {
    std::ostringstream msg;
    msg << "W(g1,g2) changes sign near r = " << zeros.front() << " (l=" << seeds.params.l
        << ", nu1=" << seeds.params.nu1 << ", nu2=" << seeds.params.nu2 << ")";
    throw Error(ErrorCode::singular_family, msg.str(), zeros.front());
  }
}

Coefficients coefficients(const SeedPair& seeds, GammaVariant variant) {
  require_regular_wronskian(seeds);
  const std::size_t n = seeds.grid.size();
  Coefficients c{FunctionTable(seeds.grid), FunctionTable(seeds.grid), FunctionTable(seeds.grid), variant};
  c.alpha.d1 = std::vector<double>(n);
  c.beta.d1 = std::vector<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Derived d = derive(seeds.params.l, seeds.points[i], variant);
    c.alpha.values[i] = d.alpha;
    (*c.alpha.d1)[i] = d.alpha_d1;
    c.beta.values[i] = d.beta;
    (*c.beta.d1)[i] = d.beta_d1;
    c.gamma.values[i] = d.gamma;
  }
  return c;
}

ConstantMeasurement measured_gamma_constant(const SeedPair& seeds) {
  const int l = seeds.params.l;
  const double p = seeds.pole_location, e1 = seed_energy_1(l), e2 = seed_energy_2(l);
  const double r_hi = std::min(seeds.grid.r_max(), 30.0 * l);
  std::vector<double> samples;
  for (std::size_t i = 0; i < seeds.grid.size(); ++i) {
    const double r = seeds.grid[i];
    if (r < 0.5 || r > r_hi) continue;
    const auto& s = seeds.points[i];
    if (!(std::fabs(s.omega) > 1e-8)) continue;
    const Derived d = derive(l, s);
    const double V = hydrogen::potential_v(l, r);
    const double base = d.beta * d.beta - d.beta_d1 - 2.0 * V;
    const double src = -(l / r - 1.0 / l);
    if (std::fabs(s.g1) > 1e-6) {
      const double gamma = -(V - e1) - d.beta * (src + s.g1_d1 / s.g1);
      samples.push_back(base - 2.0 * gamma);
    }
    if (std::fabs(s.G) > 1e-6) {
      const double gamma = -(V - e2) - d.beta * (src + 1.0 / p + s.G_d1 / s.G);
      samples.push_back(base - 2.0 * gamma);
    }
  }
  if (samples.empty()) throw Error(ErrorCode::grid_too_coarse, "no well-conditioned nodes for the gamma constant");
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= samples.size();
  double spread = 0.0;
  for (double x : samples) spread = std::max(spread, std::fabs(x - mean));
  return {mean, spread, samples.size()};
}

NonlinearResiduals nonlinear_beta_residuals(const SeedPair& seeds) {
  const Coefficients co = coefficients(seeds);
  const auto& b = co.beta.values;
  const auto& bd = *co.beta.d1;
  const std::vector<double> bdd = derivative(seeds.grid, bd, 1);
  const double c = c_d_constants(seeds.params.l).c;
  NonlinearResiduals out{0.0, 0.0};
  const std::size_t n = b.size();
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const double t1 = b[i] * bdd[i];
    const double t3 = (2.0 * co.gamma.values[i] - bd[i] - 0.5 * b[i] * b[i]) * b[i] * b[i];
    const double printed_t2 = 0.5 * b[i] * b[i];
    const double corrected_t2 = 0.5 * bd[i] * bd[i];
    const double rp = std::fabs(t1 - printed_t2 + t3 + 2.0 * c) /
                      (std::fabs(t1) + printed_t2 + std::fabs(t3) + 2.0 * c);
    const double rc = std::fabs(t1 - corrected_t2 + t3 + 2.0 * c) /
                      (std::fabs(t1) + corrected_t2 + std::fabs(t3) + 2.0 * c);
    out.printed = std::max(out.printed, rp);
    out.corrected = std::max(out.corrected, rc);
  }
  return out;
}

std::pair<SeedResidual, SeedResidual> seed_residuals(const SeedPair& seeds, double r_lo, double r_hi) {
  const int l = seeds.params.l;
  const Grid& grid = seeds.grid;
  const std::size_t n = grid.size();
  const auto stencils = grid.stencils(2);
  const auto stencils1 = grid.stencils(1);
  if (r_hi <= 0.0) r_hi = grid.r_max();
  const double mu2 = 1.0 / (l - 1.0);

  // phi_i = exp(L(r)) * g(r); stencils are evaluated relative to exp(L(r_i))
  // so that nothing overflows.
  auto run = [&](double E, auto logh, const std::vector<double>& g) {
    std::vector<double> logmag(n);
    double logmax = -INFINITY;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      logmag[i] = logh(grid[i]) + std::log(std::fabs(g[i]));
      logmax = std::max(logmax, logmag[i]);
    }
    SeedResidual res{0.0, 0.0};
    // nodes with centred stencils only
    for (std::size_t i = 2; i + 2 < n; ++i) {
      const double r = grid[i];
      if (r < r_lo || r > r_hi) continue;
      const double Li = logh(r);
      double d1 = 0.0, d2 = 0.0;
      for (int k = 0; k < 5; ++k) {
        const std::size_t j = stencils[i].first + k;
        d2 += stencils[i].w[k] * std::exp(logh(grid[j]) - Li) * g[j];
        const std::size_t j1 = stencils1[i].first + k;
        d1 += stencils1[i].w[k] * std::exp(logh(grid[j1]) - Li) * g[j1];
      }
      const double V = hydrogen::potential_v(l, r);
      const double resid = std::fabs(-d2 + (V - E) * g[i]);
      // k |phi'| keeps the scale finite at zeros of phi, where phi'' and V phi vanish together
      const double k = std::sqrt(std::fabs(V) + std::fabs(E));
      const double denom = std::fabs(d2) + std::fabs(V * g[i]) + std::fabs(E * g[i]) + k * std::fabs(d1);
      if (denom > 0.0) res.pointwise = std::max(res.pointwise, resid / denom);
      res.scaled = std::max(res.scaled, resid * std::exp(Li - logmax));
    }
    return res;
  };
  std::vector<double> g1 = seeds.g1.values, G = seeds.g2_scaled.values;
  const auto r1 = run(seed_energy_1(l), [l](double r) { return -l * std::log(r) + r / l; }, g1);
  const auto r2 = run(seed_energy_2(l), [l, mu2](double r) { return -l * std::log(r) + r * mu2; }, G);
  return {r1, r2};
}

namespace {

SeedModel model_reaching(const FamilyParams& params, double r, const ToleranceConfig& tol) {
  return SeedModel(params, std::max(1.0, r) * 1.05 + 0.1, tol);
}

void require_positive_r(double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::domain, "radius must be positive", r);
}

Derived derived_at(const FamilyParams& params, double r, const ToleranceConfig& tol, GammaVariant v) {
  require_positive_r(r);
  const SeedPoint s = model_reaching(params, r, tol).at(r);
  if (!(std::fabs(s.omega) > 1e-14) || !std::isfinite(s.omega))
    throw Error(ErrorCode::singular_family, "W(g1,g2) vanishes", r);
  return derive(params.l, s, v);
}

}  // namespace

double g1_eval(const FamilyParams& params, double r) {
  require_l(params.l);
  if (!(r >= 0.0)) throw Error(ErrorCode::domain, "radius must be nonnegative", r);
  return g1_closed(params.l, params.nu1, r);
}

double g2_eval(const FamilyParams& params, double r, const ToleranceConfig& tol) {
  if (!(r >= 0.0)) throw Error(ErrorCode::domain, "radius must be nonnegative", r);
  return g2_value(params.l, model_reaching(params, r, tol).at(r));
}

double beta_eval(const FamilyParams& params, double r, const ToleranceConfig& tol) {
  require_positive_r(r);
  const int l = params.l;
  const SeedPoint s = model_reaching(params, r, tol).at(r);
  // K g1 g2 / (g2' g1 - g1' g2) with the common e^{r/p} removed.
  const double p = params.pole(), K = (1.0 - 2.0 * l) / (p * p);
  const double denom = (s.G_d1 + s.G / p) * s.g1 - s.g1_d1 * s.G;
  if (denom == 0.0 || !std::isfinite(denom)) throw Error(ErrorCode::singular_family, "W(g1,g2) vanishes", r);
  return K * s.g1 * s.G / denom;
}

double alpha_eval(const FamilyParams& params, double r, const ToleranceConfig& tol) {
  return derived_at(params, r, tol, GammaVariant::four_over_r).alpha;
}

double alpha_prime(const FamilyParams& params, double r, const ToleranceConfig& tol) {
  return derived_at(params, r, tol, GammaVariant::four_over_r).alpha_d1;
}

double alpha_prime_stencil(const FamilyParams& params, double r, const ToleranceConfig& tol) {
  require_positive_r(r);
  const double h = tol.fd_step_scale * std::max(1.0, r);
  if (!(r - 2.0 * h > 0.0)) throw Error(ErrorCode::grid_too_coarse, "stencil step too large for this radius", r);
  const SeedModel model = model_reaching(params, r + 2.0 * h, tol);
  auto a = [&](double x) { return derive(params.l, model.at(x)).alpha; };
  return (-a(r + 2.0 * h) + 8.0 * a(r + h) - 8.0 * a(r - h) + a(r - 2.0 * h)) / (12.0 * h);
}

double gamma_coeff(const FamilyParams& params, double r, GammaVariant variant, const ToleranceConfig& tol) {
  return derived_at(params, r, tol, variant).gamma;
}

double wronskian_g(const FamilyParams& params, double r, const ToleranceConfig& tol) {
  if (!(r >= 0.0)) throw Error(ErrorCode::domain, "radius must be nonnegative", r);
  return wronskian_value(params.l, model_reaching(params, r, tol).at(r));
}

}  // namespace isohydra::seeds
