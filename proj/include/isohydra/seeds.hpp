#pragma once

#include <span>
#include <vector>

#include "isohydra/numerics/grid.hpp"

namespace isohydra::seeds {

// two_param: nu1 < 1 and nu2 < 1 (regular deformations of V_{l-2}).
// intermediate: nu2 > 1, nu1 unused (regular V*_{l-1}).
enum class FamilyKind { two_param, intermediate };

struct FamilyParams {
  int l = 2;
  double nu1 = 0.0;
  double nu2 = 0.0;
  FamilyKind family = FamilyKind::two_param;

  static FamilyParams two_param(int l, double nu1, double nu2);
  static FamilyParams intermediate(int l, double nu2);
  // Only l >= 2 is enforced; used for diagnostics outside the admissible
  // parameter regions.
  static FamilyParams unchecked(int l, double nu1, double nu2);

  void validate() const;
  double pole() const noexcept { return l * (l - 1.0); }
};

struct CDConstants {
  double c;
  double d;
};

// c = (2l-1)^2 / (4 l^4 (l-1)^4), d = (1 + (2l-1)^2) / (2 l^2 (l-1)^2).
CDConstants c_d_constants(int l);

// Energies of the two seed solutions: phi1 at -1/l^2, phi2 at -1/(l-1)^2.
double seed_energy_1(int l);
double seed_energy_2(int l);

// Which Coulomb coefficient enters the zeroth-order coefficient of A:
// four_over_r is the one required by the intertwining relation, one_over_r
// is the alternative kept for comparison.
enum class GammaVariant { four_over_r, one_over_r };

// Everything at one radius. g2 is carried as G = g2 e^{-r/p} (p = l(l-1)) and
// W(g1,g2) as omega = W(g1,g2) / W0 with W0 = (r/p^2) e^{r/p}, so no value
// overflows and the nu -> 0 limit is exact (omega == 1).
//
// g1_dev = g1 - 1 and G_dev = G - (1 - r/p) are the deformation parts, kept
// separately because they are far below rounding of g1 and G near r = 0.
struct SeedPoint {
  double r = 0;
  double g1 = 1, g1_d1 = 0, g1_d2 = 0;
  double G = 1, G_d1 = 0, G_d2 = 0;
  double omega = 1, omega_d1 = 0, omega_d2 = 0;
  double g1_dev = 0, G_dev = 0, G_dev_d1 = 0;
};

// Finite-r quantities derived from a SeedPoint.
struct Derived {
  double alpha, alpha_d1;
  double beta, beta_d1;
  double gamma;  // variant-dependent
};
Derived derive(int l, const SeedPoint& s, GammaVariant variant = GammaVariant::four_over_r);

double g2_value(int l, const SeedPoint& s);       // may overflow for large r
double g2_d1_value(int l, const SeedPoint& s);
double wronskian_value(int l, const SeedPoint& s);

// Continuous representation of g1, g2 and their Wronskian for one parameter
// set up to r_max, with p = l(l-1).
//
// Below 0.9 p, g2 comes from quadrature of its integral representation
// J(r) = C int_0^r F(x)/(p-x)^2 dx with F(x) = x^{2l} e^{-2x/(l-1)}. Since
// F'(p) = 0 the double pole carries no logarithm, and
//   J(r) = F(p) C [1/(p-r) - 1/p] + C int_0^r (F(x) - F(p))/(x-p)^2 dx
// is regular on both sides of the pole; this finite-part form is used from
// 0.9 p on. As an independent check, phi2 = r^{-l} e^{r/l} g2 is integrated
// by Numerov at energy -1/(l-1)^2 from quadrature data at 0.9 p, inward to
// 0.4 p (compared with the quadrature branch on [0.5 p, 0.9 p]) and outward
// past the pole (compared with the finite-part form).
class SeedModel {
 public:
  SeedModel(const FamilyParams& params, double r_max, const ToleranceConfig& tol = {});

  const FamilyParams& params() const noexcept { return params_; }
  double r_max() const noexcept { return r_max_; }
  double switch_radius() const noexcept { return switch_; }

  SeedPoint at(double r) const;
  // Sorted ascending nodes; integrals are accumulated node to node.
  std::vector<SeedPoint> sample(std::span<const double> nodes) const;

  // Each returns {G, G'}. The quadrature branch needs r < p; the finite-part
  // form works for any r >= 0; the Numerov branch covers [0.4 p, max(0.9 p,
  // min(r_max, 3 p))] and exists only when nu2 != 0 and r_max >= 0.9 p.
  std::pair<double, double> g2_quadrature(double r) const;
  std::pair<double, double> g2_finite_part(double r) const;
  std::pair<double, double> g2_continued(double r) const;
  bool has_continuation() const noexcept { return !aux_G_.empty(); }

  // Largest relative disagreement between quadrature and continuation on
  // [0.5 p, 0.9 p]; construction throws BranchMismatch above 100 ode_tol.
  double overlap_mismatch() const noexcept { return mismatch_; }
  // Same between the finite-part form and the continuation across and past
  // the pole, up to min(r_max, 3 p). Reported, not enforced: the outward
  // integration loses accuracy where the second solution outgrows phi2.
  double continuation_mismatch() const noexcept { return cont_mismatch_; }

 private:
  SeedPoint assemble(double r, double G, double Gd, double M, double G_dev) const;
  SeedPoint below(double r, double J) const;
  SeedPoint beyond(double r, double K) const;
  double integrand(double x) const;
  double finite_part_integrand(double x) const;
  double scaled_e2(double r) const;

  FamilyParams params_;
  double r_max_;
  ToleranceConfig tol_;
  double p_, C_, switch_, CFp_;
  double K_switch_ = 0.0;
  double mismatch_ = 0.0, cont_mismatch_ = 0.0;
  double aux_start_ = 0.0, aux_step_ = 0.0;
  std::vector<double> aux_G_, aux_G1_, aux_G2_;
};

struct SeedPair {
  FamilyParams params;
  Grid grid;
  std::vector<SeedPoint> points;
  FunctionTable g1;           // with d1, d2
  FunctionTable g2_scaled;    // G = g2 e^{-r/p}, with d1, d2
  FunctionTable omega;        // with d1, d2
  FunctionTable wronskian_g;  // W(g1, g2) = g1' g2 - g1 g2'
  double pole_location = 0.0;
  double overlap_mismatch = 0.0;
  double continuation_mismatch = 0.0;

  // Tables that grow exponentially; entries overflow to inf for very large r.
  FunctionTable g2() const;
  FunctionTable phi1() const;  // with d1, d2
  FunctionTable phi2() const;  // with d1, d2

  // Radii where W(g1,g2) (resp. g2, g1) changes sign between adjacent
  // nodes, located by linear interpolation.
  std::vector<double> wronskian_zeros() const;
  std::vector<double> g2_zeros() const;
  std::vector<double> g1_zeros() const;
};

SeedPair make_seed_pair(const FamilyParams& params, const Grid& grid, const ToleranceConfig& tol = {});

// Throws SingularFamily at the first sign change of W(g1,g2).
void require_regular_wronskian(const SeedPair& seeds);

struct Coefficients {
  FunctionTable alpha;  // d1 = alpha'
  FunctionTable beta;   // d1 = beta'
  FunctionTable gamma;
  GammaVariant variant;
};
Coefficients coefficients(const SeedPair& seeds, GammaVariant variant = GammaVariant::four_over_r);

// Constant d-hat in 2 gamma = beta^2 - beta' - 2 V_l - d-hat implied by A phi_i = 0,
// averaged over nodes where the seeds are well conditioned.
struct ConstantMeasurement {
  double mean;
  double spread;  // max |sample - mean|
  std::size_t samples;
};
ConstantMeasurement measured_gamma_constant(const SeedPair& seeds);

// Relative residuals of the nonlinear equation for beta, as printed and with
// beta'^2/2 in place of beta^2/2. Diagnostics only.
struct NonlinearResiduals {
  double printed;
  double corrected;
};
NonlinearResiduals nonlinear_beta_residuals(const SeedPair& seeds);

// H_l phi_i = E_i phi_i residuals with phi'' from stencils. `scaled` divides
// by max|phi_i| over the interior; `pointwise` divides nodewise by
// |phi''| + |V phi| + |E phi| + k |phi'| with k = sqrt(|V| + |E|). Only nodes
// with centred stencils count.
struct SeedResidual {
  double scaled;
  double pointwise;
};
std::pair<SeedResidual, SeedResidual> seed_residuals(const SeedPair& seeds, double r_lo = 0.0,
                                                     double r_hi = 0.0);

// Pointwise evaluators. Each builds a SeedModel reaching r.
double g1_eval(const FamilyParams& params, double r);
double g2_eval(const FamilyParams& params, double r, const ToleranceConfig& tol = {});
double beta_eval(const FamilyParams& params, double r, const ToleranceConfig& tol = {});
double alpha_eval(const FamilyParams& params, double r, const ToleranceConfig& tol = {});
double alpha_prime(const FamilyParams& params, double r, const ToleranceConfig& tol = {});
// Richardson-extrapolated central difference of alpha with step
// fd_step_scale * max(1, r).
double alpha_prime_stencil(const FamilyParams& params, double r, const ToleranceConfig& tol = {});
double gamma_coeff(const FamilyParams& params, double r, GammaVariant variant,
                   const ToleranceConfig& tol = {});
double wronskian_g(const FamilyParams& params, double r, const ToleranceConfig& tol = {});

}  // namespace isohydra::seeds
