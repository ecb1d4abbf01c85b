#pragma once

#include <array>
#include <string>
#include <vector>

#include "isohydra/families.hpp"
#include "isohydra/numerics/bump.hpp"
#include "isohydra/numerics/grid.hpp"
#include "isohydra/seeds.hpp"

namespace isohydra::factorization {

// b = d/dr + w, with w.d1 = w'.
struct FirstOrderOp {
  FunctionTable w;
};

// psi' + w psi. Needs psi.d1; the result carries d1 when psi carries d2.
FunctionTable apply_b(const FirstOrderOp& b, const FunctionTable& psi);
// -chi' + w chi, same derivative rules.
FunctionTable apply_b_adjoint(const FirstOrderOp& b, const FunctionTable& chi);

// f = 1/l - l/r + beta + d/dr ln[c1 g1 + c2 g2], with d1 = f'. Throws
// CombinationZero when c1 g1 + c2 g2 changes sign between adjacent nodes.
// Values are large but finite next to zeros of W(g1,g2).
FunctionTable f_general(const seeds::SeedPair& seeds, double c1, double c2);
FunctionTable f_general(const seeds::FamilyParams& params, double c1, double c2, const Grid& grid,
                        const ToleranceConfig& tol = {});

// w1 = l/r - 1/l - d/dr ln[c1 g1 + c2 g2]; errors as f_general.
FirstOrderOp w1_eval(const seeds::SeedPair& seeds, double c1, double c2);
FirstOrderOp w1_eval(const seeds::FamilyParams& params, double c1, double c2, const Grid& grid,
                     const ToleranceConfig& tol = {});

// A = b2 b1 with w2 = beta - w1 (= f).
struct Factorization {
  FirstOrderOp b1, b2;
  double c1 = 0.0, c2 = 1.0;
};
Factorization factorize(const seeds::SeedPair& seeds, double c1, double c2);

// b2 (b1 chi); chi needs d1 and d2.
FunctionTable apply_product(const Factorization& fac, const FunctionTable& chi);

// exp(int f) normalized to unit quadrature norm, integrating node to node
// with the endpoint derivatives of f. `leading` is the power of r split off
// analytically, so f - leading / r is integrated instead of f.
FunctionTable kernel_from_f(const FunctionTable& f, double leading);

// Radii where the chain with (c1, c2) is singular: sign changes of
// W(g1,g2) and of c1 g1 + c2 g2.
std::vector<double> singular_radii(const seeds::SeedPair& seeds, double c1, double c2);

// l(l-1)/r^2 - 2/r + 2[(g2')^2 - g2'' g2]/g2^2 with g2'' from the radial
// equation. Throws Domain for nu2 <= 1 and SingularFamily if g2 vanishes.
families::DeformedPotential v_star(const seeds::SeedPair& seeds);
families::DeformedPotential v_star(int l, double nu2, const Grid& grid, const ToleranceConfig& tol = {});
// V_l + 2 w1' with (c1, c2) = (0, 1) and w1' from stencils; no domain checks.
FunctionTable v_star_susy(const seeds::SeedPair& seeds);

struct StarState {
  std::string label;
  FunctionTable state;  // with d1, d2
  double energy = 0.0;
  double norm_before = 0.0;  // quadrature norm before normalization
};

// r^l e^{-r/l} / g2 at -1/(l-1)^2, then b1 psi_{nl} at -1/n^2 for
// n = l+1..n_max, each normalized on the grid.
std::vector<StarState> psi_star_states(const seeds::SeedPair& seeds, int n_max);
std::vector<StarState> psi_star_states(int l, double nu2, int n_max, const Grid& grid,
                                       const ToleranceConfig& tol = {});

struct FactorizationCertificate {
  double delta1 = 0.0;
  double delta2 = 0.0;         // nodewise mean of V* - w2^2 + w2'
  double delta2_spread = 0.0;  // max deviation from the mean
  double riccati_residual = 0.0;
  double product_residual = 0.0;
  // H_l = b1+ b1 + d1, H* = b1 b1+ + d1, H* = b2+ b2 + d2, H~ = b2 b2+ + d2
  std::array<double, 4> hamiltonian_residuals{};
  std::vector<double> singular_radii;
  std::size_t masked_nodes = 0;
  std::vector<std::string> failures;

  bool passed() const noexcept { return failures.empty(); }
};

// Evaluates the first-order chain with (c1, c2) = (0, 1), delta1 =
// -1/(l-1)^2 and delta2 measured, on any parameter set. Residuals are relative
// to the nodewise term magnitudes (Riccati) or to max |H chi| (operator
// identities on bumps at r = 2, 6, 12); nodes next to singular radii are
// masked.
FactorizationCertificate evaluate_certificate(const seeds::SeedPair& seeds, const ToleranceConfig& tol = {});
// Same, throwing CertificateFailure naming the residuals above tolerance.
FactorizationCertificate riccati_certificate(const seeds::FamilyParams& params, const Grid& grid,
                                             const ToleranceConfig& tol = {});

// Two-step chain states against the SOIT-built states of module families:
// b2 r^l e^{-r/l} / u (u = g2 for basis (0,1) against psi~_{l-2,-1}, u = g1
// for basis (1,0) against psi~_{l-2,0}) and b2 b1 psi_{nl} against
// psi~_{n,l-2} for n = l+1..n_max. Each residual is max |a - c b| / max |a|
// with c fitted by least squares. Needs a regular W(g1,g2).
struct ChainEquivalence {
  std::vector<std::string> labels;
  std::vector<double> residuals;
  double worst() const noexcept;
};
ChainEquivalence chain_state_equivalence(const seeds::SeedPair& seeds, std::array<double, 2> basis, int n_max);

// Largest relative difference of b2 b1 chi between two combinations.
double product_invariance(const seeds::SeedPair& seeds, const FunctionTable& chi, std::array<double, 2> c_a,
                          std::array<double, 2> c_b);

}  // namespace isohydra::factorization
