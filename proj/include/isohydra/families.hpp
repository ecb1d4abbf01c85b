#pragma once

#include "isohydra/hydrogen.hpp"
#include "isohydra/numerics/grid.hpp"
#include "isohydra/seeds.hpp"

namespace isohydra::families {

enum class DeformedKind { two_param, fernandez, intermediate };

struct DeformedPotential {
  int base_l = 0;  // index of the comparison potential V_{base_l}
  seeds::FamilyParams params;
  FunctionTable table;
  DeformedKind kind = DeformedKind::two_param;
  double gamma_l = 0.0;  // Fernandez parameter; 0 for the other kinds

  // Throws Domain when a value is not finite.
  void validate() const;
};

// A = d^2/dr^2 + beta d/dr + gamma.
struct OperatorA {
  FunctionTable beta;  // d1 = beta'
  FunctionTable gamma;
  seeds::GammaVariant variant = seeds::GammaVariant::four_over_r;
};

OperatorA make_operator_A(const seeds::SeedPair& seeds,
                          seeds::GammaVariant variant = seeds::GammaVariant::four_over_r);

// psi'' + beta psi' + gamma psi. Throws MissingDerivatives without d1/d2.
FunctionTable apply_A(const OperatorA& op, const FunctionTable& psi);
// Formal adjoint: chi'' - beta chi' + (gamma - beta') chi.
FunctionTable apply_A_adjoint(const OperatorA& op, const FunctionTable& chi);

// V_{l-2} + 2 alpha'.
DeformedPotential v_tilde_two_param(const seeds::SeedPair& seeds);
DeformedPotential v_tilde_two_param(const seeds::FamilyParams& params, const Grid& grid,
                                    const ToleranceConfig& tol = {});

struct MappedState {
  FunctionTable state;
  double prefactor = 0.0;      // l(l-1) n^2 / sqrt((n^2-l^2)(n^2-l^2+2l-1))
  double measured_norm = 0.0;  // sqrt of the quadrature of state^2 over the grid
};

double mapped_prefactor(int n, int l);

// N A psi_{nl} for n >= l+1.
MappedState psi_tilde_mapped(int n, const seeds::SeedPair& seeds, const OperatorA& op);
MappedState psi_tilde_mapped(int n, const seeds::FamilyParams& params, const Grid& grid,
                             const ToleranceConfig& tol = {});

// Kernel states of A^dagger, with analytic d1 and d2:
//   psi_0  = K_0  r^l e^{-r/l} g2 / W(g1,g2)  at energy -1/l^2
//   psi_-1 = K_-1 r^l e^{-r/l} g1 / W(g2,g1)  at energy -1/(l-1)^2
// with K_0 = sqrt((1-nu1)/(2l)! (2/l)^{2l+1} (2l-1)) / (l(l-1)) and
// K_-1 = sqrt((1-nu2)/(2l (2l)!) (2/(l-1))^{2l+1} (2l-1)) / (l(l-1)).
struct KernelState {
  FunctionTable state;
  double energy = 0.0;
  double measured_norm = 0.0;
};
KernelState psi_kernel_0(const seeds::SeedPair& seeds);
KernelState psi_kernel_m1(const seeds::SeedPair& seeds);
KernelState psi_kernel_0(const seeds::FamilyParams& params, const Grid& grid, const ToleranceConfig& tol = {});
KernelState psi_kernel_m1(const seeds::FamilyParams& params, const Grid& grid, const ToleranceConfig& tol = {});

// {-1/(l-1)^2, -1/l^2, -1/(l+k)^2 for k = 1..k_max}.
hydrogen::Spectrum spectrum_tilde(int l, int k_max);

// Supremum of int_0^r x^{2l} e^{-2x/l} dx, i.e. (l/2)^{2l+1} (2l)!.
double fernandez_supremum(int l);
// nu2 of the two-parameter family at index l+1 (nu1 = 0) reproducing the
// Fernandez potential with parameter gamma_l.
double nu2_from_gamma(int l, double gamma_l);

// V_{l-1} + 2 d/dr { r^{2l} e^{-2r/l} / (gamma_l - int_0^r x^{2l} e^{-2x/l} dx) }, l >= 1.
// Throws SingularFamily when 0 <= gamma_l < supremum (the denominator has a
// zero), with the radius of that zero.
DeformedPotential fernandez_potential(int l, double gamma_l, const Grid& grid);

// Independent second-order Darboux (Crum) constructions from the tabulated
// seeds: closed-form first derivatives, stencils for the outer derivative.
//   potential: V_l - 2 (ln W(phi1, phi2))''
//   state:     W(phi1, phi2, psi) / W(phi1, phi2)
FunctionTable crum_potential(const seeds::SeedPair& seeds);
FunctionTable crum_state(const seeds::SeedPair& seeds, const FunctionTable& psi, double energy);

}  // namespace isohydra::families
