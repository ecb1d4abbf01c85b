#pragma once

#include <string>
#include <vector>

#include "isohydra/numerics/grid.hpp"

namespace isohydra::hydrogen {

struct QuantumNumbers {
  int l = 0;  // azimuthal
  int k = 1;  // radial label, k >= 1

  int n() const noexcept { return l + k; }
  static QuantumNumbers from_nl(int n, int l);
  void validate() const;
};

enum class SpectrumSource { analytic, numeric };

struct SpectrumEntry {
  std::string label;
  double energy = 0.0;
};

// Ordered bound-state energies. validate() enforces strict increase and
// negativity.
struct Spectrum {
  std::vector<SpectrumEntry> entries;
  SpectrumSource source = SpectrumSource::analytic;

  std::size_t size() const noexcept { return entries.size(); }
  double operator[](std::size_t i) const { return entries.at(i).energy; }
  std::vector<double> energies() const;
  void validate() const;
};

// l(l+1)/r^2 - 2/r
double potential_v(int l, double r);
double potential_v_d1(int l, double r);
FunctionTable potential_table(int l, const Grid& grid);

// -1/(l+k)^2
double energy(int l, int k);

// Lowest k_max levels of H_l.
Spectrum spectrum(int l, int k_max);

// Associated Laguerre polynomial L_m^alpha(x) by the three-term recurrence.
double laguerre(int m, double alpha, double x);

// Normalization constant c in psi = c r^{l+1} e^{-r/n} L_{n-l-1}^{2l+1}(2r/n),
// obtained by adaptive quadrature of the unnormalized square over [0, inf).
double radial_normalization(int n, int l);

// psi_{nl}(r) = r R_{nl}(r) with unit norm under the plain measure dr and
// positive sign near r = 0.
double radial_value(int n, int l, double r);

// psi_{nl} on the grid; d1 from the Laguerre derivative identity, d2 from the
// radial equation psi'' = (V_l - E) psi.
FunctionTable radial_eigenfunction(int n, int l, const Grid& grid);

}  // namespace isohydra::hydrogen
