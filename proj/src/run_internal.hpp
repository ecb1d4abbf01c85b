#pragma once

#include <string>
#include <utility>
#include <vector>

#include "isohydra/families.hpp"
#include "isohydra/run.hpp"

namespace isohydra::run::detail {

// %.17g; nan and inf spelled out.
std::string format_double(double x);

// log_then_uniform on [1e-4, max(60, 4 n^2 + 40 n)] with 200 nodes per unit
// length (at least 32000), n the deepest principal index tabulated. State
// norms then meet the 1e-8 gate.
Grid tabulation_grid(const RunConfig& c, int n_deep);
// uniform on [1e-8, 40 n^2] with step 0.01.
Grid eigen_grid(const RunConfig& c, int n_deep);

std::vector<std::pair<std::string, std::string>> metadata(const RunConfig& c, const Grid& grid);

// Index of the comparison hydrogen potential.
int base_index(const RunConfig& c);
families::DeformedPotential deformed(const RunConfig& c, const Grid& grid);

// Levels of the comparison tower; absent ones are present = false.
struct Level {
  int n;
  double energy;
  bool present;
};
std::vector<Level> tower(const RunConfig& c);
int deepest(const std::vector<Level>& levels);

struct NamedState {
  std::string label;
  FunctionTable state;
  double energy;
  double norm;
};
std::vector<NamedState> states(const RunConfig& c, const Grid& grid);

}  // namespace isohydra::run::detail
