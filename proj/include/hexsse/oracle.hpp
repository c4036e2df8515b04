#pragma once

#include <span>
#include <string>
#include <vector>

#include "hexsse/graph.hpp"
#include "hexsse/lattice.hpp"
#include "hexsse/observables.hpp"
#include "json.hpp"

namespace hexsse {

using Count = unsigned __int128;
std::string to_decimal(Count value);

/// Thermal means per site (energy) and of the z-diagonal order parameters.
/// abs_mH and abs_psiH are zero for graphs without order labels.
struct ThermalMeans {
  double energy = 0.0;
  double abs_mH = 0.0;
  double abs_psiH = 0.0;
};

struct GroundConfig {
  SpinConfig spins;
  Complex mH;
  Complex psiH;
  int uniform_position = 0;  // k if every tracked unit is frustrated only at edge k, else 0
};

struct GroundStateReport {
  double energy = 0.0;  // total classical energy sum_b J_b s_i s_j
  double energy_per_site = 0.0;
  Count degeneracy = 0;
  std::vector<GroundConfig> configs;  // representatives, at most the requested cap
  /// Uniform subset of the ground manifold, listed up to the cap and counted exactly.
  std::vector<GroundConfig> uniform;
  Count uniform_count = 0;
  std::vector<int> uniform_positions;  // realised k, ascending
  /// Every listed configuration has exactly one frustrated bond per plaquette.
  /// Only meaningful for lattices; true for plain graphs.
  bool one_frustrated_per_plaquette = true;
};

nlohmann::json to_json(const GroundStateReport& report);

/// Largest graph exact_thermal will diagonalise densely.
inline constexpr int kMaxExactSites = 12;
/// Largest graph classical_enumerate will scan.
inline constexpr int kMaxEnumerateSites = 24;
/// Largest column (spins) ground_states_dp will transfer.
inline constexpr int kMaxColumnWidth = 16;

/// Full diagonalisation of H = sum J s^z s^z + g sum s^x in the z basis.
ThermalMeans exact_thermal(const SpinGraph& graph, double beta, MsNorm norm = MsNorm::PerSublattice);

struct ClassicalResult {
  ThermalMeans means;
  GroundStateReport ground;
};

/// Gray-code scan of all 2^n configurations at g = 0.
ClassicalResult classical_enumerate(const SpinGraph& graph, double beta, MsNorm norm = MsNorm::PerSublattice,
                                    std::size_t cap = 64);

/// Exact g = 0 ground manifold of a honeycomb torus by transfer over cell
/// columns (2 * cells_y spins each), conditioning on the first column's
/// A-sublattice spins for the periodic closure. couplings, when non-empty,
/// replaces the lattice's J values (integers required).
GroundStateReport ground_states_dp(const Lattice& lattice, std::size_t cap = 64,
                                   std::span<const double> couplings = {}, MsNorm norm = MsNorm::PerSublattice);

}  // namespace hexsse
