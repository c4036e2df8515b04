#pragma once

#include <cstdint>
#include <memory>

#include "hexsse/config.hpp"
#include "hexsse/graph.hpp"
#include "hexsse/lattice.hpp"
#include "hexsse/observables.hpp"
#include "hexsse/rng.hpp"
#include "hexsse/sse.hpp"

namespace hexsse {

struct ChainParams {
  double beta = 1.0;
  std::int64_t isteps = 1000;
  std::int64_t nbins = 20;
  std::int64_t mstep = 1000;
  std::int64_t thin = 1;
  MsNorm msnorm = MsNorm::PerSublattice;
  std::int64_t pad_hundredths = 0;  // additive cutoff term, in 1/100 slots
};

/// Cutoff padding for an arbitrary graph: one extra slot per site.
std::int64_t graph_pad_hundredths(const SpinGraph& graph);

/// Thermalises for isteps sweeps with cutoff growth, freezes L, then measures
/// after each of nbins * mstep sweeps. A measurement-stage saturation marks
/// the result invalid.
RunResult run_chain(SseState& state, const ChainParams& params);
RunResult run_chain(std::shared_ptr<const SpinGraph> graph, const ChainParams& params, SpinConfig init, Rng rng);

/// Spins from the config (random draws or the init file) on RNG stream
/// `stream` of config.seed; 20 Null slots.
SseState init_state(const Lattice& lattice, const RunConfig& config, std::uint64_t stream = 0);

RunResult run_simulation(const RunConfig& config, std::uint64_t stream = 0);

}  // namespace hexsse
