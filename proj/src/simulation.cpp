#include "hexsse/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <vector>

#include "hexsse/errors.hpp"

namespace hexsse {

std::int64_t graph_pad_hundredths(const SpinGraph& graph) { return std::int64_t{100} * graph.n; }

RunResult run_chain(SseState& state, const ChainParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  if (params.isteps < 0) throw ConfigError("isteps must be >= 0");
  if (params.nbins < 2) throw ConfigError("nbins must be >= 2");

  LinkedVertexList scratch;
  for (std::int64_t s = 0; s < params.isteps; ++s) mc_sweep(state, true, scratch);

  RunResult result;
  result.thermal_saturations = state.saturation_events();
  SliceMeasurer measurer(state.graph(), params.msnorm);
  MeasurementAccumulator acc(params.mstep, params.thin);
  const std::int64_t total = params.nbins * params.mstep;
  for (std::int64_t s = 0; s < total; ++s) {
    mc_sweep(state, false, scratch);
    result.max_nh = std::max(result.max_nh, state.n_h());
    acc.add(measurer.measure(state));
  }
  acc.finish(state.beta(), state.graph());

  result.bins = acc.bins();
  result.samples = acc.samples();
  auto column = [&](double BinRecord::*field) {
    std::vector<double> v;
    v.reserve(result.bins.size());
    for (const auto& b : result.bins) v.push_back(b.*field);
    return bin_statistics(v);
  };
  result.energy = column(&BinRecord::energy);
  result.abs_mH = column(&BinRecord::abs_mH);
  result.abs_mH_sliceavg = column(&BinRecord::abs_mH_sliceavg);
  result.abs_psiH = column(&BinRecord::abs_psiH);
  result.n_h = column(&BinRecord::n_h);

  result.L_final = state.cutoff();
  result.measurement_saturations = state.saturation_events() - result.thermal_saturations;
  if (result.measurement_saturations > 0) {
    result.valid = false;
    result.diagnostic = "operator string saturated (n_h reached L = " + std::to_string(result.L_final) + ") " +
                        std::to_string(result.measurement_saturations) +
                        " times during measurement; increase isteps";
  }
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

RunResult run_chain(std::shared_ptr<const SpinGraph> graph, const ChainParams& params, SpinConfig init, Rng rng) {
  SseState state(std::move(graph), params.beta, std::move(init), rng, params.pad_hundredths);
  return run_chain(state, params);
}

SseState init_state(const Lattice& lattice, const RunConfig& config, std::uint64_t stream) {
  auto graph = std::make_shared<const SpinGraph>(lattice.to_graph(config.g));
  Rng rng = Rng::stream(config.seed, stream);
  SpinConfig spins;
  if (config.init == InitMode::File) {
    spins = load_spin_config(config.init_file);
    check_spins(spins, lattice.nn());
  } else {
    spins.resize(lattice.nn());
    for (auto& s : spins) s = rng.coin() ? 1 : -1;
  }
  const std::int64_t area = std::int64_t{config.lx} * config.ly;
  return SseState(std::move(graph), config.beta, std::move(spins), rng, area * area);
}

RunResult run_simulation(const RunConfig& config, std::uint64_t stream) {
  const Lattice lattice = build_lattice(config.lx, config.ly, config.pattern);
  SseState state = init_state(lattice, config, stream);
  ChainParams params;
  params.beta = config.beta;
  params.isteps = config.isteps;
  params.nbins = config.nbins;
  params.mstep = config.mstep;
  params.thin = config.thin;
  params.msnorm = config.msnorm;
  params.pad_hundredths = state.cutoff_pad_hundredths();
  return run_chain(state, params);
}

}  // namespace hexsse
