#include "hexsse/observables.hpp"

#include <cmath>
#include <numbers>

#include "hexsse/errors.hpp"
#include "hexsse/sse.hpp"

namespace hexsse {

std::string to_string(MsNorm norm) { return norm == MsNorm::PerSublattice ? "per_sublattice" : "literal"; }

MsNorm parse_msnorm(std::string_view text) {
  if (text == "per_sublattice") return MsNorm::PerSublattice;
  if (text == "literal") return MsNorm::Literal;
  throw ConfigError("msnorm must be per_sublattice or literal, got '" + std::string(text) + "'");
}

Complex sublattice_phase(int s) { return std::polar(1.0, (2 * s - 1) * std::numbers::pi / 12.0); }

Complex edge_phase(int k) { return std::polar(1.0, k * std::numbers::pi / 3.0); }

namespace {

double norm_factor(MsNorm norm, int n) { return (norm == MsNorm::PerSublattice ? 6.0 : 1.0) / n; }

Complex combine_sublattices(const std::array<double, 6>& m) {
  Complex z;
  for (int s = 1; s <= 6; ++s) z += sublattice_phase(s) * m[s - 1];
  return z / kPhaseNorm;
}

Complex combine_edges(const std::array<int, 6>& counts, int n) {
  Complex z;
  for (int k = 1; k <= 6; ++k) z += edge_phase(k) * static_cast<double>(counts[k - 1]);
  return z / static_cast<double>(n);
}

}  // namespace

std::array<double, 6> sublattice_magnetizations(const SpinGraph& graph, std::span<const Spin> spins,
                                                MsNorm norm) {
  check_spins(spins, graph.n);
  std::array<double, 6> m{};
  if (!graph.labels) return m;
  for (int i = 0; i < graph.n; ++i) m[graph.labels->sublattice[i] - 1] += spins[i];
  const double f = norm_factor(norm, graph.n);
  for (double& v : m) v *= f;
  return m;
}

std::array<double, 6> sublattice_magnetizations(const Lattice& lattice, std::span<const Spin> spins,
                                                MsNorm norm) {
  return sublattice_magnetizations(lattice.to_graph(0.0), spins, norm);
}

Complex primary_order_parameter(const SpinGraph& graph, std::span<const Spin> spins, MsNorm norm) {
  return combine_sublattices(sublattice_magnetizations(graph, spins, norm));
}

Complex primary_order_parameter(const Lattice& lattice, std::span<const Spin> spins, MsNorm norm) {
  return primary_order_parameter(lattice.to_graph(0.0), spins, norm);
}

std::array<int, 6> frustrated_edge_counts(const SpinGraph& graph, std::span<const Spin> spins) {
  check_spins(spins, graph.n);
  std::array<int, 6> counts{};
  if (!graph.labels) return counts;
  for (std::size_t b = 0; b < graph.bonds.size(); ++b) {
    const int k = graph.labels->unit_pos[b];
    const Coupling& c = graph.bonds[b];
    if (k > 0 && c.J * spins[c.i] * spins[c.j] > 0) ++counts[k - 1];
  }
  return counts;
}

Complex secondary_order_parameter(const SpinGraph& graph, std::span<const Spin> spins) {
  return combine_edges(frustrated_edge_counts(graph, spins), graph.n);
}

Complex secondary_order_parameter(const Lattice& lattice, std::span<const Spin> spins) {
  return secondary_order_parameter(lattice.to_graph(0.0), spins);
}

double energy_density(double n_mean, double beta, const SpinGraph& graph) {
  return -n_mean / (beta * graph.n) + graph.g + graph.abs_coupling_sum() / graph.n;
}

double energy_density(double n_mean, double beta, const Lattice& lattice, double g) {
  return energy_density(n_mean, beta, lattice.to_graph(g));
}

SliceMeasurer::SliceMeasurer(const SpinGraph& graph, MsNorm norm)
    : labeled_(graph.labels.has_value()),
      m_scale_(norm_factor(norm, graph.n) / kPhaseNorm),
      psi_scale_(1.0 / graph.n),
      bonds_(graph.bonds) {
  if (!labeled_) return;
  sublattice_.resize(graph.n);
  for (int i = 0; i < graph.n; ++i) sublattice_[i] = graph.labels->sublattice[i] - 1;
  unit_pos_ = graph.labels->unit_pos;
  unit_bonds_of_.resize(graph.n);
  for (std::size_t b = 0; b < bonds_.size(); ++b) {
    if (unit_pos_[b] == 0) continue;
    unit_bonds_of_[bonds_[b].i].push_back(static_cast<int>(b));
    unit_bonds_of_[bonds_[b].j].push_back(static_cast<int>(b));
  }
  frustrated_.assign(bonds_.size(), 0);
}

void SliceMeasurer::load(std::span<const Spin> spins) {
  spins_.assign(spins.begin(), spins.end());
  if (!labeled_) return;
  sub_sum_.fill(0);
  edge_count_.fill(0);
  for (std::size_t i = 0; i < spins_.size(); ++i) sub_sum_[sublattice_[i]] += spins_[i];
  for (std::size_t b = 0; b < bonds_.size(); ++b) {
    if (unit_pos_[b] == 0) continue;
    const Coupling& c = bonds_[b];
    frustrated_[b] = c.J * spins_[c.i] * spins_[c.j] > 0 ? 1 : 0;
    edge_count_[unit_pos_[b] - 1] += frustrated_[b];
  }
}

void SliceMeasurer::flip(int site) {
  spins_[site] = static_cast<Spin>(-spins_[site]);
  if (!labeled_) return;
  sub_sum_[sublattice_[site]] += 2 * spins_[site];
  for (int b : unit_bonds_of_[site]) {
    const int k = unit_pos_[b] - 1;
    edge_count_[k] -= frustrated_[b];
    frustrated_[b] = static_cast<std::int8_t>(1 - frustrated_[b]);
    edge_count_[k] += frustrated_[b];
  }
}

Complex SliceMeasurer::mH() const {
  if (!labeled_) return {};
  Complex z;
  for (int s = 0; s < 6; ++s) z += sublattice_phase(s + 1) * static_cast<double>(sub_sum_[s]);
  return z * m_scale_;
}

Complex SliceMeasurer::psiH() const {
  if (!labeled_) return {};
  Complex z;
  for (int k = 0; k < 6; ++k) z += edge_phase(k + 1) * static_cast<double>(edge_count_[k]);
  return z * psi_scale_;
}

Complex SliceMeasurer::mH_of(std::span<const Spin> spins) {
  load(spins);
  return mH();
}

Complex SliceMeasurer::psiH_of(std::span<const Spin> spins) {
  load(spins);
  return psiH();
}

SweepSample SliceMeasurer::measure(const SseState& state) {
  SweepSample out;
  out.n_h = state.n_h();
  const auto ops = state.opstring();
  const double length = static_cast<double>(ops.size());
  if (!labeled_) return out;
  load(state.spins());

  auto accumulate = [&](double weight) {
    const Complex m = mH();
    const Complex psi = psiH();
    out.mH += weight * m;
    out.abs_mH += weight * std::abs(m);
    out.psiH += weight * psi;
    out.abs_psiH += weight * std::abs(psi);
  };

  // alpha_p is the state before slot p; a Field at p ends the run of equal states.
  std::size_t start = 0;
  for (std::size_t p = 0; p < ops.size(); ++p) {
    if (ops[p].kind != OpKind::Field) continue;
    accumulate(static_cast<double>(p - start + 1));
    flip(ops[p].index);
    start = p + 1;
  }
  if (start < ops.size()) accumulate(static_cast<double>(ops.size() - start));

  out.mH /= length;
  out.abs_mH /= length;
  out.psiH /= length;
  out.abs_psiH /= length;
  return out;
}

Estimate bin_statistics(std::span<const double> bins) {
  if (bins.size() < 2) throw StatisticsError("error estimate needs at least 2 bins, got " + std::to_string(bins.size()));
  const double n = static_cast<double>(bins.size());
  double mean = 0.0;
  for (double v : bins) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : bins) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

MeasurementAccumulator::MeasurementAccumulator(std::int64_t mstep, std::int64_t thin) : mstep_(mstep), thin_(thin) {
  if (mstep_ < 1) throw ConfigError("mstep must be >= 1");
  if (thin_ < 1) throw ConfigError("thin must be >= 1");
}

void MeasurementAccumulator::add(const SweepSample& s) {
  ++sweeps_;
  sum_.n_h += s.n_h;
  sum_.abs_mH += s.abs_mH;
  sum_.abs_mH_sliceavg += std::abs(s.mH);
  sum_.abs_psiH += s.abs_psiH;
  if (sweeps_ % thin_ == 0) samples_.push_back({sweeps_, s.mH, s.psiH});
  if (++in_bin_ == mstep_) {
    const double m = static_cast<double>(mstep_);
    bins_.push_back({sum_.n_h / m, 0.0, sum_.abs_mH / m, sum_.abs_mH_sliceavg / m, sum_.abs_psiH / m});
    sum_ = {};
    in_bin_ = 0;
  }
}

void MeasurementAccumulator::finish(double beta, const SpinGraph& graph) {
  for (auto& b : bins_) b.energy = energy_density(b.n_h, beta, graph);
}

}  // namespace hexsse
