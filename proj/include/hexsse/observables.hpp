#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hexsse/graph.hpp"
#include "hexsse/lattice.hpp"

namespace hexsse {

class SseState;

using Complex = std::complex<double>;

/// Sublattice magnetization normalisation. PerSublattice uses 6/N so that a
/// fully polarised sublattice has m_s = 1; Literal uses 1/N.
enum class MsNorm { PerSublattice, Literal };

std::string to_string(MsNorm norm);
MsNorm parse_msnorm(std::string_view text);

/// a = sqrt(2) + sqrt(6), the modulus of sum_s exp(i(2s-1)pi/12).
inline const double kPhaseNorm = std::sqrt(2.0) + std::sqrt(6.0);

/// exp(i(2s-1)pi/12), s = 1..6.
Complex sublattice_phase(int s);
/// exp(ik pi/3), k = 1..6.
Complex edge_phase(int k);

/// Graph overloads need graph.labels; unlabeled graphs yield zeros.
std::array<double, 6> sublattice_magnetizations(const SpinGraph& graph, std::span<const Spin> spins,
                                                MsNorm norm = MsNorm::PerSublattice);
std::array<double, 6> sublattice_magnetizations(const Lattice& lattice, std::span<const Spin> spins,
                                                MsNorm norm = MsNorm::PerSublattice);

/// m_H = (1/a) sum_s exp(i(2s-1)pi/12) m_s.
Complex primary_order_parameter(const SpinGraph& graph, std::span<const Spin> spins,
                                MsNorm norm = MsNorm::PerSublattice);
Complex primary_order_parameter(const Lattice& lattice, std::span<const Spin> spins,
                                MsNorm norm = MsNorm::PerSublattice);

/// Number of frustrated tracked-unit edges at each position 1..6 (index k-1).
std::array<int, 6> frustrated_edge_counts(const SpinGraph& graph, std::span<const Spin> spins);

/// psi_H = sum_k exp(ik pi/3) psi_k with psi_k = (frustrated unit edges at k) / N.
Complex secondary_order_parameter(const SpinGraph& graph, std::span<const Spin> spins);
Complex secondary_order_parameter(const Lattice& lattice, std::span<const Spin> spins);

/// e = -<n>/(beta N) + g + sum_b |J_b| / N.
double energy_density(double n_mean, double beta, const SpinGraph& graph);
double energy_density(double n_mean, double beta, const Lattice& lattice, double g);

/// Slice-averaged diagonal observables of one configuration.
struct SweepSample {
  double n_h = 0.0;
  double abs_mH = 0.0;  // mean over slices of |m_H(alpha_p)|
  Complex mH;           // mean over slices of m_H(alpha_p)
  double abs_psiH = 0.0;
  Complex psiH;
};

/// Evaluates m_H and psi_H on every propagated state alpha_p, p = 0..L-1.
/// Only Field slots change the state, so the observables are kept as integer
/// sublattice sums and frustrated-edge counts and updated per flip.
class SliceMeasurer {
 public:
  explicit SliceMeasurer(const SpinGraph& graph, MsNorm norm = MsNorm::PerSublattice);

  SweepSample measure(const SseState& state);

  /// Observables of a static configuration from the same integer tallies.
  Complex mH_of(std::span<const Spin> spins);
  Complex psiH_of(std::span<const Spin> spins);

 private:
  void load(std::span<const Spin> spins);
  void flip(int site);
  Complex mH() const;
  Complex psiH() const;

  bool labeled_ = false;
  double m_scale_ = 0.0;
  double psi_scale_ = 0.0;
  std::vector<int> sublattice_;                   // per site, 0..5
  std::vector<std::vector<int>> unit_bonds_of_;   // per site, incident unit-edge bonds
  std::vector<Coupling> bonds_;
  std::vector<int> unit_pos_;

  SpinConfig spins_;
  std::vector<std::int8_t> frustrated_;
  std::array<int, 6> sub_sum_{};
  std::array<int, 6> edge_count_{};
};

struct Estimate {
  double mean = 0.0;
  double err = 0.0;
};

/// Mean of the bin means and std(bin means, n-1) / sqrt(nbins). Needs >= 2 bins.
Estimate bin_statistics(std::span<const double> bins);

struct BinRecord {
  double n_h = 0.0;
  double energy = 0.0;
  double abs_mH = 0.0;
  double abs_mH_sliceavg = 0.0;
  double abs_psiH = 0.0;
};

struct SampleRecord {
  std::int64_t sweep = 0;
  Complex mH;
  Complex psiH;
};

/// Bins every mstep sweeps and keeps every thin-th sweep's complex sample,
/// so the stream has sweeps / thin entries.
class MeasurementAccumulator {
 public:
  MeasurementAccumulator(std::int64_t mstep, std::int64_t thin);

  void add(const SweepSample& s);

  std::int64_t sweeps() const { return sweeps_; }
  const std::vector<BinRecord>& bins() const { return bins_; }
  const std::vector<SampleRecord>& samples() const { return samples_; }

  /// Converts n_h means to energies once beta and the graph are known.
  void finish(double beta, const SpinGraph& graph);

 private:
  std::int64_t mstep_;
  std::int64_t thin_;
  std::int64_t sweeps_ = 0;
  std::int64_t in_bin_ = 0;
  BinRecord sum_;
  std::vector<BinRecord> bins_;
  std::vector<SampleRecord> samples_;
};

struct RunResult {
  std::vector<BinRecord> bins;
  Estimate energy;
  Estimate abs_mH;
  Estimate abs_mH_sliceavg;
  Estimate abs_psiH;
  Estimate n_h;
  std::vector<SampleRecord> samples;

  int L_final = 0;
  int max_nh = 0;  // over the measurement stage
  std::uint64_t thermal_saturations = 0;
  std::uint64_t measurement_saturations = 0;
  double wall_seconds = 0.0;
  bool valid = true;
  std::string diagnostic;
};

}  // namespace hexsse
