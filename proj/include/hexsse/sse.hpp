#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hexsse/graph.hpp"
#include "hexsse/rng.hpp"

namespace hexsse {

struct LinkedVertexList;

// Operator set of the expansion, H = -sum_i (H_field,i + H_const,i) - sum_b H_ising,b + const:
//   Null     identity padding
//   Constant g                      (diagonal, site)
//   Field    g (s+ + s-)            (flips its site)
//   Ising    |J| - J s^z_i s^z_j    (diagonal, bond; 2|J| when satisfied, 0 when frustrated)
enum class OpKind : std::uint8_t { Null, Constant, Field, Ising };

struct OperatorSlot {
  OpKind kind = OpKind::Null;
  int index = -1;  // site id for Constant/Field, bond id for Ising

  static OperatorSlot null() { return {}; }
  static OperatorSlot constant(int site) { return {OpKind::Constant, site}; }
  static OperatorSlot field(int site) { return {OpKind::Field, site}; }
  static OperatorSlot ising(int bond) { return {OpKind::Ising, bond}; }
  bool is_site_op() const { return kind == OpKind::Constant || kind == OpKind::Field; }
  friend bool operator==(const OperatorSlot&, const OperatorSlot&) = default;
};

/// Walker alias table for drawing bonds with probability |J_b| / sum |J|.
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(std::span<const double> weights);
  int sample(Rng& rng) const;
  bool empty() const { return prob_.empty(); }

 private:
  std::vector<double> prob_;
  std::vector<int> alias_;
  bool uniform_ = true;
};

/// One Markov-chain configuration: the stored state |a_0>, the operator
/// string of length L (the cutoff) and the chain's random stream.
class SseState {
 public:
  static constexpr std::size_t kInitialLength = 20;

  /// cutoff_pad_hundredths is the additive term of the cutoff rule in units of
  /// 1/100; for an lx x ly lattice it is (lx*ly)^2.
  SseState(std::shared_ptr<const SpinGraph> graph, double beta, SpinConfig spins, Rng rng,
           std::int64_t cutoff_pad_hundredths);

  const SpinGraph& graph() const { return *graph_; }
  std::shared_ptr<const SpinGraph> graph_ptr() const { return graph_; }
  double beta() const { return beta_; }
  double g() const { return graph_->g; }
  int sites() const { return graph_->n; }

  const SpinConfig& spins() const { return spins_; }
  std::span<const OperatorSlot> opstring() const { return ops_; }
  int cutoff() const { return static_cast<int>(ops_.size()); }
  int n_h() const { return n_h_; }
  std::int64_t cutoff_pad_hundredths() const { return pad_hundredths_; }
  std::uint64_t saturation_events() const { return saturation_events_; }

  /// C = g*n + sum_b 2|J_b|, the total weight of the insertable diagonal operators.
  double insertion_weight() const { return insertion_weight_; }
  /// Probability of proposing a Constant (rather than an Ising) operator: g*n / C.
  double constant_probability() const { return p_constant_; }

  Rng& rng() { return rng_; }
  const Rng& rng() const { return rng_; }

  /// Direct slot write for tests and fixtures; keeps n_h consistent but does
  /// not check validity.
  void set_slot(std::size_t p, OperatorSlot slot);
  void set_spin(int site, Spin value) { spins_.at(site) = value; }

  /// Appends Null slots so that the string has new_length slots.
  void grow(std::size_t new_length);

 private:
  friend void diagonal_update(SseState& state);
  friend void cluster_update(SseState& state, const LinkedVertexList& links);

  std::shared_ptr<const SpinGraph> graph_;
  double beta_;
  SpinConfig spins_;
  std::vector<OperatorSlot> ops_;
  int n_h_ = 0;
  Rng rng_;
  std::int64_t pad_hundredths_;
  std::uint64_t saturation_events_ = 0;

  double insertion_weight_ = 0.0;
  double p_constant_ = 0.0;
  AliasTable bond_picker_;

  std::vector<std::int8_t> leg_flip_;  // cluster scratch
  std::vector<int> stack_;
};

/// Leg linkage in imaginary time. Leg 4p+k belongs to slot p: for an Ising
/// slot k = 0,1 are the lower legs on sites i,j and 2,3 the upper legs; a
/// site slot uses k = 0 (lower) and 2 (upper). Unused legs link to -1.
struct LinkedVertexList {
  std::vector<int> links;
  std::vector<int> first;  // per site, first leg in time order, -1 if free
  std::vector<int> last;   // per site, last leg in time order, -1 if free

  bool is_free(int site) const { return first[site] < 0; }
};

/// Metropolis acceptance for inserting a diagonal operator into one of the
/// free_slots = L - n_h empty slots: min(1, beta C / (L - n_h)); 1 if none are free.
double insertion_acceptance(double beta, double insertion_weight, std::int64_t free_slots);
/// Acceptance for removing one of n_h operators: min(1, (L - n_h + 1) / (beta C)).
double removal_acceptance(double beta, double insertion_weight, std::int64_t free_slots);

void diagonal_update(SseState& state);
LinkedVertexList build_links(const SseState& state);
void build_links(const SseState& state, LinkedVertexList& out);
void cluster_update(SseState& state, const LinkedVertexList& links);

/// L_new = ceil(10/9 n_h + pad); grows the string (tail Null padding) when L_new > L.
std::int64_t cutoff_target(std::int64_t n_h, std::int64_t pad_hundredths);
bool adjust_cutoff(SseState& state);

/// diagonal update, linking, cluster update and, iff adjust, cutoff growth.
void mc_sweep(SseState& state, bool adjust);
void mc_sweep(SseState& state, bool adjust, LinkedVertexList& scratch);

struct ValidationReport {
  bool ok = true;
  int slice = -1;  // slot index of the first violation, -1 for whole-string checks
  std::string message;
  explicit operator bool() const { return ok; }
};

/// Recounts n_h, propagates |a_0> through the string and checks closure, even
/// Field parity per site, and that every Ising slot sits on a satisfied bond.
ValidationReport validate_configuration(const SseState& state);

/// Factorised configuration weight: g^site_ops * prod_b (2|J_b|)^ising_per_bond[b],
/// or zero if zero_elements > 0. The beta/(L-n)! factors depend only on n_h.
struct WeightFactors {
  int site_ops = 0;
  std::vector<int> ising_per_bond;
  int zero_elements = 0;
  friend bool operator==(const WeightFactors&, const WeightFactors&) = default;
};
WeightFactors weight_factors(const SseState& state);

}  // namespace hexsse
