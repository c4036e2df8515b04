#include "hexsse/sse.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "hexsse/errors.hpp"

namespace hexsse {

AliasTable::AliasTable(std::span<const double> weights) {
  const int n = static_cast<int>(weights.size());
  prob_.assign(n, 1.0);
  alias_.resize(n);
  for (int k = 0; k < n; ++k) alias_[k] = k;
  if (n == 0) return;
  double total = 0.0;
  for (double w : weights) total += w;
  uniform_ = std::all_of(weights.begin(), weights.end(), [&](double w) { return w == weights[0]; });
  if (uniform_ || total <= 0.0) return;

  std::vector<double> scaled(n);
  std::vector<int> small;
  std::vector<int> large;
  for (int k = 0; k < n; ++k) {
    scaled[k] = weights[k] * n / total;
    (scaled[k] < 1.0 ? small : large).push_back(k);
  }
  while (!small.empty() && !large.empty()) {
    const int s = small.back();
    small.pop_back();
    const int l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (int k : small) prob_[k] = 1.0;
  for (int k : large) prob_[k] = 1.0;
}

int AliasTable::sample(Rng& rng) const {
  const auto k = static_cast<int>(rng.below(prob_.size()));
  if (uniform_) return k;
  return rng.uniform() < prob_[k] ? k : alias_[k];
}

SseState::SseState(std::shared_ptr<const SpinGraph> graph, double beta, SpinConfig spins, Rng rng,
                   std::int64_t cutoff_pad_hundredths)
    : graph_(std::move(graph)),
      beta_(beta),
      spins_(std::move(spins)),
      ops_(kInitialLength),
      rng_(rng),
      pad_hundredths_(cutoff_pad_hundredths) {
  if (!graph_) throw ConfigError("SSE state needs a graph");
  graph_->validate();
  if (!(beta_ > 0.0) || !std::isfinite(beta_)) throw ConfigError("beta must be finite and > 0");
  if (pad_hundredths_ < 0) throw ConfigError("cutoff padding must be >= 0");
  check_spins(spins_, graph_->n);

  std::vector<double> bond_weights;
  bond_weights.reserve(graph_->bonds.size());
  for (const auto& b : graph_->bonds) bond_weights.push_back(std::abs(b.J));
  bond_picker_ = AliasTable(bond_weights);
  const double field_weight = graph_->g * graph_->n;
  insertion_weight_ = field_weight + 2.0 * graph_->abs_coupling_sum();
  p_constant_ = insertion_weight_ > 0.0 ? field_weight / insertion_weight_ : 0.0;
}

void SseState::set_slot(std::size_t p, OperatorSlot slot) {
  OperatorSlot& cur = ops_.at(p);
  if (cur.kind != OpKind::Null) --n_h_;
  if (slot.kind != OpKind::Null) ++n_h_;
  cur = slot;
}

void SseState::grow(std::size_t new_length) {
  if (new_length > ops_.size()) ops_.resize(new_length);
}

double insertion_acceptance(double beta, double insertion_weight, std::int64_t free_slots) {
  if (free_slots <= 0) return 1.0;
  return std::min(1.0, beta * insertion_weight / static_cast<double>(free_slots));
}

double removal_acceptance(double beta, double insertion_weight, std::int64_t free_slots) {
  const double denom = beta * insertion_weight;
  if (denom <= 0.0) return 1.0;
  return std::min(1.0, static_cast<double>(free_slots + 1) / denom);
}

void diagonal_update(SseState& state) {
  const SpinGraph& graph = *state.graph_;
  SpinConfig& prop = state.leg_flip_;  // reused as the propagated spin buffer
  prop.assign(state.spins_.begin(), state.spins_.end());
  const std::int64_t length = static_cast<std::int64_t>(state.ops_.size());
  const double beta = state.beta_;
  const double weight = state.insertion_weight_;
  bool saturated = false;

  for (auto& op : state.ops_) {
    switch (op.kind) {
      case OpKind::Null: {
        if (weight <= 0.0) break;
        OperatorSlot candidate;
        if (state.rng_.uniform() < state.p_constant_) {
          candidate = OperatorSlot::constant(static_cast<int>(state.rng_.below(graph.n)));
        } else {
          const int b = state.bond_picker_.sample(state.rng_);
          const Coupling& c = graph.bonds[b];
          if (c.J * prop[c.i] * prop[c.j] > 0) break;  // frustrated: zero matrix element
          candidate = OperatorSlot::ising(b);
        }
        if (state.rng_.uniform() < insertion_acceptance(beta, weight, length - state.n_h_)) {
          op = candidate;
          ++state.n_h_;
          if (state.n_h_ == length) saturated = true;
        }
        break;
      }
      case OpKind::Constant:
      case OpKind::Ising:
        if (state.rng_.uniform() < removal_acceptance(beta, weight, length - state.n_h_)) {
          op = OperatorSlot::null();
          --state.n_h_;
        }
        break;
      case OpKind::Field:
        prop[op.index] = static_cast<Spin>(-prop[op.index]);
        break;
    }
  }
  if (saturated) ++state.saturation_events_;
}

void build_links(const SseState& state, LinkedVertexList& out) {
  const auto ops = state.opstring();
  const int n = state.sites();
  out.links.assign(4 * ops.size(), -1);
  out.first.assign(n, -1);
  out.last.assign(n, -1);
  const SpinGraph& graph = state.graph();

  auto attach = [&](int site, int lower_leg) {
    const int prev = out.last[site];
    if (prev >= 0) {
      out.links[lower_leg] = prev;
      out.links[prev] = lower_leg;
    } else {
      out.first[site] = lower_leg;
    }
    out.last[site] = lower_leg + 2;
  };

  for (std::size_t p = 0; p < ops.size(); ++p) {
    const OperatorSlot& op = ops[p];
    const int base = static_cast<int>(4 * p);
    if (op.kind == OpKind::Ising) {
      const Coupling& c = graph.bonds[op.index];
      attach(c.i, base);
      attach(c.j, base + 1);
    } else if (op.is_site_op()) {
      attach(op.index, base);
    }
  }
  for (int s = 0; s < n; ++s) {
    if (out.first[s] >= 0) {
      out.links[out.first[s]] = out.last[s];
      out.links[out.last[s]] = out.first[s];
    }
  }
}

LinkedVertexList build_links(const SseState& state) {
  LinkedVertexList out;
  build_links(state, out);
  return out;
}

void cluster_update(SseState& state, const LinkedVertexList& links) {
  auto& flip = state.leg_flip_;
  auto& stack = state.stack_;
  flip.assign(links.links.size(), -1);
  const auto& ops = state.ops_;

  for (std::size_t start = 0; start < links.links.size(); ++start) {
    if (links.links[start] < 0 || flip[start] >= 0) continue;
    const std::int8_t f = state.rng_.coin() ? 1 : 0;
    flip[start] = f;
    stack.clear();
    stack.push_back(static_cast<int>(start));
    while (!stack.empty()) {
      const int leg = stack.back();
      stack.pop_back();
      const int partner = links.links[leg];
      if (flip[partner] < 0) {
        flip[partner] = f;
        stack.push_back(partner);
      }
      const std::size_t p = static_cast<std::size_t>(leg) / 4;
      if (ops[p].kind == OpKind::Ising) {
        const int base = static_cast<int>(4 * p);
        for (int k = 0; k < 4; ++k) {
          if (flip[base + k] < 0) {
            flip[base + k] = f;
            stack.push_back(base + k);
          }
        }
      }
    }
  }

  for (std::size_t p = 0; p < ops.size(); ++p) {
    OperatorSlot& op = state.ops_[p];
    if (!op.is_site_op()) continue;
    if (flip[4 * p] != flip[4 * p + 2])
      op.kind = op.kind == OpKind::Constant ? OpKind::Field : OpKind::Constant;
  }
  for (int s = 0; s < state.sites(); ++s) {
    const bool flipped = links.first[s] >= 0 ? flip[links.first[s]] == 1 : state.rng_.coin();
    if (flipped) state.spins_[s] = static_cast<Spin>(-state.spins_[s]);
  }
}

std::int64_t cutoff_target(std::int64_t n_h, std::int64_t pad_hundredths) {
  // ceil(10 n_h / 9 + pad / 100) = ceil((1000 n_h + 9 pad) / 900)
  const std::int64_t num = 1000 * n_h + 9 * pad_hundredths;
  return (num + 899) / 900;
}

bool adjust_cutoff(SseState& state) {
  const std::int64_t target = cutoff_target(state.n_h(), state.cutoff_pad_hundredths());
  if (target <= state.cutoff()) return false;
  state.grow(static_cast<std::size_t>(target));
  return true;
}

void mc_sweep(SseState& state, bool adjust, LinkedVertexList& scratch) {
  diagonal_update(state);
  build_links(state, scratch);
  cluster_update(state, scratch);
  if (adjust) adjust_cutoff(state);
}

void mc_sweep(SseState& state, bool adjust) {
  LinkedVertexList scratch;
  mc_sweep(state, adjust, scratch);
}

ValidationReport validate_configuration(const SseState& state) {
  auto violation = [](int slice, std::string msg) { return ValidationReport{false, slice, std::move(msg)}; };
  const SpinGraph& graph = state.graph();
  const auto ops = state.opstring();
  SpinConfig prop = state.spins();
  std::vector<int> field_count(graph.n, 0);
  int n_h = 0;

  for (std::size_t p = 0; p < ops.size(); ++p) {
    const OperatorSlot& op = ops[p];
    const int slice = static_cast<int>(p);
    switch (op.kind) {
      case OpKind::Null:
        break;
      case OpKind::Constant:
      case OpKind::Field:
        if (op.index < 0 || op.index >= graph.n) return violation(slice, "site operator index out of range");
        ++n_h;
        if (op.kind == OpKind::Field) {
          ++field_count[op.index];
          prop[op.index] = static_cast<Spin>(-prop[op.index]);
        }
        break;
      case OpKind::Ising: {
        if (op.index < 0 || op.index >= static_cast<int>(graph.bonds.size()))
          return violation(slice, "bond operator index out of range");
        ++n_h;
        const Coupling& c = graph.bonds[op.index];
        if (c.J * prop[c.i] * prop[c.j] > 0)
          return violation(slice, "Ising operator on frustrated bond " + std::to_string(op.index));
        break;
      }
    }
  }
  if (n_h != state.n_h())
    return violation(-1, "n_h mismatch: stored " + std::to_string(state.n_h()) + ", counted " + std::to_string(n_h));
  for (int s = 0; s < graph.n; ++s) {
    if (field_count[s] % 2 != 0)
      return violation(-1, "odd number of Field operators on site " + std::to_string(s));
  }
  if (prop != state.spins()) return violation(-1, "propagated state does not close on |a_0>");
  return {};
}

WeightFactors weight_factors(const SseState& state) {
  WeightFactors w;
  const SpinGraph& graph = state.graph();
  w.ising_per_bond.assign(graph.bonds.size(), 0);
  SpinConfig prop = state.spins();
  for (const auto& op : state.opstring()) {
    switch (op.kind) {
      case OpKind::Null:
        break;
      case OpKind::Constant:
        ++w.site_ops;
        if (graph.g == 0.0) ++w.zero_elements;
        break;
      case OpKind::Field:
        ++w.site_ops;
        if (graph.g == 0.0) ++w.zero_elements;
        prop[op.index] = static_cast<Spin>(-prop[op.index]);
        break;
      case OpKind::Ising: {
        const Coupling& c = graph.bonds[op.index];
        ++w.ising_per_bond[op.index];
        if (c.J * prop[c.i] * prop[c.j] > 0 || c.J == 0.0) ++w.zero_elements;
        break;
      }
    }
  }
  if (prop != state.spins()) ++w.zero_elements;  // off-diagonal trace element
  return w;
}

}  // namespace hexsse
