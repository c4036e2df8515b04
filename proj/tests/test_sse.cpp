#include <gtest/gtest.h>

#include <memory>

#include "hexsse/errors.hpp"
#include "hexsse/lattice.hpp"
#include "hexsse/sse.hpp"

using namespace hexsse;

namespace {

std::shared_ptr<const SpinGraph> lattice_graph(double g, CouplingPattern p = CouplingPattern::Villain) {
  return std::make_shared<const SpinGraph>(build_lattice(5, 2, p).to_graph(g));
}

SpinConfig random_spins(int n, Rng& rng) {
  SpinConfig s(n);
  for (auto& v : s) v = rng.coin() ? 1 : -1;
  return s;
}

void expect_involution(const LinkedVertexList& links) {
  for (std::size_t x = 0; x < links.links.size(); ++x) {
    const int y = links.links[x];
    if (y < 0) continue;
    ASSERT_EQ(links.links[y], static_cast<int>(x));
  }
}

// Every leg of every non-Null slot is linked; legs of Null slots are not.
void expect_complete(const SseState& state, const LinkedVertexList& links) {
  const auto ops = state.opstring();
  for (std::size_t p = 0; p < ops.size(); ++p) {
    const int base = static_cast<int>(4 * p);
    const bool ising = ops[p].kind == OpKind::Ising;
    const bool site = ops[p].is_site_op();
    ASSERT_EQ(links.links[base] >= 0, ising || site);
    ASSERT_EQ(links.links[base + 2] >= 0, ising || site);
    ASSERT_EQ(links.links[base + 1] >= 0, ising);
    ASSERT_EQ(links.links[base + 3] >= 0, ising);
  }
}

int first_ferro_bond(const SpinGraph& graph) {
  int b = 0;
  while (graph.bonds[b].J > 0) ++b;
  return b;
}

}  // namespace

TEST(SseState, StartsWithTwentyNullSlots) {
  SseState s(lattice_graph(0.5), 3.3, SpinConfig(36, 1), Rng(1), 100);
  EXPECT_EQ(s.cutoff(), 20);
  EXPECT_EQ(s.n_h(), 0);
  for (const auto& op : s.opstring()) EXPECT_EQ(op.kind, OpKind::Null);
  EXPECT_TRUE(validate_configuration(s));
}

TEST(SseState, RejectsBadInput) {
  EXPECT_THROW(SseState(lattice_graph(0.5), 3.3, SpinConfig(35, 1), Rng(1), 100), ConfigError);
  EXPECT_THROW(SseState(lattice_graph(0.5), -1.0, SpinConfig(36, 1), Rng(1), 100), ConfigError);
  SpinConfig bad(36, 1);
  bad[3] = 0;
  EXPECT_THROW(SseState(lattice_graph(0.5), 3.3, bad, Rng(1), 100), ConfigError);
}

TEST(Acceptance, InsertionWeightAndWorkedExample) {
  SseState s(lattice_graph(0.5), 3.3, SpinConfig(36, 1), Rng(1), 100);
  EXPECT_DOUBLE_EQ(s.insertion_weight(), 126.0);
  EXPECT_DOUBLE_EQ(s.constant_probability(), 18.0 / 126.0);
  EXPECT_NEAR(insertion_acceptance(3.3, 126.0, 500), 0.8316, 1e-12);
  EXPECT_DOUBLE_EQ(insertion_acceptance(3.3, 126.0, 10), 1.0);
  EXPECT_DOUBLE_EQ(insertion_acceptance(3.3, 126.0, 0), 1.0);
  EXPECT_NEAR(removal_acceptance(3.3, 126.0, 100), 101.0 / (3.3 * 126.0), 1e-15);
  EXPECT_DOUBLE_EQ(removal_acceptance(3.3, 126.0, 1000), 1.0);
}

TEST(Acceptance, DetailedBalancePair) {
  // Insertion into L-n free slots and the reverse removal must balance beta*C/(L-n).
  for (int free = 1; free < 400; free += 7) {
    const double a = insertion_acceptance(3.3, 126.0, free);
    const double r = removal_acceptance(3.3, 126.0, free - 1);
    EXPECT_NEAR(a / r, 3.3 * 126.0 / free, 1e-9);
  }
}

TEST(DiagonalUpdate, ZeroFieldNeverInsertsSiteOperators) {
  SseState s(lattice_graph(0.0), 3.3, SpinConfig(36, 1), Rng(2), 100);
  EXPECT_EQ(s.constant_probability(), 0.0);
  for (int i = 0; i < 2000; ++i) {
    mc_sweep(s, i < 1000);
    for (const auto& op : s.opstring()) ASSERT_FALSE(op.is_site_op());
  }
  EXPECT_GT(s.n_h(), 0);
}

TEST(DiagonalUpdate, SaturationIsCounted) {
  SseState s(lattice_graph(1.0), 50.0, SpinConfig(36, 1), Rng(3), 100);
  for (int i = 0; i < 50 && s.saturation_events() == 0; ++i) {
    diagonal_update(s);
    ASSERT_TRUE(validate_configuration(s));
  }
  EXPECT_EQ(s.saturation_events(), 1u);
  EXPECT_EQ(s.n_h(), s.cutoff());
  EXPECT_EQ(s.cutoff(), 20);
}

TEST(Links, AllNullStringHasNoLegs) {
  SseState s(lattice_graph(0.5), 3.3, SpinConfig(36, 1), Rng(1), 100);
  const LinkedVertexList links = build_links(s);
  for (int l : links.links) EXPECT_EQ(l, -1);
  for (int site = 0; site < 36; ++site) EXPECT_TRUE(links.is_free(site));
}

TEST(Links, SingleIsingSlotWrapsOntoItself) {
  auto graph = lattice_graph(0.5);
  SseState s(graph, 3.3, SpinConfig(36, 1), Rng(1), 100);
  const int bond = first_ferro_bond(*graph);  // satisfied by all-up
  s.set_slot(5, OperatorSlot::ising(bond));
  const LinkedVertexList links = build_links(s);
  EXPECT_EQ(links.links[20], 22);
  EXPECT_EQ(links.links[22], 20);
  EXPECT_EQ(links.links[21], 23);
  EXPECT_EQ(links.links[23], 21);
  EXPECT_FALSE(links.is_free(graph->bonds[bond].i));
  EXPECT_FALSE(links.is_free(graph->bonds[bond].j));
  int free_sites = 0;
  for (int site = 0; site < 36; ++site) free_sites += links.is_free(site);
  EXPECT_EQ(free_sites, 34);
}

TEST(Links, ConsecutiveLegsOnOneSite) {
  auto graph = lattice_graph(0.5);
  SseState s(graph, 3.3, SpinConfig(36, 1), Rng(1), 100);
  s.set_slot(2, OperatorSlot::constant(4));
  s.set_slot(9, OperatorSlot::field(4));
  s.set_slot(15, OperatorSlot::field(4));
  const LinkedVertexList links = build_links(s);
  EXPECT_EQ(links.links[4 * 2 + 2], 4 * 9);
  EXPECT_EQ(links.links[4 * 9 + 2], 4 * 15);
  EXPECT_EQ(links.links[4 * 15 + 2], 4 * 2);  // periodic wrap
  EXPECT_EQ(links.first[4], 8);
  EXPECT_EQ(links.last[4], 62);
}

TEST(Links, InvolutionOnRandomStates) {
  Rng rng(7);
  auto graph = lattice_graph(0.3);
  int checked = 0;
  for (int chain = 0; chain < 10; ++chain) {
    SseState s(graph, 3.3, random_spins(36, rng), Rng(100 + chain), 100);
    LinkedVertexList links;
    for (int sweep = 0; sweep < 120; ++sweep) {
      diagonal_update(s);
      build_links(s, links);
      expect_involution(links);
      expect_complete(s, links);
      cluster_update(s, links);
      adjust_cutoff(s);
      ++checked;
    }
  }
  EXPECT_GE(checked, 1000);
}

TEST(Cluster, FreeSitesFlipWithProbabilityHalf) {
  SseState s(lattice_graph(0.5), 3.3, SpinConfig(36, 1), Rng(8), 100);
  const LinkedVertexList links = build_links(s);
  int flips = 0;
  const int trials = 4000;
  for (int t = 0; t < trials; ++t) {
    const SpinConfig before = s.spins();
    cluster_update(s, links);
    for (int i = 0; i < 36; ++i) flips += before[i] != s.spins()[i];
  }
  EXPECT_NEAR(static_cast<double>(flips) / (36.0 * trials), 0.5, 0.01);
}

TEST(Cluster, SingleIsingSlotFlipsBothSitesTogether) {
  auto graph = lattice_graph(0.5);
  SseState s(graph, 3.3, SpinConfig(36, 1), Rng(9), 100);
  const int bond = first_ferro_bond(*graph);
  s.set_slot(5, OperatorSlot::ising(bond));
  const int i = graph->bonds[bond].i, j = graph->bonds[bond].j;
  const LinkedVertexList links = build_links(s);
  int flipped = 0;
  for (int t = 0; t < 400; ++t) {
    const Spin before = s.spins()[i];
    cluster_update(s, links);
    ASSERT_EQ(s.spins()[i], s.spins()[j]);
    flipped += s.spins()[i] != before;
    ASSERT_TRUE(validate_configuration(s));
  }
  EXPECT_NEAR(flipped, 200, 45);
}

TEST(Cluster, SiteOperatorsToggleAndKeepParity) {
  auto graph = lattice_graph(0.5);
  SseState s(graph, 3.3, SpinConfig(36, 1), Rng(10), 100);
  s.set_slot(3, OperatorSlot::constant(4));
  s.set_slot(12, OperatorSlot::constant(4));
  const LinkedVertexList links = build_links(s);
  int field_pairs = 0;
  for (int t = 0; t < 400; ++t) {
    cluster_update(s, links);
    ASSERT_TRUE(validate_configuration(s));
    const auto a = s.opstring()[3].kind, b = s.opstring()[12].kind;
    ASSERT_EQ(a, b);  // two segments on the site: both boundaries toggle or neither
    field_pairs += a == OpKind::Field;
  }
  EXPECT_NEAR(field_pairs, 200, 45);
}

TEST(Validation, ReportsHandInsertedFieldParity) {
  SseState s(lattice_graph(0.5), 3.3, SpinConfig(36, 1), Rng(1), 100);
  s.set_slot(4, OperatorSlot::field(9));
  const ValidationReport r = validate_configuration(s);
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.message.find("odd number of Field"), std::string::npos) << r.message;
}

TEST(Validation, ReportsFrustratedIsingSlotWithSlice) {
  auto graph = lattice_graph(0.5);
  SseState s(graph, 3.3, SpinConfig(36, 1), Rng(1), 100);
  int af = 0;
  while (graph->bonds[af].J < 0) ++af;
  s.set_slot(6, OperatorSlot::ising(af));
  const ValidationReport r = validate_configuration(s);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.slice, 6);
}

TEST(Cutoff, TargetRule) {
  EXPECT_EQ(cutoff_target(90, 100), 101);
  EXPECT_EQ(cutoff_target(0, 100), 1);
  EXPECT_EQ(cutoff_target(9, 0), 10);
  EXPECT_EQ(cutoff_target(10, 0), 12);  // 11.11 rounds up
  EXPECT_EQ(cutoff_target(0, 0), 0);
}

TEST(Cutoff, GrowthAppendsNullsAndPreservesState) {
  auto graph = lattice_graph(0.5);
  SseState s(graph, 3.3, SpinConfig(36, 1), Rng(11), 100);
  for (int i = 0; i < 5; ++i) mc_sweep(s, false);
  const auto before = std::vector<OperatorSlot>(s.opstring().begin(), s.opstring().end());
  const int n = s.n_h();
  s.grow(60);
  EXPECT_EQ(s.cutoff(), 60);
  EXPECT_EQ(s.n_h(), n);
  for (std::size_t p = 0; p < before.size(); ++p) EXPECT_EQ(s.opstring()[p], before[p]);
  for (std::size_t p = before.size(); p < 60; ++p) EXPECT_EQ(s.opstring()[p].kind, OpKind::Null);
  EXPECT_TRUE(validate_configuration(s));
}

TEST(Cutoff, NonDecreasingDuringThermalisation) {
  SseState s(lattice_graph(0.4), 3.3, SpinConfig(36, 1), Rng(12), 100);
  int last = s.cutoff();
  for (int i = 0; i < 2000; ++i) {
    mc_sweep(s, true);
    ASSERT_GE(s.cutoff(), last);
    last = s.cutoff();
  }
  EXPECT_GE(s.cutoff(), cutoff_target(s.n_h(), 100) - 1);
  EXPECT_GT(s.cutoff(), 20);
}

TEST(Sweep, FixedSeedReproducesTrajectory) {
  auto graph = lattice_graph(0.3);
  SseState a(graph, 3.3, SpinConfig(36, 1), Rng(13), 100);
  SseState b(graph, 3.3, SpinConfig(36, 1), Rng(13), 100);
  for (int i = 0; i < 500; ++i) {
    mc_sweep(a, i < 250);
    mc_sweep(b, i < 250);
    ASSERT_EQ(a.spins(), b.spins());
    ASSERT_EQ(a.cutoff(), b.cutoff());
    ASSERT_TRUE(std::equal(a.opstring().begin(), a.opstring().end(), b.opstring().begin()));
  }
  EXPECT_EQ(a.rng().state(), b.rng().state());
}

// 10^4 sweeps on the 36-site lattice: after every sweep the configuration is
// valid, links are an involution, and the cluster step leaves the weight intact.
TEST(Invariants, LongRandomisedRun) {
  Rng rng(14);
  auto graph = lattice_graph(0.35);
  SseState s(graph, 3.3, random_spins(36, rng), Rng(15), 100);
  LinkedVertexList links;
  for (int sweep = 0; sweep < 10000; ++sweep) {
    diagonal_update(s);
    build_links(s, links);
    expect_involution(links);
    const WeightFactors before = weight_factors(s);
    ASSERT_EQ(before.zero_elements, 0);
    cluster_update(s, links);
    ASSERT_EQ(weight_factors(s), before);
    if (sweep < 2000) adjust_cutoff(s);
    const ValidationReport r = validate_configuration(s);
    ASSERT_TRUE(r.ok) << "sweep " << sweep << ": " << r.message << " at slice " << r.slice;
  }
}
