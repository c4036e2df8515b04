#include "hexsse/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>

#include "hexsse/errors.hpp"

namespace hexsse {

std::string to_decimal(Count value) {
  if (value == 0) return "0";
  std::string s;
  while (value > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

namespace {

nlohmann::json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}, {"abs", std::abs(z)}}; }

nlohmann::json config_json(const GroundConfig& c) {
  return {{"spins", format_spin_config(c.spins)},
          {"mH", complex_json(c.mH)},
          {"psiH", complex_json(c.psiH)},
          {"uniform_position", c.uniform_position}};
}

int unit_count(const SpinGraph& graph) {
  if (!graph.labels) return 0;
  return static_cast<int>(std::count(graph.labels->unit_pos.begin(), graph.labels->unit_pos.end(), 1));
}

int uniform_position_of(const std::array<int, 6>& counts, int units) {
  if (units == 0) return 0;
  int total = 0;
  for (int c : counts) total += c;
  for (int k = 1; k <= 6; ++k)
    if (counts[k - 1] == units && total == units) return k;
  return 0;
}

GroundConfig describe(const SpinGraph& graph, SpinConfig spins, MsNorm norm) {
  GroundConfig c;
  c.mH = primary_order_parameter(graph, spins, norm);
  c.psiH = secondary_order_parameter(graph, spins);
  c.uniform_position = uniform_position_of(frustrated_edge_counts(graph, spins), unit_count(graph));
  c.spins = std::move(spins);
  return c;
}

void collect_positions(GroundStateReport& r) {
  std::set<int> ks;
  for (const auto& c : r.uniform) ks.insert(c.uniform_position);
  r.uniform_positions.assign(ks.begin(), ks.end());
}

}  // namespace

nlohmann::json to_json(const GroundStateReport& r) {
  nlohmann::json doc;
  doc["energy"] = r.energy;
  doc["energy_per_site"] = r.energy_per_site;
  doc["degeneracy"] = to_decimal(r.degeneracy);
  doc["one_frustrated_per_plaquette"] = r.one_frustrated_per_plaquette;
  doc["uniform_count"] = to_decimal(r.uniform_count);
  doc["uniform_positions"] = r.uniform_positions;
  auto uniform = nlohmann::json::array();
  for (const auto& c : r.uniform) uniform.push_back(config_json(c));
  doc["uniform"] = std::move(uniform);
  auto configs = nlohmann::json::array();
  for (const auto& c : r.configs) configs.push_back(config_json(c));
  doc["configs"] = std::move(configs);
  return doc;
}

ThermalMeans exact_thermal(const SpinGraph& graph, double beta, MsNorm norm) {
  graph.validate();
  if (graph.n > kMaxExactSites)
    throw CapacityError("exact diagonalisation supports at most " + std::to_string(kMaxExactSites) +
                        " sites, graph has " + std::to_string(graph.n));
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be finite and > 0");

  // Basis state a: bit i set means s^z_i = -1.
  const int n = graph.n;
  const Eigen::Index dim = Eigen::Index{1} << n;
  auto spin = [](Eigen::Index a, int i) { return ((a >> i) & 1) ? -1.0 : 1.0; };
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    double diag = 0.0;
    for (const auto& b : graph.bonds) diag += b.J * spin(a, b.i) * spin(a, b.j);
    H(a, a) = diag;
    for (int i = 0; i < n; ++i) H(a ^ (Eigen::Index{1} << i), a) += graph.g;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  const Eigen::VectorXd& E = solver.eigenvalues();
  const Eigen::MatrixXd& V = solver.eigenvectors();

  const Eigen::VectorXd w = (-beta * (E.array() - E.minCoeff())).exp();
  const double Z = w.sum();
  ThermalMeans out;
  out.energy = w.dot(E) / Z / n;
  if (graph.labels) {
    const Eigen::VectorXd rho_diag = V.array().square().matrix() * w / Z;
    SpinConfig s(n);
    for (Eigen::Index a = 0; a < dim; ++a) {
      for (int i = 0; i < n; ++i) s[i] = static_cast<Spin>(spin(a, i));
      out.abs_mH += rho_diag(a) * std::abs(primary_order_parameter(graph, s, norm));
      out.abs_psiH += rho_diag(a) * std::abs(secondary_order_parameter(graph, s));
    }
  }
  return out;
}

ClassicalResult classical_enumerate(const SpinGraph& graph, double beta, MsNorm norm, std::size_t cap) {
  graph.validate();
  if (graph.n > kMaxEnumerateSites)
    throw CapacityError("classical enumeration supports at most " + std::to_string(kMaxEnumerateSites) +
                        " sites, graph has " + std::to_string(graph.n));
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be finite and > 0");

  const int n = graph.n;
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const auto& b : graph.bonds) {
    adj[b.i].push_back({b.j, b.J});
    adj[b.j].push_back({b.i, b.J});
  }
  double scale = 1.0;
  for (const auto& b : graph.bonds) scale += std::abs(b.J);
  const double tol = 1e-9 * scale;

  SliceMeasurer measurer(graph, norm);
  SpinConfig s(n, 1);
  double energy = graph.ising_energy(s);
  double e_min = energy;
  double z = 0.0, sum_e = 0.0, sum_m = 0.0, sum_psi = 0.0;
  GroundStateReport ground;
  const int units = unit_count(graph);

  auto visit = [&]() {
    if (energy < e_min - tol) {
      const double r = std::exp(-beta * (e_min - energy));
      z *= r;
      sum_e *= r;
      sum_m *= r;
      sum_psi *= r;
      e_min = energy;
      ground.degeneracy = 0;
      ground.configs.clear();
      ground.uniform.clear();
      ground.uniform_count = 0;
    }
    const double w = std::exp(-beta * (energy - e_min));
    z += w;
    sum_e += w * energy;
    if (graph.labels) {
      sum_m += w * std::abs(measurer.mH_of(s));
      sum_psi += w * std::abs(measurer.psiH_of(s));
    }
    if (std::abs(energy - e_min) <= tol) {
      ++ground.degeneracy;
      const int k = units ? uniform_position_of(frustrated_edge_counts(graph, s), units) : 0;
      if (k) ++ground.uniform_count;
      if (ground.configs.size() < cap) ground.configs.push_back(describe(graph, s, norm));
      if (k && ground.uniform.size() < cap) ground.uniform.push_back(describe(graph, s, norm));
    }
  };

  visit();
  const std::uint64_t states = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < states; ++k) {
    const int i = std::countr_zero(k);
    double local = 0.0;
    for (const auto& [j, J] : adj[i]) local += J * s[j];
    energy -= 2.0 * s[i] * local;
    s[i] = static_cast<Spin>(-s[i]);
    visit();
  }

  ClassicalResult out;
  out.means.energy = sum_e / z / n;
  out.means.abs_mH = sum_m / z;
  out.means.abs_psiH = sum_psi / z;
  ground.energy = e_min;
  ground.energy_per_site = e_min / n;
  collect_positions(ground);
  out.ground = std::move(ground);
  return out;
}

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

struct Entry {
  std::int64_t e = kInf;
  Count n = 0;
};

void merge(Entry& into, std::int64_t e, Count n) {
  if (e < into.e) {
    into.e = e;
    into.n = n;
  } else if (e == into.e) {
    into.n += n;
  }
}

// Column x holds the spins of cells (x, 0..ny-1); bit 2y+sub, set bit = spin down.
// Intra-column bonds are types 0 and 2; type-1 bonds are rungs from column x-1's
// B spins to column x's A spins.
class ColumnDp {
 public:
  // bond_energy[b] = {energy if s_i s_j = +1, energy if s_i s_j = -1}
  ColumnDp(const Lattice& lat, const std::vector<std::array<std::int64_t, 2>>& bond_energy)
      : nx_(lat.cells_x()), ny_(lat.cells_y()), w_(2 * ny_), configs_(1 << w_), halves_(1 << ny_) {
    site_of_.assign(nx_, std::vector<int>(w_));
    for (const auto& s : lat.sites()) site_of_[s.x][2 * s.y + s.sub] = s.id;
    a_of_.resize(configs_);
    b_of_.resize(configs_);
    for (int c = 0; c < configs_; ++c) {
      int a = 0, b = 0;
      for (int y = 0; y < ny_; ++y) {
        a |= ((c >> (2 * y)) & 1) << y;
        b |= ((c >> (2 * y + 1)) & 1) << y;
      }
      a_of_[c] = a;
      b_of_[c] = b;
    }
    intra_.assign(nx_, std::vector<std::int64_t>(configs_, 0));
    rung_.assign(nx_, std::vector<std::int64_t>(configs_, 0));  // index bp * halves + a
    for (const auto& bond : lat.bonds()) {
      const Site& si = lat.sites()[bond.i];
      const Site& sj = lat.sites()[bond.j];
      const auto& e = bond_energy[bond.id];
      if (si.x == sj.x) {
        const int bi = 2 * si.y, bj = 2 * sj.y + 1;
        auto& t = intra_[si.x];
        for (int c = 0; c < configs_; ++c) t[c] += e[((c >> bi) ^ (c >> bj)) & 1];
      } else {
        auto& t = rung_[si.x];
        for (int bp = 0; bp < halves_; ++bp)
          for (int a = 0; a < halves_; ++a) t[bp * halves_ + a] += e[((a >> si.y) ^ (bp >> sj.y)) & 1];
      }
    }
  }

  // Minimum energy and its multiplicity over all anchors.
  Entry solve() {
    Entry best;
    for (int anchor = 0; anchor < halves_; ++anchor) {
      const Entry r = run(anchor, false);
      merge(best, r.e, r.n);
    }
    return best;
  }

  // Up to cap configurations attaining `target`.
  std::vector<SpinConfig> enumerate(std::int64_t target, std::size_t cap) {
    std::vector<SpinConfig> out;
    std::vector<int> cols(nx_);
    for (int anchor = 0; anchor < halves_ && out.size() < cap; ++anchor) {
      if (run(anchor, true).e != target) continue;
      const auto& last = layers_[nx_ - 1];
      for (int c = 0; c < configs_ && out.size() < cap; ++c) {
        if (last[c].e >= kInf || last[c].e + rung_[0][b_of_[c] * halves_ + anchor] != target) continue;
        backtrack(nx_ - 1, c, cols, out, cap);
      }
    }
    return out;
  }

 private:
  Entry run(int anchor, bool keep) {
    std::vector<Entry> f(configs_);
    for (int c = 0; c < configs_; ++c)
      if (a_of_[c] == anchor) f[c] = {intra_[0][c], 1};
    if (keep) layers_.assign(1, f);
    std::vector<Entry> g(halves_), h(halves_);
    for (int x = 1; x < nx_; ++x) {
      std::fill(g.begin(), g.end(), Entry{});
      std::fill(h.begin(), h.end(), Entry{});
      for (int c = 0; c < configs_; ++c)
        if (f[c].e < kInf) merge(g[b_of_[c]], f[c].e, f[c].n);
      const auto& rung = rung_[x];
      for (int bp = 0; bp < halves_; ++bp) {
        if (g[bp].e >= kInf) continue;
        for (int a = 0; a < halves_; ++a) merge(h[a], g[bp].e + rung[bp * halves_ + a], g[bp].n);
      }
      for (int c = 0; c < configs_; ++c) {
        const Entry& ha = h[a_of_[c]];
        f[c] = ha.e < kInf ? Entry{ha.e + intra_[x][c], ha.n} : Entry{};
      }
      if (keep) layers_.push_back(f);
    }
    Entry total;
    for (int c = 0; c < configs_; ++c)
      if (f[c].e < kInf) merge(total, f[c].e + rung_[0][b_of_[c] * halves_ + anchor], f[c].n);
    return total;
  }

  void backtrack(int x, int c, std::vector<int>& cols, std::vector<SpinConfig>& out, std::size_t cap) {
    cols[x] = c;
    if (x == 0) {
      SpinConfig s(static_cast<std::size_t>(nx_) * w_);
      for (int cx = 0; cx < nx_; ++cx)
        for (int bit = 0; bit < w_; ++bit) s[site_of_[cx][bit]] = ((cols[cx] >> bit) & 1) ? -1 : 1;
      out.push_back(std::move(s));
      return;
    }
    const auto& prev = layers_[x - 1];
    const std::int64_t need = layers_[x][c].e - intra_[x][c];
    for (int p = 0; p < configs_ && out.size() < cap; ++p) {
      if (prev[p].e >= kInf) continue;
      if (prev[p].e + rung_[x][b_of_[p] * halves_ + a_of_[c]] == need) backtrack(x - 1, p, cols, out, cap);
    }
  }

  int nx_, ny_, w_, configs_, halves_;
  std::vector<std::vector<int>> site_of_;
  std::vector<int> a_of_, b_of_;
  std::vector<std::vector<std::int64_t>> intra_, rung_;
  std::vector<std::vector<Entry>> layers_;
};

}  // namespace

GroundStateReport ground_states_dp(const Lattice& lattice, std::size_t cap, std::span<const double> couplings,
                                   MsNorm norm) {
  const int width = 2 * lattice.cells_y();
  if (width > kMaxColumnWidth)
    throw CapacityError("column transfer supports widths up to " + std::to_string(kMaxColumnWidth) +
                        " spins, lattice column has " + std::to_string(width));
  if (!couplings.empty() && couplings.size() != lattice.bonds().size())
    throw ConfigError("coupling override has " + std::to_string(couplings.size()) + " entries, lattice has " +
                      std::to_string(lattice.nb()) + " bonds");

  SpinGraph graph = lattice.to_graph(0.0);
  if (!couplings.empty())
    for (std::size_t b = 0; b < couplings.size(); ++b) graph.bonds[b].J = couplings[b];
  std::vector<std::int64_t> J(graph.bonds.size());
  for (std::size_t b = 0; b < J.size(); ++b) {
    J[b] = std::llround(graph.bonds[b].J);
    if (static_cast<double>(J[b]) != graph.bonds[b].J) throw ConfigError("column transfer needs integer couplings");
  }

  std::vector<std::array<std::int64_t, 2>> plain(J.size());
  for (std::size_t b = 0; b < J.size(); ++b) plain[b] = {J[b], -J[b]};
  ColumnDp dp(lattice, plain);
  const Entry ground = dp.solve();

  GroundStateReport report;
  report.energy = static_cast<double>(ground.e);
  report.energy_per_site = report.energy / lattice.nn();
  report.degeneracy = ground.n;
  for (auto& s : dp.enumerate(ground.e, cap)) report.configs.push_back(describe(graph, std::move(s), norm));

  // Uniform class k: any unit edge whose frustration disagrees with "only at k" costs
  // more than the whole energy range, so the class exists iff the penalised minimum
  // still equals the ground energy.
  if (lattice.labeled()) {
    std::int64_t penalty = 1;
    for (auto j : J) penalty += 4 * std::abs(j);
    for (int k = 1; k <= 6; ++k) {
      auto table = plain;
      for (const auto& bond : lattice.bonds()) {
        if (bond.unit_pos == 0) continue;
        for (int p = 0; p < 2; ++p) {
          const bool frustrated = table[bond.id][p] > 0;
          if (frustrated != (bond.unit_pos == k)) table[bond.id][p] += penalty;
        }
      }
      ColumnDp pen(lattice, table);
      const Entry r = pen.solve();
      if (r.e != ground.e) continue;
      report.uniform_count += r.n;
      const std::size_t room = cap > report.uniform.size() ? cap - report.uniform.size() : 0;
      for (auto& s : pen.enumerate(ground.e, room)) report.uniform.push_back(describe(graph, std::move(s), norm));
    }
    collect_positions(report);
  }

  auto plaquette_ok = [&](const SpinConfig& s) {
    for (const auto& plaq : lattice.plaquettes()) {
      int frustrated = 0;
      for (int b : plaq) {
        const auto& c = graph.bonds[b];
        frustrated += c.J * s[c.i] * s[c.j] > 0 ? 1 : 0;
      }
      if (frustrated != 1) return false;
    }
    return true;
  };
  for (const auto& c : report.configs) report.one_frustrated_per_plaquette &= plaquette_ok(c.spins);
  for (const auto& c : report.uniform) report.one_frustrated_per_plaquette &= plaquette_ok(c.spins);
  return report;
}

}  // namespace hexsse
