#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace hexsse {

using Spin = std::int8_t;
/// z-basis eigenvalues, one entry per site, each -1 or +1.
using SpinConfig = std::vector<Spin>;

struct Coupling {
  int i = 0;
  int j = 0;
  double J = 0.0;  // > 0 antiferromagnetic, < 0 ferromagnetic
};

/// Labels needed by the honeycomb order parameters.
struct OrderLabels {
  std::vector<int> sublattice;  // per site, 1..6
  std::vector<int> unit_pos;    // per bond, 1..6 on a tracked unit edge, 0 otherwise
};

/// H = sum_b J_b s^z_i s^z_j + g sum_i s^x_i on an arbitrary graph.
struct SpinGraph {
  int n = 0;
  std::vector<Coupling> bonds;
  double g = 0.0;
  std::optional<OrderLabels> labels;

  double abs_coupling_sum() const;

  /// Classical Ising energy sum_b J_b s_i s_j.
  double ising_energy(std::span<const Spin> spins) const;

  /// Throws ConfigError on empty graphs, bad endpoints, self loops or duplicate bonds.
  void validate() const;
};

SpinGraph parse_spin_graph(const nlohmann::json& doc);
SpinGraph load_spin_graph(const std::string& path);
nlohmann::json to_json(const SpinGraph& graph);

/// Accepts either whitespace/comma separated +-1 integers or a compact
/// string of '+' and '-' characters.
SpinConfig parse_spin_config(std::string_view text);
SpinConfig load_spin_config(const std::string& path);
/// Compact "+-" rendering.
std::string format_spin_config(std::span<const Spin> spins);

void check_spins(std::span<const Spin> spins, int n);

}  // namespace hexsse
