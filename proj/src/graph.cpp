#include "hexsse/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "hexsse/errors.hpp"

namespace hexsse {

double SpinGraph::abs_coupling_sum() const {
  double s = 0.0;
  for (const auto& b : bonds) s += std::abs(b.J);
  return s;
}

double SpinGraph::ising_energy(std::span<const Spin> spins) const {
  double e = 0.0;
  for (const auto& b : bonds) e += b.J * spins[b.i] * spins[b.j];
  return e;
}

void SpinGraph::validate() const {
  if (n < 1) throw ConfigError("graph must have at least one site");
  if (!std::isfinite(g) || g < 0.0) throw ConfigError("graph field g must be finite and >= 0");
  std::set<std::pair<int, int>> seen;
  for (const auto& b : bonds) {
    if (b.i < 0 || b.i >= n || b.j < 0 || b.j >= n)
      throw ConfigError("bond endpoint out of range: (" + std::to_string(b.i) + ", " +
                        std::to_string(b.j) + ")");
    if (b.i == b.j) throw ConfigError("self bond on site " + std::to_string(b.i));
    if (!std::isfinite(b.J)) throw ConfigError("non-finite coupling");
    if (!seen.insert(std::minmax(b.i, b.j)).second)
      throw ConfigError("duplicate bond (" + std::to_string(b.i) + ", " + std::to_string(b.j) + ")");
  }
  if (labels) {
    if (labels->sublattice.size() != static_cast<std::size_t>(n))
      throw ConfigError("sublattice label count differs from n");
    if (labels->unit_pos.size() != bonds.size())
      throw ConfigError("unit_pos label count differs from bond count");
    for (int s : labels->sublattice)
      if (s < 1 || s > 6) throw ConfigError("sublattice label outside 1..6");
    for (int p : labels->unit_pos)
      if (p < 0 || p > 6) throw ConfigError("unit_pos label outside 0..6");
  }
}

SpinGraph parse_spin_graph(const nlohmann::json& doc) {
  SpinGraph graph;
  try {
    graph.n = doc.at("n").get<int>();
    graph.g = doc.value("g", 0.0);
    for (const auto& b : doc.at("bonds")) {
      if (!b.is_array() || b.size() != 3) throw ConfigError("each bond must be [i, j, J]");
      graph.bonds.push_back({b[0].get<int>(), b[1].get<int>(), b[2].get<double>()});
    }
    if (doc.contains("sublattice") || doc.contains("unit_pos")) {
      OrderLabels labels;
      labels.sublattice = doc.at("sublattice").get<std::vector<int>>();
      labels.unit_pos = doc.at("unit_pos").get<std::vector<int>>();
      graph.labels = std::move(labels);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed graph document: ") + e.what());
  }
  graph.validate();
  return graph;
}

SpinGraph load_spin_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open graph file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot parse graph file " + path + ": " + e.what());
  }
  return parse_spin_graph(doc);
}

nlohmann::json to_json(const SpinGraph& graph) {
  nlohmann::json doc;
  doc["n"] = graph.n;
  doc["g"] = graph.g;
  auto bonds = nlohmann::json::array();
  for (const auto& b : graph.bonds) bonds.push_back({b.i, b.j, b.J});
  doc["bonds"] = std::move(bonds);
  if (graph.labels) {
    doc["sublattice"] = graph.labels->sublattice;
    doc["unit_pos"] = graph.labels->unit_pos;
  }
  return doc;
}

SpinConfig parse_spin_config(std::string_view text) {
  SpinConfig spins;
  const bool compact = text.find_first_of("+-") != std::string_view::npos &&
                       text.find_first_of("0123456789") == std::string_view::npos;
  if (compact) {
    for (char c : text) {
      if (c == '+') spins.push_back(1);
      else if (c == '-') spins.push_back(-1);
      else if (!std::isspace(static_cast<unsigned char>(c)))
        throw ConfigError(std::string("unexpected character in spin string: ") + c);
    }
    return spins;
  }
  std::string buf(text);
  std::replace(buf.begin(), buf.end(), ',', ' ');
  std::istringstream in(buf);
  std::string tok;
  while (in >> tok) {
    if (tok == "1" || tok == "+1") spins.push_back(1);
    else if (tok == "-1") spins.push_back(-1);
    else throw ConfigError("spin value must be +1 or -1, got '" + tok + "'");
  }
  return spins;
}

SpinConfig load_spin_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open spin configuration file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spin_config(ss.str());
}

std::string format_spin_config(std::span<const Spin> spins) {
  std::string s;
  s.reserve(spins.size());
  for (Spin v : spins) s.push_back(v > 0 ? '+' : '-');
  return s;
}

void check_spins(std::span<const Spin> spins, int n) {
  if (spins.size() != static_cast<std::size_t>(n))
    throw ConfigError("spin configuration has " + std::to_string(spins.size()) +
                      " entries, lattice has " + std::to_string(n) + " sites");
  for (Spin v : spins)
    if (v != 1 && v != -1) throw ConfigError("spin entries must be +1 or -1");
}

}  // namespace hexsse
