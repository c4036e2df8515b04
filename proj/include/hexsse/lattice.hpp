#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hexsse/graph.hpp"
#include "json.hpp"

namespace hexsse {

enum class CouplingPattern {
  Villain,  // one antiferromagnetic bond per hexagon ("default")
  Ferro,    // every coupling -J
};

std::string to_string(CouplingPattern p);
CouplingPattern parse_pattern(std::string_view text);

/// A honeycomb site. The torus has (lx+1) x (ly+1) two-site cells; (x, y, sub)
/// is the cell and the A/B sublattice (0/1). (gx, gy) is the site's position
/// on a sheared brick-wall grid: rows are y, and gx = 2x + sub + y.
struct Site {
  int id = 0;
  int x = 0;
  int y = 0;
  int sub = 0;
  int gx = 0;
  int gy = 0;
  int sublattice = 0;  // 1..6, 0 when the lattice carries no order labels
};

/// i is always the A-site and j the B-site of the bond.
struct Bond {
  int id = 0;
  int i = 0;
  int j = 0;
  double J = 0.0;
  int unit_pos = 0;  // edge position 1..6 on its tracked unit, 0 if not a unit edge
};

/// A tracked hexagon. sites[s-1] carries sublattice label s; bonds[k-1] is the
/// edge at position k, which joins sublattices k and k+1 (position 6 joins 6 and 1).
struct Unit {
  std::array<int, 6> sites{};
  std::array<int, 6> bonds{};
};

/// Bond ids of one elementary hexagon, in cyclic order.
using Plaquette = std::array<int, 6>;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Periodic honeycomb lattice with coupling signs and order-parameter labels.
/// Immutable once built; share freely between chains.
class Lattice {
 public:
  int lx() const { return lx_; }
  int ly() const { return ly_; }
  int cells_x() const { return lx_ + 1; }
  int cells_y() const { return ly_ + 1; }
  int nn() const { return static_cast<int>(sites_.size()); }
  int nb() const { return static_cast<int>(bonds_.size()); }
  CouplingPattern pattern() const { return pattern_; }
  bool labeled() const { return !units_.empty(); }

  const std::vector<Site>& sites() const { return sites_; }
  const std::vector<Bond>& bonds() const { return bonds_; }
  const std::vector<Plaquette>& plaquettes() const { return plaquettes_; }
  const std::vector<Unit>& units() const { return units_; }

  int site_id(int x, int y, int sub) const;

  /// Embedding for plotting: unit bond length, a1 = (sqrt3, 0), a2 = (sqrt3/2, 3/2).
  Point position(int site) const;

  SpinGraph to_graph(double g) const;

  /// Recomputes every invariant; throws ConstructionError on the first failure.
  void check_invariants() const;

  friend Lattice build_lattice(int lx, int ly, CouplingPattern pattern);
  friend Lattice parse_lattice(const nlohmann::json& doc);
  friend bool operator==(const Lattice&, const Lattice&);

 private:
  Lattice() = default;

  int lx_ = 0;
  int ly_ = 0;
  CouplingPattern pattern_ = CouplingPattern::Villain;
  std::vector<Site> sites_;
  std::vector<Bond> bonds_;
  std::vector<Plaquette> plaquettes_;
  std::vector<Unit> units_;
};

bool operator==(const Lattice& a, const Lattice& b);

/// Villain pattern requires lx = 5 + 6m and ly = 2 + 3n; ferro accepts lx, ly >= 1.
/// Throws ConfigError naming the violated constraint.
Lattice build_lattice(int lx, int ly, CouplingPattern pattern = CouplingPattern::Villain);

/// 1 iff J_b s_i s_j > 0.
int frustration_indicator(const Lattice& lattice, std::span<const Spin> spins, int bond_id);

nlohmann::json dump_lattice(const Lattice& lattice);
/// Inverse of dump_lattice. Validates every invariant (including the odd
/// antiferromagnetic count per plaquette) and throws ConfigError on failure.
Lattice parse_lattice(const nlohmann::json& doc);

/// SVG drawing: ferro bonds black, antiferro bonds red, wrap-around bonds
/// dashed, tracked units shaded green, sites annotated with their sublattice.
std::string lattice_svg(const Lattice& lattice);

}  // namespace hexsse
