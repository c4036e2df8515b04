#include "hexsse/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "hexsse/errors.hpp"

namespace hexsse {

namespace {

// Periodic pattern on a 6 x 3 block of cells, indexed [y % 3][x % 6].
// kLabel[..][..][sub] is the sublattice label of the A (sub=0) / B (sub=1) site.
// kAntiferro[..][..][t] flags bond type t of the cell as antiferromagnetic,
// where type 0 = A(x,y)-B(x,y), 1 = A(x,y)-B(x-1,y), 2 = A(x,y)-B(x,y-1).
//
// Every hexagon carries exactly one AF bond, every tracked unit carries it on
// edge position 6, and the configurations "all up", "sublattices 1,2 down" and
// "sublattices 1..4 down" are ground states whose units are frustrated only on
// edges 6, 2 and 4 respectively.
constexpr int kLabel[3][6][2] = {
    {{1, 2}, {3, 4}, {5, 6}, {5, 6}, {1, 4}, {3, 2}},
    {{3, 4}, {3, 2}, {1, 4}, {5, 6}, {5, 6}, {1, 2}},
    {{5, 6}, {5, 4}, {3, 2}, {1, 4}, {3, 2}, {1, 6}},
};
constexpr bool kAntiferro[3][6][3] = {
    {{0, 0, 1}, {0, 0, 0}, {0, 0, 1}, {0, 0, 0}, {0, 1, 0}, {0, 0, 0}},
    {{0, 0, 1}, {0, 0, 0}, {0, 0, 1}, {0, 0, 0}, {0, 0, 0}, {0, 1, 0}},
    {{0, 0, 0}, {0, 0, 1}, {0, 0, 0}, {0, 0, 1}, {0, 0, 0}, {1, 0, 0}},
};

int wrap(int v, int n) { return ((v % n) + n) % n; }

struct Geometry {
  int nx;
  int ny;
  int site(int x, int y, int sub) const { return 2 * (wrap(y, ny) * nx + wrap(x, nx)) + sub; }
  int bond(int x, int y, int type) const { return 3 * (wrap(y, ny) * nx + wrap(x, nx)) + type; }
  int cell(int x, int y) const { return wrap(y, ny) * nx + wrap(x, nx); }
  // Hexagon (x, y): vertices A(x,y) B(x,y) A(x+1,y) B(x+1,y-1) A(x+1,y-1) B(x,y-1).
  std::array<int, 6> hex_sites(int x, int y) const {
    return {site(x, y, 0),     site(x, y, 1),         site(x + 1, y, 0),
            site(x + 1, y - 1, 1), site(x + 1, y - 1, 0), site(x, y - 1, 1)};
  }
  // Edge k joins vertex k and vertex k+1.
  std::array<int, 6> hex_bonds(int x, int y) const {
    return {bond(x, y, 0),         bond(x + 1, y, 1),     bond(x + 1, y, 2),
            bond(x + 1, y - 1, 0), bond(x + 1, y - 1, 1), bond(x, y, 2)};
  }
  // Tracked units are one colour class of the 3-colourable triangular lattice of hexagons.
  static bool is_unit(int x, int y) { return wrap(x - y, 3) == 0; }
};

void fail(const std::string& what) { throw ConstructionError("lattice invariant violated: " + what); }

}  // namespace

std::string to_string(CouplingPattern p) { return p == CouplingPattern::Villain ? "default" : "ferro"; }

CouplingPattern parse_pattern(std::string_view text) {
  if (text == "default" || text == "villain") return CouplingPattern::Villain;
  if (text == "ferro") return CouplingPattern::Ferro;
  throw ConfigError("unknown coupling pattern '" + std::string(text) + "' (expected default|ferro)");
}

int Lattice::site_id(int x, int y, int sub) const { return Geometry{cells_x(), cells_y()}.site(x, y, sub); }

Point Lattice::position(int site) const {
  const Site& s = sites_.at(site);
  const double r3 = std::sqrt(3.0);
  return {r3 * s.x + 0.5 * r3 * s.y + 0.5 * r3 * s.sub, 1.5 * s.y + 0.5 * s.sub};
}

SpinGraph Lattice::to_graph(double g) const {
  SpinGraph graph;
  graph.n = nn();
  graph.g = g;
  graph.bonds.reserve(bonds_.size());
  for (const auto& b : bonds_) graph.bonds.push_back({b.i, b.j, b.J});
  if (labeled()) {
    OrderLabels labels;
    for (const auto& s : sites_) labels.sublattice.push_back(s.sublattice);
    for (const auto& b : bonds_) labels.unit_pos.push_back(b.unit_pos);
    graph.labels = std::move(labels);
  }
  return graph;
}

Lattice build_lattice(int lx, int ly, CouplingPattern pattern) {
  if (pattern == CouplingPattern::Villain) {
    if (lx < 5 || (lx - 5) % 6 != 0)
      throw ConfigError("lx = " + std::to_string(lx) + " violates lx = 5 + 6m (m >= 0)");
    if (ly < 2 || (ly - 2) % 3 != 0)
      throw ConfigError("ly = " + std::to_string(ly) + " violates ly = 2 + 3n (n >= 0)");
  } else {
    if (lx < 1) throw ConfigError("lx = " + std::to_string(lx) + " violates lx >= 1");
    if (ly < 1) throw ConfigError("ly = " + std::to_string(ly) + " violates ly >= 1");
  }

  Lattice lat;
  lat.lx_ = lx;
  lat.ly_ = ly;
  lat.pattern_ = pattern;
  const Geometry geo{lx + 1, ly + 1};
  const int cells = geo.nx * geo.ny;

  // Label scheme: the 6x3 table when it tiles, otherwise every unit labelled in
  // the same orientation when units exist at all, otherwise no labels.
  const bool table_tiles = geo.nx % 6 == 0 && geo.ny % 3 == 0;
  const bool units_exist = geo.nx % 3 == 0 && geo.ny % 3 == 0;

  lat.sites_.resize(2 * cells);
  lat.bonds_.resize(3 * cells);
  for (int y = 0; y < geo.ny; ++y) {
    for (int x = 0; x < geo.nx; ++x) {
      for (int sub = 0; sub < 2; ++sub) {
        Site& s = lat.sites_[geo.site(x, y, sub)];
        s.id = geo.site(x, y, sub);
        s.x = x;
        s.y = y;
        s.sub = sub;
        s.gx = 2 * x + sub + y;
        s.gy = y;
        s.sublattice = table_tiles ? kLabel[y % 3][x % 6][sub] : 0;
      }
      const int a = geo.site(x, y, 0);
      const std::array<int, 3> partner = {geo.site(x, y, 1), geo.site(x - 1, y, 1), geo.site(x, y - 1, 1)};
      for (int t = 0; t < 3; ++t) {
        Bond& b = lat.bonds_[geo.bond(x, y, t)];
        b.id = geo.bond(x, y, t);
        b.i = a;
        b.j = partner[t];
        const bool af = pattern == CouplingPattern::Villain && kAntiferro[y % 3][x % 6][t];
        b.J = af ? 1.0 : -1.0;
      }
    }
  }

  if (units_exist && !table_tiles) {
    for (int y = 0; y < geo.ny; ++y)
      for (int x = 0; x < geo.nx; ++x)
        if (Geometry::is_unit(x, y)) {
          const auto vs = geo.hex_sites(x, y);
          for (int k = 0; k < 6; ++k) lat.sites_[vs[k]].sublattice = k + 1;
        }
  }

  lat.plaquettes_.reserve(cells);
  for (int y = 0; y < geo.ny; ++y)
    for (int x = 0; x < geo.nx; ++x) lat.plaquettes_.push_back(geo.hex_bonds(x, y));

  if (units_exist) {
    for (int y = 0; y < geo.ny; ++y) {
      for (int x = 0; x < geo.nx; ++x) {
        if (!Geometry::is_unit(x, y)) continue;
        const auto vs = geo.hex_sites(x, y);
        const auto es = geo.hex_bonds(x, y);
        Unit u;
        for (int v : vs) u.sites[lat.sites_[v].sublattice - 1] = v;
        for (int e : es) {
          const int li = lat.sites_[lat.bonds_[e].i].sublattice;
          const int lj = lat.sites_[lat.bonds_[e].j].sublattice;
          int pos = 0;
          if (li % 6 + 1 == lj) pos = li;
          else if (lj % 6 + 1 == li) pos = lj;
          else fail("unit edge joins non-adjacent labels " + std::to_string(li) + "," + std::to_string(lj));
          u.bonds[pos - 1] = e;
          lat.bonds_[e].unit_pos = pos;
        }
        lat.units_.push_back(u);
      }
    }
  }

  lat.check_invariants();
  return lat;
}

void Lattice::check_invariants() const {
  const int nx = cells_x();
  const int ny = cells_y();
  if (nn() != 2 * nx * ny) fail("site count");
  if (nb() != 3 * nx * ny) fail("bond count");

  std::vector<int> degree(nn(), 0);
  for (int b = 0; b < nb(); ++b) {
    const Bond& bd = bonds_[b];
    if (bd.id != b) fail("bond ids not dense");
    if (bd.i < 0 || bd.i >= nn() || bd.j < 0 || bd.j >= nn() || bd.i == bd.j) fail("bond endpoints");
    if (bd.J != 1.0 && bd.J != -1.0) fail("coupling not +-1");
    ++degree[bd.i];
    ++degree[bd.j];
  }
  for (int d : degree)
    if (d != 3) fail("site degree " + std::to_string(d));

  std::vector<int> membership(nb(), 0);
  for (std::size_t p = 0; p < plaquettes_.size(); ++p) {
    int af = 0;
    for (int b : plaquettes_[p]) {
      ++membership.at(b);
      if (bonds_[b].J > 0) ++af;
    }
    if (pattern_ == CouplingPattern::Villain && af != 1)
      fail("plaquette " + std::to_string(p) + " has " + std::to_string(af) + " antiferromagnetic bonds");
    if (pattern_ == CouplingPattern::Ferro && af != 0) fail("ferro lattice has an antiferromagnetic bond");
  }
  for (int m : membership)
    if (m != 2) fail("bond not shared by exactly two plaquettes");

  if (!labeled()) {
    for (const auto& s : sites_)
      if (s.sublattice != 0) fail("unlabelled lattice carries sublattice labels");
    return;
  }
  std::array<int, 7> per_label{};
  for (const auto& s : sites_) {
    if (s.sublattice < 1 || s.sublattice > 6) fail("sublattice label out of range");
    ++per_label[s.sublattice];
  }
  for (int s = 1; s <= 6; ++s)
    if (per_label[s] * 6 != nn()) fail("sublattice " + std::to_string(s) + " size");

  if (static_cast<int>(units_.size()) * 6 != nn()) fail("unit count");
  std::vector<int> covered(nn(), 0);
  std::vector<int> unit_edges(nb(), 0);
  for (const auto& u : units_) {
    for (int s = 0; s < 6; ++s) {
      ++covered.at(u.sites[s]);
      if (sites_[u.sites[s]].sublattice != s + 1) fail("unit site order");
    }
    for (int k = 0; k < 6; ++k) {
      const Bond& b = bonds_.at(u.bonds[k]);
      ++unit_edges[b.id];
      if (b.unit_pos != k + 1) fail("unit edge position label");
      const int a = u.sites[k];
      const int c = u.sites[(k + 1) % 6];
      if (!((b.i == a && b.j == c) || (b.i == c && b.j == a))) fail("unit edge endpoints");
    }
  }
  for (int c : covered)
    if (c != 1) fail("units do not partition the sites");
  for (int b = 0; b < nb(); ++b)
    if ((unit_edges[b] == 0) != (bonds_[b].unit_pos == 0)) fail("stray unit_pos label");
}

bool operator==(const Lattice& a, const Lattice& b) {
  auto site_eq = [](const Site& p, const Site& q) {
    return p.id == q.id && p.x == q.x && p.y == q.y && p.sub == q.sub && p.gx == q.gx && p.gy == q.gy &&
           p.sublattice == q.sublattice;
  };
  auto bond_eq = [](const Bond& p, const Bond& q) {
    return p.id == q.id && p.i == q.i && p.j == q.j && p.J == q.J && p.unit_pos == q.unit_pos;
  };
  auto unit_eq = [](const Unit& p, const Unit& q) { return p.sites == q.sites && p.bonds == q.bonds; };
  return a.lx_ == b.lx_ && a.ly_ == b.ly_ && a.pattern_ == b.pattern_ &&
         std::equal(a.sites_.begin(), a.sites_.end(), b.sites_.begin(), b.sites_.end(), site_eq) &&
         std::equal(a.bonds_.begin(), a.bonds_.end(), b.bonds_.begin(), b.bonds_.end(), bond_eq) &&
         a.plaquettes_ == b.plaquettes_ &&
         std::equal(a.units_.begin(), a.units_.end(), b.units_.begin(), b.units_.end(), unit_eq);
}

int frustration_indicator(const Lattice& lattice, std::span<const Spin> spins, int bond_id) {
  const Bond& b = lattice.bonds().at(bond_id);
  return b.J * spins[b.i] * spins[b.j] > 0 ? 1 : 0;
}

nlohmann::json dump_lattice(const Lattice& lattice) {
  using nlohmann::json;
  json doc;
  doc["lx"] = lattice.lx();
  doc["ly"] = lattice.ly();
  doc["nn"] = lattice.nn();
  doc["nb"] = lattice.nb();
  doc["pattern"] = to_string(lattice.pattern());
  json sites = json::array();
  for (const auto& s : lattice.sites()) {
    const Point p = lattice.position(s.id);
    sites.push_back({{"id", s.id},     {"x", s.x},   {"y", s.y},   {"sub", s.sub},
                     {"gx", s.gx},     {"gy", s.gy}, {"sublattice", s.sublattice},
                     {"px", p.x},      {"py", p.y}});
  }
  doc["sites"] = std::move(sites);
  json bonds = json::array();
  for (const auto& b : lattice.bonds())
    bonds.push_back({{"id", b.id}, {"i", b.i}, {"j", b.j}, {"J", b.J}, {"unit_pos", b.unit_pos}});
  doc["bonds"] = std::move(bonds);
  json plaquettes = json::array();
  for (const auto& p : lattice.plaquettes()) plaquettes.push_back(p);
  doc["plaquettes"] = std::move(plaquettes);
  json units = json::array();
  for (const auto& u : lattice.units()) units.push_back({{"sites", u.sites}, {"bonds", u.bonds}});
  doc["units"] = std::move(units);
  return doc;
}

Lattice parse_lattice(const nlohmann::json& doc) {
  Lattice lat;
  try {
    lat.lx_ = doc.at("lx").get<int>();
    lat.ly_ = doc.at("ly").get<int>();
    lat.pattern_ = parse_pattern(doc.at("pattern").get<std::string>());
    for (const auto& s : doc.at("sites")) {
      Site site;
      site.id = s.at("id");
      site.x = s.at("x");
      site.y = s.at("y");
      site.sub = s.at("sub");
      site.gx = s.at("gx");
      site.gy = s.at("gy");
      site.sublattice = s.at("sublattice");
      lat.sites_.push_back(site);
    }
    for (const auto& b : doc.at("bonds")) {
      Bond bond;
      bond.id = b.at("id");
      bond.i = b.at("i");
      bond.j = b.at("j");
      bond.J = b.at("J");
      bond.unit_pos = b.at("unit_pos");
      lat.bonds_.push_back(bond);
    }
    for (const auto& p : doc.at("plaquettes")) lat.plaquettes_.push_back(p.get<Plaquette>());
    for (const auto& u : doc.at("units"))
      lat.units_.push_back({u.at("sites").get<std::array<int, 6>>(), u.at("bonds").get<std::array<int, 6>>()});
    if (doc.at("nn").get<int>() != lat.nn() || doc.at("nb").get<int>() != lat.nb())
      throw ConfigError("lattice document nn/nb disagree with record counts");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed lattice document: ") + e.what());
  }
  for (int i = 0; i < lat.nn(); ++i)
    if (lat.sites_[i].id != i) throw ConfigError("lattice document site ids are not 0..nn-1");
  try {
    lat.check_invariants();
  } catch (const ConstructionError& e) {
    throw ConfigError(std::string("lattice document rejected: ") + e.what());
  }
  return lat;
}

std::string lattice_svg(const Lattice& lattice) {
  const double scale = 40.0;
  const double margin = 30.0;
  double max_x = 0.0;
  double max_y = 0.0;
  for (int s = 0; s < lattice.nn(); ++s) {
    const Point p = lattice.position(s);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  const double width = max_x * scale + 2 * margin;
  const double height = max_y * scale + 2 * margin;
  auto sx = [&](double x) { return margin + x * scale; };
  auto sy = [&](double y) { return height - margin - y * scale; };

  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(2);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (const auto& u : lattice.units()) {
    out << "<polygon fill=\"#c8f0c8\" stroke=\"none\" points=\"";
    const Point first = lattice.position(u.sites[0]);
    bool wraps = false;
    for (int s : u.sites) {
      const Point p = lattice.position(s);
      if (std::hypot(p.x - first.x, p.y - first.y) > 2.5) wraps = true;
    }
    if (wraps) {
      out << "\"/>\n";
      continue;
    }
    for (int s : u.sites) {
      const Point p = lattice.position(s);
      out << sx(p.x) << ',' << sy(p.y) << ' ';
    }
    out << "\"/>\n";
  }

  for (const auto& b : lattice.bonds()) {
    const Point p = lattice.position(b.i);
    const Point q = lattice.position(b.j);
    const bool wrap_bond = std::hypot(p.x - q.x, p.y - q.y) > 1.5;
    const char* colour = b.J > 0 ? "#d62728" : "black";
    if (wrap_bond) {
      // Short stub from the A site towards where the partner would sit.
      const int dx_sign = q.x > p.x ? -1 : (q.x < p.x ? 1 : 0);
      const int dy_sign = q.y > p.y ? -1 : (q.y < p.y ? 1 : 0);
      out << "<line x1=\"" << sx(p.x) << "\" y1=\"" << sy(p.y) << "\" x2=\"" << sx(p.x + 0.45 * dx_sign)
          << "\" y2=\"" << sy(p.y + 0.45 * dy_sign) << "\" stroke=\"" << colour
          << "\" stroke-width=\"2\" stroke-dasharray=\"4,3\"/>\n";
    } else {
      out << "<line x1=\"" << sx(p.x) << "\" y1=\"" << sy(p.y) << "\" x2=\"" << sx(q.x) << "\" y2=\"" << sy(q.y)
          << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    }
    if (b.unit_pos != 0 && !wrap_bond) {
      out << "<text x=\"" << sx(0.5 * (p.x + q.x)) << "\" y=\"" << sy(0.5 * (p.y + q.y))
          << "\" font-size=\"9\" fill=\"#2060c0\" text-anchor=\"middle\">" << b.unit_pos << "</text>\n";
    }
  }

  for (const auto& s : lattice.sites()) {
    const Point p = lattice.position(s.id);
    out << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y) << "\" r=\"7\" fill=\"white\" stroke=\"black\"/>\n";
    if (s.sublattice != 0)
      out << "<text x=\"" << sx(p.x) << "\" y=\"" << sy(p.y) + 3.5
          << "\" font-size=\"10\" text-anchor=\"middle\">" << s.sublattice << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace hexsse
