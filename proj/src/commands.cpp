#include "hexsse/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <thread>

#include "hexsse/errors.hpp"
#include "hexsse/lattice.hpp"
#include "hexsse/oracle.hpp"
#include "hexsse/simulation.hpp"

namespace hexsse {

namespace fs = std::filesystem;

const char* const kResultsHeader =
    "g,beta,lx,ly,nn,seed,e_mean,e_err,abs_mH_mean,abs_mH_err,abs_mH_sliceavg_mean,abs_psiH_mean,abs_psiH_err,"
    "n_mean,L_final,max_nh,saturated,valid";
const char* const kSamplesHeader = "sweep,re_mH,im_mH,re_psiH,im_psiH";
const char* const kBinsHeader = "bin,n_mean,e_mean,abs_mH,abs_mH_sliceavg,abs_psiH";

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir);
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::trunc) {
  std::ofstream out(path, std::ios::out | mode);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

void append_rows(const std::string& dir, const std::vector<std::string>& rows) {
  const fs::path path = fs::path(dir) / "results.csv";
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  auto out = open_out(path, std::ios::app);
  if (fresh) out << kResultsHeader << '\n';
  for (const auto& r : rows) out << r << '\n';
  if (!out) throw ConfigError("write failed: " + path.string());
}

void write_point_files(const RunConfig& config, int nn, const RunResult& result, const OutputOptions& options) {
  const fs::path dir(config.out_dir);
  {
    auto out = open_out(dir / samples_file_name(config.g, config.seed));
    out << kSamplesHeader << '\n';
    for (const auto& s : result.samples)
      out << s.sweep << ',' << num(s.mH.real()) << ',' << num(s.mH.imag()) << ',' << num(s.psiH.real()) << ','
          << num(s.psiH.imag()) << '\n';
    if (!out) throw ConfigError("write failed for samples file");
  }
  if (options.write_bins) {
    auto out = open_out(dir / bins_file_name(config.g, config.seed));
    out << kBinsHeader << '\n';
    for (std::size_t b = 0; b < result.bins.size(); ++b) {
      const auto& r = result.bins[b];
      out << b << ',' << num(r.n_h) << ',' << num(r.energy) << ',' << num(r.abs_mH) << ','
          << num(r.abs_mH_sliceavg) << ',' << num(r.abs_psiH) << '\n';
    }
  }
  nlohmann::json meta;
  meta["config"] = render_config(config);
  meta["nn"] = nn;
  meta["L_final"] = result.L_final;
  meta["max_nh"] = result.max_nh;
  meta["thermal_saturations"] = result.thermal_saturations;
  meta["measurement_saturations"] = result.measurement_saturations;
  meta["wall_seconds"] = result.wall_seconds;
  meta["valid"] = result.valid;
  meta["diagnostic"] = result.diagnostic;
  auto out = open_out(dir / ("run_" + short_num(config.g) + "_" + std::to_string(config.seed) + ".json"));
  out << meta.dump(2) << '\n';
}

}  // namespace

std::string results_row(const RunConfig& c, int nn, const RunResult& r) {
  std::string row;
  for (const std::string& f :
       {num(c.g), num(c.beta), std::to_string(c.lx), std::to_string(c.ly), std::to_string(nn), std::to_string(c.seed),
        num(r.energy.mean), num(r.energy.err), num(r.abs_mH.mean), num(r.abs_mH.err), num(r.abs_mH_sliceavg.mean),
        num(r.abs_psiH.mean), num(r.abs_psiH.err), num(r.n_h.mean), std::to_string(r.L_final),
        std::to_string(r.max_nh), std::string(r.measurement_saturations > 0 ? "1" : "0"),
        std::string(r.valid ? "1" : "0")}) {
    if (!row.empty()) row += ',';
    row += f;
  }
  return row;
}

std::string samples_file_name(double g, std::uint64_t seed) {
  return "samples_" + short_num(g) + "_" + std::to_string(seed) + ".csv";
}

std::string bins_file_name(double g, std::uint64_t seed) {
  return "bins_" + short_num(g) + "_" + std::to_string(seed) + ".csv";
}

int cmd_run(const RunConfig& config, const OutputOptions& options, std::ostream& log) {
  ensure_dir(config.out_dir);
  const int nn = build_lattice(config.lx, config.ly, config.pattern).nn();
  const RunResult result = run_simulation(config, 0);
  write_point_files(config, nn, result, options);
  append_rows(config.out_dir, {results_row(config, nn, result)});
  log << "g=" << short_num(config.g) << " e=" << num(result.energy.mean) << " +- " << num(result.energy.err)
      << " |mH|=" << num(result.abs_mH.mean) << " |psiH|=" << num(result.abs_psiH.mean) << '\n';
  if (!result.valid) {
    log << "warning: " << result.diagnostic << '\n';
    return kExitFlagged;
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& config, const std::vector<double>& g_list, int parallel,
              const OutputOptions& options, std::ostream& log) {
  if (g_list.empty()) throw ConfigError("--g-list must name at least one field value");
  if (parallel < 1) throw ConfigError("--parallel must be >= 1");
  ensure_dir(config.out_dir);
  const int nn = build_lattice(config.lx, config.ly, config.pattern).nn();

  struct Point {
    RunConfig config;
    RunResult result;
    std::string error;
    bool done = false;
  };
  std::vector<Point> points(g_list.size());
  for (std::size_t i = 0; i < g_list.size(); ++i) {
    points[i].config = config;
    points[i].config.g = g_list[i];
    if (!(points[i].config.g >= 0.0)) throw ConfigError("g values must be >= 0");
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      Point& p = points[i];
      try {
        p.result = run_simulation(p.config, i);
        write_point_files(p.config, nn, p.result, options);
        p.done = true;
      } catch (const std::exception& e) {
        p.error = e.what();
      }
    }
  };
  const int threads = static_cast<int>(std::min<std::size_t>(parallel, points.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points[a].config.g < points[b].config.g; });
  std::vector<std::string> rows;
  bool failed = false, flagged = false;
  for (std::size_t i : order) {
    const Point& p = points[i];
    if (!p.done) {
      failed = true;
      continue;
    }
    rows.push_back(results_row(p.config, nn, p.result));
    flagged |= !p.result.valid;
    log << "g=" << short_num(p.config.g) << " e=" << num(p.result.energy.mean) << " +- " << num(p.result.energy.err)
        << " |mH|=" << num(p.result.abs_mH.mean) << (p.result.valid ? "" : "  [flagged]") << '\n';
  }
  append_rows(config.out_dir, rows);
  for (const auto& p : points)
    if (!p.done) log << "error: g=" << short_num(p.config.g) << ": " << p.error << '\n';
  if (failed) return kExitError;
  return flagged ? kExitFlagged : kExitOk;
}

int cmd_oracle(const OracleRequest& req, std::ostream& log) {
  ensure_dir(req.out_dir);
  const fs::path dir(req.out_dir);
  nlohmann::json doc;
  if (req.kind == "ed" || req.kind == "classical") {
    if (req.graph_path.empty()) throw ConfigError("oracle " + req.kind + " needs --graph");
    SpinGraph graph = load_spin_graph(req.graph_path);
    if (req.g) graph.g = *req.g;
    doc["graph"] = req.graph_path;
    doc["n"] = graph.n;
    doc["beta"] = req.beta;
    if (req.kind == "ed") {
      const ThermalMeans m = exact_thermal(graph, req.beta, req.msnorm);
      doc["g"] = graph.g;
      doc["energy_density"] = m.energy;
      doc["abs_mH"] = m.abs_mH;
      doc["abs_psiH"] = m.abs_psiH;
      log << "energy_density = " << num(m.energy) << '\n';
    } else {
      const ClassicalResult r = classical_enumerate(graph, req.beta, req.msnorm, req.cap);
      doc["energy_density"] = r.means.energy;
      doc["abs_mH"] = r.means.abs_mH;
      doc["abs_psiH"] = r.means.abs_psiH;
      doc["ground"] = to_json(r.ground);
      log << "energy_density = " << num(r.means.energy) << "  ground energy = " << num(r.ground.energy)
          << "  degeneracy = " << to_decimal(r.ground.degeneracy) << '\n';
    }
  } else if (req.kind == "ground") {
    const Lattice lattice = build_lattice(req.lx, req.ly, parse_pattern(req.pattern));
    const GroundStateReport r = ground_states_dp(lattice, req.cap, {}, req.msnorm);
    doc = to_json(r);
    doc["lx"] = req.lx;
    doc["ly"] = req.ly;
    log << "ground energy = " << num(r.energy) << " (" << num(r.energy_per_site)
        << " per site), degeneracy = " << to_decimal(r.degeneracy) << '\n';
    for (std::size_t i = 0; i < r.uniform.size(); ++i) {
      const auto& c = r.uniform[i];
      const std::string name = "uniform_k" + std::to_string(c.uniform_position) + "_" + std::to_string(i) + ".txt";
      auto out = open_out(dir / name);
      out << format_spin_config(c.spins) << '\n';
      log << "uniform k=" << c.uniform_position << "  mH = " << num(c.mH.real()) << (c.mH.imag() < 0 ? " - " : " + ")
          << num(std::abs(c.mH.imag())) << "i  |mH| = " << num(std::abs(c.mH)) << "  psiH = " << num(c.psiH.real())
          << (c.psiH.imag() < 0 ? " - " : " + ") << num(std::abs(c.psiH.imag())) << "i  -> " << name << '\n';
    }
  } else {
    throw ConfigError("oracle kind must be ed, classical or ground, got '" + req.kind + "'");
  }
  auto out = open_out(dir / (req.kind + "_report.json"));
  out << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_lattice(int lx, int ly, const std::string& pattern, const std::string& out_dir, std::ostream& log) {
  ensure_dir(out_dir);
  const Lattice lattice = build_lattice(lx, ly, parse_pattern(pattern));
  const fs::path dir(out_dir);
  open_out(dir / "lattice.json") << dump_lattice(lattice).dump(1) << '\n';
  open_out(dir / "lattice.svg") << lattice_svg(lattice);
  log << "nn = " << lattice.nn() << ", nb = " << lattice.nb() << ", units = " << lattice.units().size() << '\n';
  return kExitOk;
}

}  // namespace hexsse
