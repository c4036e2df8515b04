// hexsse: SSE quantum Monte Carlo for the frustrated honeycomb TFIM.
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hexsse/commands.hpp"
#include "hexsse/config.hpp"
#include "hexsse/errors.hpp"

namespace {

// Flags that mirror config keys. Only flags given on the command line override the file.
struct KeyFlags {
  std::map<std::string, std::string> values;

  void attach(CLI::App* app) {
    for (const char* key : {"lx", "ly", "beta", "g", "isteps", "nbins", "mstep", "seed", "init", "pattern", "thin",
                            "msnorm"})
      app->add_option(std::string("--") + key, values[key], std::string("override config key ") + key);
  }

  hexsse::ConfigOverrides overrides(const CLI::App* app, const std::string& out) const {
    hexsse::ConfigOverrides o;
    for (const auto& [key, value] : values)
      if (app->count("--" + key) > 0) o[key] = value;
    if (!out.empty()) o["out_dir"] = out;
    return o;
  }
};

std::vector<double> parse_g_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw hexsse::ConfigError("bad --g-list entry '" + tok + "'");
    }
    if (tok.find_first_not_of(" \t", used) != std::string::npos)
      throw hexsse::ConfigError("bad --g-list entry '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

hexsse::RunConfig resolve(const std::string& config_path, const CLI::App* app, const KeyFlags& flags,
                          const std::string& out) {
  const auto overrides = flags.overrides(app, out);
  if (config_path.empty()) return hexsse::parse_config("", overrides);
  return hexsse::load_config(config_path, overrides);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SSE quantum Monte Carlo for the transverse-field Ising model on a frustrated honeycomb lattice"};
  app.require_subcommand(1);

  std::string config_path, out_dir, g_list;
  int parallel = 1;
  bool write_bins = false;

  auto* run = app.add_subcommand("run", "run one chain and append a row to results.csv");
  KeyFlags run_flags;
  run->add_option("--config", config_path, "config file (key = value lines)");
  run->add_option("--out", out_dir, "output directory");
  run->add_flag("--bins", write_bins, "also write per-bin means");
  run_flags.attach(run);

  auto* sweep = app.add_subcommand("sweep", "run one chain per field value");
  KeyFlags sweep_flags;
  sweep->add_option("--config", config_path, "config file (key = value lines)");
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--g-list", g_list, "comma-separated field values")->required();
  sweep->add_option("--parallel", parallel, "chains run concurrently")->check(CLI::PositiveNumber);
  sweep->add_flag("--bins", write_bins, "also write per-bin means");
  sweep_flags.attach(sweep);

  auto* lattice = app.add_subcommand("lattice", "dump lattice.json and lattice.svg");
  int lat_lx = 5, lat_ly = 2;
  std::string lat_pattern = "default";
  lattice->add_option("--lx", lat_lx, "hexagons along x");
  lattice->add_option("--ly", lat_ly, "hexagons along y");
  lattice->add_option("--pattern", lat_pattern, "default | ferro");
  lattice->add_option("--out", out_dir, "output directory");

  auto* oracle = app.add_subcommand("oracle", "exact references: ed | classical | ground");
  hexsse::OracleRequest req;
  double oracle_g = 0.0;
  std::string msnorm = "per_sublattice";
  oracle->add_option("kind", req.kind, "ed | classical | ground")->required();
  oracle->add_option("--graph", req.graph_path, "toy graph JSON {n, g, bonds}");
  oracle->add_option("--beta", req.beta, "inverse temperature");
  auto* g_opt = oracle->add_option("--g", oracle_g, "override the graph's field");
  oracle->add_option("--lx", req.lx, "lattice lx (ground)");
  oracle->add_option("--ly", req.ly, "lattice ly (ground)");
  oracle->add_option("--pattern", req.pattern, "default | ferro (ground)");
  oracle->add_option("--cap", req.cap, "max configurations listed");
  oracle->add_option("--msnorm", msnorm, "per_sublattice | literal");
  oracle->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    const hexsse::OutputOptions options{write_bins};
    if (run->parsed()) return hexsse::cmd_run(resolve(config_path, run, run_flags, out_dir), options, std::cout);
    if (sweep->parsed()) {
      const auto values = parse_g_list(g_list);
      auto cfg_overrides = sweep_flags.overrides(sweep, out_dir);
      if (!cfg_overrides.contains("g")) cfg_overrides["g"] = values.empty() ? "0" : std::to_string(values.front());
      const auto cfg = config_path.empty() ? hexsse::parse_config("", cfg_overrides)
                                           : hexsse::load_config(config_path, cfg_overrides);
      return hexsse::cmd_sweep(cfg, values, parallel, options, std::cout);
    }
    if (lattice->parsed())
      return hexsse::cmd_lattice(lat_lx, lat_ly, lat_pattern, out_dir.empty() ? "." : out_dir, std::cout);
    if (oracle->parsed()) {
      if (g_opt->count() > 0) req.g = oracle_g;
      req.msnorm = hexsse::parse_msnorm(msnorm);
      if (!out_dir.empty()) req.out_dir = out_dir;
      return hexsse::cmd_oracle(req, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return hexsse::kExitError;
  }
  return hexsse::kExitError;
}
