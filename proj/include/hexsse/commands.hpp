#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hexsse/config.hpp"
#include "hexsse/observables.hpp"

namespace hexsse {

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitFlagged = 2 };

/// Header of results.csv, in column order.
extern const char* const kResultsHeader;
extern const char* const kSamplesHeader;
extern const char* const kBinsHeader;

std::string results_row(const RunConfig& config, int nn, const RunResult& result);
/// "samples_<g>_<seed>.csv" with g printed in shortest %g form.
std::string samples_file_name(double g, std::uint64_t seed);
std::string bins_file_name(double g, std::uint64_t seed);

struct OutputOptions {
  bool write_bins = false;
};

/// One chain; appends a row to out_dir/results.csv and writes the per-point files.
/// Returns kExitFlagged when the run is marked invalid.
int cmd_run(const RunConfig& config, const OutputOptions& options, std::ostream& log);

/// One chain per g on RNG stream i (its index in g_list), `parallel` at a time.
/// Rows are appended to results.csv sorted by g. Failed points are reported
/// after the rest finish.
int cmd_sweep(const RunConfig& config, const std::vector<double>& g_list, int parallel,
              const OutputOptions& options, std::ostream& log);

struct OracleRequest {
  std::string kind;  // ed | classical | ground
  std::string graph_path;
  std::optional<double> g;
  double beta = 1.0;
  int lx = 5;
  int ly = 2;
  std::string pattern = "default";
  std::size_t cap = 64;
  MsNorm msnorm = MsNorm::PerSublattice;
  std::string out_dir = ".";
};

/// Writes <kind>_report.json (and, for ground, one init file per uniform state).
int cmd_oracle(const OracleRequest& request, std::ostream& log);

/// Writes lattice.json and lattice.svg.
int cmd_lattice(int lx, int ly, const std::string& pattern, const std::string& out_dir, std::ostream& log);

}  // namespace hexsse
