#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "hexsse/lattice.hpp"
#include "hexsse/observables.hpp"

namespace hexsse {

enum class InitMode { Random, File };

struct RunConfig {
  int lx = 0;
  int ly = 0;
  double beta = 0.0;
  double g = 0.0;
  std::int64_t isteps = 0;  // default 1000 * lx * ly
  std::int64_t nbins = 20;
  std::int64_t mstep = 1000;
  std::uint64_t seed = 1;
  InitMode init = InitMode::Random;
  std::string init_file;  // used when init == File
  CouplingPattern pattern = CouplingPattern::Villain;
  std::int64_t thin = 1;
  std::string out_dir = ".";
  MsNorm msnorm = MsNorm::PerSublattice;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Flag overrides, keyed like the config file.
using ConfigOverrides = std::map<std::string, std::string>;

/// Parses `key = value` lines; '#' starts a comment. Overrides replace file
/// values. Unknown keys, duplicate keys, missing lx/ly/beta/g and values out
/// of range raise ConfigError ("line N: ..." for syntax, the key name for ranges).
///
/// init is `random` or `file:PATH`.
RunConfig parse_config(std::string_view text, const ConfigOverrides& overrides = {});
RunConfig load_config(const std::string& path, const ConfigOverrides& overrides = {});

/// Writes every key; parse_config(render_config(c)) == c.
std::string render_config(const RunConfig& config);

}  // namespace hexsse
