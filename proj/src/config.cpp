#include "hexsse/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "hexsse/errors.hpp"

namespace hexsse {

namespace {

const std::set<std::string, std::less<>> kKeys = {"lx",   "ly",   "beta",    "g",    "isteps", "nbins", "mstep",
                                                  "seed", "init", "pattern", "thin", "out_dir", "msnorm"};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_integer(const std::string& key, const std::string& value) {
  T out{};
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError(key + ": expected an integer, got '" + value + "'");
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty()) throw ConfigError(key + ": expected a number, got '" + value + "'");
  return out;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key + " out of range: " + what);
}

// %.17g keeps doubles exact through a round trip.
std::string real_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

RunConfig parse_config(std::string_view text, const ConfigOverrides& overrides) {
  std::map<std::string, std::string> values;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(where + "missing key");
    if (!kKeys.contains(key)) throw ConfigError(where + "unknown key '" + key + "'");
    if (value.empty()) throw ConfigError(where + "missing value for '" + key + "'");
    if (!values.emplace(key, value).second) throw ConfigError(where + "duplicate key '" + key + "'");
  }
  for (const auto& [key, value] : overrides) {
    if (!kKeys.contains(key)) throw ConfigError("unknown override key '" + key + "'");
    values[key] = value;
  }
  for (const char* key : {"lx", "ly", "beta", "g"})
    if (!values.contains(key)) throw ConfigError(std::string("missing required key '") + key + "'");

  RunConfig c;
  c.lx = parse_integer<int>("lx", values["lx"]);
  c.ly = parse_integer<int>("ly", values["ly"]);
  c.beta = parse_real("beta", values["beta"]);
  c.g = parse_real("g", values["g"]);
  require(c.lx >= 1, "lx", "must be >= 1");
  require(c.ly >= 1, "ly", "must be >= 1");
  require(std::isfinite(c.beta) && c.beta > 0.0, "beta", "must be finite and > 0");
  require(std::isfinite(c.g) && c.g >= 0.0, "g", "must be finite and >= 0");

  c.isteps = values.contains("isteps") ? parse_integer<std::int64_t>("isteps", values["isteps"])
                                       : std::int64_t{1000} * c.lx * c.ly;
  if (values.contains("nbins")) c.nbins = parse_integer<std::int64_t>("nbins", values["nbins"]);
  if (values.contains("mstep")) c.mstep = parse_integer<std::int64_t>("mstep", values["mstep"]);
  if (values.contains("thin")) c.thin = parse_integer<std::int64_t>("thin", values["thin"]);
  if (values.contains("seed")) c.seed = parse_integer<std::uint64_t>("seed", values["seed"]);
  require(c.isteps >= 1, "isteps", "must be >= 1");
  require(c.nbins >= 2, "nbins", "must be >= 2 for error bars");
  require(c.mstep >= 1, "mstep", "must be >= 1");
  require(c.thin >= 1, "thin", "must be >= 1");

  if (values.contains("init")) {
    const std::string& v = values["init"];
    if (v == "random") {
      c.init = InitMode::Random;
    } else if (v.starts_with("file:") && v.size() > 5) {
      c.init = InitMode::File;
      c.init_file = v.substr(5);
    } else {
      throw ConfigError("init must be 'random' or 'file:PATH', got '" + v + "'");
    }
  }
  if (values.contains("pattern")) c.pattern = parse_pattern(values["pattern"]);
  if (values.contains("msnorm")) c.msnorm = parse_msnorm(values["msnorm"]);
  if (values.contains("out_dir")) c.out_dir = values["out_dir"];
  return c;
}

RunConfig load_config(const std::string& path, const ConfigOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

std::string render_config(const RunConfig& c) {
  std::ostringstream out;
  out << "lx = " << c.lx << '\n'
      << "ly = " << c.ly << '\n'
      << "beta = " << real_text(c.beta) << '\n'
      << "g = " << real_text(c.g) << '\n'
      << "isteps = " << c.isteps << '\n'
      << "nbins = " << c.nbins << '\n'
      << "mstep = " << c.mstep << '\n'
      << "seed = " << c.seed << '\n'
      << "init = " << (c.init == InitMode::Random ? std::string("random") : "file:" + c.init_file) << '\n'
      << "pattern = " << to_string(c.pattern) << '\n'
      << "thin = " << c.thin << '\n'
      << "out_dir = " << c.out_dir << '\n'
      << "msnorm = " << to_string(c.msnorm) << '\n';
  return out.str();
}

}  // namespace hexsse
