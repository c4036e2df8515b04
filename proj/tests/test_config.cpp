#include <gtest/gtest.h>

#include <string>

#include "hexsse/config.hpp"
#include "hexsse/errors.hpp"

using namespace hexsse;

namespace {

const char* kMinimal = "lx = 5\nly = 2\nbeta = 3.3\ng = 0.2";

std::string error_of(std::string_view text, const ConfigOverrides& overrides = {}) {
  try {
    parse_config(text, overrides);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, MinimalFileFillsDefaults) {
  const RunConfig c = parse_config(kMinimal);
  EXPECT_EQ(c.lx, 5);
  EXPECT_EQ(c.ly, 2);
  EXPECT_DOUBLE_EQ(c.beta, 3.3);
  EXPECT_DOUBLE_EQ(c.g, 0.2);
  EXPECT_EQ(c.isteps, 10000);
  EXPECT_EQ(c.nbins, 20);
  EXPECT_EQ(c.mstep, 1000);
  EXPECT_EQ(c.thin, 1);
  EXPECT_EQ(c.seed, 1u);
  EXPECT_EQ(c.init, InitMode::Random);
  EXPECT_EQ(c.pattern, CouplingPattern::Villain);
  EXPECT_EQ(c.msnorm, MsNorm::PerSublattice);
}

TEST(Config, FlagOverridesFileValue) {
  EXPECT_DOUBLE_EQ(parse_config(kMinimal, {{"g", "0.6"}}).g, 0.6);
  EXPECT_EQ(parse_config(kMinimal, {{"seed", "77"}}).seed, 77u);
}

TEST(Config, OverrideCanSupplyRequiredKey) {
  EXPECT_DOUBLE_EQ(parse_config("lx = 5\nly = 2\nbeta = 3.3", {{"g", "0.4"}}).g, 0.4);
}

TEST(Config, CommentsAndBlankLines) {
  const RunConfig c = parse_config("# header\n\nlx = 11   # comment\n  ly=5\r\nbeta = 1\ng = 0\n");
  EXPECT_EQ(c.lx, 11);
  EXPECT_EQ(c.ly, 5);
  EXPECT_EQ(c.isteps, 55000);
}

TEST(Config, InitModes) {
  const RunConfig c = parse_config(std::string(kMinimal) + "\ninit = file:gs/uniform_k2_0.txt");
  EXPECT_EQ(c.init, InitMode::File);
  EXPECT_EQ(c.init_file, "gs/uniform_k2_0.txt");
  EXPECT_NE(error_of(std::string(kMinimal) + "\ninit = ground"), "");
  EXPECT_NE(error_of(std::string(kMinimal) + "\ninit = file:"), "");
}

TEST(Config, PatternAndNorm) {
  const RunConfig c = parse_config(std::string(kMinimal) + "\npattern = ferro\nmsnorm = literal");
  EXPECT_EQ(c.pattern, CouplingPattern::Ferro);
  EXPECT_EQ(c.msnorm, MsNorm::Literal);
  EXPECT_NE(error_of(std::string(kMinimal) + "\npattern = zigzag"), "");
  EXPECT_NE(error_of(std::string(kMinimal) + "\nmsnorm = half"), "");
}

TEST(Config, SyntaxErrorsCarryLineNumber) {
  EXPECT_EQ(error_of("lx = 5\nly 2\n"), "line 2: expected 'key = value'");
  EXPECT_EQ(error_of("lx = 5\nly = 2\ntemperature = 1\n"), "line 3: unknown key 'temperature'");
  EXPECT_EQ(error_of("lx = 5\nlx = 5\n"), "line 2: duplicate key 'lx'");
  EXPECT_EQ(error_of("lx =\n"), "line 1: missing value for 'lx'");
}

TEST(Config, MissingRequiredKeys) {
  EXPECT_EQ(error_of("ly = 2\nbeta = 3.3\ng = 0.2"), "missing required key 'lx'");
  EXPECT_EQ(error_of("lx = 5\nly = 2\nbeta = 3.3"), "missing required key 'g'");
}

TEST(Config, UnknownOverride) { EXPECT_EQ(error_of(kMinimal, {{"gamma", "1"}}), "unknown override key 'gamma'"); }

TEST(Config, RangeErrors) {
  EXPECT_EQ(error_of(kMinimal, {{"beta", "0"}}), "beta out of range: must be finite and > 0");
  EXPECT_EQ(error_of(kMinimal, {{"beta", "inf"}}), "beta out of range: must be finite and > 0");
  EXPECT_EQ(error_of(kMinimal, {{"g", "-0.1"}}), "g out of range: must be finite and >= 0");
  EXPECT_NE(error_of(kMinimal, {{"nbins", "1"}}).find("nbins out of range"), std::string::npos);
  EXPECT_NE(error_of(kMinimal, {{"mstep", "0"}}).find("mstep out of range"), std::string::npos);
  EXPECT_NE(error_of(kMinimal, {{"thin", "0"}}).find("thin out of range"), std::string::npos);
  EXPECT_NE(error_of(kMinimal, {{"isteps", "0"}}).find("isteps out of range"), std::string::npos);
  EXPECT_NE(error_of(kMinimal, {{"lx", "five"}}).find("expected an integer"), std::string::npos);
  EXPECT_NE(error_of(kMinimal, {{"g", "0.2x"}}).find("expected a number"), std::string::npos);
}

TEST(Config, RenderRoundTrips) {
  RunConfig c = parse_config(kMinimal);
  EXPECT_EQ(parse_config(render_config(c)), c);
  c.beta = 1.0 / 3.0;
  c.g = 0.1 + 0.2;
  c.seed = 18446744073709551615ULL;
  c.init = InitMode::File;
  c.init_file = "a b/c.txt";
  c.pattern = CouplingPattern::Ferro;
  c.msnorm = MsNorm::Literal;
  c.thin = 7;
  c.out_dir = "out dir";
  EXPECT_EQ(parse_config(render_config(c)), c);
}

TEST(Config, MissingFile) { EXPECT_THROW(load_config("/nonexistent/run.conf"), ConfigError); }
