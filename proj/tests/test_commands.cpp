#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hexsse/commands.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

// Runs the CLI and returns its exit status.
int cli(const std::string& args) {
  const std::string cmd = std::string(HEXSSE_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const std::string& text) { return std::count(text.begin(), text.end(), '\n'); }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("hexsse_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string out(const std::string& sub = "") const { return (dir_ / sub).string(); }

  fs::path dir_;
};

const char* kQuick = "--lx 5 --ly 2 --beta 3.3 --isteps 200 --nbins 4 --mstep 50";

}  // namespace

TEST(Names, PointFilesUseShortestFieldForm) {
  EXPECT_EQ(hexsse::samples_file_name(0.2, 1), "samples_0.2_1.csv");
  EXPECT_EQ(hexsse::samples_file_name(1.0, 42), "samples_1_42.csv");
  EXPECT_EQ(hexsse::bins_file_name(0.5, 3), "bins_0.5_3.csv");
}

TEST(Names, ResultsHeaderIsStable) {
  EXPECT_STREQ(hexsse::kResultsHeader,
               "g,beta,lx,ly,nn,seed,e_mean,e_err,abs_mH_mean,abs_mH_err,abs_mH_sliceavg_mean,abs_psiH_mean,"
               "abs_psiH_err,n_mean,L_final,max_nh,saturated,valid");
}

TEST_F(Cli, RunWritesRowAndSamples) {
  ASSERT_EQ(cli(std::string("run ") + kQuick + " --g 0.2 --bins --out " + out()), 0);
  const std::string results = slurp(dir_ / "results.csv");
  EXPECT_EQ(line_count(results), 2u);
  EXPECT_EQ(results.substr(0, results.find('\n')), hexsse::kResultsHeader);
  EXPECT_EQ(line_count(slurp(dir_ / "samples_0.2_1.csv")), 201u);
  EXPECT_EQ(line_count(slurp(dir_ / "bins_0.2_1.csv")), 5u);
  const auto meta = nlohmann::json::parse(slurp(dir_ / "run_0.2_1.json"));
  EXPECT_TRUE(meta.contains("config"));

  // A second run appends without repeating the header.
  ASSERT_EQ(cli(std::string("run ") + kQuick + " --g 0.2 --seed 2 --out " + out()), 0);
  EXPECT_EQ(line_count(slurp(dir_ / "results.csv")), 3u);
}

TEST_F(Cli, RepeatedRunIsByteIdentical) {
  ASSERT_EQ(cli(std::string("run ") + kQuick + " --g 0.4 --out " + out("a")), 0);
  ASSERT_EQ(cli(std::string("run ") + kQuick + " --g 0.4 --out " + out("b")), 0);
  EXPECT_EQ(slurp(dir_ / "a" / "samples_0.4_1.csv"), slurp(dir_ / "b" / "samples_0.4_1.csv"));
}

TEST_F(Cli, ConfigFileWithOverride) {
  std::ofstream(dir_ / "run.conf") << "lx = 5\nly = 2\nbeta = 3.3\ng = 0.2\nisteps = 100\nnbins = 2\nmstep = 20\n";
  ASSERT_EQ(cli("run --config " + out("run.conf") + " --g 0.6 --out " + out()), 0);
  EXPECT_TRUE(fs::exists(dir_ / "samples_0.6_1.csv"));
}

TEST_F(Cli, FlaggedRunExitsTwo) {
  EXPECT_EQ(cli("run --lx 5 --ly 2 --beta 20 --g 1 --isteps 1 --nbins 2 --mstep 20 --out " + out()), 2);
  const std::string results = slurp(dir_ / "results.csv");
  EXPECT_NE(results.find(",0\n"), std::string::npos);  // valid column
}

TEST_F(Cli, ConfigurationErrorsExitOne) {
  EXPECT_EQ(cli("run --lx 4 --ly 2 --beta 3.3 --g 0.2 --out " + out()), 1);
  EXPECT_EQ(cli("run --lx 5 --ly 2 --g 0.2 --out " + out()), 1);
  EXPECT_EQ(cli("run --config " + out("missing.conf")), 1);
  EXPECT_EQ(cli(std::string("run ") + kQuick + " --g 0.2 --out /proc/hexsse_no_such_dir"), 1);
}

TEST_F(Cli, SweepIsIndependentOfParallelism) {
  const std::string base = std::string("sweep ") + kQuick + " --seed 9 --g-list 0.6,0.0,0.3 --out ";
  ASSERT_EQ(cli(base + out("p1") + " --parallel 1"), 0);
  ASSERT_EQ(cli(base + out("p4") + " --parallel 4"), 0);
  const std::string serial = slurp(dir_ / "p1" / "results.csv");
  EXPECT_EQ(line_count(serial), 4u);
  EXPECT_EQ(serial, slurp(dir_ / "p4" / "results.csv"));
  // Sorted by g.
  std::istringstream rows(serial);
  std::string line;
  std::getline(rows, line);
  std::vector<std::string> gs;
  while (std::getline(rows, line)) gs.push_back(line.substr(0, line.find(',')));
  EXPECT_EQ(gs, (std::vector<std::string>{"0", "0.3", "0.6"}));
  for (const char* g : {"0", "0.3", "0.6"})
    EXPECT_EQ(slurp(dir_ / "p1" / (std::string("samples_") + g + "_9.csv")),
              slurp(dir_ / "p4" / (std::string("samples_") + g + "_9.csv")));
}

TEST_F(Cli, SweepRejectsEmptyList) {
  EXPECT_EQ(cli(std::string("sweep ") + kQuick + " --g-list , --out " + out()), 1);
  EXPECT_EQ(cli(std::string("sweep ") + kQuick + " --g-list 0.1,abc --out " + out()), 1);
}

TEST_F(Cli, OracleGroundWritesReportAndInitFiles) {
  ASSERT_EQ(cli("oracle ground --lx 5 --ly 2 --out " + out()), 0);
  const auto report = nlohmann::json::parse(slurp(dir_ / "ground_report.json"));
  EXPECT_EQ(report["degeneracy"], "2240");
  int init_files = 0;
  for (const auto& entry : fs::directory_iterator(dir_))
    init_files += entry.path().filename().string().starts_with("uniform_k");
  EXPECT_EQ(init_files, 6);
}

TEST_F(Cli, OracleEdOnToyGraph) {
  ASSERT_EQ(cli(std::string("oracle ed --graph ") + HEXSSE_TEST_DATA + "/ring6.json --beta 3.3 --g 0.5 --out " +
                   out()),
            0);
  const auto report = nlohmann::json::parse(slurp(dir_ / "ed_report.json"));
  EXPECT_NEAR(report["energy_density"].get<double>(), -0.8643305201336043, 1e-12);
}

TEST_F(Cli, OracleEdRefusesLargeGraph) {
  std::ofstream f(dir_ / "ring20.json");
  f << R"({"n": 20, "g": 0.5, "bonds": [)";
  for (int i = 0; i < 20; ++i) f << (i ? ", " : "") << "[" << i << ", " << (i + 1) % 20 << ", 1.0]";
  f << "]}";
  f.close();
  EXPECT_EQ(cli("oracle ed --graph " + out("ring20.json") + " --beta 1 --out " + out()), 1);
}

TEST_F(Cli, LatticeDump) {
  ASSERT_EQ(cli("lattice --lx 5 --ly 2 --out " + out()), 0);
  const auto doc = nlohmann::json::parse(slurp(dir_ / "lattice.json"));
  EXPECT_EQ(doc["sites"].size(), 36u);
  EXPECT_NE(slurp(dir_ / "lattice.svg").find("<svg"), std::string::npos);
  EXPECT_EQ(cli("lattice --lx 6 --ly 2 --out " + out()), 1);
}
