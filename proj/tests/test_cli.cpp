// Drives the qdef_osc binary as a subprocess.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "qdef/series_table.hpp"
#include "qdef/version.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

// stdout and stderr merged
Run run(const std::string& args, const std::string& env = "QDEF_OSC_NATURAL_UNITS=1") {
  const std::string cmd = env + " " + QDEF_OSC_PATH + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qdef_cli_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string out() const { return " --out " + dir_.string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, Version) {
  const auto r = run("--version");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find(qdef::kVersion), std::string::npos);
}

TEST_F(CliTest, ClassicalWritesFiles) {
  const auto r = run("classical --gamma 0,0.5" + out());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(dir_ / "classical_gA_0.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "classical_gA_0.5.csv"));
  EXPECT_NE(r.out.find("classical_gA_0.5.csv"), std::string::npos);
}

TEST_F(CliTest, JsonFormat) {
  const auto r = run("spectrum --gamma 0.3 --format json" + out());
  ASSERT_EQ(r.code, 0) << r.out;
  const auto t = qdef::read_table((dir_ / "spectrum_gx0_0.3.json").string());
  EXPECT_EQ(t.size(), 11u);
}

TEST_F(CliTest, ConfigFile) {
  fs::create_directories(dir_);
  const auto cfg = dir_ / "run.cfg";
  std::ofstream(cfg) << "# comment\ngamma = 0.2\nsamples = 51\n";
  const auto r = run("spectrum --config " + cfg.string() + out());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(dir_ / "spectrum_gx0_0.2.csv"));
}

TEST_F(CliTest, ValidationErrorsExitOne) {
  EXPECT_EQ(run("classical --no-such-flag").code, 1);
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("classical --gamma ''" + out()).code, 1);
  EXPECT_EQ(run("classical --gamma 1" + out()).code, 1);
  EXPECT_EQ(run("classical --samples 1" + out()).code, 1);
  EXPECT_EQ(run("spectrum --format xml" + out()).code, 1);
  EXPECT_EQ(run("spectrum --config /nonexistent/qdef.cfg" + out()).code, 1);
}

TEST_F(CliTest, NaturalUnitsRejectPhysicalConstants) {
  const auto natural = run("spectrum --m0 2" + out());
  EXPECT_EQ(natural.code, 1);
  EXPECT_NE(natural.out.find("m0"), std::string::npos) << natural.out;
  EXPECT_EQ(run("spectrum --m0 2" + out(), "QDEF_OSC_NATURAL_UNITS=0").code, 0);
  EXPECT_EQ(run("spectrum" + out(), "QDEF_OSC_NATURAL_UNITS=7").code, 1);
}

TEST_F(CliTest, UnboundLevelExitsOne) {
  const auto r = run("wavefunctions --gamma 0.3 --levels 11" + out());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("n_max"), std::string::npos) << r.out;
}

TEST_F(CliTest, VerifyExitCodeMatchesReport) {
  const auto r = run("verify" + out());
  const bool all_pass = r.out.find("FAIL") == std::string::npos;
  EXPECT_EQ(r.code, all_pass ? 0 : 3) << r.out;
  EXPECT_TRUE(fs::exists(dir_ / "verify_report.json"));
  // a tolerance squeeze must surface as a verify failure, not an error
  EXPECT_EQ(run("verify --tol 1e-6" + out()).code, 3);
}
