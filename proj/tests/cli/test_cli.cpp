#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "muskat/cli/commands.hpp"
#include "muskat/cli/run_config.hpp"
#include "muskat/cli/verify.hpp"

using namespace muskat;
using namespace muskat::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = MUSKAT_CLI_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("muskat_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

int simulate(const std::string& config, const fs::path& out_dir, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  CommandOptions opts;
  opts.output = out_dir;
  opts.quiet = true;
  const int code = cmd_simulate(kConfigs / config, opts, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST(RunConfigParse, EmptyObjectGivesDefaults) {
  const RunConfig cfg = parse_run_config("{}");
  EXPECT_EQ(cfg.n, 128);
  EXPECT_EQ(cfg.method, "etd");
  EXPECT_EQ(cfg.experiment.name, "trajectory");
  EXPECT_TRUE(cfg.initial.modes.empty());
  const RunConfig again = parse_run_config(cfg.to_json().dump());
  EXPECT_EQ(again.to_json(), cfg.to_json());
}

TEST(RunConfigParse, UnknownKeyIsLineAnchored) {
  try {
    parse_run_config("{\n  \"grid\": {\"n\": 32},\n  \"solvr\": {}\n}");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 3);
    EXPECT_NE(std::string(e.what()).find("solvr"), std::string::npos);
  }
}

TEST(RunConfigParse, MalformedJsonAndBadTypes) {
  try {
    parse_run_config("{\n  \"grid\": {\"n\": 32,}\n}");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  EXPECT_THROW(parse_run_config(R"({"grid": {"n": "many"}})"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"grid": {"n": 30}})"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"solver": {"scheme": "rk4"}})"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"params": {"lower": {"kind": "strip"}}})"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"initial": {"modes": [{"k": 1, "amp": 1}]}})"), ConfigError);
}

TEST(RunConfigParse, InitialDataFromModes) {
  const RunConfig cfg = parse_run_config(
      R"({"grid": {"n": 32}, "initial": {"mean": 0.5, "modes": [{"k": 2, "amplitude": 0.1, "phase": 0.25}]}})");
  const Field eta = initial_field(cfg);
  for (int j = 0; j < eta.size(); ++j) {
    const double x = eta.grid().node(j);
    EXPECT_NEAR(eta[j], 0.5 + 0.1 * std::cos(2 * x + 0.25), 1e-15);
  }
}

TEST(RunConfigParse, RandomTailFollowsSeed) {
  const std::string base = R"({"grid": {"n": 64}, "initial": {"tail": {"amplitude": 1e-3, "decay": 2}}, )";
  const Field a = initial_field(parse_run_config(base + R"("output": {"seed": 3}})"));
  const Field b = initial_field(parse_run_config(base + R"("output": {"seed": 3}})"));
  const Field c = initial_field(parse_run_config(base + R"("output": {"seed": 4}})"));
  EXPECT_EQ(a.values()[5], b.values()[5]);
  EXPECT_GT(sup_norm(a - c), 0.0);
  const auto s = to_spectrum(a);
  EXPECT_NEAR(std::abs(s[4]), 0.5 * 1e-3 / 16, 1e-15);  // cos(kx + p) has coefficient 1/2
  EXPECT_LT(std::abs(s[1]), 1e-18);
}

TEST(Simulate, ZeroDataStaysZero) {
  const fs::path dir = scratch("zero");
  ASSERT_EQ(simulate("zero.json", dir), 0);
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().filename().string().rfind("state_", 0) != 0) continue;
    for (const auto& row : read_csv(entry.path())) EXPECT_EQ(row[1], 0.0);
  }
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(manifest["version"], kVersion);
  EXPECT_TRUE(manifest["completed"].get<bool>());
  EXPECT_TRUE(manifest.contains("stats"));
  EXPECT_EQ(manifest["config"]["grid"]["n"], 32);
}

TEST(Simulate, SmallDataMonitorsDecreaseAndOutputIsDeterministic) {
  const fs::path a = scratch("small_a"), b = scratch("small_b");
  ASSERT_EQ(simulate("small_data.json", a), 0);
  ASSERT_EQ(simulate("small_data.json", b), 0);
  const auto monitors = read_csv(a / "monitors.csv");
  ASSERT_GT(monitors.size(), 2u);
  for (std::size_t i = 1; i < monitors.size(); ++i)
    for (int col : {4, 5, 6}) EXPECT_LE(monitors[i][col], monitors[i - 1][col]) << "row " << i;
  for (const auto& entry : fs::directory_iterator(a))
    EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename())) << entry.path();
  EXPECT_TRUE(fs::exists(a / "state_000020.csv"));
  EXPECT_TRUE(fs::exists(a / "state_000010.csv"));
  EXPECT_FALSE(fs::exists(a / "state_000005.csv"));
}

TEST(Simulate, InvalidInputsExitOne) {
  std::string err;
  EXPECT_EQ(simulate("too_close.json", scratch("close"), &err), 1);
  EXPECT_NE(err.find("2h"), std::string::npos);
  EXPECT_EQ(simulate("unknown_key.json", scratch("unknown"), &err), 1);
  EXPECT_NE(err.find("config:5:5"), std::string::npos);
  EXPECT_EQ(simulate("does_not_exist.json", scratch("missing"), &err), 1);
}

TEST(Simulate, PicardAbortIsRecorded) {
  const fs::path dir = scratch("picard");
  EXPECT_EQ(simulate("picard_large.json", dir), 2);
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_FALSE(manifest["completed"].get<bool>());
  EXPECT_NE(manifest["abort_reason"].get<std::string>().find("NotContracting"), std::string::npos);
}

TEST(Verify, UnknownSuiteExitsOne) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_verify("bogus", std::nullopt, {scratch("bogus"), true}, out, err), 1);
  EXPECT_THROW(run_suite("bogus"), std::invalid_argument);
}

TEST(Verify, WritesReport) {
  const fs::path dir = scratch("verify");
  std::ostringstream out, err;
  EXPECT_EQ(cmd_verify("paralinearization", std::nullopt, {dir, false}, out, err), 0);
  const std::string report = slurp(dir / "report.csv");
  EXPECT_EQ(report.rfind("check,expected,measured,tolerance,pass\n", 0), 0u);
  EXPECT_NE(report.find("true"), std::string::npos);
  EXPECT_NE(out.str().find("PASS"), std::string::npos);
}
