#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "ibm/errors.hpp"

namespace ibm::cli {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  EXPECT_TRUE(is.good()) << p;
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    root_ = fs::temp_directory_path() / "ibm_cli_test" / info->name();
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override {
    if (!HasFailure()) fs::remove_all(root_);
  }

  int ibm(std::vector<std::string> args) {
    args.insert(args.begin(), "ibm");
    if (args.size() > 1) {
      args.push_back("--output");
      args.push_back(root_.string());
    }
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return run(static_cast<int>(argv.size()), argv.data());
  }

  fs::path root_;
};

TEST(Config, RejectsUnknownKeysAndBadTypes) {
  EXPECT_THROW(ExperimentConfig::from_toml_string("[model]\nfoo = 1\n"), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_toml_string("[nope]\nkind = \"sine\"\n"), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_toml_string("[scheme]\nR = \"big\"\n"), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_toml_string("[scheme\n"), ConfigError);
  ExperimentConfig cfg;
  EXPECT_THROW(cfg.set("scheme.bogus=1"), ConfigError);
  EXPECT_THROW(cfg.set("no_dot=1"), ConfigError);
  // Integers widen to floats.
  cfg.set("scheme.R=12");
  EXPECT_DOUBLE_EQ(cfg.get_float("scheme.R"), 12.0);
}

TEST(Config, TomlAndJsonRoundTrip) {
  ExperimentConfig cfg;
  cfg.set_model_shorthand("ginibre");
  cfg.set("scheme.R=7.5");
  cfg.set("diagnostics.lags=[0.01, 0.02, 0.04]");
  cfg.set("diagnostics.checks", R"(["a4", "moment"])");
  const auto t = ExperimentConfig::from_toml_string(cfg.to_toml());
  EXPECT_EQ(t.to_json(), cfg.to_json());
  const auto j = ExperimentConfig::from_json(cfg.to_json());
  EXPECT_EQ(j.to_json(), cfg.to_json());
  EXPECT_EQ(j.model().id(), "ginibre");
  EXPECT_EQ(j.get_strings("diagnostics.checks"), (std::vector<std::string>{"a4", "moment"}));
}

TEST(Config, FingerprintIgnoresPlacement) {
  ExperimentConfig a;
  ExperimentConfig b = a;
  b.set("run.output_dir", "\"elsewhere\"");
  b.set("run.workers=3");
  EXPECT_EQ(a.fingerprint("sample"), b.fingerprint("sample"));
  EXPECT_NE(a.fingerprint("sample"), a.fingerprint("simulate"));
  b.set("seeds.master=99");
  EXPECT_NE(a.fingerprint("sample"), b.fingerprint("sample"));
  EXPECT_EQ(a.fingerprint("sample").size(), 10u);
}

TEST(Config, ModelShorthands) {
  ExperimentConfig cfg;
  cfg.set_model_shorthand("sine4");
  EXPECT_EQ(cfg.model().id(), "sine4");
  cfg.set_model_shorthand("sine3");
  EXPECT_THROW(cfg.model(), UnsupportedModel);
  EXPECT_THROW(cfg.set_model_shorthand("quartic"), ConfigError);
}

TEST_F(Cli, SampleIsReproducibleAcrossWorkers) {
  const std::vector<std::string> base = {"sample", "--model", "sine2", "--window", "15", "--replicas", "6", "--seed",
                                         "5", "--quiet"};
  auto a = base, b = base;
  a.insert(a.end(), {"--run-id", "a", "--workers", "1"});
  b.insert(b.end(), {"--run-id", "b", "--workers", "3"});
  ASSERT_EQ(ibm(a), 0);
  ASSERT_EQ(ibm(b), 0);
  for (int i = 0; i < 6; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "samples/sample-%03d.csv", i);
    EXPECT_EQ(slurp(root_ / "a" / name), slurp(root_ / "b" / name)) << name;
  }
  EXPECT_EQ(slurp(root_ / "a" / "g.csv"), slurp(root_ / "b" / "g.csv"));
  EXPECT_EQ(slurp(root_ / "a" / "g.csv").substr(0, 19), "r_lo,r_hi,g,g_se\n0,");
  const auto m = read_json(root_ / "a" / "manifest.json");
  EXPECT_EQ(m.at("schema_version"), kManifestSchemaVersion);
  EXPECT_EQ(m.at("command"), "sample");
  EXPECT_EQ(m.at("rng"), kRngName);
  EXPECT_EQ(m.at("model_id"), "sine2");
  EXPECT_EQ(m.at("seeds").at("master"), 5);
  EXPECT_EQ(m.at("samples").size(), 6u);
  EXPECT_TRUE(m.contains("code_version"));
  const auto rep = read_json(root_ / "a" / "report.json");
  EXPECT_TRUE(rep.contains("statistics"));
  EXPECT_TRUE(fs::exists(root_ / "a" / "report.md"));
}

TEST_F(Cli, ManifestReproducesARun) {
  ASSERT_EQ(ibm({"sample", "--model", "ginibre", "--window", "4", "--replicas", "3", "--run-id", "orig", "--quiet"}),
            0);
  ASSERT_EQ(ibm({"sample", "--manifest", (root_ / "orig" / "manifest.json").string(), "--run-id", "again"}), 0);
  EXPECT_EQ(slurp(root_ / "orig" / "samples" / "sample-002.csv"), slurp(root_ / "again" / "samples" / "sample-002.csv"));
}

TEST_F(Cli, UnsupportedBetaIsAConfigError) {
  EXPECT_EQ(ibm({"sample", "--model", "sine3", "--quiet"}), 2);
  EXPECT_EQ(ibm({"sample", "--set", "model.nonsense=1"}), 2);
  EXPECT_EQ(ibm({"frobnicate"}), 2);
  EXPECT_EQ(ibm({"simulate", "--model", "sine2", "--dt", "0.003", "--t-end", "0.01"}), 2);
}

TEST_F(Cli, SimulateResumeIsBitExact) {
  const std::vector<std::string> base = {"simulate", "--model", "sine2", "--R", "6", "--t-end", "0.1", "--replicas",
                                         "2", "--seed", "3", "--quiet", "--set", "scheme.record_stride=5"};
  auto full = base;
  full.insert(full.end(), {"--run-id", "full"});
  ASSERT_EQ(ibm(full), 0);
  auto part = base;
  part.insert(part.end(), {"--run-id", "part", "--stop-after-steps", "37"});
  ASSERT_EQ(ibm(part), 0);
  EXPECT_TRUE(fs::exists(root_ / "part" / "replica-000" / "checkpoint.json"));
  EXPECT_FALSE(read_json(root_ / "part" / "manifest.json").at("complete").get<bool>());
  ASSERT_EQ(ibm({"simulate", "--resume", (root_ / "part").string(), "--quiet"}), 0);
  EXPECT_FALSE(fs::exists(root_ / "part" / "replica-000" / "checkpoint.json"));
  EXPECT_TRUE(read_json(root_ / "part" / "manifest.json").at("complete").get<bool>());
  for (const char* r : {"replica-000", "replica-001"}) {
    EXPECT_EQ(slurp(root_ / "full" / r / "paths.csv"), slurp(root_ / "part" / r / "paths.csv")) << r;
    EXPECT_EQ(slurp(root_ / "full" / r / "events.csv"), slurp(root_ / "part" / r / "events.csv")) << r;
  }
  const auto head = slurp(root_ / "full" / "replica-000" / "paths.csv");
  EXPECT_EQ(head.substr(0, head.find('\n')), "time,label,frozen,x1,local_time");
}

TEST_F(Cli, SimulateIsWorkerIndependent) {
  const std::vector<std::string> base = {"simulate", "--model", "ginibre", "--R", "3", "--t-end", "0.05",
                                         "--replicas", "3", "--quiet"};
  auto a = base, b = base;
  a.insert(a.end(), {"--run-id", "a", "--workers", "1"});
  b.insert(b.end(), {"--run-id", "b", "--workers", "4"});
  ASSERT_EQ(ibm(a), 0);
  ASSERT_EQ(ibm(b), 0);
  for (const char* r : {"replica-000", "replica-001", "replica-002"}) {
    EXPECT_EQ(slurp(root_ / "a" / r / "paths.csv"), slurp(root_ / "b" / r / "paths.csv")) << r;
  }
}

TEST_F(Cli, BesselUpperSchemeLogsBirthsAndDeaths) {
  ASSERT_EQ(ibm({"simulate", "--model", "bessel", "--scheme", "upper", "--R", "30", "--t-end", "5", "--replicas", "8",
                 "--run-id", "b", "--quiet", "--set", "scheme.record_stride=100"}),
            0);
  // Boundary flux rho(R) / sqrt(2 pi dt) is about 0.37 per unit time here.
  std::size_t births = 0, deaths = 0;
  for (int i = 0; i < 8; ++i) {
    char r[16];
    std::snprintf(r, sizeof r, "replica-%03d", i);
    std::istringstream is(slurp(root_ / "b" / r / "events.csv"));
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "time,kind,label,x1");
    while (std::getline(is, line)) {
      std::istringstream ls(line);
      std::string t, kind, label, x;
      std::getline(ls, t, ',');
      std::getline(ls, kind, ',');
      std::getline(ls, label, ',');
      std::getline(ls, x, ',');
      const double pos = std::stod(x);
      if (kind == "birth") {
        ++births;
        EXPECT_GT(pos, 0.0);
        EXPECT_LE(pos, 30.0);
      } else {
        EXPECT_EQ(kind, "death");
        ++deaths;
        EXPECT_GT(pos, 30.0);
      }
    }
  }
  EXPECT_GT(births, 0u);
  EXPECT_GT(deaths, 0u);
  EXPECT_EQ(read_json(root_ / "b" / "manifest.json").at("scheme").at("scheme"), "upper");
}

TEST_F(Cli, VerifyIntegrabilityOnGinibrePasses) {
  ASSERT_EQ(ibm({"verify", "--model", "ginibre", "--check", "a4", "--run-id", "v", "--set", "diagnostics.r=0",
                 "--set", "diagnostics.T=1"}),
            0);
  const auto rep = read_json(root_ / "v" / "report.json");
  bool found = false;
  for (const auto& s : rep.at("statistics")) {
    if (s.at("name") == "intensity integral") {
      EXPECT_NEAR(s.at("value").get<double>(), 0.5, 1e-6);
      found = true;
    }
  }
  EXPECT_TRUE(found);
  EXPECT_TRUE(rep.at("passed").get<bool>());
}

TEST_F(Cli, VerifyInvarianceWritesReports) {
  ASSERT_EQ(ibm({"simulate", "--model", "poisson", "--R", "6", "--window", "6", "--t-end", "0.2", "--replicas", "40",
                 "--run-id", "sim", "--quiet", "--set", "scheme.record_stride=50", "--set", "scheme.dt=0.004"}),
            0);
  const int rc = ibm({"verify", "--check", "invariance,min-gap", "--runs", (root_ / "sim").string(), "--run-id", "v",
                      "--set", "diagnostics.r_max=1", "--set", "diagnostics.bins=4", "--set", "diagnostics.buffer=1"});
  EXPECT_EQ(rc, 0);
  const auto rep = read_json(root_ / "v" / "report.json");
  EXPECT_GE(rep.at("verdicts").size(), 3u);
  const std::string md = slurp(root_ / "v" / "report.md");
  EXPECT_NE(md.find("pair correlation"), std::string::npos);
  const auto m = read_json(root_ / "v" / "manifest.json");
  EXPECT_EQ(m.at("command"), "verify");
  EXPECT_EQ(m.at("runs").size(), 1u);
}

TEST_F(Cli, VerifySchemeLadderWritesTable) {
  for (const std::string& R : {"4", "8", "16"}) {
    ASSERT_EQ(ibm({"simulate", "--model", "sine2", "--R", R, "--window", "30", "--t-end", "0.1", "--replicas", "12",
                   "--seed", "9", "--run-id", "R" + R, "--quiet", "--set", "scheme.record_stride=50"}),
              0);
  }
  const std::string runs = (root_ / "R4").string() + "," + (root_ / "R8").string() + "," + (root_ / "R16").string();
  const int rc = ibm({"verify", "--check", "scheme-ladder", "--runs", runs, "--run-id", "v", "--set",
                      "diagnostics.window=6", "--set", "diagnostics.bootstrap=50"});
  EXPECT_TRUE(rc == 0 || rc == 1) << rc;
  const std::string csv = slurp(root_ / "v" / "ladder.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "rung,scheme,R,w1,w1_se,intensity_dev,intensity_dev_se,n,drop,drop_se");
  EXPECT_EQ(line_count(csv), 3u);
  const auto rep = read_json(root_ / "v" / "report.json");
  EXPECT_FALSE(rep.at("verdicts").empty());
}

TEST_F(Cli, VerifyRejectsMixedModels) {
  ASSERT_EQ(ibm({"simulate", "--model", "sine2", "--R", "4", "--t-end", "0.01", "--replicas", "2", "--run-id", "s",
                 "--quiet"}),
            0);
  ASSERT_EQ(ibm({"simulate", "--model", "poisson", "--R", "4", "--t-end", "0.01", "--replicas", "2", "--run-id", "p",
                 "--quiet"}),
            0);
  EXPECT_EQ(ibm({"verify", "--check", "min-gap", "--runs", (root_ / "s").string() + "," + (root_ / "p").string()}), 2);
  EXPECT_EQ(ibm({"verify", "--check", "nonsense"}), 2);
}

TEST_F(Cli, LadderWritesTablesAndKeptPaths) {
  const int rc = ibm({"ladder", "--model", "sine2", "--replicas", "8", "--run-id", "lad", "--quiet", "--keep-paths",
                      "--set", "ladder.R=[4, 8]", "--set", "ladder.R_big=12", "--set", "ladder.upper_R=8", "--set",
                      "ladder.t=0.05", "--set", "ladder.analysis_window=4", "--set", "ladder.sample_window=40", "--set",
                      "diagnostics.bootstrap=40"});
  EXPECT_TRUE(rc == 0 || rc == 1) << rc;
  const fs::path dir = root_ / "lad";
  const std::string csv = slurp(dir / "ladder.csv");
  EXPECT_EQ(line_count(csv), 4u);  // header, two lower rungs, upper
  EXPECT_NE(csv.find(",upper,"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "ladder_upper.csv"));
  for (const char* sub : {"lower-R4", "lower-R8", "reference-R12", "upper-R8"}) {
    EXPECT_TRUE(fs::exists(dir / sub / "manifest.json")) << sub;
    EXPECT_TRUE(fs::exists(dir / sub / "replica-007" / "paths.csv")) << sub;
  }
  // Kept paths feed straight back into verify.
  const std::string runs =
      (dir / "lower-R4").string() + "," + (dir / "lower-R8").string() + "," + (dir / "reference-R12").string();
  const int vrc = ibm({"verify", "--check", "scheme-ladder,min-gap", "--runs", runs, "--run-id", "v", "--set",
                       "diagnostics.window=4", "--set", "diagnostics.bootstrap=40"});
  EXPECT_TRUE(vrc == 0 || vrc == 1) << vrc;
  EXPECT_TRUE(fs::exists(root_ / "v" / "ladder.csv"));
}

}  // namespace
}  // namespace ibm::cli
