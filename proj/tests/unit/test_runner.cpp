#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "wzm/runner/runner.hpp"
#include "wzm/version.hpp"

using namespace wzm::runner;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class RunnerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() / ("wzm_runner_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  RunResult run(const std::string& text, const std::string& sub, std::vector<std::string> overrides = {},
                std::optional<std::uint64_t> seed = {}) {
    RunRequest req;
    req.out_dir = root_ / sub;
    req.overrides = std::move(overrides);
    req.seed = seed;
    return run_config(Config::parse(text), req);
  }

  fs::path root_;
};

// Small settings so every experiment finishes in well under a second.
const char* kSmall[][2] = {
    {"trajectory", "experiment = trajectory\n[run]\nn_steps = 200\nn_traj = 400\nrecord = 2\n"},
    {"master", "experiment = master\n[run]\nn_steps = 60\nsnapshot_every = 20\n[grid]\ncells = 1024\n"
               "[compare]\nn_traj = 2000\n[checks]\nmc_l1 = 0.5\n"},
    {"fp-analytic-check", "experiment = fp-analytic-check\n[fp]\ncells = 256\nx_start = -4\nt_end = 0.3\n"
                          "[checks]\nratio = 3\nl2 = 0.01\ndrift_tolerance = 0.2\n"},
    {"ratchet-spacetime", "experiment = ratchet-spacetime\n[profile]\nkind = uniform\n[solver]\ncells = 32\n"
                          "periods = 60\nsnapshots = 0,60\n"},
    {"seebeck", "experiment = seebeck\n[random]\ncount = 1\n[solver]\ncells = 48\nt_end = 40\n"},
    {"localization", "experiment = localization\n[mc]\nn_traj = 200\nsustain_steps = 100\nmax_steps = 20000\n"
                     "delta_scale = 0.1\n[fp]\nintervals = 100\ntimes = 0.1,1\nwidth = 0.05\n"},
};

}  // namespace

TEST_F(RunnerTest, EveryExperimentRunsAndWritesItsSchema) {
  for (const auto& [name, text] : kSmall) {
    const auto r = run(text, name);
    EXPECT_EQ(r.exit_code, kExitOk) << name << ": " << r.message;
    const auto& e = find_experiment(name);
    for (const auto& o : e.outputs) {
      const auto csv = slurp(root_ / name / o.file);
      std::string header;
      for (std::size_t c = 0; c < o.columns.size(); ++c) header += (c ? "," : "") + o.columns[c];
      EXPECT_EQ(csv.substr(0, csv.find('\n')), header) << o.file;
    }
    const auto j = nlohmann::json::parse(slurp(root_ / name / "summary.json"));
    EXPECT_EQ(j["experiment"], name);
    EXPECT_EQ(j["library_version"], wzm::kVersion);
    EXPECT_EQ(j["seed"], 1);
    EXPECT_EQ(j["config_hash"].get<std::string>().size(), 16U);
    EXPECT_EQ(j["status"], "ok");
    EXPECT_FALSE(j["checks"].empty());
    EXPECT_TRUE(j.contains("audits"));
  }
}

TEST_F(RunnerTest, OutputsAreByteIdenticalForTheSameSeed) {
  const auto* text = kSmall[0][1];
  run(text, "a", {"run.threads=1"});
  run(text, "b", {"run.threads=1"});
  run(text, "c", {"run.threads=1"}, 99);
  for (const char* f : {"trajectory.csv", "ensemble.csv", "histogram.csv", "summary.json"}) {
    EXPECT_EQ(slurp(root_ / "a" / f), slurp(root_ / "b" / f)) << f;
  }
  EXPECT_NE(slurp(root_ / "a" / "trajectory.csv"), slurp(root_ / "c" / "trajectory.csv"));
  run(text, "d", {"run.threads=4"});
  EXPECT_EQ(slurp(root_ / "a" / "ensemble.csv"), slurp(root_ / "d" / "ensemble.csv"));
}

TEST_F(RunnerTest, SeedAndHashAreRecorded) {
  run("experiment = master\nseed = 17\n[run]\nn_steps = 5\n[grid]\ncells = 256\n", "s");
  auto j = nlohmann::json::parse(slurp(root_ / "s" / "summary.json"));
  EXPECT_EQ(j["seed"], 17);
  const auto h1 = j["config_hash"];
  run("experiment = master\nseed = 17\n[run]\nn_steps = 5\n[grid]\ncells = 256\n", "t", {}, 3);
  j = nlohmann::json::parse(slurp(root_ / "t" / "summary.json"));
  EXPECT_EQ(j["seed"], 3);
  EXPECT_EQ(j["config_hash"], h1);
  run("experiment = master\n[run]\nn_steps = 6\n[grid]\ncells = 256\n", "u");
  j = nlohmann::json::parse(slurp(root_ / "u" / "summary.json"));
  EXPECT_NE(j["config_hash"], h1);
}

TEST_F(RunnerTest, ConfigErrorsExitWithTwo) {
  RunRequest req;
  req.out_dir = root_ / "x";
  const auto empty = root_ / "empty.conf";
  std::ofstream(empty).close();
  EXPECT_EQ(run_config_file(empty.string(), req).exit_code, kExitConfig);
  auto r = run("experiment = master\n[grid]\ncels = 3\n", "x");
  EXPECT_EQ(r.exit_code, kExitConfig);
  EXPECT_NE(r.message.find("grid.cels"), std::string::npos);
  EXPECT_EQ(run("experiment = nope\n", "x").exit_code, kExitConfig);
  EXPECT_EQ(run("seed = 3\n", "x").exit_code, kExitConfig);
  EXPECT_EQ(run("experiment = master\nseed = -1\n", "x").exit_code, kExitConfig);
  EXPECT_EQ(run("experiment = master\n", "x", {"grid.cells"}).exit_code, kExitConfig);
  EXPECT_EQ(run("experiment = master\n", "x", {"schedule.alpha.value=3"}).exit_code, kExitConfig);
  EXPECT_EQ(run("experiment = master\n", "x", {"run.n_steps=0"}).exit_code, kExitConfig);
  EXPECT_FALSE(fs::exists(root_ / "x" / "summary.json"));
}

TEST_F(RunnerTest, NumericFailureExitsWithThree) {
  const auto r = run("experiment = master\n[grid]\nlo = -2\nhi = 2\ncells = 64\n[run]\nn_steps = 400\n", "n");
  EXPECT_EQ(r.exit_code, kExitNumeric);
  const auto j = nlohmann::json::parse(slurp(root_ / "n" / "summary.json"));
  EXPECT_EQ(j["status"], "numeric_failure");
  EXPECT_TRUE(j.contains("error"));
}

TEST_F(RunnerTest, FailedCheckExitsWithFour) {
  const auto r = run(kSmall[2][1], "f", {"checks.l2=1e-12"});
  EXPECT_EQ(r.exit_code, kExitCheck);
  EXPECT_NE(r.message.find("l2_error"), std::string::npos);
  const auto j = nlohmann::json::parse(slurp(root_ / "f" / "summary.json"));
  EXPECT_EQ(j["status"], "check_failed");
}

TEST_F(RunnerTest, OverridesAndOutputKey) {
  const auto r = run("experiment = master\noutput = ignored\n[run]\nn_steps = 3\n[grid]\ncells = 128\n", "o",
                     {"run.n_steps=4"});
  ASSERT_EQ(r.exit_code, kExitOk);
  const auto j = nlohmann::json::parse(slurp(root_ / "o" / "summary.json"));
  EXPECT_EQ(j["config"]["run.n_steps"], "4");
  EXPECT_FALSE(j["config"].contains("output"));
}

TEST(Csv, SeventeenDigits) {
  Table t{"x.csv", {"a", "b", "c"}, {{0.1, 3LL, std::string("z")}}};
  EXPECT_EQ(format_csv(t), "a,b,c\n0.10000000000000001,3,z\n");
}

TEST(Catalog, ListsEveryExperimentWithColumns) {
  std::ostringstream os;
  print_catalog(os);
  const auto text = os.str();
  for (const auto& e : experiments()) {
    EXPECT_NE(text.find(e.name + "\n"), std::string::npos);
    for (const auto& o : e.outputs) EXPECT_NE(text.find(o.file + ": " + o.columns.front()), std::string::npos);
  }
  std::ostringstream again;
  print_catalog(again);
  EXPECT_EQ(text, again.str());
}
