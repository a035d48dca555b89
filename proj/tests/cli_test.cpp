#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pas/cli.hpp"
#include "support.hpp"

namespace pas {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pas_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static std::size_t lines(const std::string& text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
  }

  fs::path dir_;
  std::ostringstream err_;
};

TEST_F(CliTest, ParsesReferenceScenario) {
  const auto f = testing::reference_file();
  const auto s = f.build();
  EXPECT_EQ(s.nodes.size(), 30u);
  EXPECT_EQ(s.radio_range, 10.0);
  EXPECT_EQ(s.horizon, 120.0);
  EXPECT_EQ(s.strategy.label(), "pas");
  EXPECT_EQ(s.strategy.pas.alert_threshold, 10.0);
  EXPECT_EQ(s.strategy.pas.sleep_increment, 1.0);
  EXPECT_EQ(s.strategy.pas.initial_sleep, 1.0);
  EXPECT_EQ(s.strategy.pas.detection_timeout, 30.0);
  EXPECT_EQ(s.strategy.pas.rebroadcast_epsilon, 0.10);
  for (auto p : s.nodes) {
    EXPECT_GE(p.x, 0.0);
    EXPECT_LT(p.x, 60.0);
    EXPECT_GE(p.y, 0.0);
    EXPECT_LT(p.y, 60.0);
  }
  EXPECT_NE(f.build(2).nodes, s.nodes);  // generator follows the run seed
}

TEST_F(CliTest, StrategyAliases) {
  auto text = std::string(testing::kReferenceScenario);
  auto with = [&](const std::string& strategy) {
    auto t = text;
    const auto at = t.find("\"strategy\"");
    const auto end = t.find('\n', at);
    t.replace(at, end - at, "\"strategy\": " + strategy + ",");
    return parse_scenario(t).base.strategy;
  };
  EXPECT_EQ(with("\"ns\"").kind, StrategyKind::NS);
  EXPECT_EQ(with("\"sas\"").pas.alert_threshold, 0.0);
  EXPECT_EQ(with("{\"kind\": \"sas\", \"max_sleep\": 4}").pas.max_sleep, 4.0);
  EXPECT_EQ(with("{\"kind\": \"pas\", \"alert_threshold\": 0}").label(), "sas");
  EXPECT_THROW(with("\"always\""), ScenarioParseError);
}

TEST_F(CliTest, ParseErrorsNameTheProblem) {
  try {
    (void)parse_scenario("{\n  \"nodes\": [1,\n}");
    FAIL();
  } catch (const ScenarioParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  try {
    (void)parse_scenario(R"({"nodes": {"explicit": [[0, 0]]}, "radio_range": 10, "strategy": "ns", "horizon": 5})");
    FAIL();
  } catch (const ScenarioParseError& e) {
    EXPECT_NE(std::string(e.what()).find("'stimulus'"), std::string::npos) << e.what();
  }
  try {
    (void)parse_scenario(
        R"({"nodes": {"explicit": [[0, "a"]]}, "radio_range": 10, "strategy": "ns", "horizon": 5,
            "stimulus": {"variant": "isotropic", "source": [0, 0], "speed": 1}})");
    FAIL();
  } catch (const ScenarioParseError& e) {
    EXPECT_NE(std::string(e.what()).find("nodes.explicit[0][1]"), std::string::npos) << e.what();
  }
}

TEST_F(CliTest, RunWritesBothCsvs) {
  const auto path = write("ref.json", testing::kReferenceScenario);
  ASSERT_EQ(cli::run_command(path, (dir_ / "out").string(), false, err_), cli::kOk) << err_.str();
  const auto nodes = slurp(dir_ / "out" / "nodes.csv");
  const auto summary = slurp(dir_ / "out" / "summary.csv");
  EXPECT_EQ(lines(nodes), 31u);
  EXPECT_EQ(nodes.substr(0, nodes.find('\n')), kNodesCsvHeader);
  EXPECT_EQ(lines(summary), 2u);
  EXPECT_EQ(summary.substr(0, summary.find('\n')), kSummaryCsvHeader);
  EXPECT_EQ(summary.rfind("reference,pas,10,10,", 0 + summary.find('\n') + 1), summary.find('\n') + 1);
  EXPECT_FALSE(fs::exists(dir_ / "out" / "trace.tsv"));
}

TEST_F(CliTest, RunIsByteIdenticalAcrossInvocations) {
  const auto path = write("ref.json", testing::kReferenceScenario);
  ASSERT_EQ(cli::run_command(path, (dir_ / "a").string(), true, err_), cli::kOk);
  ASSERT_EQ(cli::run_command(path, (dir_ / "b").string(), true, err_), cli::kOk);
  for (const char* f : {"nodes.csv", "summary.csv", "trace.tsv"}) {
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
  }
  EXPECT_GT(slurp(dir_ / "a" / "trace.tsv").size(), 0u);
}

TEST_F(CliTest, MissingStimulusExitsTwo) {
  const auto path = write("bad.json", R"({"nodes": {"explicit": [[0, 0]]}, "radio_range": 10,
                                          "strategy": "ns", "horizon": 5})");
  EXPECT_EQ(cli::run_command(path, (dir_ / "out").string(), false, err_), cli::kParseError);
  EXPECT_NE(err_.str().find("stimulus"), std::string::npos);
}

TEST_F(CliTest, MissingFileExitsTwo) {
  EXPECT_EQ(cli::run_command((dir_ / "nope.json").string(), (dir_ / "out").string(), false, err_),
            cli::kParseError);
}

TEST_F(CliTest, InvalidConfigurationExitsThree) {
  const auto path = write("cfg.json", R"({"nodes": {"explicit": [[0, 0], [0, 0]]}, "radio_range": 10,
      "stimulus": {"variant": "isotropic", "source": [0, 0], "speed": 1}, "strategy": "pas", "horizon": 5})");
  EXPECT_EQ(cli::run_command(path, (dir_ / "out").string(), false, err_), cli::kConfigError);
}

TEST_F(CliTest, UnwritableOutputDirExitsThree) {
  const auto path = write("ref.json", testing::kReferenceScenario);
  const auto blocker = write("file", "not a directory");
  EXPECT_EQ(cli::run_command(path, blocker + "/sub", false, err_), cli::kConfigError);
}

TEST_F(CliTest, SweepCountsRowsAndAggregates) {
  const auto path = write("ref.json", testing::kReferenceScenario);
  cli::SweepArgs args{"max_sleep", {2, 4, 6, 8, 10}, 5};
  ASSERT_EQ(cli::sweep_command(path, args, (dir_ / "sw").string(), err_), cli::kOk) << err_.str();
  const auto text = slurp(dir_ / "sw" / "summary.csv");
  EXPECT_EQ(lines(text), 1u + 25u + 5u);
  std::size_t means = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) means += line.find("#mean,") != std::string::npos;
  EXPECT_EQ(means, 5u);
}

TEST_F(CliTest, SweepUsesScenarioSectionAndRejectsUnknownParam) {
  auto text = std::string(testing::kReferenceScenario);
  text.insert(text.rfind('}'), R"(, "sweep": {"param": "alert_threshold", "values": [10, 20, 30], "reps": 2})");
  const auto path = write("sw.json", text);
  ASSERT_EQ(cli::sweep_command(path, {}, (dir_ / "sw").string(), err_), cli::kOk) << err_.str();
  EXPECT_EQ(lines(slurp(dir_ / "sw" / "summary.csv")), 1u + 6u + 3u);
  cli::SweepArgs bad{"radio_range", {1, 2}, 1};
  EXPECT_EQ(cli::sweep_command(path, bad, (dir_ / "sw2").string(), err_), cli::kParseError);
  cli::SweepArgs unsorted{"max_sleep", {4, 2}, 1};
  EXPECT_EQ(cli::sweep_command(path, unsorted, (dir_ / "sw3").string(), err_), cli::kParseError);
}

TEST_F(CliTest, SweepIsOrderedAndDeterministic) {
  const auto path = write("ref.json", testing::kReferenceScenario);
  cli::SweepArgs args{"alert_threshold", {10, 20, 30}, 3};
  ASSERT_EQ(cli::sweep_command(path, args, (dir_ / "a").string(), err_), cli::kOk);
  ASSERT_EQ(cli::sweep_command(path, args, (dir_ / "b").string(), err_), cli::kOk);
  EXPECT_EQ(slurp(dir_ / "a" / "summary.csv"), slurp(dir_ / "b" / "summary.csv"));
}

// End-to-end through the built executable.
TEST_F(CliTest, BinaryExitCodes) {
  const char* bin = std::getenv("PAS_SIM");
  if (bin == nullptr) GTEST_SKIP() << "PAS_SIM not set";
  const auto path = write("ref.json", testing::kReferenceScenario);
  auto sh = [&](const std::string& args) {
    const int status = std::system((std::string(bin) + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
  };
  EXPECT_EQ(sh("run " + path + " -o " + (dir_ / "o").string() + " --trace"), 0);
  EXPECT_TRUE(fs::exists(dir_ / "o" / "trace.tsv"));
  EXPECT_EQ(sh("sweep " + path + " --param max_sleep --values 2,4 --reps 2 -o " + (dir_ / "s").string()), 0);
  EXPECT_EQ(lines(slurp(dir_ / "s" / "summary.csv")), 1u + 4u + 2u);
  EXPECT_EQ(sh("sweep " + path + " --param bogus --values 1 --reps 1 -o " + (dir_ / "t").string()), 2);
  EXPECT_EQ(sh("run"), 2);
  if (const char* scen = std::getenv("PAS_SCENARIOS")) {
    EXPECT_EQ(sh(std::string("run ") + scen + "/reference.json -o " + (dir_ / "r").string()), 0);
  }
}

}  // namespace
}  // namespace pas
