#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "addbasis/cli/config.hpp"
#include "addbasis/cli/run.hpp"
#include "addbasis/error.hpp"

using namespace addbasis;
using namespace addbasis::cli;
namespace fs = std::filesystem;

namespace {

class Scratch {
 public:
  Scratch() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() / (std::string("addbasis_cli_") + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~Scratch() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

nlohmann::json read_json(const fs::path& path) { return nlohmann::json::parse(slurp(path)); }

}  // namespace

TEST(Config, RoundTrip) {
  ExperimentConfig c;
  c.kind = "sample";
  c.mode = "mc";
  c.f = "x/log(x)";
  c.d = 3;
  c.xmax = 123456;
  c.seed = 0xffffffffffffffffULL;
  c.probes = {10, 200, 3000};
  c.epsilon = 0.1 + 0.2;  // not exactly representable in short decimal
  c.gain = 4;
  c.output = "some dir/out";
  const auto back = config_from_json(to_json(c));
  EXPECT_EQ(back, c);
  EXPECT_EQ(config_from_json(nlohmann::json::parse(to_json(c).dump())), c);
  EXPECT_EQ(config_from_json(nlohmann::json::object()), ExperimentConfig{});
}

TEST(Config, UnknownAndMistypedFieldsRejected) {
  EXPECT_THROW(config_from_json(nlohmann::json{{"kind", "verify"}, {"colour", "blue"}}), InputError);
  EXPECT_THROW(config_from_json(nlohmann::json{{"d", "two"}}), InputError);
  EXPECT_THROW(config_from_json(nlohmann::json{{"d", -2}}), InputError);
  EXPECT_THROW(config_from_json(nlohmann::json{{"probes", 5}}), InputError);
  EXPECT_THROW(config_from_json(nlohmann::json::array()), InputError);
}

TEST(Config, LoadFromFile) {
  Scratch dir;
  {
    std::ofstream out(dir / "cfg.json");
    out << R"({"kind": "goldbach", "mode": "c2", "limit": 1000})";
  }
  const auto c = load_config((dir / "cfg.json").string());
  EXPECT_EQ(c.kind, "goldbach");
  EXPECT_EQ(c.limit, 1000u);
  {
    std::ofstream out(dir / "broken.json");
    out << "{ not json";
  }
  EXPECT_THROW(load_config((dir / "broken.json").string()), InputError);
  EXPECT_THROW(load_config((dir / "absent.json").string()), InputError);
}

TEST(Config, Validation) {
  ExperimentConfig c;
  c.mode = "sandwich";
  EXPECT_NO_THROW(validate(c));
  c.kind = "telepathy";
  EXPECT_THROW(validate(c), InputError);
  c.kind = "verify";
  c.mode = "nonsense";
  EXPECT_THROW(validate(c), InputError);
  c.kind = "goldbach";
  c.mode = "scan";
  EXPECT_NO_THROW(validate(c));
  c.mode = "mc";
  EXPECT_THROW(validate(c), InputError);
}

TEST(Run, VerificationVerdicts) {
  Scratch dir;
  ExperimentConfig c;
  c.kind = "verify";
  c.mode = "sandwich";
  c.sequence = "primes";
  c.d = 2;
  c.output = (dir / "d2").string();
  const auto pass = run(c, {1});
  EXPECT_EQ(pass.status, kExitPass) << pass.message;
  EXPECT_EQ(pass.artifacts.back(), "manifest.json");
  for (const auto& name : pass.artifacts) EXPECT_TRUE(fs::exists(dir / "d2" / name)) << name;

  c.d = 3;
  c.output = (dir / "d3").string();
  const auto fail = run(c, {1});
  EXPECT_EQ(fail.status, kExitFailed);
  EXPECT_NE(fail.message.find("FAIL"), std::string::npos) << fail.message;
}

TEST(Run, InvalidInputsExitTwo) {
  Scratch dir;
  ExperimentConfig c;
  c.kind = "constants";
  c.f = "x^^2";
  c.output = (dir / "bad_f").string();
  const auto bad = run(c);
  EXPECT_EQ(bad.status, kExitInvalid);
  EXPECT_FALSE(bad.message.empty());
  const auto manifest = read_json(dir / "bad_f" / "manifest.json");
  EXPECT_EQ(manifest["status"], kExitInvalid);

  c = ExperimentConfig{};
  c.mode = "exponent";
  c.sequence = "fibonacci";
  c.output = (dir / "bad_seq").string();
  EXPECT_EQ(run(c).status, kExitInvalid);

  c = ExperimentConfig{};
  c.kind = "concentration";
  c.f = "x^(1/3)";
  c.xmax = 20000;
  c.trials = 4;
  c.output = (dir / "refused").string();
  EXPECT_EQ(run(c).status, kExitInvalid);
}

TEST(Run, ManifestReproducesRun) {
  Scratch dir;
  ExperimentConfig c;
  c.kind = "verify";
  c.mode = "shift";
  c.sequence = "squares";
  c.exponent = 0.3;
  c.xmax = 100000;
  c.output = (dir / "first").string();
  ASSERT_EQ(run(c, {1}).status, kExitPass);

  const auto manifest = read_json(dir / "first" / "manifest.json");
  EXPECT_EQ(manifest["version"].get<std::string>().empty(), false);
  EXPECT_TRUE(manifest.contains("wall_time_seconds"));
  auto again = config_from_json(manifest["config"]);
  EXPECT_EQ(again, c);
  again.output = (dir / "second").string();
  ASSERT_EQ(run(again, {3}).status, kExitPass);
  EXPECT_EQ(slurp(dir / "first" / "report.csv"), slurp(dir / "second" / "report.csv"));
}

TEST(Run, GoldbachScanSummary) {
  Scratch dir;
  ExperimentConfig c;
  c.kind = "goldbach";
  c.mode = "scan";
  c.limit = 200000;
  c.output = dir / "scan";
  const auto result = run(c);
  EXPECT_EQ(result.status, kExitPass);
  const auto scan = read_json(dir / "scan" / "scan.json");
  const auto largest = scan["largest_2n"].get<std::uint64_t>();
  EXPECT_GE(largest, 30000u);
  EXPECT_LE(largest, 300000u);
  EXPECT_TRUE(scan["conclusion_holds"].get<bool>());
}

TEST(Run, CounterexampleExperiment) {
  Scratch dir;
  ExperimentConfig c;
  c.kind = "counterexample";
  c.xmax = 100000;
  c.output = dir / "cx";
  EXPECT_EQ(run(c).status, kExitPass);
  EXPECT_TRUE(fs::exists(dir / "cx" / "ratios.csv"));
}

TEST(PlotData, OneFilePerColumn) {
  Scratch dir;
  VerificationReport report;
  report.grid = {1, 10, 100};
  report.add_column("alpha") = {0.5, 0.25, 0.125};
  report.add_column("beta") = {1, 2, 3};
  const auto names = emit_plotdata(report, dir / "", "curve");
  ASSERT_EQ(names, (std::vector<std::string>{"curve_alpha.dat", "curve_beta.dat"}));
  std::istringstream lines(slurp(dir / "curve_alpha.dat"));
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  EXPECT_EQ(header.front(), '#');
  EXPECT_NE(header.find("alpha"), std::string::npos);
  std::istringstream fields(first);
  double x = 0, y = 0;
  fields >> x >> y;
  EXPECT_EQ(x, 1);
  EXPECT_EQ(y, 0.5);
  EXPECT_EQ(slurp(dir / "curve_beta.dat").find('\r'), std::string::npos);
}
