#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "rngaudit/report.hpp"

namespace rngaudit {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rngaudit_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  return json::parse(in);
}

TEST(Report, TestResultRoundTripWithNonFiniteValues) {
  TestResult r = error_result("serial", 0.01, "too few tuples");
  const json j = to_json(r);
  EXPECT_TRUE(j["statistic"].is_null());
  EXPECT_TRUE(j["p_value"].is_null());
  const TestResult back = test_result_from_json(j);
  EXPECT_EQ(back.name, "serial");
  EXPECT_TRUE(std::isnan(back.p_value));
  EXPECT_EQ(back.verdict, Verdict::kError);
  EXPECT_EQ(to_json(back), j);
}

TEST(Report, BigIntegersBecomeStringsBeyondSixtyFourBits) {
  EXPECT_TRUE(bigint_to_json(BigInt(168328)).is_number_unsigned());
  const BigInt huge = BigInt(1) << 100;
  const json j = bigint_to_json(huge);
  EXPECT_TRUE(j.is_string());
  EXPECT_EQ(bigint_from_json(j), huge);
  EXPECT_EQ(bigint_from_json(json(-5)), BigInt(-5));
}

TEST(Report, ValidatorFlagsStructuralProblems) {
  RunManifest m;
  m.command_line = {"rngaudit", "test"};
  m.timestamp = utc_timestamp();
  std::vector<TestResult> results{make_result("ks_uniform", 0.1, 0.5, 0.01)};
  json report = make_report(m, results, json{{"tests", 1}, {"rejections", 0}, {"errors", 0}, {"verdict", "pass"}});
  EXPECT_TRUE(validate_report(report).empty());
  json broken = report;
  broken["schema"] = "other/v9";
  broken["results"][0].erase("alpha");
  broken["results"][0]["verdict"] = "maybe";
  EXPECT_EQ(validate_report(broken).size(), 3u);
  EXPECT_FALSE(validate_report(json::array()).empty());
}

TEST(Report, SweepTableHasDeltaRows) {
  const std::vector<std::uint64_t> seeds{1, 2, 3};
  const SweepReport sweep = seed_sweep(parse_descriptor("mt"), seeds, ToyModelConfig{});
  const std::string table = format_sweep_table(sweep);
  EXPECT_NE(table.find("Delta Estimate [%]"), std::string::npos);
  EXPECT_NE(table.find("Delta Standard error [%]"), std::string::npos);
}

TEST(Cli, GenerateFootnoteSequence) {
  const CliRun r = run({"generate", "lcg:m=10,a=7,c=7,seed=7", "-n", "8"});
  EXPECT_EQ(r.code, kExitPass);
  EXPECT_EQ(r.out, "# rngaudit-sample v1 lcg:m=10,a=7,c=7,seed=7\n0.6\n0.9\n0.0\n0.7\n0.6\n0.9\n0.0\n0.7\n");
}

TEST(Cli, GenerateToFileWritesHeaderAndCount) {
  const fs::path path = scratch("s.txt");
  const CliRun r = run({"generate", "mt:seed=5489", "-n", "10", "-o", path.string(), "--quiet"});
  EXPECT_EQ(r.code, kExitPass);
  std::ifstream in(path);
  std::string line;
  int lines = 0;
  std::getline(in, line);
  EXPECT_EQ(line, "# rngaudit-sample v1 mt:seed=5489");
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 10);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({"generate", "lcg:m=10,a=12,c=1,seed=1", "-n", "3"}).code, kExitUsage);
  EXPECT_EQ(run({"generate", "mt", "-n", "0"}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"test", "mt", "--alpha", "2"}).code, kExitUsage);
  EXPECT_EQ(run({"test", "mt", "--tests", "nope"}).code, kExitUsage);
  EXPECT_EQ(run({"sweep", "mt", "--seeds", "5..1"}).code, kExitUsage);
  EXPECT_EQ(run({"spectral", "lcg:m=10,a=7", "--cloud", "3"}).code, kExitUsage);
  const CliRun spectral_mt = run({"spectral", "mt:seed=1"});
  EXPECT_EQ(spectral_mt.code, kExitUsage);
  EXPECT_NE(spectral_mt.err.find("spectral test requires congruential generator"), std::string::npos);
}

TEST(Cli, HelpExitsZero) {
  const CliRun r = run({"--help"});
  EXPECT_EQ(r.code, kExitPass);
  EXPECT_NE(r.out.find("generate"), std::string::npos);
}

TEST(Cli, MissingSampleFileExitsThree) {
  EXPECT_EQ(run({"test", scratch("does-not-exist.txt").string()}).code, kExitIo);
  EXPECT_EQ(run({"generate", "mt", "-n", "3", "-o", "/nonexistent-dir/x.txt"}).code, kExitIo);
}

TEST(Cli, DegenerateInputRejects) {
  const CliRun r = run({"test", "lcg:m=10,a=7,c=7,seed=7", "-n", "10000"});
  EXPECT_EQ(r.code, kExitReject);
  EXPECT_NE(r.out.find("serial"), std::string::npos);
}

TEST(Cli, ReferenceGoldenSeedPasses) {
  EXPECT_EQ(run({"test", "mt:seed=5489", "--quiet"}).code, kExitPass);
}

TEST(Cli, SampleFileInputAndGlobalFlagsAfterSubcommand) {
  const fs::path sample = scratch("mt.txt");
  ASSERT_EQ(run({"generate", "mt:seed=99", "-n", "20000", "-o", sample.string()}).code, 0);
  const fs::path report = scratch("test.json");
  const CliRun r = run({"test", sample.string(), "--tests", "uniformity", "--json", report.string(), "--alpha", "0.001"});
  EXPECT_EQ(r.code, kExitPass);
  const json j = read_json(report);
  EXPECT_TRUE(validate_report(j).empty());
  EXPECT_EQ(j["manifest"]["generator"], "mt:seed=99");
  EXPECT_EQ(j["results"].size(), 6u);
  EXPECT_EQ(j["results"][0]["alpha"], 0.001);
}

TEST(Cli, SpectralFigureGeneratorRejectsAndEmitsCloud) {
  const fs::path csv = scratch("cloud3.csv");
  const CliRun r = run({"spectral", "lcg:m=262144,a=4649,c=819,seed=1", "--cloud", "3", "-n", "500",
                     "--cloud-out", csv.string(), "--json", "-"});
  EXPECT_EQ(r.code, kExitReject);
  const json j = json::parse(r.out);
  EXPECT_TRUE(validate_report(j).empty());
  EXPECT_EQ(j["summary"]["accepted"], false);
  EXPECT_EQ(j["summary"]["cloud"]["plane_check"]["all_on_planes"], true);
  EXPECT_EQ(j["results"][1]["detail"]["nu_squared"], 1496);
  std::ifstream in(csv);
  std::string line;
  int rows = -1;  // header
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 498);
}

TEST(Cli, SweepReferenceGeneratorPasses) {
  const CliRun r = run({"sweep", "mt", "--seeds", "1..30", "--json", "-"});
  EXPECT_EQ(r.code, kExitPass);
  const json j = json::parse(r.out);
  EXPECT_TRUE(validate_report(j).empty());
  EXPECT_EQ(j["results"].size(), 30u);
  EXPECT_EQ(j["summary"]["relative_delta_percent"].size(), 30u);
}

TEST(Cli, SweepIdenticalSeedsIsZero) {
  const CliRun r = run({"sweep", "mt", "--seeds", "4,4", "--json", "-"});
  EXPECT_EQ(r.code, kExitPass);
  EXPECT_EQ(json::parse(r.out)["summary"]["max_abs_relative_delta_percent"], 0.0);
}

TEST(Cli, PeriodCommand) {
  const CliRun bad = run({"period", "lcg:m=10,a=7,c=7,seed=7", "--brute-cap", "100", "--json", "-"});
  EXPECT_EQ(bad.code, kExitReject);
  const json j = json::parse(bad.out);
  EXPECT_EQ(j["summary"]["period"], 4);
  EXPECT_EQ(j["results"][1]["detail"]["agrees_with_predicate"], true);
  EXPECT_EQ(run({"period", "lcg:m=4096,a=5,c=3", "--brute-cap", "5000", "--quiet"}).code, kExitPass);
  EXPECT_EQ(run({"period", "mt"}).code, kExitUsage);
}

TEST(Cli, FiguresWritesArtifacts) {
  const fs::path dir = scratch("figs");
  const CliRun r = run({"figures", "--out-dir", dir.string(), "-n", "5000", "--quiet"});
  EXPECT_EQ(r.code, kExitPass);
  for (const char* f : {"fig1_pairs.csv", "fig1_pairs.svg", "fig2_triples.csv", "fig2_planes.json"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  EXPECT_EQ(read_json(dir / "fig2_planes.json")["off_plane"], 0);
}

TEST(Cli, JsonRoundTripsLosslessly) {
  const CliRun r = run({"test", "mt:seed=3", "-n", "20000", "--json", "-"});
  const json j = json::parse(r.out);
  EXPECT_EQ(dump_report(json::parse(dump_report(j))), r.out);
  for (const json& res : j["results"]) {
    EXPECT_EQ(to_json(test_result_from_json(res)), res);
  }
}

TEST(Cli, ManifestReproducesPayload) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"test", "wh:seed1=3,seed2=4,seed3=5", "-n", "30000", "--json", "-"},
        std::vector<std::string>{"sweep", "lcg:m=262144,a=4649,c=819", "--seed-count", "5", "--json", "-"},
        std::vector<std::string>{"spectral", "lcg:m=2147483647,a=16807", "--dmax", "8", "--json", "-"}}) {
    const json first = json::parse(run(args).out);
    const auto line = first["manifest"]["command_line"].get<std::vector<std::string>>();
    const json second = json::parse(run(std::vector<std::string>(line.begin() + 1, line.end())).out);
    EXPECT_EQ(first["results"], second["results"]);
    EXPECT_EQ(first["summary"], second["summary"]);
    EXPECT_EQ(first["manifest"]["config"], second["manifest"]["config"]);
  }
}

}  // namespace
}  // namespace rngaudit
