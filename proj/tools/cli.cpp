#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "rngaudit/battery.hpp"
#include "rngaudit/descriptor.hpp"
#include "rngaudit/error.hpp"
#include "rngaudit/period.hpp"
#include "rngaudit/report.hpp"
#include "rngaudit/sample.hpp"
#include "rngaudit/seedlab.hpp"
#include "rngaudit/spectral.hpp"

namespace rngaudit {
namespace {

using nlohmann::json;

constexpr std::size_t kDefaultTestCount = 100'000;
constexpr std::size_t kDefaultCloudCount = 10'000;
constexpr const char* kFigureGenerator = "lcg:m=262144,a=4649,c=819,seed=1";
constexpr std::size_t kFigureCount = std::size_t{1} << 18;

struct GlobalOptions {
  double alpha = kDefaultAlpha;
  std::string json_path;
  bool quiet = false;
};

struct Context {
  const std::vector<std::string>& args;
  std::ostream& out;
  std::ostream& err;
  GlobalOptions global;
};

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw UsageError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

// "1..30", "3,7,11" or a mix such as "1..5,9".
std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    const auto dots = item.find("..");
    if (dots == std::string_view::npos) {
      seeds.push_back(parse_u64(item, "seed"));
    } else {
      const std::uint64_t lo = parse_u64(item.substr(0, dots), "seed range");
      const std::uint64_t hi = parse_u64(item.substr(dots + 2), "seed range");
      if (hi < lo) throw UsageError("empty seed range '" + std::string(item) + "'");
      if (hi - lo >= 1'000'000) throw UsageError("seed range is too long");
      for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    }
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
    if (text.empty()) throw UsageError("trailing comma in seed list");
  }
  return seeds;
}

std::pair<std::size_t, std::size_t> parse_pair(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) throw UsageError("--pair expects i,j");
  return {static_cast<std::size_t>(parse_u64(text.substr(0, comma), "pair index")),
          static_cast<std::size_t>(parse_u64(text.substr(comma + 1), "pair index"))};
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> names;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) names.push_back(item);
  }
  return names;
}

RunManifest make_manifest(const Context& ctx, std::string generator, json config) {
  RunManifest m;
  m.command_line.push_back("rngaudit");
  m.command_line.insert(m.command_line.end(), ctx.args.begin(), ctx.args.end());
  m.generator = std::move(generator);
  config["alpha"] = ctx.global.alpha;
  m.config = std::move(config);
  m.timestamp = utc_timestamp();
  return m;
}

int exit_code_for(const json& summary) {
  if (summary.value("rejections", 0) > 0) return kExitReject;
  if (summary.value("errors", 0) > 0) return kExitUsage;
  return kExitPass;
}

// Prints the human summary and writes the JSON report where requested.
int emit(const Context& ctx, const json& report, const std::string& human) {
  const bool json_to_stdout = ctx.global.json_path == "-";
  if (!ctx.global.quiet && !json_to_stdout) ctx.out << human;
  if (json_to_stdout) {
    ctx.out << dump_report(report);
  } else if (!ctx.global.json_path.empty()) {
    write_file_atomic(ctx.global.json_path, dump_report(report));
  }
  return exit_code_for(report.at("summary"));
}

LcgParams require_lcg(const GeneratorDescriptor& d) {
  if (d.family != GeneratorFamily::kLcg) {
    throw UsageError("spectral test requires congruential generator (an lcg: descriptor)");
  }
  return d.lcg;
}

// --- generate ---------------------------------------------------------------

struct GenerateOptions {
  std::string descriptor;
  std::size_t count = 0;
  std::string output;
};

int cmd_generate(const Context& ctx, const GenerateOptions& opt) {
  const GeneratorDescriptor d = parse_descriptor(opt.descriptor);
  if (opt.count < 1) throw UsageError("count must be at least 1");
  const Sample sample = generate_sample(d, opt.count);
  if (opt.output.empty()) {
    ctx.out << format_sample(sample);
  } else {
    write_sample_file(opt.output, sample);
  }
  const json summary = {{"tests", 0},   {"rejections", 0},          {"errors", 0},
                        {"verdict", "pass"}, {"count", opt.count}, {"output", opt.output}};
  const json config = {{"command", "generate"}, {"count", opt.count}, {"output", opt.output}};
  const json report = make_report(make_manifest(ctx, to_string(d), config), {}, summary);
  if (opt.output.empty()) {
    // The sample already went to stdout; only a file report makes sense.
    if (!ctx.global.json_path.empty() && ctx.global.json_path != "-") {
      write_file_atomic(ctx.global.json_path, dump_report(report));
    }
    return kExitPass;
  }
  std::string human;
  if (!ctx.global.quiet) human = "wrote " + std::to_string(opt.count) + " values to " + opt.output + "\n";
  return emit(ctx, report, human);
}

// --- test -------------------------------------------------------------------

struct TestOptions {
  std::string input;
  std::optional<std::size_t> count;
  std::string tests = "all";
  BatteryConfig battery;
  bool overlapping = false;
};

int cmd_test(const Context& ctx, TestOptions opt) {
  Sample sample;
  std::string generator;
  if (looks_like_descriptor(opt.input)) {
    const GeneratorDescriptor d = parse_descriptor(opt.input);
    const std::size_t count = opt.count.value_or(kDefaultTestCount);
    if (count < 1) throw UsageError("count must be at least 1");
    sample = generate_sample(d, count);
    generator = to_string(d);
  } else {
    if (opt.count) throw UsageError("-n applies only to descriptor input");
    sample = read_sample_file(opt.input);
    generator = sample.provenance();
  }

  BatteryConfig config = opt.battery;
  config.alpha = ctx.global.alpha;
  config.tuple_mode = opt.overlapping ? TupleMode::kOverlapping : TupleMode::kDisjoint;
  if (opt.tests != "all") config.tests = split_names(opt.tests);
  config.tests = expand_test_names(config.tests);

  const BatteryReport battery = run_battery(sample, config);
  json summary = battery_summary(battery);
  summary["sample_size"] = sample.size();
  json cfg = to_json(config);
  cfg["command"] = "test";
  cfg["input"] = opt.input;
  cfg["sample_size"] = sample.size();
  const json report = make_report(make_manifest(ctx, generator, cfg), battery.results, summary);

  std::string human = "sample: " + generator + " (" + std::to_string(sample.size()) + " values)\n";
  human += format_results(battery.results);
  human += std::to_string(battery.rejections) + " rejected, " + std::to_string(battery.errors) +
           " errors, " + std::to_string(battery.results.size()) + " tests\n";
  return emit(ctx, report, human);
}

// --- spectral ---------------------------------------------------------------

struct SpectralOptions {
  std::string descriptor;
  int dmax = kVerdictMaxDimension;
  int cloud = 0;
  std::size_t count = kDefaultCloudCount;
  std::string cloud_out;
  std::string svg;
};

int cmd_spectral(const Context& ctx, const SpectralOptions& opt) {
  const GeneratorDescriptor d = parse_descriptor(opt.descriptor);
  const LcgParams params = require_lcg(d);
  if (opt.dmax < kMinSpectralDimension || opt.dmax > kMaxSpectralDimension) {
    throw UsageError("--dmax must lie in 2..8");
  }
  if (opt.cloud != 0 && opt.cloud != 2 && opt.cloud != 3) throw UsageError("--cloud must be 2 or 3");
  if (opt.cloud != 0 && opt.cloud_out.empty()) throw UsageError("--cloud needs --cloud-out <path>");
  if (!opt.svg.empty() && opt.cloud != 2) throw UsageError("--svg needs --cloud 2");

  const SpectralReport spectral = spectral_test(params, opt.dmax);
  std::vector<TestResult> results = spectral_results(spectral);
  json summary = spectral_summary(spectral);
  std::string human = "generator: " + to_string(d) + "\n" + format_results(results);
  human += std::string("verdict (d = 2..6): ") + (spectral.accepted ? "accept" : "reject") + "\n";

  if (opt.cloud != 0) {
    const Sample sample = generate_sample(d, opt.count);
    const PointCloud full = point_cloud(sample.values(), opt.cloud);
    const PointCloud cloud = thin_point_cloud(full);
    write_file_atomic(opt.cloud_out, point_cloud_csv(cloud));
    if (!opt.svg.empty()) write_file_atomic(opt.svg, point_cloud_svg(cloud, to_string(d)));
    const ShortestVector normal = spectral_accuracy(params, opt.cloud);
    const PlaneCheck planes = check_planes(full, normal.vector);
    summary["cloud"] = {{"dimension", opt.cloud},
                        {"points", full.size()},
                        {"points_written", cloud.size()},
                        {"csv", opt.cloud_out},
                        {"svg", opt.svg},
                        {"plane_check", to_json(planes, normal.vector, 1e-9)}};
    human += "cloud: " + std::to_string(cloud.size()) + " points written to " + opt.cloud_out + "; " +
             std::to_string(planes.plane_count) + " planes, " + std::to_string(planes.off_plane) +
             " points off-plane\n";
  }

  const json cfg = {{"command", "spectral"}, {"dmax", opt.dmax},        {"cloud", opt.cloud},
                    {"count", opt.count},    {"cloud_out", opt.cloud_out}, {"svg", opt.svg}};
  const json report = make_report(make_manifest(ctx, to_string(d), cfg), results, summary);
  return emit(ctx, report, human);
}

// --- sweep ------------------------------------------------------------------

struct SweepOptions {
  std::string descriptor;
  std::string seeds;
  std::optional<std::size_t> seed_count;
  ToyModelConfig model;
  std::string pair;
};

int cmd_sweep(const Context& ctx, const SweepOptions& opt) {
  const GeneratorDescriptor d = parse_descriptor(opt.descriptor);
  if (!opt.seeds.empty() && opt.seed_count) throw UsageError("give --seeds or --seed-count, not both");
  std::vector<std::uint64_t> seeds;
  if (opt.seed_count) {
    for (std::uint64_t s = 1; s <= *opt.seed_count; ++s) seeds.push_back(s);
  } else {
    seeds = parse_seed_list(opt.seeds.empty() ? "1..30" : opt.seeds);
  }
  std::optional<std::pair<std::size_t, std::size_t>> designated;
  if (!opt.pair.empty()) designated = parse_pair(opt.pair);

  const SweepReport sweep = seed_sweep(d, seeds, opt.model, designated);
  const std::vector<TestResult> results = sweep_results(sweep);
  json cfg = to_json(opt.model);
  cfg["command"] = "sweep";
  cfg["seeds"] = seeds;
  cfg["pair"] = opt.pair;
  const json report = make_report(make_manifest(ctx, to_string(d), cfg), results, sweep_summary(sweep));
  return emit(ctx, report, "generator: " + to_string(d) + "\n" + format_sweep_table(sweep));
}

// --- period -----------------------------------------------------------------

struct PeriodOptions {
  std::string descriptor;
  std::optional<std::uint64_t> brute_cap;
};

int cmd_period(const Context& ctx, const PeriodOptions& opt) {
  const GeneratorDescriptor d = parse_descriptor(opt.descriptor);
  if (d.family != GeneratorFamily::kLcg) throw UsageError("period requires an lcg: descriptor");
  const FullPeriodCheck check = check_full_period(d.lcg);
  std::optional<CycleInfo> cycle;
  if (opt.brute_cap) cycle = find_cycle(d.lcg, *opt.brute_cap);

  const std::vector<TestResult> results = period_results(d.lcg, check, opt.brute_cap, cycle);
  json cfg = {{"command", "period"}};
  cfg["brute_cap"] = opt.brute_cap ? json(*opt.brute_cap) : json(nullptr);
  const json report = make_report(make_manifest(ctx, to_string(d), cfg), results,
                                  period_summary(check, opt.brute_cap, cycle));
  std::string human = "generator: " + to_string(d) + "\n";
  human += std::string("full period (m = ") + to_string(d.lcg.modulus) +
           "): " + (check.full_period() ? "yes" : "no") + "\n";
  human += std::string("  gcd(c, m) = 1: ") + (check.increment_coprime ? "yes" : "no") + "\n";
  human += std::string("  every prime of m divides a - 1: ") +
           (check.multiplier_minus_one_has_all_primes ? "yes" : "no") + "\n";
  human += std::string("  4 | m implies 4 | a - 1: ") +
           (check.multiplier_minus_one_four_condition ? "yes" : "no") + "\n";
  if (opt.brute_cap) {
    if (cycle) {
      human += "brute force: tail " + std::to_string(cycle->tail) + ", period " +
               std::to_string(cycle->period) + "\n";
    } else {
      human += "brute force: exceeds cap " + std::to_string(*opt.brute_cap) + "\n";
    }
  }
  return emit(ctx, report, human);
}

// --- figures ----------------------------------------------------------------

struct FiguresOptions {
  std::string out_dir;
  std::string descriptor = kFigureGenerator;
  std::size_t count = kFigureCount;
};

int cmd_figures(const Context& ctx, const FiguresOptions& opt) {
  const GeneratorDescriptor d = parse_descriptor(opt.descriptor);
  const LcgParams params = require_lcg(d);
  if (opt.count < 3) throw UsageError("figures need at least 3 values");
  std::error_code ec;
  std::filesystem::create_directories(opt.out_dir, ec);
  if (ec) throw IoError("cannot create directory " + opt.out_dir + ": " + ec.message());
  const std::filesystem::path dir(opt.out_dir);

  const Sample sample = generate_sample(d, opt.count);
  const PointCloud pairs = point_cloud(sample.values(), 2);
  const PointCloud triples = point_cloud(sample.values(), 3);
  const PointCloud pairs_out = thin_point_cloud(pairs);
  const PointCloud triples_out = thin_point_cloud(triples);
  write_file_atomic(dir / "fig1_pairs.csv", point_cloud_csv(pairs_out));
  write_file_atomic(dir / "fig1_pairs.svg", point_cloud_svg(pairs_out, "pairs " + to_string(d)));
  write_file_atomic(dir / "fig2_triples.csv", point_cloud_csv(triples_out));

  const ShortestVector nu2 = spectral_accuracy(params, 2);
  const ShortestVector nu3 = spectral_accuracy(params, 3);
  const PlaneCheck planes = check_planes(triples, nu3.vector);
  const json planes_json = to_json(planes, nu3.vector, 1e-9);
  write_file_atomic(dir / "fig2_planes.json", planes_json.dump(2) + "\n");

  TestResult membership;
  membership.name = "plane_membership_d3";
  membership.statistic = static_cast<double>(planes.off_plane);
  membership.p_value = std::numeric_limits<double>::quiet_NaN();
  membership.alpha = std::numeric_limits<double>::quiet_NaN();
  membership.verdict = planes.all_on_planes() ? Verdict::kPass : Verdict::kReject;
  membership.detail = planes_json;
  const std::vector<TestResult> results{membership};

  json summary = {{"tests", 1},
                  {"rejections", planes.all_on_planes() ? 0 : 1},
                  {"errors", 0},
                  {"verdict", planes.all_on_planes() ? "pass" : "reject"},
                  {"nu_squared_d2", bigint_to_json(nu2.norm_squared)},
                  {"nu_squared_d3", bigint_to_json(nu3.norm_squared)},
                  {"files",
                   {(dir / "fig1_pairs.csv").string(), (dir / "fig1_pairs.svg").string(),
                    (dir / "fig2_triples.csv").string(), (dir / "fig2_planes.json").string()}}};
  const json cfg = {{"command", "figures"}, {"out_dir", opt.out_dir}, {"count", opt.count}};
  const json report = make_report(make_manifest(ctx, to_string(d), cfg), results, summary);

  std::string human = "generator: " + to_string(d) + "\n";
  human += "fig1: " + std::to_string(pairs_out.size()) + " pairs, fig2: " +
           std::to_string(triples_out.size()) + " triples in " + opt.out_dir + "\n";
  human += "triples lie on " + std::to_string(planes.plane_count) +
           " parallel planes; off-plane points: " + std::to_string(planes.off_plane) + "\n";
  return emit(ctx, report, human);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Audit pseudorandom number generators: statistical battery, spectral test, "
               "period check and seed-sensitivity sweeps.",
               "rngaudit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  Context ctx{args, out, err, {}};
  app.add_option("--alpha", ctx.global.alpha, "Significance level in (0,1)");
  app.add_option("--json", ctx.global.json_path, "Write the JSON report to this path ('-' for stdout)");
  app.add_flag("--quiet", ctx.global.quiet, "Suppress the human-readable summary");

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Write a sample file");
  generate->add_option("descriptor", gen.descriptor, "Generator descriptor")->required();
  generate->add_option("-n,--count", gen.count, "Number of values")->required();
  generate->add_option("-o,--output", gen.output, "Output path (stdout when omitted)");

  TestOptions test;
  auto* test_cmd = app.add_subcommand("test", "Run the statistical battery");
  test_cmd->add_option("input", test.input, "Sample file or generator descriptor")->required();
  test_cmd->add_option("-n,--count", test.count, "Values to draw when the input is a descriptor");
  test_cmd->add_option("--tests", test.tests, "Comma-separated test names, 'uniformity' or 'all'");
  test_cmd->add_flag("--bonferroni", test.battery.bonferroni, "Divide alpha by the number of tests");
  test_cmd->add_flag("--overlapping", test.overlapping, "Use overlapping tuples");
  test_cmd->add_option("--permutation-k", test.battery.permutation_k, "Tuple length k");
  test_cmd->add_option("--serial-d", test.battery.serial_d, "Cells per axis d");
  test_cmd->add_option("--serial-l", test.battery.serial_l, "Tuple length l");
  test_cmd->add_option("--birthday-n", test.battery.birthday_n, "Points per block n");
  test_cmd->add_option("--birthday-k", test.battery.birthday_k, "Cells k");
  test_cmd->add_option("--levene-groups", test.battery.levene_groups, "Blocks for Levene's test");
  test_cmd->add_option("--bins", test.battery.uniformity_bins, "Bins for the chi-square test");

  SpectralOptions spec;
  auto* spectral = app.add_subcommand("spectral", "Run the spectral test of an LCG");
  spectral->add_option("descriptor", spec.descriptor, "lcg: descriptor")->required();
  spectral->add_option("--dmax", spec.dmax, "Largest dimension (2..8)");
  spectral->add_option("--cloud", spec.cloud, "Emit the 2-D or 3-D point cloud");
  spectral->add_option("-n,--count", spec.count, "Values used for the point cloud");
  spectral->add_option("--cloud-out", spec.cloud_out, "CSV path for the point cloud");
  spectral->add_option("--svg", spec.svg, "SVG path for a 2-D cloud");

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Seed-sensitivity sweep of a toy valuation");
  sweep_cmd->add_option("descriptor", sweep.descriptor, "Generator descriptor")->required();
  sweep_cmd->add_option("--seeds", sweep.seeds, "Seeds, e.g. 1..30 or 3,7,11 (default 1..30)");
  sweep_cmd->add_option("--seed-count", sweep.seed_count, "Use seeds 1..N");
  sweep_cmd->add_option("--paths", sweep.model.paths, "Monte Carlo paths per seed");
  sweep_cmd->add_option("--steps", sweep.model.horizon_steps, "Time steps per path");
  sweep_cmd->add_option("--drift", sweep.model.drift, "Drift per step");
  sweep_cmd->add_option("--volatility", sweep.model.volatility, "Volatility per step");
  sweep_cmd->add_option("--discount", sweep.model.discount_rate, "Discount rate per step");
  sweep_cmd->add_option("--strike", sweep.model.strike_ratio, "Guarantee as a fraction of S0");
  sweep_cmd->add_option("--pair", sweep.pair, "Designated seed pair i,j (0-based indices)");

  PeriodOptions per;
  auto* period = app.add_subcommand("period", "Check the full-period conditions of an LCG");
  period->add_option("descriptor", per.descriptor, "lcg: descriptor")->required();
  period->add_option("--brute-cap", per.brute_cap, "Also measure the period by iteration up to this many steps");

  FiguresOptions fig;
  auto* figures = app.add_subcommand("figures", "Export pair and triple point clouds");
  figures->add_option("--out-dir", fig.out_dir, "Output directory")->required();
  figures->add_option("--generator", fig.descriptor, "lcg: descriptor");
  figures->add_option("-n,--count", fig.count, "Values drawn (default one full period of 2^18)");

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (!(ctx.global.alpha > 0.0 && ctx.global.alpha < 1.0)) {
      throw UsageError("--alpha must lie in (0,1)");
    }
    if (*generate) return cmd_generate(ctx, gen);
    if (*test_cmd) return cmd_test(ctx, test);
    if (*spectral) return cmd_spectral(ctx, spec);
    if (*sweep_cmd) return cmd_sweep(ctx, sweep);
    if (*period) return cmd_period(ctx, per);
    if (*figures) return cmd_figures(ctx, fig);
    return kExitUsage;
  } catch (const IoError& e) {
    err << "rngaudit: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "rngaudit: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::bad_alloc&) {
    err << "rngaudit: out of memory\n";
    return kExitUsage;
  }
}

}  // namespace rngaudit
