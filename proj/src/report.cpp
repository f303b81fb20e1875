#include "rngaudit/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <limits>
#include <sstream>

#include "rngaudit/error.hpp"

namespace rngaudit {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double number_from(const json& j) {
  if (j.is_null()) return kNaN;
  if (!j.is_number()) throw UsageError("expected a number or null");
  return j.get<double>();
}

json int_vector_json(std::span<const BigInt> v) {
  json out = json::array();
  for (const BigInt& x : v) {
    if (x >= 0) {
      out.push_back(bigint_to_json(x));
    } else if (-x <= BigInt(std::numeric_limits<std::int64_t>::max())) {
      out.push_back(static_cast<std::int64_t>(x));
    } else {
      out.push_back(x.str());
    }
  }
  return out;
}

json summarize(std::span<const TestResult> results) {
  std::size_t rejections = 0;
  std::size_t errors = 0;
  for (const TestResult& r : results) {
    if (r.verdict == Verdict::kReject) ++rejections;
    if (r.verdict == Verdict::kError) ++errors;
  }
  return {{"tests", results.size()},
          {"rejections", rejections},
          {"errors", errors},
          {"verdict", rejections > 0 ? "reject" : (errors > 0 ? "error" : "pass")}};
}

std::string format_number(double x, const char* spec) {
  if (std::isnan(x)) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

}  // namespace

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json to_json(const RunManifest& m) {
  return {{"tool_version", m.tool_version},
          {"command_line", m.command_line},
          {"generator", m.generator},
          {"config", m.config},
          {"timestamp", m.timestamp}};
}

RunManifest manifest_from_json(const json& j) {
  RunManifest m;
  m.tool_version = j.at("tool_version").get<std::string>();
  m.command_line = j.at("command_line").get<std::vector<std::string>>();
  m.generator = j.at("generator").get<std::string>();
  m.config = j.at("config");
  m.timestamp = j.at("timestamp").get<std::string>();
  return m;
}

json to_json(const TestResult& r) {
  return {{"name", r.name},
          {"statistic", number_or_null(r.statistic)},
          {"p_value", number_or_null(r.p_value)},
          {"alpha", number_or_null(r.alpha)},
          {"verdict", verdict_name(r.verdict)},
          {"detail", r.detail}};
}

TestResult test_result_from_json(const json& j) {
  TestResult r;
  r.name = j.at("name").get<std::string>();
  r.statistic = number_from(j.at("statistic"));
  r.p_value = number_from(j.at("p_value"));
  r.alpha = number_from(j.at("alpha"));
  r.verdict = verdict_from_name(j.at("verdict").get<std::string>());
  r.detail = j.at("detail");
  return r;
}

json bigint_to_json(const BigInt& value) {
  if (value >= 0 && value <= BigInt(std::numeric_limits<std::uint64_t>::max())) {
    return static_cast<std::uint64_t>(value);
  }
  return value.str();
}

BigInt bigint_from_json(const json& j) {
  if (j.is_number_unsigned()) return BigInt(j.get<std::uint64_t>());
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) return BigInt(j.get<std::string>());
  throw UsageError("expected an integer");
}

json to_json(const BatteryConfig& c) {
  return {{"tests", c.tests},
          {"alpha", c.alpha},
          {"bonferroni", c.bonferroni},
          {"permutation_k", c.permutation_k},
          {"serial_d", c.serial_d},
          {"serial_l", c.serial_l},
          {"birthday_n", c.birthday_n},
          {"birthday_k", c.birthday_k},
          {"tuple_mode", tuple_mode_name(c.tuple_mode)},
          {"levene_groups", c.levene_groups},
          {"uniformity_bins", c.uniformity_bins}};
}

json to_json(const ToyModelConfig& c) {
  return {{"paths", c.paths},
          {"horizon_steps", c.horizon_steps},
          {"drift", c.drift},
          {"volatility", c.volatility},
          {"discount_rate", c.discount_rate},
          {"strike_ratio", c.strike_ratio}};
}

json make_report(const RunManifest& manifest, std::span<const TestResult> results,
                 json summary) {
  json rs = json::array();
  for (const TestResult& r : results) rs.push_back(to_json(r));
  return {{"schema", kReportSchema},
          {"manifest", to_json(manifest)},
          {"results", std::move(rs)},
          {"summary", std::move(summary)}};
}

json battery_summary(const BatteryReport& report) {
  json s = summarize(report.results);
  s["provenance"] = report.provenance;
  return s;
}

std::vector<TestResult> spectral_results(const SpectralReport& report) {
  std::vector<TestResult> out;
  for (const DimensionAccuracy& d : report.dimensions) {
    TestResult r;
    r.name = "spectral_d" + std::to_string(d.dimension);
    r.statistic = d.shortest.norm;
    r.p_value = kNaN;
    r.alpha = kNaN;
    r.verdict = (d.counts_for_verdict && !d.meets_threshold) ? Verdict::kReject : Verdict::kPass;
    r.detail = {{"dimension", d.dimension},
                {"nu_squared", bigint_to_json(d.shortest.norm_squared)},
                {"threshold", d.threshold},
                {"meets_threshold", d.meets_threshold},
                {"counts_for_verdict", d.counts_for_verdict},
                {"shortest_vector", int_vector_json(d.shortest.vector)}};
    out.push_back(std::move(r));
  }
  return out;
}

json spectral_summary(const SpectralReport& report) {
  json s = summarize(spectral_results(report));
  s["accepted"] = report.accepted;
  s["verdict"] = report.accepted ? "pass" : "reject";
  s["modulus"] = to_string(report.params.modulus);
  s["multiplier"] = to_string(report.params.multiplier);
  return s;
}

std::vector<TestResult> sweep_results(const SweepReport& report) {
  std::vector<TestResult> out;
  for (const SeedEstimate& e : report.estimates) {
    TestResult r;
    r.name = "seed_" + std::to_string(e.seed);
    r.statistic = e.result.estimate;
    r.p_value = kNaN;
    r.alpha = kNaN;
    r.verdict = Verdict::kPass;
    r.detail = {{"seed", e.seed},
                {"descriptor", to_string(e.descriptor)},
                {"standard_error", e.result.standard_error},
                {"paths", e.result.paths},
                {"skipped_uniforms", e.result.skipped_uniforms}};
    out.push_back(std::move(r));
  }
  return out;
}

json sweep_summary(const SweepReport& report) {
  json table = json::array();
  for (const auto& row : report.relative_delta) {
    json jr = json::array();
    for (double x : row) jr.push_back(number_or_null(x));
    table.push_back(std::move(jr));
  }
  const auto pair_json = [&](std::pair<std::size_t, std::size_t> p) {
    return json{{"i", p.first},
                {"j", p.second},
                {"seed_i", report.estimates[p.first].seed},
                {"seed_j", report.estimates[p.second].seed},
                {"relative_delta_percent", number_or_null(report.relative_delta[p.first][p.second])}};
  };
  const double ratio = report.pooled_standard_error > 0.0
                           ? report.max_abs_delta / report.pooled_standard_error
                           : (report.max_abs_delta > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  return {{"tests", report.estimates.size()},
          {"rejections", report.seed_effect ? 1 : 0},
          {"errors", 0},
          {"verdict", report.seed_effect ? "reject" : "pass"},
          {"seed_effect", report.seed_effect},
          {"max_abs_relative_delta_percent", report.max_abs_relative_delta},
          {"max_pair", pair_json(report.max_pair)},
          {"designated_pair", pair_json(report.designated_pair)},
          {"max_abs_delta", report.max_abs_delta},
          {"pooled_standard_error", report.pooled_standard_error},
          {"max_delta_over_pooled_se", number_or_null(ratio)},
          {"noise_range_factor", report.noise_range_factor},
          {"noise_level", kSeedEffectLevel},
          {"relative_delta_percent", std::move(table)},
          {"sample_size_note",
           std::to_string(report.estimates.size()) + " seeds x " +
               std::to_string(report.config.paths) +
               " paths; relative deltas carry Monte Carlo noise of order "
               "sqrt(2) * standard_error / estimate"}};
}

std::vector<TestResult> period_results(const LcgParams& params, const FullPeriodCheck& check,
                                       std::optional<std::uint64_t> brute_cap,
                                       const std::optional<CycleInfo>& cycle) {
  std::vector<TestResult> out;
  TestResult predicate;
  predicate.name = "full_period_predicate";
  predicate.statistic = check.full_period() ? 1.0 : 0.0;
  predicate.p_value = kNaN;
  predicate.alpha = kNaN;
  predicate.verdict = check.full_period() ? Verdict::kPass : Verdict::kReject;
  json factors = json::array();
  for (const auto& [p, e] : check.factorization.prime_powers) {
    factors.push_back({{"prime", to_string(p)}, {"exponent", e}});
  }
  predicate.detail = {{"increment_coprime", check.increment_coprime},
                      {"multiplier_minus_one_has_all_primes",
                       check.multiplier_minus_one_has_all_primes},
                      {"multiplier_minus_one_four_condition",
                       check.multiplier_minus_one_four_condition},
                      {"factorization", std::move(factors)},
                      {"unfactored_cofactor", to_string(check.factorization.cofactor)}};
  out.push_back(std::move(predicate));

  if (brute_cap) {
    TestResult brute;
    brute.name = "brute_force_period";
    brute.p_value = kNaN;
    brute.alpha = kNaN;
    brute.detail = {{"cap", *brute_cap}, {"exceeds_cap", !cycle.has_value()}};
    if (cycle) {
      brute.statistic = static_cast<double>(cycle->period);
      brute.detail["period"] = cycle->period;
      brute.detail["tail"] = cycle->tail;
      const bool full = cycle->tail == 0 && uint128(cycle->period) == params.modulus;
      brute.verdict = full ? Verdict::kPass : Verdict::kReject;
      brute.detail["agrees_with_predicate"] = full == check.full_period();
    } else {
      brute.statistic = kNaN;
      brute.verdict = Verdict::kError;
      brute.detail["error"] = "orbit exceeds the brute-force cap";
    }
    out.push_back(std::move(brute));
  }
  return out;
}

json period_summary(const FullPeriodCheck& check, std::optional<std::uint64_t> brute_cap,
                    const std::optional<CycleInfo>& cycle) {
  json s = {{"tests", brute_cap ? 2 : 1},
            {"rejections", check.full_period() ? 0 : 1},
            {"errors", (brute_cap && !cycle) ? 1 : 0},
            {"full_period", check.full_period()}};
  s["verdict"] = check.full_period() ? "pass" : "reject";
  if (cycle) s["period"] = cycle->period;
  return s;
}

json to_json(const PlaneCheck& check, std::span<const BigInt> normal, double slack) {
  return {{"normal", int_vector_json(normal)},
          {"points", check.points},
          {"off_plane", check.off_plane},
          {"offset", check.offset},
          {"max_deviation", check.max_deviation},
          {"plane_count", check.plane_count},
          {"slack", slack},
          {"all_on_planes", check.all_on_planes()}};
}

std::vector<std::string> validate_report(const json& report) {
  std::vector<std::string> problems;
  const auto need = [&](const json& obj, const char* key, bool ok, const char* what) {
    if (!obj.contains(key)) {
      problems.push_back(std::string("missing ") + key);
    } else if (!ok) {
      problems.push_back(std::string(key) + " must be " + what);
    }
  };
  if (!report.is_object()) return {"report must be an object"};
  need(report, "schema", report.contains("schema") && report["schema"] == kReportSchema,
       "\"rngaudit-report/v1\"");
  need(report, "manifest", report.contains("manifest") && report["manifest"].is_object(),
       "an object");
  need(report, "results", report.contains("results") && report["results"].is_array(),
       "an array");
  need(report, "summary", report.contains("summary") && report["summary"].is_object(),
       "an object");
  if (report.contains("manifest") && report["manifest"].is_object()) {
    const json& m = report["manifest"];
    need(m, "tool_version", m.contains("tool_version") && m["tool_version"].is_string(), "a string");
    need(m, "command_line", m.contains("command_line") && m["command_line"].is_array(), "an array");
    need(m, "generator", m.contains("generator") && m["generator"].is_string(), "a string");
    need(m, "config", m.contains("config") && m["config"].is_object(), "an object");
    need(m, "timestamp", m.contains("timestamp") && m["timestamp"].is_string(), "a string");
  }
  if (report.contains("results") && report["results"].is_array()) {
    for (const json& r : report["results"]) {
      if (!r.is_object()) {
        problems.push_back("result must be an object");
        continue;
      }
      const auto num_or_null = [&](const char* k) {
        return r.contains(k) && (r[k].is_number() || r[k].is_null());
      };
      need(r, "name", r.contains("name") && r["name"].is_string(), "a string");
      need(r, "statistic", num_or_null("statistic"), "a number or null");
      need(r, "p_value", num_or_null("p_value"), "a number or null");
      need(r, "alpha", num_or_null("alpha"), "a number or null");
      bool verdict_ok = false;
      if (r.contains("verdict") && r["verdict"].is_string()) {
        const std::string v = r["verdict"];
        verdict_ok = v == "pass" || v == "reject" || v == "error";
      }
      need(r, "verdict", verdict_ok, "pass, reject or error");
      need(r, "detail", r.contains("detail") && r["detail"].is_object(), "an object");
    }
  }
  return problems;
}

std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

std::string format_results(std::span<const TestResult> results) {
  std::ostringstream out;
  for (const TestResult& r : results) {
    char line[256];
    std::snprintf(line, sizeof line, "%-26s statistic=%-14s p=%-12s %s\n", r.name.c_str(),
                  format_number(r.statistic, "%.6g").c_str(),
                  format_number(r.p_value, "%.4g").c_str(),
                  std::string(verdict_name(r.verdict)).c_str());
    out << line;
    if (r.verdict == Verdict::kError && r.detail.contains("error")) {
      out << "    error: " << r.detail["error"].get<std::string>() << "\n";
    }
  }
  return out.str();
}

std::string format_sweep_table(const SweepReport& report) {
  std::ostringstream out;
  char line[256];
  out << "seed        estimate        std. error\n";
  for (const SeedEstimate& e : report.estimates) {
    std::snprintf(line, sizeof line, "%-10llu  %-14.8f  %.8f\n",
                  static_cast<unsigned long long>(e.seed), e.result.estimate,
                  e.result.standard_error);
    out << line;
  }
  const auto rows = [&](const char* label, std::pair<std::size_t, std::size_t> p) {
    const McEstimate& a = report.estimates[p.first].result;
    const McEstimate& b = report.estimates[p.second].result;
    const double se_delta =
        b.standard_error != 0.0 ? 100.0 * (a.standard_error - b.standard_error) / b.standard_error
                                : kNaN;
    std::snprintf(line, sizeof line, "\n%s: seed %llu vs seed %llu\n", label,
                  static_cast<unsigned long long>(report.estimates[p.first].seed),
                  static_cast<unsigned long long>(report.estimates[p.second].seed));
    out << line;
    std::snprintf(line, sizeof line, "  Delta Estimate [%%]        %s\n",
                  format_number(report.relative_delta[p.first][p.second], "%.1f").c_str());
    out << line;
    std::snprintf(line, sizeof line, "  Delta Standard error [%%]  %s\n",
                  format_number(se_delta, "%.1f").c_str());
    out << line;
  };
  rows("designated pair", report.designated_pair);
  rows("largest pair", report.max_pair);
  std::snprintf(line, sizeof line,
                "\nmax |delta| = %.6g, pooled SE = %.6g, noise bound = %.3f x pooled SE\n",
                report.max_abs_delta, report.pooled_standard_error, report.noise_range_factor);
  out << line;
  out << "seed effect beyond Monte Carlo noise: " << (report.seed_effect ? "yes" : "no") << "\n";
  return out.str();
}

}  // namespace rngaudit
