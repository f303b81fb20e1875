#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rngaudit/battery.hpp"
#include "rngaudit/period.hpp"
#include "rngaudit/seedlab.hpp"
#include "rngaudit/spectral.hpp"
#include "rngaudit/stats.hpp"

namespace rngaudit {

inline constexpr std::string_view kReportSchema = "rngaudit-report/v1";
inline constexpr std::string_view kToolVersion = "0.1.0";

// Everything needed to rerun the command that produced a report.
struct RunManifest {
  std::string tool_version = std::string(kToolVersion);
  std::vector<std::string> command_line;
  std::string generator;  // descriptor text, or the sample's provenance
  nlohmann::json config = nlohmann::json::object();
  std::string timestamp;  // UTC, ISO 8601
};

std::string utc_timestamp();

nlohmann::json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& j);

// Non-finite statistics and p-values are written as null and read back as
// NaN.
nlohmann::json to_json(const TestResult& result);
TestResult test_result_from_json(const nlohmann::json& j);

// Cofactors and squared norms as JSON numbers when they fit 64 bits, as
// decimal strings otherwise.
nlohmann::json bigint_to_json(const BigInt& value);
BigInt bigint_from_json(const nlohmann::json& j);

nlohmann::json to_json(const BatteryConfig& config);
nlohmann::json to_json(const ToyModelConfig& config);

// {schema, manifest, results, summary}.
nlohmann::json make_report(const RunManifest& manifest, std::span<const TestResult> results,
                           nlohmann::json summary);

nlohmann::json battery_summary(const BatteryReport& report);

// One entry per dimension: statistic nu_d, no p-value, verdict from the
// threshold (dimensions above 6 are informational and never reject).
std::vector<TestResult> spectral_results(const SpectralReport& report);
nlohmann::json spectral_summary(const SpectralReport& report);

// One entry per seed: statistic is the estimate.
std::vector<TestResult> sweep_results(const SweepReport& report);
nlohmann::json sweep_summary(const SweepReport& report);

std::vector<TestResult> period_results(const LcgParams& params, const FullPeriodCheck& check,
                                       std::optional<std::uint64_t> brute_cap,
                                       const std::optional<CycleInfo>& cycle);
nlohmann::json period_summary(const FullPeriodCheck& check,
                              std::optional<std::uint64_t> brute_cap,
                              const std::optional<CycleInfo>& cycle);

nlohmann::json to_json(const PlaneCheck& check, std::span<const BigInt> normal, double slack);

// Structural check against the v1 layout; returns the problems found.
std::vector<std::string> validate_report(const nlohmann::json& report);

// Serialization used for every report file.
std::string dump_report(const nlohmann::json& report);

// One line per result: name, statistic, p-value, verdict.
std::string format_results(std::span<const TestResult> results);

// Per-seed estimates followed by the delta rows for the designated pair and
// the largest pair.
std::string format_sweep_table(const SweepReport& report);

}  // namespace rngaudit
