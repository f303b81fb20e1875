#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rngaudit/descriptor.hpp"

namespace rngaudit {

// Single-asset guarantee valued by Monte Carlo. Per step the log value moves
// by (drift - volatility^2 / 2) + volatility * Z; the liability is
// exp(-discount_rate * horizon_steps) * max(strike_ratio - S_T, 0) with
// S_0 = 1.
struct ToyModelConfig {
  std::size_t paths = 1000;
  std::size_t horizon_steps = 10;
  double drift = 0.02;
  double volatility = 0.15;
  double discount_rate = 0.02;
  double strike_ratio = 1.0;

  // Throws UsageError unless paths >= 1, horizon_steps >= 1,
  // volatility >= 0 and strike_ratio >= 0.
  void validate() const;
};

struct GaussianPair {
  double z1;
  double z2;
};

// Box-Muller: r = sqrt(-2 ln u1), (r cos 2 pi u2, r sin 2 pi u2).
// Throws DomainError unless 0 < u1 <= 1 and 0 <= u2 < 1.
GaussianPair uniform_to_gaussian(double u1, double u2);

// Standard normals drawn pairwise from a uniform stream. A u1 equal to 0 is
// discarded and replaced by the next uniform; discards are counted.
class GaussianStream {
 public:
  explicit GaussianStream(Generator generator) : generator_(std::move(generator)) {}

  double next();
  std::uint64_t skipped_uniforms() const { return skipped_; }

 private:
  Generator generator_;
  std::optional<double> pending_;
  std::uint64_t skipped_ = 0;
};

struct McEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::size_t paths = 0;
  std::uint64_t skipped_uniforms = 0;
};

McEstimate mc_estimate(const GeneratorDescriptor& descriptor, const ToyModelConfig& config);

// Estimates after the first paths[i] paths of one stream, so a schedule
// nests. The schedule must be non-decreasing and start at >= 1.
std::vector<McEstimate> convergence_report(const GeneratorDescriptor& descriptor,
                                           const ToyModelConfig& config,
                                           std::span<const std::size_t> schedule);

struct SeedEstimate {
  std::uint64_t seed = 0;
  GeneratorDescriptor descriptor;
  McEstimate result;
};

// Quantile of the range of k independent standard normals,
// P(max - min <= w) = prob.
double normal_range_quantile(std::size_t k, double prob);

inline constexpr double kSeedEffectLevel = 0.99;

struct SweepReport {
  GeneratorDescriptor base;
  ToyModelConfig config;
  std::vector<SeedEstimate> estimates;
  // relative_delta[i][j] = (estimate_i - estimate_j) / estimate_j in percent;
  // NaN where estimate_j is 0.
  std::vector<std::vector<double>> relative_delta;
  double max_abs_relative_delta = 0.0;  // percent
  std::pair<std::size_t, std::size_t> max_pair{0, 0};
  std::pair<std::size_t, std::size_t> designated_pair{0, 0};
  double max_abs_delta = 0.0;
  double pooled_standard_error = 0.0;
  // Range of k equally precise estimates exceeds this many pooled standard
  // errors with probability 1 - kSeedEffectLevel under pure Monte Carlo noise.
  double noise_range_factor = 0.0;
  bool seed_effect = false;
};

// Runs mc_estimate for every seed (via with_seed) and compares the results.
// `designated` selects the Table-style pair (defaults to the pair with the
// largest relative delta). Needs at least two seeds.
SweepReport seed_sweep(const GeneratorDescriptor& descriptor,
                       std::span<const std::uint64_t> seeds, const ToyModelConfig& config,
                       std::optional<std::pair<std::size_t, std::size_t>> designated = std::nullopt);

}  // namespace rngaudit
