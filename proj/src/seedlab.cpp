#include "rngaudit/seedlab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rngaudit/error.hpp"

namespace rngaudit {

void ToyModelConfig::validate() const {
  if (paths < 1) throw UsageError("paths must be at least 1");
  if (horizon_steps < 1) throw UsageError("horizon_steps must be at least 1");
  if (!(volatility >= 0.0)) throw UsageError("volatility must be non-negative");
  if (!(strike_ratio >= 0.0)) throw UsageError("strike_ratio must be non-negative");
  if (!std::isfinite(drift) || !std::isfinite(discount_rate)) {
    throw UsageError("drift and discount_rate must be finite");
  }
}

GaussianPair uniform_to_gaussian(double u1, double u2) {
  if (!(u1 > 0.0 && u1 <= 1.0)) throw DomainError("Box-Muller needs 0 < u1 <= 1");
  if (!(u2 >= 0.0 && u2 < 1.0)) throw DomainError("Box-Muller needs 0 <= u2 < 1");
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

double GaussianStream::next() {
  if (pending_) {
    const double z = *pending_;
    pending_.reset();
    return z;
  }
  double u1 = generator_.next();
  while (u1 == 0.0) {
    ++skipped_;
    u1 = generator_.next();
  }
  const double u2 = generator_.next();
  const auto [z1, z2] = uniform_to_gaussian(u1, u2);
  pending_ = z2;
  return z1;
}

namespace {

// Runs paths sequentially and snapshots the running estimate whenever the
// path count reaches a checkpoint.
std::vector<McEstimate> simulate(const GeneratorDescriptor& descriptor,
                                 const ToyModelConfig& config,
                                 std::span<const std::size_t> checkpoints) {
  config.validate();
  GaussianStream normals(make_generator(descriptor));
  const double step_drift = config.drift - 0.5 * config.volatility * config.volatility;
  const double discount =
      std::exp(-config.discount_rate * static_cast<double>(config.horizon_steps));

  std::vector<McEstimate> out;
  out.reserve(checkpoints.size());
  std::size_t next_checkpoint = 0;
  long double mean = 0.0L;
  long double m2 = 0.0L;
  const std::size_t total = checkpoints.empty() ? 0 : checkpoints.back();
  for (std::size_t path = 1; path <= total; ++path) {
    double log_value = 0.0;
    for (std::size_t s = 0; s < config.horizon_steps; ++s) {
      log_value += step_drift + config.volatility * normals.next();
    }
    const double payoff = discount * std::max(config.strike_ratio - std::exp(log_value), 0.0);
    const long double delta = payoff - mean;
    mean += delta / static_cast<long double>(path);
    m2 += delta * (payoff - mean);

    while (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] == path) {
      McEstimate e;
      e.paths = path;
      e.estimate = static_cast<double>(mean);
      e.standard_error =
          path > 1 ? std::sqrt(static_cast<double>(m2 / (path - 1)) / static_cast<double>(path))
                   : 0.0;
      e.skipped_uniforms = normals.skipped_uniforms();
      out.push_back(e);
      ++next_checkpoint;
    }
  }
  return out;
}

}  // namespace

McEstimate mc_estimate(const GeneratorDescriptor& descriptor, const ToyModelConfig& config) {
  config.validate();
  const std::size_t checkpoint[] = {config.paths};
  return simulate(descriptor, config, checkpoint).front();
}

std::vector<McEstimate> convergence_report(const GeneratorDescriptor& descriptor,
                                           const ToyModelConfig& config,
                                           std::span<const std::size_t> schedule) {
  if (schedule.empty()) throw UsageError("path schedule is empty");
  if (schedule.front() < 1) throw UsageError("path schedule entries must be at least 1");
  if (!std::is_sorted(schedule.begin(), schedule.end())) {
    throw UsageError("path schedule must be ascending");
  }
  return simulate(descriptor, config, schedule);
}

double normal_range_quantile(std::size_t k, double prob) {
  if (k < 2) return 0.0;
  if (!(prob > 0.0 && prob < 1.0)) throw UsageError("probability must lie in (0,1)");
  const auto phi = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); };
  const auto cdf = [](double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); };
  const double kd = static_cast<double>(k);
  const auto range_cdf = [&](double w) {
    // Simpson's rule on [-9, 9].
    constexpr int kIntervals = 2000;
    constexpr double kLo = -9.0;
    constexpr double kHi = 9.0;
    const double h = (kHi - kLo) / kIntervals;
    double sum = 0.0;
    for (int i = 0; i <= kIntervals; ++i) {
      const double x = kLo + i * h;
      const double f = phi(x) * std::pow(cdf(x + w) - cdf(x), kd - 1.0);
      const double weight = (i == 0 || i == kIntervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      sum += weight * f;
    }
    return kd * sum * h / 3.0;
  };
  double lo = 0.0;
  double hi = 20.0;
  for (int iter = 0; iter < 80; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (range_cdf(mid) < prob) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

SweepReport seed_sweep(const GeneratorDescriptor& descriptor,
                       std::span<const std::uint64_t> seeds, const ToyModelConfig& config,
                       std::optional<std::pair<std::size_t, std::size_t>> designated) {
  if (seeds.size() < 2) throw UsageError("a seed sweep needs at least two seeds");
  config.validate();

  SweepReport report;
  report.base = descriptor;
  report.config = config;
  for (std::uint64_t seed : seeds) {
    SeedEstimate e;
    e.seed = seed;
    e.descriptor = with_seed(descriptor, seed);
    e.result = mc_estimate(e.descriptor, config);
    report.estimates.push_back(std::move(e));
  }

  const std::size_t k = report.estimates.size();
  report.relative_delta.assign(k, std::vector<double>(k, 0.0));
  long double se_squares = 0.0L;
  bool have_max = false;
  for (std::size_t i = 0; i < k; ++i) {
    const double ei = report.estimates[i].result.estimate;
    se_squares += static_cast<long double>(report.estimates[i].result.standard_error) *
                  report.estimates[i].result.standard_error;
    for (std::size_t j = 0; j < k; ++j) {
      const double ej = report.estimates[j].result.estimate;
      report.max_abs_delta = std::max(report.max_abs_delta, std::fabs(ei - ej));
      if (ej == 0.0) {
        report.relative_delta[i][j] =
            ei == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      const double rel = 100.0 * (ei - ej) / ej;
      report.relative_delta[i][j] = rel;
      if (i != j && (!have_max || std::fabs(rel) > report.max_abs_relative_delta)) {
        report.max_abs_relative_delta = std::fabs(rel);
        report.max_pair = {i, j};
        have_max = true;
      }
    }
  }

  report.pooled_standard_error = std::sqrt(static_cast<double>(se_squares / k));
  report.noise_range_factor = normal_range_quantile(k, kSeedEffectLevel);
  report.seed_effect =
      report.max_abs_delta > report.noise_range_factor * report.pooled_standard_error;

  if (designated) {
    if (designated->first >= k || designated->second >= k) {
      throw UsageError("designated seed pair is out of range");
    }
    report.designated_pair = *designated;
  } else {
    report.designated_pair = report.max_pair;
  }
  return report;
}

}  // namespace rngaudit
