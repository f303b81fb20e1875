#include "rngaudit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "rngaudit/error.hpp"

namespace rngaudit {

using nlohmann::json;

std::string_view verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::kPass:
      return "pass";
    case Verdict::kReject:
      return "reject";
    case Verdict::kError:
      return "error";
  }
  return "error";
}

Verdict verdict_from_name(std::string_view name) {
  if (name == "pass") return Verdict::kPass;
  if (name == "reject") return Verdict::kReject;
  if (name == "error") return Verdict::kError;
  throw UsageError("unknown verdict '" + std::string(name) + "'");
}

TestResult make_result(std::string name, double statistic, double p_value, double alpha,
                       json detail) {
  TestResult r;
  r.name = std::move(name);
  r.statistic = statistic;
  r.p_value = std::isnan(p_value) ? 1.0 : std::clamp(p_value, 0.0, 1.0);
  r.alpha = alpha;
  r.verdict = r.p_value < alpha ? Verdict::kReject : Verdict::kPass;
  r.detail = detail.is_null() ? json::object() : std::move(detail);
  return r;
}

TestResult error_result(std::string name, double alpha, std::string_view message) {
  TestResult r;
  r.name = std::move(name);
  r.statistic = std::numeric_limits<double>::quiet_NaN();
  r.p_value = std::numeric_limits<double>::quiet_NaN();
  r.alpha = alpha;
  r.verdict = Verdict::kError;
  r.detail = json{{"error", std::string(message)}};
  return r;
}

MeanVariance mean_variance(std::span<const double> values) {
  if (values.empty()) return {};
  long double sum = 0.0L;
  for (double v : values) sum += v;
  const long double mean = sum / static_cast<long double>(values.size());
  long double ss = 0.0L;
  for (double v : values) ss += (v - mean) * (v - mean);
  const long double var =
      values.size() > 1 ? ss / static_cast<long double>(values.size() - 1) : 0.0L;
  return {static_cast<double>(mean), static_cast<double>(var)};
}

double chi_square_sf(double x, double df) {
  if (!(df > 0.0)) throw DomainError("chi-square degrees of freedom must be positive");
  if (!(x >= 0.0)) throw DomainError("chi-square argument must be non-negative");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(df / 2.0, x / 2.0);
}

TestResult chi_square_gof(const BinnedCounts& binned, std::string name, double alpha) {
  const auto& counts = binned.counts;
  const auto& expected = binned.expected;
  if (counts.size() != expected.size()) {
    throw DomainError("chi-square: counts and expected have different lengths");
  }
  if (counts.size() < 2) throw DomainError("chi-square: at least two bins are required");
  if (binned.degrees_of_freedom < 1) throw DomainError("chi-square: degrees of freedom < 1");

  long double observed_total = 0.0L;
  long double expected_total = 0.0L;
  double min_expected = std::numeric_limits<double>::infinity();
  long double statistic = 0.0L;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    const double e = expected[j];
    if (!(e > 0.0)) throw DomainError("chi-square: expected count must be positive");
    min_expected = std::min(min_expected, e);
    observed_total += counts[j];
    expected_total += e;
    const long double diff = static_cast<long double>(counts[j]) - e;
    statistic += diff * diff / e;
  }
  if (std::fabs(static_cast<double>(observed_total - expected_total)) >
      1e-6 * static_cast<double>(std::max(observed_total, expected_total))) {
    throw DomainError("chi-square: observed and expected totals disagree");
  }

  json detail{{"bins", counts.size()},
              {"degrees_of_freedom", binned.degrees_of_freedom},
              {"min_expected", min_expected}};
  if (min_expected < 5.0) {
    detail["warnings"] = json::array({"expected count below 5 in at least one bin"});
  }
  const auto stat = static_cast<double>(statistic);
  return make_result(std::move(name), stat, chi_square_sf(stat, binned.degrees_of_freedom),
                     alpha, std::move(detail));
}

double kolmogorov_sf(double t) {
  if (!(t > 0.0)) return 1.0;
  if (t < 1.18) {
    // Jacobi theta form of the CDF converges quickly for small t.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double w = std::sqrt(2.0 * std::numbers::pi) / t;
    double cdf = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * pi2 / (8.0 * t * t));
      cdf += term;
      if (term < 1e-300) break;
    }
    return std::clamp(1.0 - w * cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult ks_test_uniform(std::span<const double> sample, double alpha) {
  if (sample.empty()) throw UsageError("KS test: empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto rank = static_cast<double>(i + 1);
    d = std::max({d, rank / n - sorted[i], sorted[i] - (rank - 1.0) / n});
  }
  json detail{{"n", sorted.size()}};
  if (sorted.size() < 35) detail["note"] = "asymptotic p-value, approximate for n < 35";
  return make_result("ks_uniform", d, kolmogorov_sf(std::sqrt(n) * d), alpha,
                     std::move(detail));
}

double anderson_darling_statistic(std::span<const double> sample) {
  if (sample.empty()) throw UsageError("Anderson-Darling: empty sample");
  std::vector<double> x(sample.begin(), sample.end());
  for (double& v : x) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("Anderson-Darling: value outside [0,1]");
    v = std::clamp(v, kAndersonDarlingClamp, 1.0 - kAndersonDarlingClamp);
  }
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  long double sum = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const auto weight = static_cast<long double>(2 * i + 1);
    sum += weight * (std::log(static_cast<long double>(x[i])) +
                     std::log1p(-static_cast<long double>(x[n - 1 - i])));
  }
  return static_cast<double>(-static_cast<long double>(n) - sum / static_cast<long double>(n));
}

namespace {

double adinf(double z) {
  if (z < 2.0) {
    return std::exp(-1.2337141 / z) / std::sqrt(z) *
           (2.00012 +
            (.247105 - (.0649821 - (.0347962 - (.011672 - .00168691 * z) * z) * z) * z) * z);
  }
  return std::exp(
      -std::exp(1.0776 - (2.30695 - (.43424 - (.082433 - (.008056 - .0003146 * z) * z) * z) * z) *
                             z));
}

double ad_errfix(double n, double x) {
  if (x > 0.8) {
    return (-130.2137 +
            (745.2337 - (1705.091 - (1950.646 - (1116.360 - 255.7844 * x) * x) * x) * x) * x) /
           n;
  }
  const double c = 0.01265 + 0.1757 / n;
  if (x < c) {
    double t = x / c;
    t = std::sqrt(t) * (1.0 - t) * (49.0 * t - 102.0);
    return t * (0.0037 / (n * n) + 0.00078 / n + 0.00006) / n;
  }
  double y = (x - c) / (0.8 - c);
  y = -0.00022633 + (6.54034 - (14.6538 - (14.458 - (8.259 - 1.91864 * y) * y) * y) * y) * y;
  return y * (0.04213 / n + 0.01365 / (n * n));
}

}  // namespace

double anderson_darling_cdf(std::size_t n, double z) {
  if (n == 0) throw UsageError("Anderson-Darling: n must be positive");
  if (!(z > 0.0)) return 0.0;
  if (std::isinf(z)) return 1.0;
  const double x = adinf(z);
  return std::clamp(x + ad_errfix(static_cast<double>(n), x), 0.0, 1.0);
}

double anderson_darling_sf(std::size_t n, double z) {
  if (n == 0) throw UsageError("Anderson-Darling: n must be positive");
  if (!(z > 0.0)) return 1.0;
  if (z < 2.0) return 1.0 - anderson_darling_cdf(n, z);
  if (z < kAndersonDarlingTailStart) {
    const double e =
        1.0776 - (2.30695 - (.43424 - (.082433 - (.008056 - .0003146 * z) * z) * z) * z) * z;
    const double x = std::exp(-std::exp(e));
    return std::clamp(-std::expm1(-std::exp(e)) - ad_errfix(static_cast<double>(n), x), 0.0, 1.0);
  }
  // The limit law is sum_j chi^2_1 / (j (j + 1)); its largest weight 1/2
  // dominates the tail and the other factors multiply to sqrt(3).
  return std::sqrt(3.0) * std::erfc(std::sqrt(z));
}

TestResult anderson_darling_uniform(std::span<const double> sample, double alpha) {
  const double a2 = anderson_darling_statistic(sample);
  return make_result("anderson_darling_uniform", a2,
                     anderson_darling_sf(sample.size(), a2), alpha,
                     json{{"n", sample.size()}, {"clamp_epsilon", kAndersonDarlingClamp}});
}

TestResult t_test_mean(std::span<const double> sample, double mu0, double alpha) {
  if (sample.size() < 2) throw UsageError("t-test: need at least 2 values");
  const auto [mean, variance] = mean_variance(sample);
  if (!(variance > 0.0)) throw DomainError("t-test: sample variance is zero");
  const auto n = static_cast<double>(sample.size());
  const double t = (mean - mu0) / std::sqrt(variance / n);
  const boost::math::students_t_distribution<double> dist(n - 1.0);
  const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
  return make_result("t_test_mean", t, p, alpha,
                     json{{"n", sample.size()},
                          {"mu0", mu0},
                          {"empirical_mean", mean},
                          {"empirical_variance", variance}});
}

TestResult variance_test(std::span<const double> sample, double sigma2, double alpha) {
  if (sample.size() < 2) throw UsageError("variance test: need at least 2 values");
  if (!(sigma2 > 0.0)) throw UsageError("variance test: reference variance must be positive");
  const auto [mean, variance] = mean_variance(sample);
  const double df = static_cast<double>(sample.size() - 1);
  const double stat = df * variance / sigma2;
  const double lower = boost::math::gamma_p(df / 2.0, stat / 2.0);
  const double upper = chi_square_sf(stat, df);
  return make_result("variance", stat, 2.0 * std::min(lower, upper), alpha,
                     json{{"n", sample.size()},
                          {"sigma2", sigma2},
                          {"empirical_mean", mean},
                          {"empirical_variance", variance}});
}

TestResult levene_test(std::span<const double> sample, int groups, double alpha) {
  if (groups < 2) throw UsageError("Levene: need at least 2 groups");
  const std::size_t g = static_cast<std::size_t>(groups);
  const std::size_t size = sample.size() / g;
  if (size < 2) throw UsageError("Levene: group too small (need n >= 2 * groups)");
  const std::size_t total = size * g;

  std::vector<double> z(total);
  std::vector<long double> z_mean(g, 0.0L);
  for (std::size_t k = 0; k < g; ++k) {
    const auto block = sample.subspan(k * size, size);
    const double mean = mean_variance(block).mean;
    for (std::size_t i = 0; i < size; ++i) {
      z[k * size + i] = std::fabs(block[i] - mean);
      z_mean[k] += z[k * size + i];
    }
    z_mean[k] /= static_cast<long double>(size);
  }
  long double grand = 0.0L;
  for (auto m : z_mean) grand += m;
  grand /= static_cast<long double>(g);

  long double between = 0.0L;
  long double within = 0.0L;
  for (std::size_t k = 0; k < g; ++k) {
    between += static_cast<long double>(size) * (z_mean[k] - grand) * (z_mean[k] - grand);
    for (std::size_t i = 0; i < size; ++i) {
      const long double d = z[k * size + i] - z_mean[k];
      within += d * d;
    }
  }

  const double df1 = static_cast<double>(g - 1);
  const double df2 = static_cast<double>(total - g);
  json detail{{"groups", groups},
              {"group_size", size},
              {"discarded_tail", sample.size() - total}};
  double w = 0.0;
  double p = 1.0;
  if (within > 0.0L) {
    w = static_cast<double>((between / df1) / (within / df2));
    const boost::math::fisher_f_distribution<double> dist(df1, df2);
    p = boost::math::cdf(boost::math::complement(dist, w));
  } else if (between > 0.0L) {
    w = std::numeric_limits<double>::infinity();
    p = 0.0;
  }
  return make_result("levene", w, p, alpha, std::move(detail));
}

double poisson_pmf(std::uint64_t y, double lambda) {
  if (!(lambda > 0.0)) throw UsageError("Poisson mean must be positive");
  const auto yd = static_cast<double>(y);
  return std::exp(yd * std::log(lambda) - lambda - std::lgamma(yd + 1.0));
}

}  // namespace rngaudit
