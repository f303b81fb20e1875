#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace rngaudit {

inline constexpr double kDefaultAlpha = 0.01;

enum class Verdict { kPass, kReject, kError };

std::string_view verdict_name(Verdict verdict);
Verdict verdict_from_name(std::string_view name);

// Outcome of one statistical test. verdict == kReject exactly when
// p_value < alpha; kError marks a test that could not run (statistic and
// p-value are NaN and detail["error"] holds the reason).
struct TestResult {
  std::string name;
  double statistic = 0.0;
  double p_value = 1.0;
  double alpha = kDefaultAlpha;
  Verdict verdict = Verdict::kPass;
  nlohmann::json detail = nlohmann::json::object();
};

// Clamps p into [0,1] and derives the verdict from alpha.
TestResult make_result(std::string name, double statistic, double p_value, double alpha,
                       nlohmann::json detail = nlohmann::json::object());

TestResult error_result(std::string name, double alpha, std::string_view message);

// Observed counts Y_j against expected counts E_j for a chi-square test.
struct BinnedCounts {
  std::vector<std::uint64_t> counts;
  std::vector<double> expected;
  int degrees_of_freedom = 0;
};

// P(chi^2_df > x), via the regularized upper incomplete gamma Q(df/2, x/2).
// Throws DomainError for x < 0 or df <= 0.
double chi_square_sf(double x, double df);

// Pearson statistic sum (Y_j - E_j)^2 / E_j with p = chi_square_sf(stat, df).
// Throws DomainError if any expected count is not positive, if the lengths
// differ or are below 2, or if the totals disagree by more than 1e-6
// relative. Expected counts below 5 are reported under detail["warnings"].
TestResult chi_square_gof(const BinnedCounts& binned, std::string name = "chi_square_gof",
                          double alpha = kDefaultAlpha);

// Asymptotic Kolmogorov survival function Q(t) = P(sqrt(n) D > t).
double kolmogorov_sf(double t);

// D = sup |F_n(x) - x|. The p-value uses kolmogorov_sf(sqrt(n) * D) and is
// approximate for n < 35.
TestResult ks_test_uniform(std::span<const double> sample, double alpha = kDefaultAlpha);

// Values are clamped into [eps, 1-eps] before taking logarithms.
inline constexpr double kAndersonDarlingClamp = 1e-12;

double anderson_darling_statistic(std::span<const double> sample);

// P(A^2 < z) for a sample of size n from a fully specified distribution,
// following Marsaglia & Marsaglia, "Evaluating the Anderson-Darling
// Distribution", J. Stat. Software 9(2), 2004: the asymptotic ADinf
// approximation plus their finite-n error correction.
double anderson_darling_cdf(std::size_t n, double z);

// P(A^2 >= z), computed without cancellation. Beyond z = 8, where the
// polynomial fit above degrades, the asymptotic tail sqrt(3) erfc(sqrt(z))
// of the limit law is used.
inline constexpr double kAndersonDarlingTailStart = 8.0;
double anderson_darling_sf(std::size_t n, double z);

TestResult anderson_darling_uniform(std::span<const double> sample,
                                    double alpha = kDefaultAlpha);

// Two-sided one-sample Student t-test of the mean against mu0.
// Throws DomainError for n < 2 or zero variance. detail carries the
// empirical mean and variance.
TestResult t_test_mean(std::span<const double> sample, double mu0 = 0.5,
                       double alpha = kDefaultAlpha);

// Two-sided chi-square test of the sample variance against sigma2:
// (n-1) s^2 / sigma2 ~ chi^2_{n-1}.
TestResult variance_test(std::span<const double> sample, double sigma2 = 1.0 / 12.0,
                         double alpha = kDefaultAlpha);

inline constexpr int kDefaultLeveneGroups = 10;

// Levene's W on absolute deviations from group means. The sequence is cut
// into `groups` contiguous blocks of floor(n / groups) values; the remainder
// tail is discarded. p from F(groups - 1, N - groups).
TestResult levene_test(std::span<const double> sample, int groups = kDefaultLeveneGroups,
                       double alpha = kDefaultAlpha);

double poisson_pmf(std::uint64_t y, double lambda);

struct MeanVariance {
  double mean = 0.0;
  double variance = 0.0;  // unbiased, n - 1 denominator
};

MeanVariance mean_variance(std::span<const double> values);

}  // namespace rngaudit
