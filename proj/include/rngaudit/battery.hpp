#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rngaudit/sample.hpp"
#include "rngaudit/stats.hpp"

namespace rngaudit {

enum class TupleMode { kDisjoint, kOverlapping };

std::string_view tuple_mode_name(TupleMode mode);

// Names accepted in BatteryConfig::tests. "uniformity" expands to the six
// global uniformity checks.
inline constexpr std::string_view kUniformityTests[] = {
    "t_test_mean", "variance", "levene", "ks_uniform", "chi_square_uniform",
    "anderson_darling_uniform"};
inline constexpr std::string_view kAllBatteryTests[] = {
    "t_test_mean",        "variance",    "levene", "ks_uniform",
    "chi_square_uniform", "anderson_darling_uniform", "permutation", "serial",
    "birthday_spacings"};

struct BatteryConfig {
  std::vector<std::string> tests{std::begin(kAllBatteryTests), std::end(kAllBatteryTests)};
  double alpha = kDefaultAlpha;
  // Divide alpha by the number of tests (Bonferroni). Off by default: every
  // test is judged on its own.
  bool bonferroni = false;
  int permutation_k = 3;
  int serial_d = 8;
  int serial_l = 2;
  std::size_t birthday_n = 512;
  std::uint64_t birthday_k = std::uint64_t{1} << 24;
  TupleMode tuple_mode = TupleMode::kDisjoint;
  int levene_groups = kDefaultLeveneGroups;
  int uniformity_bins = 100;
};

// Replaces "uniformity" by its components and rejects unknown names with a
// UsageError. Order is preserved.
std::vector<std::string> expand_test_names(std::span<const std::string> names);

struct BatteryReport {
  std::string provenance;
  BatteryConfig config;
  std::vector<TestResult> results;
  std::size_t rejections = 0;
  std::size_t errors = 0;
};

inline constexpr std::size_t kMinUniformitySample = 100;

// Chi-square goodness of fit of the values against `bins` equal cells.
TestResult chi_square_uniform(std::span<const double> sample, int bins,
                              double alpha = kDefaultAlpha);

// The six global checks: mean against 1/2 (t-test), variance against 1/12,
// Levene across contiguous blocks, KS, 100-bin chi-square and
// Anderson-Darling. A check that cannot run yields an error entry. Throws
// UsageError for samples below kMinUniformitySample values.
std::vector<TestResult> global_uniformity(std::span<const double> sample,
                                          double alpha = kDefaultAlpha,
                                          int levene_groups = kDefaultLeveneGroups,
                                          int bins = 100);

// Relative ordering of a tuple as ranks 1..k; the smallest entry gets 1.
// Equal entries are ordered by position (earlier ranks lower). When
// `has_tie` is non-null it reports whether any two entries were equal.
std::vector<int> rank_vector(std::span<const double> tuple, bool* has_tie = nullptr);

// Lehmer-code index of a rank vector, a bijection onto 0..k!-1.
std::uint64_t ordering_index(std::span<const int> ranks);

// Inverse of ordering_index.
std::vector<int> ordering_from_index(std::uint64_t index, int k);

std::uint64_t factorial(int k);

// Chi-square test that all k! relative orderings of k-tuples are equally
// likely. Requires 2 <= k <= 8 and at least 5 tuples per ordering.
TestResult permutation_test(std::span<const double> sample, int k,
                            TupleMode mode = TupleMode::kDisjoint,
                            double alpha = kDefaultAlpha);

// Cell of an l-tuple in the d^l grid: sum floor(x_p * d) * d^p.
std::uint64_t serial_cell(std::span<const double> tuple, int d);

// Chi-square test of l-tuples over d^l equal subcubes (lambda = T / d^l).
// Requires T / d^l >= 5; the error names the largest admissible d.
TestResult serial_test(std::span<const double> sample, int d, int l,
                       TupleMode mode = TupleMode::kDisjoint, double alpha = kDefaultAlpha);

struct BirthdayCollisions {
  std::uint64_t spacing_collisions = 0;  // (n - 1) - distinct spacing values
  std::uint64_t cell_collisions = 0;     // n - distinct cells
};

// Collisions for one block of n values dropped into k cells.
BirthdayCollisions birthday_collisions(std::span<const double> block, std::uint64_t k);

// Mean of the spacing-collision count, n^3 / (4k).
double birthday_lambda(std::size_t n, std::uint64_t k);

// Chi-square test of per-block spacing collisions against
// Poisson(n^3 / (4k)), using floor(N / n) disjoint blocks; tail bins are
// merged until every expected count is at least 5. Needs 20 or more blocks.
TestResult birthday_spacings_test(std::span<const double> sample, std::size_t n,
                                  std::uint64_t k, double alpha = kDefaultAlpha);

// Runs every configured test. Failures of individual tests become error
// entries; the remaining tests still run. Throws UsageError only for an
// invalid configuration (unknown test name, alpha outside (0,1)).
BatteryReport run_battery(const Sample& sample, const BatteryConfig& config);

}  // namespace rngaudit
