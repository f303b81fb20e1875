#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "rngaudit/battery.hpp"
#include "rngaudit/descriptor.hpp"
#include "rngaudit/error.hpp"

namespace rngaudit {
namespace {

Sample reference_sample(std::uint32_t seed, std::size_t n) {
  return generate_sample(parse_descriptor("mt:seed=" + std::to_string(seed)), n);
}

Sample footnote_sample(std::size_t n) {
  return generate_sample(parse_descriptor("lcg:m=10,a=7,c=7,seed=7"), n);
}

TEST(RankVector, FootnoteTuple) {
  const std::vector<double> tuple{0.8, 0.1, 0.2, 0.05};
  EXPECT_EQ(rank_vector(tuple), (std::vector<int>{4, 2, 3, 1}));
}

TEST(RankVector, TiesRankEarlierPositionLower) {
  bool tie = false;
  EXPECT_EQ(rank_vector(std::vector<double>{0.5, 0.2, 0.5}, &tie), (std::vector<int>{2, 1, 3}));
  EXPECT_TRUE(tie);
  rank_vector(std::vector<double>{0.1, 0.2}, &tie);
  EXPECT_FALSE(tie);
}

TEST(OrderingIndex, BijectionForSmallK) {
  for (int k = 1; k <= 6; ++k) {
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 1);
    std::set<std::uint64_t> seen;
    do {
      const std::uint64_t index = ordering_index(perm);
      EXPECT_LT(index, factorial(k));
      EXPECT_EQ(ordering_from_index(index, k), perm);
      seen.insert(index);
    } while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_EQ(seen.size(), factorial(k));
  }
  EXPECT_EQ(ordering_index(std::vector<int>{1, 2, 3}), 0u);
  EXPECT_EQ(ordering_index(std::vector<int>{3, 2, 1}), 5u);
}

TEST(Permutation, RejectsFootnoteGeneratorAndPassesReference) {
  EXPECT_LT(permutation_test(footnote_sample(10000).values(), 3).p_value, 1e-10);
  EXPECT_EQ(permutation_test(reference_sample(1, 30000).values(), 3).verdict, Verdict::kPass);
}

TEST(Permutation, TupleCountsByMode) {
  const Sample s = reference_sample(2, 3000);
  EXPECT_EQ(permutation_test(s.values(), 3, TupleMode::kDisjoint).detail["tuples"], 1000);
  EXPECT_EQ(permutation_test(s.values(), 3, TupleMode::kOverlapping).detail["tuples"], 2998);
  EXPECT_THROW(permutation_test(s.values(), 9), UsageError);
  EXPECT_THROW(permutation_test(s.values(), 6), UsageError);  // 500 tuples < 5 * 720
}

TEST(Serial, CellIndex) {
  EXPECT_EQ(serial_cell(std::vector<double>{0.1, 0.6}, 2), 2u);
  EXPECT_EQ(serial_cell(std::vector<double>{0.99, 0.99, 0.99}, 4), 63u);
}

TEST(Serial, ConstantPairsGiveThreeT) {
  std::vector<double> values;
  for (int i = 0; i < 400; ++i) {
    values.push_back(0.1);
    values.push_back(0.6);
  }
  const TestResult r = serial_test(values, 2, 2);
  EXPECT_NEAR(r.statistic, 3.0 * 400, 1e-9);
  EXPECT_EQ(r.detail["tuples"], 400);
}

TEST(Serial, TooManyCellsNamesLargestAdmissibleD) {
  const Sample s = reference_sample(3, 1000);
  try {
    serial_test(s.values(), 16, 2);
    FAIL() << "expected an error";
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("largest admissible d for l=2 is 10"), std::string::npos) << e.what();
  }
}

TEST(Birthday, CollisionCountsForHandBlock) {
  // Cells 1, 2, 3, 5, 5 -> sorted spacings 1, 1, 2, 0: three distinct
  // values among four spacings, and one repeated cell.
  const BirthdayCollisions c = birthday_collisions(std::vector<double>{0.05, 0.01, 0.02, 0.03, 0.055}, 100);
  EXPECT_EQ(c.spacing_collisions, 1u);
  EXPECT_EQ(c.cell_collisions, 1u);
}

TEST(Birthday, LambdaIsTwoForDefaultParameters) {
  EXPECT_DOUBLE_EQ(birthday_lambda(512, std::uint64_t{1} << 24), 2.0);
}

TEST(Birthday, NeedsTwentyBlocks) {
  EXPECT_THROW(birthday_spacings_test(reference_sample(4, 19 * 512).values(), 512, 1 << 24),
               UsageError);
  const TestResult r = birthday_spacings_test(reference_sample(4, 200 * 512).values(), 512, 1 << 24);
  EXPECT_EQ(r.detail["blocks"], 200);
  EXPECT_NE(r.verdict, Verdict::kError);
}

TEST(Uniformity, FootnoteGeneratorRejectedDecisively) {
  const Sample s = footnote_sample(10000);
  for (const TestResult& r : global_uniformity(s.values())) {
    if (r.name == "levene") continue;  // identical blocks: no dispersion difference
    EXPECT_LT(r.p_value, 1e-10) << r.name;
  }
  EXPECT_LT(chi_square_uniform(s.values(), 100).p_value, 1e-10);
}

TEST(Uniformity, SmallSampleIsAUsageError) {
  EXPECT_THROW(global_uniformity(reference_sample(5, 99).values()), UsageError);
}

TEST(Battery, ExpandNames) {
  const std::vector<std::string> in{"serial", "uniformity"};
  const auto out = expand_test_names(in);
  ASSERT_EQ(out.size(), 7u);
  EXPECT_EQ(out[0], "serial");
  EXPECT_EQ(out[1], "t_test_mean");
  EXPECT_THROW(expand_test_names(std::vector<std::string>{"nope"}), UsageError);
}

TEST(Battery, ResultsInConfiguredOrderWithErrorsIsolated) {
  BatteryConfig config;
  config.tests = {"birthday_spacings", "ks_uniform", "serial"};
  const BatteryReport report = run_battery(reference_sample(6, 5000), config);
  ASSERT_EQ(report.results.size(), 3u);
  EXPECT_EQ(report.results[0].name, "birthday_spacings");
  EXPECT_EQ(report.results[0].verdict, Verdict::kError);  // only 9 blocks
  EXPECT_EQ(report.results[1].name, "ks_uniform");
  EXPECT_EQ(report.results[1].verdict, Verdict::kPass);
  EXPECT_EQ(report.errors, 1u);
}

TEST(Battery, BonferroniDividesAlpha) {
  BatteryConfig config;
  config.tests = {"ks_uniform", "t_test_mean"};
  config.bonferroni = true;
  const BatteryReport report = run_battery(reference_sample(7, 1000), config);
  EXPECT_DOUBLE_EQ(report.results[0].alpha, 0.005);
}

TEST(Battery, InvalidAlphaThrows) {
  BatteryConfig config;
  config.alpha = 1.0;
  EXPECT_THROW(run_battery(reference_sample(8, 1000), config), UsageError);
}

TEST(Battery, VerdictConsistentWithAlpha) {
  const BatteryReport report = run_battery(reference_sample(9, 100000), BatteryConfig{});
  for (const TestResult& r : report.results) {
    if (r.verdict == Verdict::kError) continue;
    EXPECT_EQ(r.verdict == Verdict::kReject, r.p_value < r.alpha) << r.name;
    EXPECT_GE(r.p_value, 0.0);
    EXPECT_LE(r.p_value, 1.0);
  }
}

TEST(Battery, PureOverTheSample) {
  const Sample s = reference_sample(10, 20000);
  const BatteryReport a = run_battery(s, BatteryConfig{});
  const BatteryReport b = run_battery(s, BatteryConfig{});
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    EXPECT_EQ(a.results[i].p_value, b.results[i].p_value);
    EXPECT_EQ(a.results[i].statistic, b.results[i].statistic);
  }
}

}  // namespace
}  // namespace rngaudit
