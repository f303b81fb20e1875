#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rngaudit/descriptor.hpp"
#include "rngaudit/error.hpp"
#include "rngaudit/sample.hpp"
#include "rngaudit/spectral.hpp"

namespace rngaudit {
namespace {

LcgParams lcg(std::uint64_t m, std::uint64_t a, std::uint64_t c = 0) { return {m, a, c, 1}; }

IntVector ints(std::initializer_list<long> xs) {
  IntVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

TEST(DualBasis, RowsBelongToTheLattice) {
  const IntMatrix b = dual_lattice_basis(4649, 262144, 4);
  ASSERT_EQ(b.size(), 4u);
  EXPECT_EQ(b[0], ints({262144, 0, 0, 0}));
  EXPECT_EQ(b[1], ints({-4649, 1, 0, 0}));
  for (const IntVector& row : b) EXPECT_TRUE(in_dual_lattice(row, 4649, 262144));
  EXPECT_FALSE(in_dual_lattice(ints({1, 1, 0, 0}), 4649, 262144));
}

TEST(Lll, PreservesLatticeAndShortensRows) {
  const IntMatrix b = dual_lattice_basis(4649, 262144, 3);
  const IntMatrix r = lll_reduce(b);
  ASSERT_EQ(r.size(), 3u);
  for (const IntVector& row : r) EXPECT_TRUE(in_dual_lattice(row, 4649, 262144));
  // Determinant magnitude is preserved: |det| = m.
  const auto det3 = [](const IntMatrix& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  BigInt det = det3(r);
  if (det < 0) det = -det;
  EXPECT_EQ(det, BigInt(262144));
  EXPECT_THROW(lll_reduce({ints({1, 2}), ints({2, 4})}), DomainError);
}

TEST(ShortestVector, SmallHandExample) {
  const ShortestVector v = spectral_accuracy(lcg(10, 7), 2);
  EXPECT_EQ(v.norm_squared, 10);
  EXPECT_DOUBLE_EQ(v.norm, std::sqrt(10.0));
  EXPECT_EQ(v.vector, ints({1, -3}));
}

TEST(ShortestVector, FigureGeneratorFrozenValues) {
  const LcgParams p = lcg(262144, 4649, 819);
  EXPECT_EQ(spectral_accuracy(p, 2).norm_squared, 168328);
  EXPECT_EQ(spectral_accuracy(p, 2).vector, ints({298, -282}));
  EXPECT_EQ(spectral_accuracy(p, 3).norm_squared, 1496);
  EXPECT_EQ(spectral_accuracy(p, 3).vector, ints({6, -26, -28}));
  EXPECT_EQ(spectral_accuracy(p, 4).norm_squared, 266);
  EXPECT_EQ(spectral_accuracy(p, 4).vector, ints({5, -13, 6, -6}));
}

TEST(ShortestVector, MatchesExhaustiveSearch) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const std::int64_t m = 2 + static_cast<std::int64_t>(rng() % 4000);
    const std::int64_t a = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(m - 1));
    for (int d = 2; d <= 3; ++d) {
      const auto expected = oracle::exhaustive_shortest_dual(m, a, d);
      const ShortestVector got = spectral_accuracy(lcg(m, a), d);
      ASSERT_EQ(got.norm_squared, expected.norm_squared) << "m=" << m << " a=" << a << " d=" << d;
      IntVector ev;
      for (auto x : expected.vector) ev.emplace_back(x);
      EXPECT_EQ(got.vector, ev) << "m=" << m << " a=" << a << " d=" << d;
    }
  }
}

TEST(ShortestVector, LargeModulusStaysExact) {
  // a = 1: the dual vector (1, -1, 0, ...) has norm sqrt(2).
  const LcgParams p{kTwoPow64, 1, 1, 0};
  EXPECT_EQ(spectral_accuracy(p, 5).norm_squared, 2);
  const LcgParams pcg{kTwoPow64, 6364136223846793005ull, 1442695040888963407ull, 0};
  const ShortestVector v = spectral_accuracy(pcg, 3);
  EXPECT_TRUE(in_dual_lattice(v.vector, pcg.multiplier, pcg.modulus));
  EXPECT_GT(v.norm, 1000.0);
}

TEST(Thresholds, ExponentArithmetic) {
  EXPECT_DOUBLE_EQ(spectral_threshold(2), 32768.0);
  EXPECT_DOUBLE_EQ(spectral_threshold(3), 1024.0);
  EXPECT_NEAR(spectral_threshold(4), 181.01933598375618, 1e-12);
  EXPECT_DOUBLE_EQ(spectral_threshold(5), 64.0);
  EXPECT_DOUBLE_EQ(spectral_threshold(6), 32.0);
}

TEST(Thresholds, SquaredComparisonIsExactAtTheBoundary) {
  // d = 4: nu^2 >= 2^15 = 32768 exactly.
  EXPECT_TRUE(meets_spectral_threshold(32768, 4));
  EXPECT_FALSE(meets_spectral_threshold(32767, 4));
  EXPECT_TRUE(meets_spectral_threshold(BigInt(1) << 30, 2));
  EXPECT_FALSE(meets_spectral_threshold((BigInt(1) << 30) - 1, 2));
  EXPECT_TRUE(meets_spectral_threshold(1024, 6));
  EXPECT_FALSE(meets_spectral_threshold(1023, 6));
}

TEST(SpectralTest, VerdictCoversDimensionsTwoToSix) {
  const SpectralReport r = spectral_test(lcg(262144, 4649, 819), 8);
  ASSERT_EQ(r.dimensions.size(), 7u);
  EXPECT_FALSE(r.accepted);
  EXPECT_TRUE(r.dimensions[4].counts_for_verdict);
  EXPECT_FALSE(r.dimensions[5].counts_for_verdict);
  EXPECT_FALSE(spectral_accept(lcg(262144, 4649, 819)).accepted);
  EXPECT_THROW(spectral_test(lcg(10, 7), 9), UsageError);
  EXPECT_THROW(spectral_test(lcg(10, 7), 1), UsageError);
}

TEST(SpectralTest, DependsOnlyOnMultiplierAndModulus) {
  const SpectralReport a = spectral_test(LcgParams{262144, 4649, 819, 1}, 4);
  const SpectralReport b = spectral_test(LcgParams{262144, 4649, 1, 77}, 4);
  for (std::size_t i = 0; i < a.dimensions.size(); ++i) {
    EXPECT_EQ(a.dimensions[i].shortest.norm_squared, b.dimensions[i].shortest.norm_squared);
  }
}

TEST(PointCloud, SizesCsvAndThinning) {
  const Sample s = generate_sample(parse_descriptor("mt:seed=1"), 100);
  const PointCloud c3 = point_cloud(s.values(), 3);
  EXPECT_EQ(c3.size(), 98u);
  EXPECT_EQ(c3.point(1)[0], s.values()[1]);
  const std::string csv = point_cloud_csv(c3);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 99);
  EXPECT_EQ(csv.substr(0, 9), "x1,x2,x3\n");
  const PointCloud thin = thin_point_cloud(c3, 10);
  EXPECT_LE(thin.size(), 10u);
  EXPECT_EQ(thin.point(0)[0], c3.point(0)[0]);
  EXPECT_THROW(point_cloud(s.values(), 4), UsageError);
}

TEST(PointCloud, SvgIsTwoDimensionalOnly) {
  const Sample s = generate_sample(parse_descriptor("mt:seed=1"), 50);
  const std::string svg = point_cloud_svg(point_cloud(s.values(), 2), "t");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_THROW(point_cloud_svg(point_cloud(s.values(), 3)), UsageError);
}

TEST(PlaneCheck, FigureTriplesLieOnPlanesOfTheShortestVector) {
  const auto d = parse_descriptor("lcg:m=262144,a=4649,c=819,seed=1");
  const Sample s = generate_sample(d, 20000);
  const ShortestVector v = spectral_accuracy(d.lcg, 3);
  const PlaneCheck check = check_planes(point_cloud(s.values(), 3), v.vector);
  EXPECT_TRUE(check.all_on_planes());
  EXPECT_EQ(check.points, 19998u);
  EXPECT_LE(check.plane_count, 61u);  // u.x spans an interval of length 6 + 26 + 28
}

TEST(PlaneCheck, ReferenceTriplesDoNot) {
  const Sample s = generate_sample(parse_descriptor("mt:seed=1"), 2000);
  const PlaneCheck check = check_planes(point_cloud(s.values(), 3), ints({6, -26, -28}));
  EXPECT_FALSE(check.all_on_planes());
  EXPECT_GT(check.off_plane, 1900u);
}

}  // namespace
}  // namespace rngaudit
