#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rngaudit/generators.hpp"
#include "rngaudit/int128.hpp"

namespace rngaudit {

using IntVector = std::vector<BigInt>;
using IntMatrix = std::vector<IntVector>;  // one basis vector per row

inline constexpr int kMinSpectralDimension = 2;
inline constexpr int kMaxSpectralDimension = 8;
// The acceptance rule nu_d >= 2^(30/d) is applied for d = 2..6.
inline constexpr int kVerdictMaxDimension = 6;

// Basis of the lattice of integer vectors u with
//   u_1 + u_2 a + ... + u_d a^(d-1) == 0 (mod m),
// rows (m,0,...,0), (-a,1,0,...), (-a^2,0,1,...), ... with powers reduced
// mod m. The multiplier is reduced mod m first.
IntMatrix dual_lattice_basis(uint128 multiplier, uint128 modulus, int d);
IntMatrix dual_lattice_basis(const LcgParams& params, int d);

bool in_dual_lattice(std::span<const BigInt> v, uint128 multiplier, uint128 modulus);

// Exact LLL reduction (delta = 3/4) in all-integer arithmetic. Throws
// DomainError when the rows are linearly dependent.
IntMatrix lll_reduce(IntMatrix basis);

struct ShortestVector {
  IntVector vector;
  BigInt norm_squared;
  double norm = 0.0;
};

// A nonzero lattice vector of minimal Euclidean norm: LLL reduction, then
// enumeration of every coefficient vector inside the radius of the shortest
// reduced row. Candidate norms are recomputed in exact integers, so the
// floating-point pruning only needs to be conservative. Among equally short
// vectors the result is sign-normalized (first nonzero entry positive) and
// lexicographically smallest.
ShortestVector shortest_vector(const IntMatrix& basis);

// nu_d: length of the shortest nonzero dual-lattice vector. Depends only on
// a and m.
ShortestVector spectral_accuracy(const LcgParams& params, int d);

// 2^(30/d).
double spectral_threshold(int d);

// nu_d >= 2^(30/d), decided exactly as (nu_d^2)^d >= 2^60.
bool meets_spectral_threshold(const BigInt& nu_squared, int d);

struct DimensionAccuracy {
  int dimension = 0;
  ShortestVector shortest;
  double threshold = 0.0;
  bool meets_threshold = false;
  bool counts_for_verdict = false;
};

struct SpectralReport {
  LcgParams params;
  std::vector<DimensionAccuracy> dimensions;  // ascending d
  bool accepted = false;
};

// Computes nu_d for d = 2..max_dimension. The verdict accepts iff every
// computed d <= 6 meets its threshold.
SpectralReport spectral_test(const LcgParams& params, int max_dimension = kVerdictMaxDimension);

// spectral_test over d = 2..6.
SpectralReport spectral_accept(const LcgParams& params);

// Overlapping d-tuples (x_k, ..., x_{k+d-1}) of a sample, row-major.
struct PointCloud {
  int dimension = 0;
  std::vector<double> coords;

  std::size_t size() const { return dimension == 0 ? 0 : coords.size() / static_cast<std::size_t>(dimension); }
  std::span<const double> point(std::size_t i) const {
    return std::span<const double>(coords).subspan(i * static_cast<std::size_t>(dimension),
                                                   static_cast<std::size_t>(dimension));
  }
};

inline constexpr std::size_t kPointCloudCap = std::size_t{1} << 20;

// All N - d + 1 overlapping tuples. d must be 2 or 3.
PointCloud point_cloud(std::span<const double> sample, int d);

// Keeps every ceil(size / cap)-th point when the cloud exceeds `cap`.
PointCloud thin_point_cloud(const PointCloud& cloud, std::size_t cap = kPointCloudCap);

// CSV with header x1,x2[,x3].
std::string point_cloud_csv(const PointCloud& cloud);

// 800x800 scatter plot of a 2-D cloud.
std::string point_cloud_svg(const PointCloud& cloud, const std::string& title = {});

// Whether every point satisfies u.x == offset (mod 1) for one common offset,
// i.e. lies on the family of parallel hyperplanes with normal u.
struct PlaneCheck {
  std::size_t points = 0;
  std::size_t off_plane = 0;
  double offset = 0.0;
  double max_deviation = 0.0;
  std::size_t plane_count = 0;

  bool all_on_planes() const { return off_plane == 0; }
};

PlaneCheck check_planes(const PointCloud& cloud, std::span<const BigInt> normal,
                        double slack = 1e-9);

}  // namespace rngaudit
