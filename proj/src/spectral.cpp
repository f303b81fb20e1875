#include "rngaudit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "rngaudit/error.hpp"

namespace rngaudit {

namespace {

void check_dimension(int d) {
  if (d < kMinSpectralDimension || d > kMaxSpectralDimension) {
    throw UsageError("spectral dimension must lie in [" + std::to_string(kMinSpectralDimension) +
                     ", " + std::to_string(kMaxSpectralDimension) + "], got " +
                     std::to_string(d));
  }
}

BigInt dot(const IntVector& a, const IntVector& b) {
  BigInt s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long double to_long_double(const BigInt& x) { return x.convert_to<long double>(); }

// Integral LLL state (Cohen, "A Course in Computational Algebraic Number
// Theory", Algorithm 2.6.7). Indices are 1-based to match the recurrences.
class IntegralLll {
 public:
  explicit IntegralLll(IntMatrix basis)
      : n_(basis.size()),
        b_(n_ + 1),
        d_(n_ + 1, BigInt(0)),
        lambda_(n_ + 1, IntVector(n_ + 1, BigInt(0))) {
    for (std::size_t i = 0; i < n_; ++i) b_[i + 1] = std::move(basis[i]);
  }

  void run() {
    if (n_ == 0) return;
    d_[0] = 1;
    d_[1] = dot(b_[1], b_[1]);
    if (d_[1] == 0) throw DomainError("lattice basis is rank deficient");
    std::size_t k = 2;
    std::size_t kmax = 1;
    while (k <= n_) {
      if (k > kmax) {
        kmax = k;
        for (std::size_t j = 1; j <= k; ++j) {
          BigInt u = dot(b_[k], b_[j]);
          for (std::size_t i = 1; i < j; ++i) {
            u = (d_[i] * u - lambda_[k][i] * lambda_[j][i]) / d_[i - 1];
          }
          if (j < k) {
            lambda_[k][j] = u;
          } else {
            if (u == 0) throw DomainError("lattice basis is rank deficient");
            d_[k] = u;
          }
        }
      }
      reduce(k, k - 1);
      const BigInt& l = lambda_[k][k - 1];
      if (4 * d_[k] * d_[k - 2] < 3 * d_[k - 1] * d_[k - 1] - 4 * l * l) {
        swap(k, kmax);
        k = std::max<std::size_t>(2, k - 1);
        continue;
      }
      for (std::size_t j = k - 1; j-- > 1;) reduce(k, j);
      ++k;
    }
  }

  IntMatrix basis() const { return {b_.begin() + 1, b_.end()}; }

  // Gram-Schmidt data of the current basis: mu(k, j) = lambda_kj / d_j and
  // |b*_k|^2 = d_k / d_{k-1}; 0-based on the way out.
  long double mu(std::size_t k, std::size_t j) const {
    return to_long_double(lambda_[k + 1][j + 1]) / to_long_double(d_[j + 1]);
  }
  long double gs_norm_squared(std::size_t k) const {
    return to_long_double(d_[k + 1]) / to_long_double(d_[k]);
  }

 private:
  void reduce(std::size_t k, std::size_t l) {
    if (2 * abs(lambda_[k][l]) <= d_[l]) return;
    const BigInt q = floor_div(2 * lambda_[k][l] + d_[l], 2 * d_[l]);
    for (std::size_t c = 0; c < b_[k].size(); ++c) b_[k][c] -= q * b_[l][c];
    lambda_[k][l] -= q * d_[l];
    for (std::size_t i = 1; i < l; ++i) lambda_[k][i] -= q * lambda_[l][i];
  }

  void swap(std::size_t k, std::size_t kmax) {
    std::swap(b_[k], b_[k - 1]);
    for (std::size_t j = 1; j + 2 <= k; ++j) std::swap(lambda_[k][j], lambda_[k - 1][j]);
    const BigInt l = lambda_[k][k - 1];
    const BigInt big_b = (d_[k - 2] * d_[k] + l * l) / d_[k - 1];
    for (std::size_t i = k + 1; i <= kmax; ++i) {
      const BigInt t = lambda_[i][k];
      lambda_[i][k] = (d_[k] * lambda_[i][k - 1] - l * t) / d_[k - 1];
      lambda_[i][k - 1] = (big_b * t + l * lambda_[i][k]) / d_[k];
    }
    d_[k - 1] = big_b;
  }

  std::size_t n_;
  IntMatrix b_;
  IntVector d_;
  IntMatrix lambda_;
};

// Sign-normalized, lexicographic order on equally short vectors.
IntVector normalize_sign(IntVector v) {
  for (const auto& x : v) {
    if (x == 0) continue;
    if (x < 0) {
      for (auto& y : v) y = -y;
    }
    break;
  }
  return v;
}

class Enumerator {
 public:
  Enumerator(const IntMatrix& basis, const IntegralLll& gs)
      : basis_(basis), n_(basis.size()), mu_(n_, std::vector<long double>(n_, 0.0L)),
        bstar_(n_), coeffs_(n_, 0) {
    for (std::size_t k = 0; k < n_; ++k) {
      bstar_[k] = gs.gs_norm_squared(k);
      for (std::size_t j = 0; j < k; ++j) mu_[k][j] = gs.mu(k, j);
    }
    for (const auto& row : basis_) consider(row);
  }

  ShortestVector run() {
    search(n_, 0.0L);
    ShortestVector out;
    out.vector = best_;
    out.norm_squared = best_norm_;
    out.norm = std::sqrt(best_norm_.convert_to<double>());
    return out;
  }

 private:
  void consider(const IntVector& v) {
    const BigInt norm = dot(v, v);
    if (norm == 0) return;
    IntVector canon = normalize_sign(v);
    if (best_.empty() || norm < best_norm_ || (norm == best_norm_ && canon < best_)) {
      best_norm_ = norm;
      best_ = std::move(canon);
      const long double r = to_long_double(best_norm_);
      radius_ = r * (1.0L + 1e-9L) + 1e-9L;
    }
  }

  // Fixes coefficients level-1 down to 0 given those above, pruning on the
  // partial squared length.
  void search(std::size_t level, long double partial) {
    if (level == 0) {
      if (std::all_of(coeffs_.begin(), coeffs_.end(), [](std::int64_t c) { return c == 0; })) {
        return;
      }
      IntVector v(basis_.front().size(), BigInt(0));
      for (std::size_t i = 0; i < n_; ++i) {
        if (coeffs_[i] == 0) continue;
        for (std::size_t c = 0; c < v.size(); ++c) v[c] += coeffs_[i] * basis_[i][c];
      }
      consider(v);
      return;
    }
    const std::size_t i = level - 1;
    long double center = 0.0L;
    for (std::size_t j = i + 1; j < n_; ++j) center -= mu_[j][i] * coeffs_[j];
    const long double budget = radius_ - partial;
    if (budget < 0.0L) return;
    const long double half_width = std::sqrt(budget / bstar_[i]);
    const auto lo = static_cast<std::int64_t>(std::ceil(center - half_width - 1e-9L));
    const auto hi = static_cast<std::int64_t>(std::floor(center + half_width + 1e-9L));
    for (std::int64_t x = lo; x <= hi; ++x) {
      const long double diff = x - center;
      const long double next = partial + diff * diff * bstar_[i];
      if (next > radius_) continue;
      coeffs_[i] = x;
      search(i, next);
    }
    coeffs_[i] = 0;
  }

  const IntMatrix& basis_;
  std::size_t n_;
  std::vector<std::vector<long double>> mu_;
  std::vector<long double> bstar_;
  std::vector<std::int64_t> coeffs_;
  IntVector best_;
  BigInt best_norm_ = 0;
  long double radius_ = std::numeric_limits<long double>::infinity();
};

}  // namespace

IntMatrix dual_lattice_basis(uint128 multiplier, uint128 modulus, int d) {
  check_dimension(d);
  if (modulus < 2) throw UsageError("modulus must be at least 2");
  const auto size = static_cast<std::size_t>(d);
  IntMatrix basis(size, IntVector(size, BigInt(0)));
  basis[0][0] = to_bigint(modulus);
  const BigInt m = to_bigint(modulus);
  BigInt power = to_bigint(multiplier % modulus);
  for (std::size_t row = 1; row < size; ++row) {
    basis[row][0] = -power;
    basis[row][row] = 1;
    power = (power * to_bigint(multiplier % modulus)) % m;
  }
  return basis;
}

IntMatrix dual_lattice_basis(const LcgParams& params, int d) {
  params.validate();
  return dual_lattice_basis(params.multiplier, params.modulus, d);
}

bool in_dual_lattice(std::span<const BigInt> v, uint128 multiplier, uint128 modulus) {
  const BigInt m = to_bigint(modulus);
  const BigInt a = to_bigint(multiplier);
  BigInt power = 1;
  BigInt sum = 0;
  for (const auto& x : v) {
    sum += x * power;
    power = (power * a) % m;
  }
  return sum % m == 0;
}

IntMatrix lll_reduce(IntMatrix basis) {
  IntegralLll lll(std::move(basis));
  lll.run();
  return lll.basis();
}

ShortestVector shortest_vector(const IntMatrix& basis) {
  if (basis.empty()) throw DomainError("empty lattice basis");
  for (const auto& row : basis) {
    if (row.size() != basis.front().size()) throw DomainError("ragged lattice basis");
  }
  if (basis.size() > basis.front().size()) throw DomainError("lattice basis is rank deficient");
  IntegralLll lll(basis);
  lll.run();
  const IntMatrix reduced = lll.basis();
  Enumerator enumerator(reduced, lll);
  return enumerator.run();
}

ShortestVector spectral_accuracy(const LcgParams& params, int d) {
  return shortest_vector(dual_lattice_basis(params, d));
}

double spectral_threshold(int d) { return std::pow(2.0, 30.0 / d); }

bool meets_spectral_threshold(const BigInt& nu_squared, int d) {
  if (d < 1) throw UsageError("dimension must be positive");
  return boost::multiprecision::pow(nu_squared, static_cast<unsigned>(d)) >= (BigInt(1) << 60);
}

SpectralReport spectral_test(const LcgParams& params, int max_dimension) {
  params.validate();
  check_dimension(max_dimension);
  SpectralReport report;
  report.params = params;
  report.accepted = true;
  for (int d = kMinSpectralDimension; d <= max_dimension; ++d) {
    DimensionAccuracy acc;
    acc.dimension = d;
    acc.shortest = spectral_accuracy(params, d);
    acc.threshold = spectral_threshold(d);
    acc.meets_threshold = meets_spectral_threshold(acc.shortest.norm_squared, d);
    acc.counts_for_verdict = d <= kVerdictMaxDimension;
    if (acc.counts_for_verdict && !acc.meets_threshold) report.accepted = false;
    report.dimensions.push_back(std::move(acc));
  }
  return report;
}

SpectralReport spectral_accept(const LcgParams& params) {
  return spectral_test(params, kVerdictMaxDimension);
}

PointCloud point_cloud(std::span<const double> sample, int d) {
  if (d != 2 && d != 3) throw UsageError("point clouds are 2- or 3-dimensional");
  const auto width = static_cast<std::size_t>(d);
  if (sample.size() < width) {
    throw UsageError("sample of length " + std::to_string(sample.size()) +
                     " is shorter than the cloud dimension");
  }
  PointCloud cloud;
  cloud.dimension = d;
  const std::size_t count = sample.size() - width + 1;
  cloud.coords.reserve(count * width);
  for (std::size_t k = 0; k < count; ++k) {
    cloud.coords.insert(cloud.coords.end(), sample.begin() + static_cast<std::ptrdiff_t>(k),
                        sample.begin() + static_cast<std::ptrdiff_t>(k + width));
  }
  return cloud;
}

PointCloud thin_point_cloud(const PointCloud& cloud, std::size_t cap) {
  if (cap == 0) throw UsageError("point cloud cap must be positive");
  if (cloud.size() <= cap) return cloud;
  const std::size_t stride = (cloud.size() + cap - 1) / cap;
  PointCloud out;
  out.dimension = cloud.dimension;
  for (std::size_t i = 0; i < cloud.size(); i += stride) {
    const auto p = cloud.point(i);
    out.coords.insert(out.coords.end(), p.begin(), p.end());
  }
  return out;
}

std::string point_cloud_csv(const PointCloud& cloud) {
  std::string out = cloud.dimension == 3 ? "x1,x2,x3\n" : "x1,x2\n";
  char buf[32];
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    for (std::size_t c = 0; c < p.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", p[c]);
      out += buf;
      out += c + 1 < p.size() ? ',' : '\n';
    }
  }
  return out;
}

std::string point_cloud_svg(const PointCloud& cloud, const std::string& title) {
  if (cloud.dimension != 2) throw UsageError("SVG export supports 2-D clouds only");
  constexpr double kSize = 800.0;
  std::string out =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
      "viewBox=\"0 0 800 800\">\n<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
  if (!title.empty()) out += "<title>" + title + "</title>\n";
  out += "<path fill=\"black\" d=\"";
  char buf[64];
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    // y axis points up, as in a conventional scatter plot.
    std::snprintf(buf, sizeof buf, "M%.1f %.1fh1v1h-1z", p[0] * (kSize - 1.0),
                  (1.0 - p[1]) * (kSize - 1.0));
    out += buf;
  }
  out += "\"/>\n</svg>\n";
  return out;
}

PlaneCheck check_planes(const PointCloud& cloud, std::span<const BigInt> normal, double slack) {
  if (normal.size() != static_cast<std::size_t>(cloud.dimension)) {
    throw UsageError("plane normal has the wrong dimension");
  }
  std::vector<double> u;
  for (const auto& x : normal) u.push_back(x.convert_to<double>());

  PlaneCheck check;
  check.points = cloud.size();
  if (cloud.size() == 0) return check;

  const auto project = [&](std::span<const double> p) {
    long double s = 0.0L;
    for (std::size_t c = 0; c < p.size(); ++c) s += static_cast<long double>(u[c]) * p[c];
    return s;
  };
  const long double first = project(cloud.point(0));
  const long double offset = first - std::floor(first);
  check.offset = static_cast<double>(offset);

  std::set<long long> planes;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const long double shifted = project(cloud.point(i)) - offset;
    const long double nearest = std::nearbyint(shifted);
    const auto deviation = static_cast<double>(std::fabs(shifted - nearest));
    check.max_deviation = std::max(check.max_deviation, deviation);
    if (deviation > slack) ++check.off_plane;
    planes.insert(static_cast<long long>(nearest));
  }
  check.plane_count = planes.size();
  return check;
}

}  // namespace rngaudit
