#pragma once

// Independent reference computations used only by the tests. None of them
// shares code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracle {

// Regularized lower incomplete gamma by its power series,
// P(s, x) = x^s e^-x sum_k x^k / Gamma(s + k + 1).
inline double lower_gamma_series(double s, double x) {
  if (x <= 0.0) return 0.0;
  long double term = 1.0L / std::tgamma(static_cast<long double>(s) + 1.0L);
  long double sum = term;
  for (int k = 1; k < 100000; ++k) {
    term *= x / (s + k);
    sum += term;
    if (term < sum * 1e-19L) break;
  }
  return static_cast<double>(sum * std::pow(static_cast<long double>(x), s) * std::exp(-static_cast<long double>(x)));
}

inline double chi_square_sf(double x, double df) { return 1.0 - lower_gamma_series(df / 2.0, x / 2.0); }

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// E[exp(-r T) max(K - S_T, 0)] for log S_T ~ N(T (mu - s^2/2), T s^2),
// S_0 = 1.
inline double toy_put(double mu, double sigma, double r, double strike, int steps) {
  const double t = steps;
  const double discount = std::exp(-r * t);
  if (sigma == 0.0) return discount * std::max(strike - std::exp(mu * t), 0.0);
  const double sd = sigma * std::sqrt(t);
  const double d2 = (std::log(1.0 / strike) + (mu - 0.5 * sigma * sigma) * t) / sd;
  const double d1 = d2 + sd;
  return discount * (strike * normal_cdf(-d2) - std::exp(mu * t) * normal_cdf(-d1));
}

// Least period of Y -> (aY + c) mod m from y0 by marking visited states.
inline std::uint64_t lcg_cycle_length(std::uint64_t m, std::uint64_t a, std::uint64_t c,
                                      std::uint64_t y0) {
  std::vector<std::int64_t> seen(m, -1);
  std::uint64_t y = y0;
  for (std::int64_t step = 0;; ++step) {
    if (seen[y] >= 0) return static_cast<std::uint64_t>(step - seen[y]);
    seen[y] = step;
    y = (a * y + c) % m;
  }
}

struct ShortVector {
  std::int64_t norm_squared = 0;
  std::vector<std::int64_t> vector;
};

// Shortest nonzero u with u_1 + u_2 a + ... + u_d a^(d-1) == 0 (mod m), by
// trying every (u_2..u_d) in a box wide enough to contain it and the two
// smallest admissible u_1 for each. Ties: first nonzero entry positive, then
// lexicographically smallest.
inline ShortVector exhaustive_shortest_dual(std::int64_t m, std::int64_t a, int d) {
  // Box half-width from Minkowski's bound nu <= sqrt(d) m^(1/d), rounded up.
  const auto radius = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(d)) *
                                                          std::pow(static_cast<double>(m), 1.0 / d))) + 1;
  std::vector<std::int64_t> powers(d);
  powers[0] = 1;
  for (int i = 1; i < d; ++i) powers[i] = (powers[i - 1] * (a % m)) % m;

  ShortVector best;
  best.norm_squared = m * m;
  best.vector.assign(d, 0);
  best.vector[0] = m;
  const auto better = [](const std::vector<std::int64_t>& u, std::int64_t n2, const ShortVector& b) {
    if (n2 != b.norm_squared) return n2 < b.norm_squared;
    return u < b.vector;
  };
  const auto normalize = [](std::vector<std::int64_t>& u) {
    for (std::int64_t x : u) {
      if (x == 0) continue;
      if (x < 0) for (auto& y : u) y = -y;
      return;
    }
  };

  std::vector<std::int64_t> tail(d, -radius);
  tail[0] = 0;
  while (true) {
    std::int64_t residue = 0;
    std::int64_t tail_norm = 0;
    for (int i = 1; i < d; ++i) {
      residue = (residue + ((tail[i] % m) + m) % m * powers[i]) % m;
      tail_norm += tail[i] * tail[i];
    }
    const std::int64_t first = (m - residue) % m;  // u_1 == -residue (mod m)
    for (std::int64_t u1 : {first, first - m}) {
      std::vector<std::int64_t> u = tail;
      u[0] = u1;
      const std::int64_t n2 = tail_norm + u1 * u1;
      if (n2 == 0) continue;
      normalize(u);
      if (better(u, n2, best)) best = {n2, u};
    }
    int i = 1;
    while (i < d && tail[i] == radius) tail[i++] = -radius;
    if (i == d) break;
    ++tail[i];
  }
  return best;
}

}  // namespace oracle
