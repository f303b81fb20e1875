#include "rngaudit/period.hpp"

#include <limits>

#include "rngaudit/error.hpp"

namespace rngaudit {

Factorization trial_factor(uint128 n, std::uint64_t bound) {
  if (n == 0) throw UsageError("cannot factor 0");
  Factorization f;
  uint128 p = 2;
  for (; p <= bound && p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    unsigned exponent = 0;
    while (n % p == 0) {
      n /= p;
      ++exponent;
    }
    f.prime_powers.emplace_back(p, exponent);
  }
  if (n > 1) {
    if (p * p > n) {
      f.prime_powers.emplace_back(n, 1u);  // no divisor up to sqrt(n): prime
    } else {
      f.cofactor = n;
    }
  }
  return f;
}

namespace {

// True when every prime factor of r divides b.
bool radical_divides(uint128 r, uint128 b) {
  while (r > 1) {
    const uint128 g = gcd(r, b);
    if (g == 1) return false;
    while (r % g == 0) r /= g;
  }
  return true;
}

}  // namespace

FullPeriodCheck check_full_period(const LcgParams& params, std::uint64_t factor_bound) {
  params.validate();
  const uint128 m = params.modulus;
  const uint128 b = params.multiplier - 1;

  FullPeriodCheck check;
  check.factorization = trial_factor(m, factor_bound);
  check.increment_coprime = gcd(params.increment, m) == 1;

  bool all_primes = true;
  for (const auto& [prime, exponent] : check.factorization.prime_powers) {
    if (b % prime != 0) all_primes = false;
  }
  if (!check.factorization.complete()) {
    all_primes = all_primes && radical_divides(check.factorization.cofactor, b);
  }
  check.multiplier_minus_one_has_all_primes = all_primes;
  check.multiplier_minus_one_four_condition = (m % 4 != 0) || (b % 4 == 0);
  return check;
}

bool full_period_predicate(const LcgParams& params, std::uint64_t factor_bound) {
  return check_full_period(params, factor_bound).full_period();
}

std::optional<CycleInfo> find_cycle(const LcgParams& params, std::uint64_t cap) {
  params.validate();
  if (cap == 0) throw UsageError("period search cap must be at least 1");

  const auto step = [&params](uint128 y) {
    return (params.multiplier * y + params.increment) % params.modulus;
  };

  // Brent needs at most about 3*(tail + period) steps to lock onto the cycle.
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t budget = cap > (kMax - 4) / 4 ? kMax : 4 * cap + 4;

  std::uint64_t power = 1;
  std::uint64_t lambda = 1;
  std::uint64_t steps = 1;
  uint128 tortoise = params.seed;
  uint128 hare = step(params.seed);
  while (tortoise != hare) {
    if (power == lambda) {
      tortoise = hare;
      power *= 2;
      lambda = 0;
    }
    hare = step(hare);
    ++lambda;
    if (++steps > budget) return std::nullopt;
  }

  tortoise = params.seed;
  hare = params.seed;
  for (std::uint64_t i = 0; i < lambda; ++i) hare = step(hare);
  std::uint64_t mu = 0;
  while (tortoise != hare) {
    tortoise = step(tortoise);
    hare = step(hare);
    ++mu;
  }
  if (mu > cap || lambda > cap - mu) return std::nullopt;
  return CycleInfo{mu, lambda};
}

std::optional<std::uint64_t> brute_force_period(const LcgParams& params, std::uint64_t cap) {
  const auto cycle = find_cycle(params, cap);
  if (!cycle) return std::nullopt;
  return cycle->period;
}

}  // namespace rngaudit
