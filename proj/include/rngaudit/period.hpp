#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rngaudit/generators.hpp"

namespace rngaudit {

inline constexpr std::uint64_t kDefaultFactorBound = 10'000'000;

// Trial-division factorization with divisors up to `bound`. Whatever is left
// over and could not be proven prime is kept in `cofactor` (1 when the
// factorization is complete).
struct Factorization {
  std::vector<std::pair<uint128, unsigned>> prime_powers;
  uint128 cofactor = 1;

  bool complete() const { return cofactor == 1; }
};

Factorization trial_factor(uint128 n, std::uint64_t bound = kDefaultFactorBound);

// The three conditions under which an LCG attains period m:
//   (i)   gcd(c, m) = 1
//   (ii)  a - 1 is divisible by every prime dividing m
//   (iii) a - 1 is divisible by 4 when m is
struct FullPeriodCheck {
  bool increment_coprime = false;
  bool multiplier_minus_one_has_all_primes = false;
  bool multiplier_minus_one_four_condition = false;
  Factorization factorization;

  bool full_period() const {
    return increment_coprime && multiplier_minus_one_has_all_primes &&
           multiplier_minus_one_four_condition;
  }
};

// Condition (ii) is decided from the trial factorization; an unfactored
// cofactor r is settled exactly by stripping gcd(r, a-1) until it stalls,
// so no modulus is ever undecidable.
FullPeriodCheck check_full_period(const LcgParams& params,
                                  std::uint64_t factor_bound = kDefaultFactorBound);

bool full_period_predicate(const LcgParams& params,
                           std::uint64_t factor_bound = kDefaultFactorBound);

struct CycleInfo {
  std::uint64_t tail = 0;    // steps before the orbit enters its cycle
  std::uint64_t period = 0;  // cycle length
};

// Brent cycle detection on the orbit of Y0. Returns nullopt ("exceeds cap")
// when tail + period > cap.
std::optional<CycleInfo> find_cycle(const LcgParams& params, std::uint64_t cap);

std::optional<std::uint64_t> brute_force_period(const LcgParams& params, std::uint64_t cap);

}  // namespace rngaudit
