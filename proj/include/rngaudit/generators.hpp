#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "rngaudit/int128.hpp"

namespace rngaudit {

enum class GeneratorFamily { kLcg, kCombinedLcg, kReference };

// Largest supported LCG modulus. States and parameters are held in 128-bit
// integers so a*Y + c cannot overflow for any modulus up to this bound.
inline constexpr uint128 kMaxLcgModulus = kTwoPow64;

// Y_{n+1} = (a*Y_n + c) mod m, started at Y_0 = seed.
struct LcgParams {
  uint128 modulus = 0;
  uint128 multiplier = 0;
  uint128 increment = 0;
  uint128 seed = 0;

  // Throws UsageError unless 2 <= m <= 2^64, 0 < a < m, 0 <= c < m and
  // 0 <= seed < m.
  void validate() const;

  friend bool operator==(const LcgParams&, const LcgParams&) = default;
};

struct LcgStep {
  uint128 state;
  double uniform;
};

// Maps a state to [0,1) by a single division of the exact integer state.
// For moduli above 2^53 the quotient can round up to 1.0; it is then
// replaced by the largest double below 1.
double lcg_uniform(uint128 state, uint128 modulus);

// One step of the recurrence. `state` must already be in [0, m).
LcgStep lcg_next(uint128 state, const LcgParams& params);

class Lcg {
 public:
  explicit Lcg(const LcgParams& params);

  double next();
  uint128 state() const { return state_; }
  const LcgParams& params() const { return params_; }

 private:
  LcgParams params_;
  uint128 state_;
};

// One component stream of a combined generator.
struct CombinedComponent {
  std::uint64_t modulus;
  std::uint64_t multiplier;
  std::uint64_t increment;
};

// Wichmann & Hill (1982), Applied Statistics algorithm AS 183.
inline constexpr std::array<CombinedComponent, 3> kWichmannHillAs183 = {{
    {30269, 171, 0},
    {30307, 172, 0},
    {30323, 170, 0},
}};

struct CombinedStep {
  std::vector<std::uint64_t> states;
  double uniform;
};

// Advances every component by its own recurrence and returns the fractional
// part of sum(s_i / m_i).
CombinedStep combined_lcg_next(std::span<const std::uint64_t> states,
                               std::span<const CombinedComponent> table);

class CombinedLcg {
 public:
  explicit CombinedLcg(
      std::vector<std::uint64_t> seeds,
      std::span<const CombinedComponent> table = kWichmannHillAs183);

  double next();
  const std::vector<std::uint64_t>& states() const { return states_; }
  const std::vector<CombinedComponent>& table() const { return table_; }

 private:
  std::vector<CombinedComponent> table_;
  std::vector<std::uint64_t> states_;
};

// MT19937 with the standard init_genrand seeding. Uniforms are w / 2^32.
class ReferenceGenerator {
 public:
  static constexpr std::uint32_t kDefaultSeed = 5489u;

  explicit ReferenceGenerator(std::uint32_t seed = kDefaultSeed) : engine_(seed) {}

  std::uint32_t next_word() { return static_cast<std::uint32_t>(engine_()); }
  double next() { return static_cast<double>(next_word()) * 0x1p-32; }

 private:
  std::mt19937 engine_;
};

// Type-erased stream over the three families.
class Generator {
 public:
  explicit Generator(Lcg g) : impl_(std::move(g)) {}
  explicit Generator(CombinedLcg g) : impl_(std::move(g)) {}
  explicit Generator(ReferenceGenerator g) : impl_(std::move(g)) {}

  GeneratorFamily family() const;
  double next();
  void fill(std::span<double> out);

 private:
  std::variant<Lcg, CombinedLcg, ReferenceGenerator> impl_;
};

}  // namespace rngaudit
