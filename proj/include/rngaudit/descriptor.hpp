#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "rngaudit/generators.hpp"

namespace rngaudit {

// Textual generator configuration:
//
//   lcg:m=<int>,a=<int>,c=<int>,seed=<int>
//   wh:seed1=<int>,seed2=<int>,seed3=<int>
//   mt:seed=<int>
//
// Keys may appear in any order. For `lcg`, m and a are required, c defaults
// to 0 and seed to 1. `wh` seeds default to 1 and `mt` seeds to 5489; the
// bare family names `wh` and `mt` are accepted.
struct GeneratorDescriptor {
  GeneratorFamily family = GeneratorFamily::kReference;
  LcgParams lcg{};
  std::array<std::uint64_t, 3> wh_seeds{1, 1, 1};
  std::uint32_t mt_seed = ReferenceGenerator::kDefaultSeed;

  friend bool operator==(const GeneratorDescriptor&, const GeneratorDescriptor&) = default;
};

// Throws UsageError on malformed text or parameters violating the family's
// invariants.
GeneratorDescriptor parse_descriptor(std::string_view text);

// Canonical form; parse_descriptor(to_string(d)) == d.
std::string to_string(const GeneratorDescriptor& descriptor);

std::string_view family_name(GeneratorFamily family);

// True when `text` starts with a known family prefix (`lcg:`, `wh`, `mt`).
bool looks_like_descriptor(std::string_view text);

// Replaces the seed with one derived from `seed`:
//   lcg: Y0 = seed mod m
//   wh:  seed_i = 1 + seed mod (m_i - 1)
//   mt:  seed mod 2^32
GeneratorDescriptor with_seed(GeneratorDescriptor descriptor, std::uint64_t seed);

Generator make_generator(const GeneratorDescriptor& descriptor);

}  // namespace rngaudit
