#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace rngaudit {

__extension__ typedef unsigned __int128 uint128;
__extension__ typedef __int128 int128;

using BigInt = boost::multiprecision::cpp_int;

inline constexpr uint128 kTwoPow64 = static_cast<uint128>(1) << 64;

// Parses a non-negative decimal integer. Throws UsageError on empty input,
// non-digit characters, or overflow of 128 bits.
uint128 parse_uint128(std::string_view text);

std::string to_string(uint128 value);

BigInt to_bigint(uint128 value);

// Exact conversion; throws DomainError when the value does not fit.
uint128 to_uint128(const BigInt& value);

uint128 gcd(uint128 a, uint128 b);

}  // namespace rngaudit
