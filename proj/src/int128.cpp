#include "rngaudit/int128.hpp"

#include <algorithm>

#include "rngaudit/error.hpp"

namespace rngaudit {

uint128 parse_uint128(std::string_view text) {
  if (text.empty()) throw UsageError("expected an integer, got an empty string");
  constexpr uint128 kMax = ~static_cast<uint128>(0);
  uint128 value = 0;
  for (char ch : text) {
    if (ch < '0' || ch > '9') {
      throw UsageError("not a non-negative integer: '" + std::string(text) + "'");
    }
    const auto digit = static_cast<unsigned>(ch - '0');
    if (value > (kMax - digit) / 10) {
      throw UsageError("integer out of range: '" + std::string(text) + "'");
    }
    value = value * 10 + digit;
  }
  return value;
}

std::string to_string(uint128 value) {
  if (value == 0) return "0";
  std::string out;
  while (value != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

BigInt to_bigint(uint128 value) {
  BigInt high = static_cast<std::uint64_t>(value >> 64);
  BigInt low = static_cast<std::uint64_t>(value);
  return (high << 64) | low;
}

uint128 to_uint128(const BigInt& value) {
  if (value == 0) return 0;
  if (value < 0 || boost::multiprecision::msb(value) >= 128) {
    throw DomainError("integer does not fit in 128 bits");
  }
  const BigInt mask = (BigInt(1) << 64) - 1;
  const auto low = static_cast<std::uint64_t>(value & mask);
  const auto high = static_cast<std::uint64_t>((value >> 64) & mask);
  return (static_cast<uint128>(high) << 64) | low;
}

uint128 gcd(uint128 a, uint128 b) {
  while (b != 0) {
    const uint128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace rngaudit
