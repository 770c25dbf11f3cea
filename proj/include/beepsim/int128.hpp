#pragma once

// 128-bit unsigned helpers. Node identifiers are drawn from {1..N} where the
// energy sweeps push N up to n^2 with n around 1e10, past the 64-bit range.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace beepsim {

using u128 = unsigned __int128;

constexpr std::uint32_t bit_width_u128(u128 x) {
  std::uint32_t w = 0;
  while (x != 0) {
    x >>= 1;
    ++w;
  }
  return w;
}

// ceil(log2(x)) for x >= 1; ceil_log2(1) == 0.
constexpr std::uint32_t ceil_log2(u128 x) {
  if (x == 0) throw std::invalid_argument("ceil_log2: zero argument");
  return x <= 1 ? 0 : bit_width_u128(x - 1);
}

inline std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v != 0) {
    out.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
    v /= 10;
  }
  return {out.rbegin(), out.rend()};
}

inline u128 parse_u128(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("parse_u128: empty string");
  u128 v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw std::invalid_argument("parse_u128: bad digit");
    v = v * 10 + static_cast<unsigned>(c - '0');
  }
  return v;
}

// Smallest integer >= v, as u128. v must be non-negative and fit in 128 bits.
inline u128 u128_ceil_from_double(double v) {
  if (v < 0) throw std::invalid_argument("u128_ceil_from_double: negative");
  double c = std::ceil(v);
  return static_cast<u128>(c);
}

}  // namespace beepsim
