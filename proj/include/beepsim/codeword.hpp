#pragma once

// Fixed-width identifier codewords.
//
// A node with identifier id in {1..N} competes with the binary codeword of
// id written MSB-first into ceil(log2 N) + 1 bits; bit(0) is the most
// significant bit. With a shared width, lexicographic order of codewords
// equals numeric order of identifiers, which is what lets the per-bit
// elimination tournament realize a maximum.

#include <compare>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "int128.hpp"
#include "rng.hpp"

namespace beepsim {

// Codeword width for identifiers drawn from {1..N}; rejects degenerate N.
inline std::uint32_t cid_width(u128 upperBound) {
  if (upperBound < 2) throw std::invalid_argument("cid_width: upper bound must be >= 2");
  return ceil_log2(upperBound) + 1;
}

class Codeword {
 public:
  Codeword() = default;
  Codeword(u128 value, std::uint32_t width) : value_(value), width_(width) {}

  std::uint32_t width() const { return width_; }
  u128 value() const { return value_; }

  // bit(0) is the MSB.
  int bit(std::uint32_t i) const { return static_cast<int>((value_ >> (width_ - 1 - i)) & 1); }

  std::vector<int> bits() const {
    std::vector<int> out(width_);
    for (std::uint32_t i = 0; i < width_; ++i) out[i] = bit(i);
    return out;
  }

  friend bool operator==(const Codeword&, const Codeword&) = default;

 private:
  u128 value_ = 0;
  std::uint32_t width_ = 0;
};

inline Codeword encode_cid(u128 id, std::uint32_t width) {
  if (width == 0 || width > 127) throw std::invalid_argument("encode_cid: bad width");
  if (id < 1 || id >= (u128{1} << width)) throw std::invalid_argument("encode_cid: id out of range");
  return Codeword(id, width);
}

// Numeric value of an MSB-first bit vector.
inline u128 decode_label(const std::vector<int>& bits) {
  u128 v = 0;
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("decode_label: bad bit");
    v = (v << 1) | static_cast<unsigned>(b);
  }
  return v;
}

struct NodeIdentity {
  u128 id = 0;
  std::uint32_t group = 0;  // 0 until a group assignment happens
  Codeword cid;
};

// Independent uniform draws from {1..upperBound}. Node i draws from its own
// substream, so adding nodes never changes earlier identities. Duplicates
// are possible by design and are surfaced later as protocol failures, never
// silently repaired.
inline std::vector<NodeIdentity> sample_ids(std::size_t count, u128 upperBound,
                                            std::uint64_t seed) {
  std::uint32_t width = cid_width(upperBound);
  std::vector<NodeIdentity> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Substream stream(seed, i);
    u128 id = stream.bounded_u128(upperBound) + 1;
    out.push_back(NodeIdentity{id, 0, encode_cid(id, width)});
  }
  return out;
}

// As sample_ids, but node i redraws from its own substream until its id is
// unused. For experiments that require distinct identifiers.
inline std::vector<NodeIdentity> sample_distinct_ids(std::size_t count, u128 upperBound,
                                                     std::uint64_t seed) {
  if (u128{count} > upperBound) {
    throw std::invalid_argument("sample_distinct_ids: more nodes than identifiers");
  }
  std::uint32_t width = cid_width(upperBound);
  std::set<u128> used;
  std::vector<NodeIdentity> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Substream stream(seed, i);
    u128 id = stream.bounded_u128(upperBound) + 1;
    while (!used.insert(id).second) id = stream.bounded_u128(upperBound) + 1;
    out.push_back(NodeIdentity{id, 0, encode_cid(id, width)});
  }
  return out;
}

}  // namespace beepsim
