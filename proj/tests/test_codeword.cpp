#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

#include "beepsim/codeword.hpp"
#include "beepsim/int128.hpp"

using namespace beepsim;

TEST_CASE("codeword widths for known bounds", "[codeword]") {
  REQUIRE(cid_width(8) == 4);
  REQUIRE(cid_width(1000) == 11);
  REQUIRE(cid_width(2) == 2);
  REQUIRE_THROWS_AS(cid_width(1), std::invalid_argument);
  REQUIRE_THROWS_AS(cid_width(0), std::invalid_argument);
}

TEST_CASE("encoding writes the value MSB first", "[codeword]") {
  Codeword cw = encode_cid(10, 4);
  REQUIRE(cw.bits() == std::vector<int>{1, 0, 1, 0});
  REQUIRE(cw.bit(0) == 1);
  REQUIRE(cw.bit(3) == 0);
}

TEST_CASE("encode rejects out-of-range inputs", "[codeword]") {
  REQUIRE_THROWS_AS(encode_cid(0, 4), std::invalid_argument);
  REQUIRE_THROWS_AS(encode_cid(16, 4), std::invalid_argument);
  REQUIRE_THROWS_AS(encode_cid(1, 0), std::invalid_argument);
}

TEST_CASE("decode inverts encode", "[codeword]") {
  REQUIRE(decode_label({0, 0, 1, 0, 1}) == 5);
  for (u128 id : {u128{1}, u128{7}, u128{500}, u128{1} << 90}) {
    std::uint32_t width = bit_width_u128(id) + 3;
    REQUIRE(decode_label(encode_cid(id, width).bits()) == id);
  }
  REQUIRE_THROWS_AS(decode_label({0, 2}), std::invalid_argument);
}

TEST_CASE("lexicographic codeword order equals numeric id order", "[codeword]") {
  std::uint32_t width = cid_width(16);
  for (u128 a = 1; a <= 16; ++a) {
    for (u128 b = a + 1; b <= 16; ++b) {
      REQUIRE(encode_cid(a, width).bits() < encode_cid(b, width).bits());
    }
  }
}

TEST_CASE("only a power-of-two bound itself can use the leading bit", "[codeword]") {
  for (u128 bound : {u128{16}, u128{20}, u128{31}, u128{32}}) {
    std::uint32_t width = cid_width(bound);
    for (u128 id = 1; id <= bound; ++id) {
      bool leading = encode_cid(id, width).bit(0) == 1;
      REQUIRE(leading == (id == bound && (bound & (bound - 1)) == 0));
    }
  }
}

TEST_CASE("sampled ids are a stable prefix under growth", "[codeword]") {
  auto small = sample_ids(5, 1000, 77);
  auto large = sample_ids(10, 1000, 77);
  for (std::size_t i = 0; i < small.size(); ++i) REQUIRE(small[i].id == large[i].id);
  for (const auto& ident : large) {
    REQUIRE(ident.id >= 1);
    REQUIRE(ident.id <= 1000);
  }
}

TEST_CASE("distinct sampling never repeats and rejects impossible requests", "[codeword]") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto ids = sample_distinct_ids(8, 16, seed);
    std::set<u128> seen;
    for (const auto& ident : ids) REQUIRE(seen.insert(ident.id).second);
  }
  REQUIRE_THROWS_AS(sample_distinct_ids(17, 16, 1), std::invalid_argument);
}

TEST_CASE("duplicate frequency of free sampling matches the birthday rate", "[codeword]") {
  // P(8 uniform draws from 64 all distinct) = prod_{k<8} (64-k)/64 ~ 0.6281
  double expected = 1.0;
  for (int k = 0; k < 8; ++k) expected *= (64.0 - k) / 64.0;
  const int trials = 10000;
  int distinctRuns = 0;
  for (int seed = 0; seed < trials; ++seed) {
    auto ids = sample_ids(8, 64, static_cast<std::uint64_t>(seed));
    std::set<u128> seen;
    for (const auto& ident : ids) seen.insert(ident.id);
    if (seen.size() == ids.size()) ++distinctRuns;
  }
  double freq = static_cast<double>(distinctRuns) / trials;
  double sigma = std::sqrt(expected * (1 - expected) / trials);
  REQUIRE(std::abs(freq - expected) <= 3.5 * sigma);
}

TEST_CASE("wide integer helpers round-trip and bound correctly", "[codeword]") {
  REQUIRE(ceil_log2(1) == 0);
  REQUIRE(ceil_log2(2) == 1);
  REQUIRE(ceil_log2(1000) == 10);
  REQUIRE(ceil_log2(1024) == 10);
  REQUIRE(ceil_log2(1025) == 11);
  u128 big = parse_u128("100000000000000000000");  // 10^20
  REQUIRE(to_string(big) == "100000000000000000000");
  REQUIRE(bit_width_u128(big) == 67);
  REQUIRE(ceil_log2(big) == 67);
  REQUIRE(u128_ceil_from_double(3.2) == 4);
  REQUIRE(u128_ceil_from_double(4.0) == 4);
}
