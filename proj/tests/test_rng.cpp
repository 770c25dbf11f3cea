#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "beepsim/rng.hpp"

using namespace beepsim;

TEST_CASE("substreams are deterministic in (seed, stream)", "[rng]") {
  Substream a(42, 7), b(42, 7);
  for (int i = 0; i < 100; ++i) REQUIRE(a.next() == b.next());
}

TEST_CASE("different streams of one seed diverge", "[rng]") {
  Substream a(42, 0), b(42, 1), c(43, 0);
  std::set<std::uint64_t> firsts{a.next(), b.next(), c.next()};
  REQUIRE(firsts.size() == 3);
}

TEST_CASE("bounded draws stay in range and cover all residues", "[rng]") {
  Substream rng(1, 0);
  std::vector<int> hits(5, 0);
  for (int i = 0; i < 5000; ++i) {
    std::uint64_t v = rng.bounded(5);
    REQUIRE(v < 5);
    ++hits[v];
  }
  for (int h : hits) {
    REQUIRE(h > 800);  // fair coin would put ~1000 in each bucket
    REQUIRE(h < 1200);
  }
}

TEST_CASE("bounded handles bound 1", "[rng]") {
  Substream rng(9, 9);
  for (int i = 0; i < 10; ++i) REQUIRE(rng.bounded(1) == 0);
}

TEST_CASE("wide bounded draws stay under a 2^100 bound", "[rng]") {
  Substream rng(5, 3);
  u128 bound = u128{1} << 100;
  std::set<std::uint64_t> lowWords;
  for (int i = 0; i < 200; ++i) {
    u128 v = rng.bounded_u128(bound);
    REQUIRE(v < bound);
    lowWords.insert(static_cast<std::uint64_t>(v));
  }
  REQUIRE(lowWords.size() > 190);  // draws vary, not stuck
}

TEST_CASE("wide bounded draws reach above 64 bits", "[rng]") {
  Substream rng(5, 4);
  u128 bound = u128{1} << 100;
  bool sawHigh = false;
  for (int i = 0; i < 200; ++i) sawHigh = sawHigh || (rng.bounded_u128(bound) >> 64) != 0;
  REQUIRE(sawHigh);
}

TEST_CASE("unit reals land in [0,1) and reals in the given range", "[rng]") {
  Substream rng(11, 2);
  for (int i = 0; i < 1000; ++i) {
    double u = rng.unit_real();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    double r = rng.uniform_real(3.5, 14.0);
    REQUIRE(r >= 3.5);
    REQUIRE(r <= 14.0);
  }
}

TEST_CASE("small bounds are unbiased enough for a mean test", "[rng]") {
  Substream rng(123, 0);
  double sum = 0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) sum += static_cast<double>(rng.bounded(1000));
  double mean = sum / draws;
  REQUIRE(mean > 480.0);  // expected 499.5, sd of mean ~2
  REQUIRE(mean < 520.0);
}
