#pragma once

// Energy sweep: for a virtual network size n, simulate only the M nodes
// that survive to compete (M = ceil(log2 N) with N = n^2), record the
// maximum awake count, and emit it next to the discrete bound
// M + ceil(log2 N) + 1. Since M <= 68 even at n = 10^10, every point is
// desk-scale.

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "codeword.hpp"
#include "int128.hpp"
#include "naming.hpp"

namespace beepsim {

struct SweepRow {
  u128 n = 0;
  u128 N = 0;
  std::uint32_t M = 0;
  std::uint64_t seed = 0;
  std::uint64_t maxAwake = 0;
  std::uint64_t boundValue = 0;
};

inline SweepRow fig_sweep_point(u128 n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sweep: need n >= 2");
  SweepRow row;
  row.n = n;
  row.N = n * n;
  row.M = ceil_log2(row.N);
  row.seed = seed;
  row.boundValue = std::uint64_t{row.M} + ceil_log2(row.N) + 1;
  auto identities = sample_distinct_ids(row.M, row.N, seed);
  std::vector<u128> ids;
  ids.reserve(identities.size());
  for (const auto& ident : identities) ids.push_back(ident.id);
  RunReport report = detnaml_run(ids, row.N);
  row.maxAwake = report.energy.max_awake();
  return row;
}

// Geometric spacing between the endpoints, endpoints included; mirrors a
// log-scale x axis.
inline std::vector<u128> geometric_points(u128 from, u128 to, std::size_t count) {
  if (from < 1 || to < from || count < 1) throw std::invalid_argument("sweep: bad point range");
  std::vector<u128> points;
  if (count == 1) {
    points.push_back(from);
    return points;
  }
  double lo = std::log(static_cast<double>(from));
  double hi = std::log(static_cast<double>(to));
  points.push_back(from);  // pin the endpoints against exp/log round-off
  for (std::size_t i = 1; i + 1 < count; ++i) {
    double x = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    u128 v = u128_ceil_from_double(x);
    if (v < from) v = from;
    if (v > to) v = to;
    points.push_back(v);
  }
  points.push_back(to);
  return points;
}

inline constexpr const char* kSweepCsvHeader = "n,N,M,seed,maxAwake,boundValue";

inline std::string sweep_csv_row(const SweepRow& row) {
  std::ostringstream os;
  os << to_string(row.n) << ',' << to_string(row.N) << ',' << row.M << ',' << row.seed << ','
     << row.maxAwake << ',' << row.boundValue;
  return os.str();
}

// Least-squares slope of y against x; the sweep asserts a rising trend of
// mean maxAwake with log2 N.
inline double fitted_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("fitted_slope: need >= 2 paired points");
  }
  double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0) throw std::invalid_argument("fitted_slope: degenerate x values");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace beepsim
