// Command-line front end: single deterministic runs, grouped randomized
// runs, end-to-end counting, and the energy sweep. Exit codes: 0 success,
// 1 protocol or verification failure, 2 invalid arguments.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "beepsim/beepsim.hpp"

namespace {

using namespace beepsim;

// Append-only CSV: the header is written only when the file starts empty.
class CsvAppender {
 public:
  explicit CsvAppender(const std::string& path, const std::string& header) {
    bool needHeader = true;
    {
      std::ifstream probe(path, std::ios::binary);
      needHeader = !probe.good() || probe.peek() == std::ifstream::traits_type::eof();
    }
    out_.open(path, std::ios::app);
    if (!out_) throw std::runtime_error("cannot open CSV file " + path);
    if (needHeader) out_ << header << '\n';
  }

  void row(const std::string& line) {
    out_ << line << '\n';
    out_.flush();  // keep partial sweeps usable on interrupt
  }

 private:
  std::ofstream out_;
};

std::optional<std::ofstream> open_trace(const std::string& path) {
  if (path.empty()) return std::nullopt;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open trace file " + path);
  return out;
}

std::vector<u128> read_id_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open id file " + path);
  std::vector<u128> ids;
  std::string token;
  while (in >> token) ids.push_back(parse_u128(token));
  return ids;
}

void print_failures(const RunReport& report) {
  for (const auto& f : report.failures) {
    std::cout << "failure: " << failure_name(f.kind) << " at slot " << f.slot << " (" << f.detail
              << ")\n";
  }
}

struct EnergyMaxima {
  std::uint64_t wStl = 0, wStn = 0, wOther = 0;
};

EnergyMaxima energy_maxima(const EnergyLedger& ledger) {
  EnergyMaxima m;
  for (const auto& e : ledger.nodes) {
    m.wStl = std::max(m.wStl, e.wStl);
    m.wStn = std::max(m.wStn, e.wStn);
    m.wOther = std::max(m.wOther, e.wOther);
  }
  return m;
}

int run_detnaml(std::size_t m, u128 upperBound, std::uint64_t seed, const std::string& idFile,
                const std::string& tracePath, const std::string& csvPath, bool reference,
                bool checkBounds) {
  std::vector<u128> ids;
  if (!idFile.empty()) {
    ids = read_id_file(idFile);
  } else {
    for (const auto& ident : sample_distinct_ids(m, upperBound, seed)) ids.push_back(ident.id);
  }

  EngineOptions options;
  auto trace = open_trace(tracePath);
  if (trace) options.trace = &*trace;
  RunReport report = detnaml_run(ids, upperBound, options);

  for (std::size_t i = 0; i < ids.size(); ++i) {
    std::cout << "node " << i << " id " << to_string(ids[i]) << " label " << report.labels[i]
              << '\n';
  }
  EnergyMaxima maxima = energy_maxima(report.energy);
  std::cout << report.to_text();
  std::cout << "wStlMax\t" << maxima.wStl << "\nwStnMax\t" << maxima.wStn << "\nwOtherMax\t"
            << maxima.wOther << '\n';
  print_failures(report);

  bool ok = report.failure_free();
  CheckReport energyCheck = check_energy_identity(report.energy);
  if (!energyCheck.pass) {
    std::cout << energyCheck.to_text() << '\n';
    ok = false;
  }
  if (reference && !ids.empty()) {
    RunReport ref = reference_detnaml_run(ids, upperBound);
    bool same = ref.labels == report.labels;
    std::cout << "reference-cross-check: " << (same ? "pass" : "FAIL") << '\n';
    ok = ok && same;
  }
  if (checkBounds && report.failure_free() && !ids.empty()) {
    CheckReport bounds = check_detnaml_bounds(report, ids.size(), upperBound);
    std::cout << bounds.to_text() << '\n';
    ok = ok && bounds.pass;
  }

  if (!csvPath.empty()) {
    CsvAppender csv(csvPath, "m,N,seed,totalSlots,maxAwake,wStlMax,wStnMax,wOtherMax,failures");
    std::ostringstream row;
    row << ids.size() << ',' << to_string(upperBound) << ',' << seed << ','
        << report.energy.totalSlots << ',' << report.energy.max_awake() << ',' << maxima.wStl
        << ',' << maxima.wStn << ',' << maxima.wOther << ',' << report.failures.size();
    csv.row(row.str());
  }
  return ok ? 0 : 1;
}

bool labels_are_permutation(const std::vector<std::uint64_t>& labels) {
  std::vector<std::uint64_t> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != i + 1) return false;
  }
  return true;
}

// Expected labels from the sampled identities; empty when some group holds
// a duplicate id (the run itself reports that failure).
std::optional<std::vector<std::uint64_t>> grouped_oracle(const GroupedRunResult& result) {
  std::vector<std::vector<u128>> idsByGroup(result.schedule.groupCount);
  std::vector<std::vector<std::size_t>> nodesByGroup(result.schedule.groupCount);
  for (std::size_t i = 0; i < result.identities.size(); ++i) {
    idsByGroup[result.identities[i].group].push_back(result.identities[i].id);
    nodesByGroup[result.identities[i].group].push_back(i);
  }
  auto labels = oracle_labels(idsByGroup);
  if (!labels) return std::nullopt;
  std::vector<std::uint64_t> byNode(result.identities.size(), 0);
  for (std::size_t g = 0; g < nodesByGroup.size(); ++g) {
    for (std::size_t k = 0; k < nodesByGroup[g].size(); ++k) {
      byNode[nodesByGroup[g][k]] = (*labels)[g][k];
    }
  }
  return byNode;
}

int run_grouped_command(bool counting, u128 n, std::uint64_t seed, ApproxMode mode,
                        const std::string& tracePath, const std::string& csvPath,
                        bool checkBounds) {
  EngineOptions options;
  auto trace = open_trace(tracePath);
  if (trace) options.trace = &*trace;
  GroupedRunResult result = counting ? counting_run(n, seed, mode, options)
                                     : randnaml_run(n, seed, mode, options);
  const RunReport& report = result.report;

  std::cout << "n\t" << to_string(n) << "\nu\t" << result.approx.u << "\nN\t"
            << to_string(result.schedule.N) << "\ngroupCount\t" << result.schedule.groupCount
            << '\n';
  std::cout << report.to_text();
  print_failures(report);

  bool ok = report.failure_free();
  CheckReport energyCheck = check_energy_identity(report.energy);
  if (!energyCheck.pass) {
    std::cout << energyCheck.to_text() << '\n';
    ok = false;
  }
  if (report.failure_free()) {
    bool perm = labels_are_permutation(report.labels);
    std::cout << "permutation-check: " << (perm ? "pass" : "FAIL") << '\n';
    ok = ok && perm;
    auto expected = grouped_oracle(result);
    bool oracleOk = expected.has_value() && *expected == report.labels;
    std::cout << "oracle-check: " << (oracleOk ? "pass" : "FAIL") << '\n';
    ok = ok && oracleOk;
  }
  if (counting) {
    bool countOk = !result.decodedCounts.empty();
    for (std::uint64_t c : result.decodedCounts) countOk = countOk && u128{c} == n;
    std::cout << "count-check: " << (countOk ? "pass" : "FAIL") << '\n';
    if (report.failure_free()) ok = ok && countOk;
  }
  if (checkBounds && report.failure_free()) {
    CheckReport bounds = check_randnaml_bounds(report, n, mode == ApproxMode::Exact);
    std::cout << bounds.to_text() << '\n';
    ok = ok && bounds.pass;
  }

  if (!csvPath.empty()) {
    CsvAppender csv(csvPath, "n,u,N,groupCount,totalSlots,maxAwake,failures");
    std::ostringstream row;
    row << to_string(n) << ',' << result.approx.u << ',' << to_string(result.schedule.N) << ','
        << result.schedule.groupCount << ',' << report.energy.totalSlots << ','
        << report.energy.max_awake() << ',' << report.failures.size();
    csv.row(row.str());
  }
  return ok ? 0 : 1;
}

int run_sweep(u128 from, u128 to, std::size_t points, std::size_t seeds,
              const std::string& csvPath) {
  std::optional<CsvAppender> csv;
  if (!csvPath.empty()) csv.emplace(csvPath, kSweepCsvHeader);
  for (u128 n : geometric_points(from, to, points)) {
    for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
      SweepRow row = fig_sweep_point(n, seed);
      std::string line = sweep_csv_row(row);
      if (csv) {
        csv->row(line);
      } else {
        std::cout << line << '\n';
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"beepsim: single-hop beeping-network naming and counting simulator"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::string tracePath, csvPath, idFile, approxName = "exact";
  bool reference = false, checkBounds = false;

  auto addCommon = [&](CLI::App* cmd, bool withApprox) {
    cmd->add_option("--seed", seed, "RNG seed");
    cmd->add_option("--trace", tracePath, "write a TSV slot trace to this path");
    cmd->add_option("--csv", csvPath, "append a CSV summary row to this path");
    cmd->add_flag("--check-bounds", checkBounds, "verify calibrated time/energy bounds");
    if (withApprox) {
      cmd->add_option("--approx", approxName, "size approximation mode")
          ->check(CLI::IsMember({"exact", "jittered"}));
    }
  };

  std::uint64_t m = 0;
  std::string upperBoundText = "16";
  CLI::App* detnaml = app.add_subcommand("detnaml", "deterministic naming run");
  detnaml->add_option("--m", m, "number of nodes (ids sampled distinct)");
  detnaml->add_option("--upper-bound", upperBoundText, "identifier upper bound N");
  detnaml->add_option("--ids", idFile, "id list file, one integer per line (overrides --m)");
  detnaml->add_flag("--reference", reference, "cross-check against the always-awake reference");
  addCommon(detnaml, false);

  std::uint64_t n = 1;
  CLI::App* randnaml = app.add_subcommand("randnaml", "randomized grouped naming run");
  randnaml->add_option("--n", n, "true network size");
  addCommon(randnaml, true);

  CLI::App* count = app.add_subcommand("count", "grouped naming plus counting epilogue");
  count->add_option("--n", n, "true network size");
  addCommon(count, true);

  std::uint64_t sweepFrom = 100, sweepTo = 10000000000ull;
  std::size_t sweepPoints = 5, sweepSeeds = 10;
  CLI::App* sweep = app.add_subcommand("sweep", "energy sweep across network sizes");
  sweep->add_option("--from", sweepFrom, "smallest n")->check(CLI::PositiveNumber);
  sweep->add_option("--to", sweepTo, "largest n")->check(CLI::PositiveNumber);
  sweep->add_option("--points", sweepPoints, "geometric point count")->check(CLI::PositiveNumber);
  sweep->add_option("--seeds", sweepSeeds, "seeds per point")->check(CLI::PositiveNumber);
  sweep->add_option("--csv", csvPath, "CSV output path (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (detnaml->parsed()) {
      return run_detnaml(m, parse_u128(upperBoundText), seed, idFile, tracePath, csvPath,
                         reference, checkBounds);
    }
    if (randnaml->parsed()) {
      if (n < 1) throw CLI::ValidationError("--n", "need n >= 1");
      return run_grouped_command(false, n, seed,
                                 approxName == "exact" ? ApproxMode::Exact : ApproxMode::Jittered,
                                 tracePath, csvPath, checkBounds);
    }
    if (count->parsed()) {
      if (n < 1) throw CLI::ValidationError("--n", "need n >= 1");
      return run_grouped_command(true, n, seed,
                                 approxName == "exact" ? ApproxMode::Exact : ApproxMode::Jittered,
                                 tracePath, csvPath, checkBounds);
    }
    if (sweep->parsed()) {
      if (sweepTo < sweepFrom) throw CLI::ValidationError("--to", "must be >= --from");
      return run_sweep(sweepFrom, sweepTo, sweepPoints, sweepSeeds, csvPath);
    }
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid arguments: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
