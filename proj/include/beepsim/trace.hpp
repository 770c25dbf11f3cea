#pragma once

// Tab-separated slot trace. One row per awake node per slot:
//
//   slot  season  period  node  action  outcome  statusAfter  stlAfter  stnAfter  labelIfAssigned
//
// Sleeping nodes emit no row. Fields that do not apply hold "-": outcome
// for beepers, season/period outside a schedule, label until assigned.
// stlAfter renders the remembered slot as its even slot index 2i ("-" when
// unset, "-2" for the sentinel); stnAfter joins the remembered even slot
// indices with commas. Label assignment happens at the season's final slot,
// so the winner's last row of the season carries the label.

#include <charconv>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "channel.hpp"
#include "naming_state.hpp"

namespace beepsim {

// What a protocol reports about a node after a slot was applied.
struct TraceSnapshot {
  Status status = Status::Null;
  std::int32_t stl = kStlNone;
  StnSet stn;
  std::uint64_t label = 0;
};

struct TraceEvent {
  Slot slot = 0;
  std::optional<std::uint64_t> season;
  std::optional<std::uint64_t> period;
  NodeIndex node = 0;
  SlotAction action = SlotAction::Sleep;
  std::optional<ChannelOutcome> outcome;
  TraceSnapshot after;
};

inline constexpr const char* kTraceHeader =
    "slot\tseason\tperiod\tnode\taction\toutcome\tstatusAfter\tstlAfter\tstnAfter\tlabelIfAssigned";

inline std::string render_stl(std::int32_t stl) {
  if (stl == kStlNone) return "-";
  if (stl == kStlSentinel) return "-2";
  return std::to_string(2 * stl);
}

inline std::string render_stn(const StnSet& stn) {
  if (stn.empty()) return "-";
  std::string out;
  for (std::uint32_t pair = 0; pair < 128; ++pair) {
    if (!stn.contains(pair)) continue;
    if (!out.empty()) out += ',';
    out += std::to_string(2 * pair);
  }
  return out;
}

inline std::string trace_line(const TraceEvent& e) {
  std::ostringstream os;
  os << e.slot << '\t';
  if (e.season) os << *e.season; else os << '-';
  os << '\t';
  if (e.period) os << *e.period; else os << '-';
  os << '\t' << e.node << '\t' << action_name(e.action) << '\t';
  if (e.outcome) os << outcome_name(*e.outcome); else os << '-';
  os << '\t' << status_name(e.after.status)
     << '\t' << render_stl(e.after.stl)
     << '\t' << render_stn(e.after.stn)
     << '\t';
  if (e.after.label != 0) os << e.after.label; else os << '-';
  return os.str();
}

class TraceWriter {
 public:
  explicit TraceWriter(std::ostream& out) : out_(&out) { *out_ << kTraceHeader << '\n'; }

  void write(const TraceEvent& e) { *out_ << trace_line(e) << '\n'; }

 private:
  std::ostream* out_;
};

// Parsed row, string-typed where the writer may emit "-". Used by the
// trace-based verifiers and the format round-trip tests.
struct TraceRow {
  std::uint64_t slot = 0;
  std::optional<std::uint64_t> season;
  std::optional<std::uint64_t> period;
  std::uint32_t node = 0;
  std::string action;
  std::string outcome;
  std::string statusAfter;
  std::string stlAfter;
  std::string stnAfter;
  std::optional<std::uint64_t> label;
};

namespace detail {
inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

inline std::uint64_t parse_u64_field(const std::string& s, const char* what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument(std::string("trace: bad ") + what + " field '" + s + "'");
  }
  return v;
}

inline std::optional<std::uint64_t> parse_opt_field(const std::string& s, const char* what) {
  if (s == "-") return std::nullopt;
  return parse_u64_field(s, what);
}
}  // namespace detail

inline TraceRow parse_trace_row(const std::string& line) {
  auto f = detail::split_tabs(line);
  if (f.size() != 10) throw std::invalid_argument("trace: expected 10 fields, got " + std::to_string(f.size()));
  TraceRow r;
  r.slot = detail::parse_u64_field(f[0], "slot");
  r.season = detail::parse_opt_field(f[1], "season");
  r.period = detail::parse_opt_field(f[2], "period");
  r.node = static_cast<std::uint32_t>(detail::parse_u64_field(f[3], "node"));
  r.action = f[4];
  r.outcome = f[5];
  r.statusAfter = f[6];
  r.stlAfter = f[7];
  r.stnAfter = f[8];
  r.label = detail::parse_opt_field(f[9], "label");
  return r;
}

inline std::vector<TraceRow> parse_trace(std::istream& in) {
  std::vector<TraceRow> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line == kTraceHeader) continue;  // header optional for fragments
    }
    rows.push_back(parse_trace_row(line));
  }
  return rows;
}

}  // namespace beepsim
