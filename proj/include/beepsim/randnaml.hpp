#pragma once

// Randomized grouped naming and exact counting.
//
// Phases, on one fixed slot timeline every node derives from u alone:
//   1. approximation stub: every node pays ceil(log2 N) listening slots,
//   2. one period per group: the group runs the deterministic tournament
//      (season cap namingSeasons, one extra watch season so even a node
//      labeled in the final season can detect it holds the last label),
//      then the period's trailing handoffLength slots carry the group's
//      cumulative label count to the next group, bit-serially (beep = 1),
//   3. counting epilogue: the last group's final labeled node broadcasts
//      the total while everyone else listens.
//
// Failures are detected and reported, never repaired: duplicate labels
// (duplicate IDs inside a group), group overflow (more members than the
// season budget), and a broken handoff chain (an empty group makes the
// next decode read 0, impossible on a healthy run past the first period).

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "codeword.hpp"
#include "engine.hpp"
#include "naming.hpp"
#include "rng.hpp"

namespace beepsim {

enum class ApproxMode : std::uint8_t { Exact, Jittered };

struct Approximation {
  ApproxMode mode = ApproxMode::Exact;
  double u = 0;              // size estimate, in [n/2, 2n]
  u128 N = 0;                // id space: max((2u)^2, 16), rounded up
  std::uint32_t charge = 0;  // ceil(log2 N) awake slots every node pays
};

// The estimation algorithm itself is out of scope; the stub returns the
// true size (exact) or a uniform estimate in the contractual range
// (jittered), and prices the phase honestly.
inline Approximation approximate_size(u128 nTrue, std::uint64_t seed, ApproxMode mode) {
  if (nTrue < 1) throw std::invalid_argument("approximate_size: need nTrue >= 1");
  Approximation a;
  a.mode = mode;
  if (mode == ApproxMode::Exact) {
    a.u = static_cast<double>(nTrue);
    u128 twoU = 2 * nTrue;
    a.N = twoU * twoU;
  } else {
    Substream rng(seed, kStreamTagApproximation);
    a.u = rng.uniform_real(static_cast<double>(nTrue) / 2.0, 2.0 * static_cast<double>(nTrue));
    a.N = u128_ceil_from_double(2.0 * a.u * 2.0 * a.u);
  }
  if (a.N < 16) a.N = 16;  // keep schedules non-degenerate for tiny n
  a.charge = ceil_log2(a.N);
  return a;
}

struct Schedule {
  u128 N = 0;
  std::uint32_t approxCharge = 0;
  std::uint32_t groupCount = 0;
  std::uint32_t bitCount = 0;       // pairs per season = cid_width(N)
  std::uint32_t seasonLength = 0;   // 2 * bitCount
  std::uint32_t namingSeasons = 0;  // ceil(2 * log2 N)
  std::uint32_t watchSeasons = 1;
  std::uint32_t handoffLength = 0;  // cid_width(N): labels always fit
  std::uint64_t periodLength = 0;   // (namingSeasons + watchSeasons) * seasonLength + handoffLength
  std::uint64_t countingSlot = 0;   // approxCharge + groupCount * periodLength
  std::uint64_t namingTotal = 0;    // slots of a naming-only run (= countingSlot)
  std::uint64_t countingTotal = 0;  // countingSlot + handoffLength
};

inline Schedule build_schedule(const Approximation& a) {
  Schedule s;
  s.N = a.N;
  s.approxCharge = a.charge;
  double twoU = 2.0 * a.u;
  s.groupCount = static_cast<std::uint32_t>(
      std::max(1.0, std::ceil(twoU / std::max(1.0, std::log2(twoU)))));
  s.bitCount = cid_width(a.N);
  s.seasonLength = 2 * s.bitCount;
  s.namingSeasons = ceil_log2(a.N * a.N);  // exact form of ceil(2 * log2 N)
  s.watchSeasons = 1;
  s.handoffLength = s.bitCount;
  s.periodLength =
      std::uint64_t{s.namingSeasons + s.watchSeasons} * s.seasonLength + s.handoffLength;
  s.countingSlot = s.approxCharge + std::uint64_t{s.groupCount} * s.periodLength;
  s.namingTotal = s.countingSlot;
  s.countingTotal = s.countingSlot + s.handoffLength;
  return s;
}

// Each node independently draws its group, then its identifier, from its
// own substream. Groups are 0-based internally, 1-based in reports.
inline std::vector<NodeIdentity> sample_identities(std::size_t n, const Schedule& schedule,
                                                   std::uint64_t seed) {
  std::vector<NodeIdentity> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Substream rng(seed, static_cast<std::uint64_t>(i));
    out[i].group = static_cast<std::uint32_t>(rng.bounded(schedule.groupCount));
    out[i].id = rng.bounded_u128(schedule.N) + 1;
    out[i].cid = encode_cid(out[i].id, schedule.bitCount);
  }
  return out;
}

enum class GroupedRunMode : std::uint8_t { Naming, Counting };

class RandnamlProtocol {
 public:
  RandnamlProtocol(Schedule schedule, const std::vector<NodeIdentity>& identities,
                   GroupedRunMode mode)
      : schedule_(schedule), mode_(mode), n_(identities.size()) {
    groupOf_.resize(n_);
    localOf_.resize(n_);
    lPrev_.assign(n_, 0);
    globalLabel_.assign(n_, 0);
    decodedCount_.assign(n_, 0);

    std::vector<std::vector<NodeIndex>> members(schedule_.groupCount);
    std::vector<std::vector<Codeword>> cids(schedule_.groupCount);
    for (std::size_t i = 0; i < n_; ++i) {
      std::uint32_t g = identities[i].group;
      if (g >= schedule_.groupCount) throw std::invalid_argument("randnaml: group out of range");
      groupOf_[i] = g;
      localOf_[i] = static_cast<std::uint32_t>(members[g].size());
      members[g].push_back(static_cast<NodeIndex>(i));
      cids[g].push_back(identities[i].cid);
    }

    SeasonLayout layout{schedule_.bitCount, schedule_.seasonLength};
    TournamentOptions options;
    options.policy = WakePolicy::Scheduled;
    options.maxSeasons = schedule_.namingSeasons;
    options.watch = true;
    tournaments_.reserve(schedule_.groupCount);
    membersByGroup_ = std::move(members);
    for (std::uint32_t g = 0; g < schedule_.groupCount; ++g) {
      tournaments_.emplace_back(membersByGroup_[g], cids[g], layout, options);
    }

    phase_ = schedule_.approxCharge > 0 ? Phase::Approx : Phase::Season;
    approxLeft_ = schedule_.approxCharge;
  }

  bool done() const { return phase_ == Phase::Done; }
  std::size_t node_count() const { return n_; }

  void plan(Slot, std::vector<PlannedAction>& out) {
    switch (phase_) {
      case Phase::Approx:
        for (NodeIndex i = 0; i < n_; ++i) {
          out.push_back({i, SlotAction::Listen, WakeKind::Other});
        }
        break;
      case Phase::Season: {
        GroupTournament& t = tournaments_[g_];
        if (seasonOffset_ == 0) t.begin_season(season_);
        if (seasonOffset_ % 2 == 0) t.begin_pair(seasonOffset_ / 2);
        t.plan_sub(static_cast<int>(seasonOffset_ % 2), out);
        break;
      }
      case Phase::Handoff:
      case Phase::Counting:
        heardThisSlot_ = false;
        if (senderBits_[broadcastBit_] == 1) {
          for (NodeIndex s : senders_) out.push_back({s, SlotAction::Beep, WakeKind::Other});
        }
        for (NodeIndex l : *listeners_) out.push_back({l, SlotAction::Listen, WakeKind::Other});
        break;
      case Phase::Done:
        break;
    }
  }

  void observe(NodeIndex node, Slot, ChannelOutcome heard) {
    switch (phase_) {
      case Phase::Season:
        tournaments_[g_].observe_local(localOf_[node], heard);
        break;
      case Phase::Handoff:
      case Phase::Counting:
        if (heard == ChannelOutcome::BeepHeard) heardThisSlot_ = true;
        break;
      default:
        break;
    }
  }

  void end_slot(Slot slot, std::vector<Failure>& failures) {
    switch (phase_) {
      case Phase::Approx:
        if (--approxLeft_ == 0) enter_season(0);
        break;
      case Phase::Season: {
        GroupTournament& t = tournaments_[g_];
        if (seasonOffset_ % 2 == 1) t.end_pair();
        if (seasonOffset_ == schedule_.seasonLength - 1) {
          t.end_season(season_, slot, failures);
          harvest_labels(g_);
          if (season_ == seasonCap()) {
            enter_handoff();
          } else {
            ++season_;
            seasonOffset_ = 0;
          }
        } else {
          ++seasonOffset_;
        }
        break;
      }
      case Phase::Handoff:
        accum_ = (accum_ << 1) | (heardThisSlot_ ? 1u : 0u);
        if (broadcastBit_ + 1 == schedule_.handoffLength) {
          finish_handoff(slot, failures);
        } else {
          ++broadcastBit_;
        }
        break;
      case Phase::Counting:
        accum_ = (accum_ << 1) | (heardThisSlot_ ? 1u : 0u);
        if (broadcastBit_ + 1 == schedule_.handoffLength) {
          finish_counting(slot, failures);
        } else {
          ++broadcastBit_;
        }
        break;
      case Phase::Done:
        break;
    }
  }

  std::vector<std::uint64_t> labels() const { return globalLabel_; }
  const std::vector<std::uint64_t>& decoded_counts() const { return decodedCount_; }
  const GroupTournament& tournament(std::uint32_t g) const { return tournaments_[g]; }

  TraceSnapshot snapshot(NodeIndex node) const {
    TraceSnapshot s = tournaments_[groupOf_[node]].snapshot_local(localOf_[node]);
    s.label = globalLabel_[node];
    return s;
  }

  // Trace-only positional columns, computed from the slot number so they
  // stay valid after the cursor has advanced past the slot.
  std::optional<std::uint64_t> season_of(Slot slot) const {
    auto pos = naming_position(slot);
    if (!pos) return std::nullopt;
    auto [offsetInPeriod, period] = *pos;
    (void)period;
    std::uint64_t namingSlots = std::uint64_t{seasonCap()} * schedule_.seasonLength;
    if (offsetInPeriod >= namingSlots) return std::nullopt;  // handoff window
    return offsetInPeriod / schedule_.seasonLength + 1;
  }

  std::optional<std::uint64_t> period_of(Slot slot) const {
    auto pos = naming_position(slot);
    if (!pos) return std::nullopt;
    return pos->second;
  }

 private:
  enum class Phase : std::uint8_t { Approx, Season, Handoff, Counting, Done };

  std::uint32_t seasonCap() const { return schedule_.namingSeasons + schedule_.watchSeasons; }

  std::optional<std::pair<std::uint64_t, std::uint64_t>> naming_position(Slot slot) const {
    if (slot < schedule_.approxCharge || slot >= schedule_.namingTotal) return std::nullopt;
    std::uint64_t sinceStart = slot - schedule_.approxCharge;
    return std::make_pair(sinceStart % schedule_.periodLength,
                          sinceStart / schedule_.periodLength + 1);
  }

  void harvest_labels(std::uint32_t g) {
    for (NodeIndex node : membersByGroup_[g]) {
      if (globalLabel_[node] != 0) continue;
      std::uint64_t local = tournaments_[g].state(localOf_[node]).label;
      if (local != 0) globalLabel_[node] = local + lPrev_[node];
    }
  }

  void enter_season(std::uint32_t g) {
    g_ = g;
    season_ = 1;
    seasonOffset_ = 0;
    phase_ = Phase::Season;
  }

  void load_broadcast(std::uint32_t g) {
    senders_.clear();
    std::uint64_t value = 0;
    for (std::uint32_t local = 0; local < tournaments_[g].size(); ++local) {
      if (!tournaments_[g].is_last_label(local)) continue;
      NodeIndex node = membersByGroup_[g][local];
      senders_.push_back(node);
      value = globalLabel_[node];  // duplicates transmit the same value
    }
    senderValue_ = value;
    if (value == 0) {
      senderBits_.assign(schedule_.handoffLength, 0);  // empty group: silence
    } else {
      senderBits_ = encode_cid(value, schedule_.handoffLength).bits();
    }
    broadcastBit_ = 0;
    accum_ = 0;
    heardThisSlot_ = false;
  }

  // The last period's trailing window still ticks (the timeline is fixed)
  // but carries no transmission: there is no next group to hand off to, the
  // counting broadcast has its own window after the final period.
  void enter_handoff() {
    if (g_ + 1 < schedule_.groupCount) {
      load_broadcast(g_);
      listeners_ = &membersByGroup_[g_ + 1];
    } else {
      senders_.clear();
      senderBits_.assign(schedule_.handoffLength, 0);
      senderValue_ = 0;
      broadcastBit_ = 0;
      accum_ = 0;
      heardThisSlot_ = false;
      listeners_ = &kNoListeners;
    }
    phase_ = Phase::Handoff;
  }

  void finish_handoff(Slot slot, std::vector<Failure>& failures) {
    if (!listeners_->empty()) {
      for (NodeIndex node : *listeners_) lPrev_[node] = accum_;
      if (accum_ == 0 && g_ + 1 >= 2) {
        failures.push_back({FailureKind::EmptyGroup, slot,
                            "handoff after period " + std::to_string(g_ + 1) + " decoded 0"});
      }
    }
    if (g_ + 1 < schedule_.groupCount) {
      enter_season(g_ + 1);
    } else if (mode_ == GroupedRunMode::Counting) {
      enter_counting();
    } else {
      phase_ = Phase::Done;
    }
  }

  void enter_counting() {
    load_broadcast(schedule_.groupCount - 1);
    countListeners_.clear();
    countListeners_.reserve(n_);
    for (NodeIndex i = 0; i < n_; ++i) {
      bool sending = false;
      for (NodeIndex s : senders_) sending = sending || s == i;
      if (!sending) countListeners_.push_back(i);
    }
    listeners_ = &countListeners_;
    phase_ = Phase::Counting;
  }

  void finish_counting(Slot slot, std::vector<Failure>& failures) {
    for (NodeIndex node : *listeners_) decodedCount_[node] = accum_;
    for (NodeIndex s : senders_) decodedCount_[s] = senderValue_;
    if (accum_ == 0) {
      failures.push_back({FailureKind::EmptyGroup, slot, "empty last group: counting decoded 0"});
    }
    phase_ = Phase::Done;
  }

  static inline const std::vector<NodeIndex> kNoListeners{};

  Schedule schedule_;
  GroupedRunMode mode_;
  std::size_t n_ = 0;

  std::vector<std::uint32_t> groupOf_, localOf_;
  std::vector<std::vector<NodeIndex>> membersByGroup_;
  std::vector<GroupTournament> tournaments_;
  std::vector<std::uint64_t> lPrev_, globalLabel_, decodedCount_;

  Phase phase_ = Phase::Approx;
  std::uint32_t approxLeft_ = 0;
  std::uint32_t g_ = 0;           // active group, 0-based (period = g_ + 1)
  std::uint64_t season_ = 1;      // season within the period
  std::uint32_t seasonOffset_ = 0;

  std::vector<NodeIndex> senders_;
  std::vector<int> senderBits_;
  std::uint64_t senderValue_ = 0;
  const std::vector<NodeIndex>* listeners_ = &kNoListeners;
  std::vector<NodeIndex> countListeners_;
  std::uint32_t broadcastBit_ = 0;
  std::uint64_t accum_ = 0;
  bool heardThisSlot_ = false;
};

struct GroupedRunResult {
  Approximation approx;
  Schedule schedule;
  std::vector<NodeIdentity> identities;
  RunReport report;                         // labels are global labels
  std::vector<std::uint64_t> decodedCounts; // counting runs only
};

inline GroupedRunResult run_grouped(const Approximation& approx, const Schedule& schedule,
                                    std::vector<NodeIdentity> identities, GroupedRunMode mode,
                                    const EngineOptions& options = {}) {
  GroupedRunResult result;
  result.approx = approx;
  result.schedule = schedule;
  RandnamlProtocol protocol(schedule, identities, mode);
  result.identities = std::move(identities);
  result.report = run_protocol(protocol, options);
  if (mode == GroupedRunMode::Counting) result.decodedCounts = protocol.decoded_counts();
  return result;
}

inline GroupedRunResult randnaml_run(u128 nTrue, std::uint64_t seed, ApproxMode mode,
                                     const EngineOptions& options = {}) {
  Approximation approx = approximate_size(nTrue, seed, mode);
  Schedule schedule = build_schedule(approx);
  auto identities = sample_identities(static_cast<std::size_t>(nTrue), schedule, seed);
  return run_grouped(approx, schedule, std::move(identities), GroupedRunMode::Naming, options);
}

inline GroupedRunResult counting_run(u128 nTrue, std::uint64_t seed, ApproxMode mode,
                                     const EngineOptions& options = {}) {
  Approximation approx = approximate_size(nTrue, seed, mode);
  Schedule schedule = build_schedule(approx);
  auto identities = sample_identities(static_cast<std::size_t>(nTrue), schedule, seed);
  return run_grouped(approx, schedule, std::move(identities), GroupedRunMode::Counting, options);
}

}  // namespace beepsim
