#pragma once

// Deterministic naming tournaments over the beeping channel.
//
// GroupTournament drives one set of competing nodes season by season and is
// shared by the standalone protocol, the always-awake reference, and the
// grouped randomized algorithm (which adds a season cap and a watch season).
//
// Wake policies:
//   Scheduled   - nodes sleep except at remembered pairs (stl/stn), season
//                 one, and while they are the running candidate,
//   AlwaysAwake - every unlabeled, non-eliminated node tests every pair;
//                 labels come out identical, energy does not. This is the
//                 labeling oracle.
//
// Per slot the tournament does work proportional to the number of awake
// nodes: season rosters index scheduled wakers by pair, candidates are kept
// in a compacted list, and sleeping nodes are never touched.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "codeword.hpp"
#include "engine.hpp"
#include "naming_state.hpp"

namespace beepsim {

enum class WakePolicy : std::uint8_t { Scheduled, AlwaysAwake };

struct TournamentOptions {
  WakePolicy policy = WakePolicy::Scheduled;
  std::uint64_t maxSeasons = 0;  // 0 = run until everyone is labeled
  bool watch = false;            // labeled nodes listen through the next season
};

class GroupTournament {
 public:
  GroupTournament() = default;

  GroupTournament(std::vector<NodeIndex> members, const std::vector<Codeword>& cids,
                  SeasonLayout layout, TournamentOptions options)
      : members_(std::move(members)), layout_(layout), options_(options) {
    states_.resize(members_.size());
    for (std::size_t i = 0; i < members_.size(); ++i) states_[i].cid = cids[i];
    entryOf_.assign(members_.size(), -1);
    watching_.assign(members_.size(), 0);
    watchHeard_.assign(members_.size(), 0);
    lastLabel_.assign(members_.size(), 0);
    unlabeled_ = members_.size();
  }

  std::size_t size() const { return members_.size(); }
  bool all_labeled() const { return unlabeled_ == 0; }
  bool overflowed() const { return overflowed_; }
  std::uint64_t seasons_used() const { return seasonsUsed_; }

  const NamingState& state(std::uint32_t local) const { return states_[local]; }
  bool is_last_label(std::uint32_t local) const { return lastLabel_[local] != 0; }

  // Local index of the node that concluded it holds the group's last label
  // (first claimant on duplicate runs), or nullopt.
  std::optional<std::uint32_t> last_label_holder() const {
    for (std::uint32_t i = 0; i < lastLabel_.size(); ++i) {
      if (lastLabel_[i]) return i;
    }
    return std::nullopt;
  }

  // Season j (1-based) starts: rebuild the wake roster from the remembered
  // slots of still-unlabeled nodes, and move last season's winners into the
  // watch list.
  void begin_season(std::uint64_t j) {
    season_ = j;
    if (options_.watch) {
      watchers_ = pendingWatchers_;
      for (std::uint32_t w : watchers_) {
        watching_[w] = 1;
        watchHeard_[w] = 0;
      }
      pendingWatchers_.clear();
    }
    labelingOpen_ = options_.maxSeasons == 0 || j <= options_.maxSeasons;
    candidates_.clear();
    if (!labelingOpen_ || all_labeled()) {
      wakersByPair_.clear();
      return;
    }
    if (options_.policy == WakePolicy::AlwaysAwake) return;
    if (wakersByPair_.size() != layout_.bitCount) wakersByPair_.resize(layout_.bitCount);
    for (auto& wakers : wakersByPair_) wakers.clear();  // keep capacity across seasons
    for (std::uint32_t i = 0; i < states_.size(); ++i) {
      const NamingState& s = states_[i];
      if (s.label != 0) continue;
      if (j == 1) {
        wakersByPair_[0].push_back(i);  // everyone tests pair 0; nobody is NULL after it
        continue;
      }
      if (s.stl >= 0) wakersByPair_[s.stl].push_back(i);
      for (std::uint32_t pair = 0; pair < layout_.bitCount; ++pair) {
        if (s.stn.contains(pair)) wakersByPair_[pair].push_back(i);
      }
    }
  }

  // First slot of pair i: decide who is awake for both slots of the pair.
  void begin_pair(std::uint32_t pair) {
    for (const PairEntry& e : pairRoster_) entryOf_[e.local] = -1;
    pairRoster_.clear();
    if (!labelingOpen_ || all_labeled()) return;
    if (options_.policy == WakePolicy::AlwaysAwake) {
      for (std::uint32_t i = 0; i < states_.size(); ++i) {
        const NamingState& s = states_[i];
        if (s.label != 0 || s.status == Status::Eliminated) continue;
        add_entry(i, pair, WakeKind::Other);
      }
      return;
    }
    if (pair < wakersByPair_.size()) {
      for (std::uint32_t i : wakersByPair_[pair]) {
        const NamingState& s = states_[i];
        if (s.label != 0 || s.status != Status::Null) continue;  // stale entry
        add_entry(i, pair, detnaml_wake_kind(s, pair, season_));
      }
    }
    std::size_t keep = 0;
    for (std::uint32_t i : candidates_) {
      if (states_[i].status != Status::Candidate || states_[i].label != 0) continue;
      candidates_[keep++] = i;
      if (entryOf_[i] < 0) add_entry(i, pair, WakeKind::Other);
    }
    candidates_.resize(keep);
    std::sort(pairRoster_.begin(), pairRoster_.end(),
              [](const PairEntry& a, const PairEntry& b) { return a.local < b.local; });
    for (std::size_t k = 0; k < pairRoster_.size(); ++k) {
      entryOf_[pairRoster_[k].local] = static_cast<std::int32_t>(k);
    }
  }

  // Actions for sub-slot 0 or 1 of the current pair, plus watch listens.
  void plan_sub(int sub, std::vector<PlannedAction>& out) const {
    for (const PairEntry& e : pairRoster_) {
      out.push_back({members_[e.local], test_action(e.bit, sub), e.kind});
    }
    for (std::uint32_t w : watchers_) {
      out.push_back({members_[w], SlotAction::Listen, WakeKind::Other});
    }
  }

  void observe_local(std::uint32_t local, ChannelOutcome heard) {
    std::int32_t e = entryOf_[local];
    if (e >= 0) {
      pairRoster_[static_cast<std::size_t>(e)].heard = heard;
      return;
    }
    if (watching_[local] && heard == ChannelOutcome::BeepHeard) watchHeard_[local] = 1;
  }

  // Last slot of the pair: every tester's exchange is complete, apply it.
  void end_pair() {
    for (const PairEntry& e : pairRoster_) {
      NamingState& s = states_[e.local];
      bool wasCandidate = s.status == Status::Candidate;
      detnaml_apply(s, e.pair, test_result(e.bit, e.heard));
      if (!wasCandidate && s.status == Status::Candidate) candidates_.push_back(e.local);
    }
  }

  // Last slot of season j: hand out labels, settle watchers, detect overflow.
  void end_season(std::uint64_t j, Slot globalSlot, std::vector<Failure>& failures) {
    seasonsUsed_ = j;
    if (labelingOpen_ && !all_labeled()) {
      SeasonEndResult r = detnaml_season_end(states_, j);
      unlabeled_ -= r.labeled.size();
      if (r.duplicate) {
        failures.push_back({FailureKind::DuplicateLabel, globalSlot,
                            std::to_string(r.labeled.size()) + " simultaneous candidates in season " +
                                std::to_string(j)});
      }
      if (options_.watch) {
        for (std::size_t idx : r.labeled) pendingWatchers_.push_back(static_cast<std::uint32_t>(idx));
      }
      if (options_.maxSeasons != 0 && j == options_.maxSeasons && !all_labeled()) {
        overflowed_ = true;
        failures.push_back({FailureKind::GroupOverflow, globalSlot,
                            std::to_string(unlabeled_) + " nodes unlabeled after season " + std::to_string(j)});
      }
    }
    for (std::uint32_t w : watchers_) {
      watching_[w] = 0;
      if (!watchHeard_[w]) lastLabel_[w] = 1;
    }
    watchers_.clear();
  }

  TraceSnapshot snapshot_local(std::uint32_t local) const {
    const NamingState& s = states_[local];
    return {s.status, s.stl, s.stn, s.label};
  }

  std::vector<std::uint64_t> labels() const {
    std::vector<std::uint64_t> out(states_.size());
    for (std::size_t i = 0; i < states_.size(); ++i) out[i] = states_[i].label;
    return out;
  }

 private:
  struct PairEntry {
    std::uint32_t local = 0;
    std::uint32_t pair = 0;
    std::uint8_t bit = 0;
    WakeKind kind = WakeKind::Other;
    ChannelOutcome heard = ChannelOutcome::Silence;
  };

  void add_entry(std::uint32_t local, std::uint32_t pair, WakeKind kind) {
    entryOf_[local] = static_cast<std::int32_t>(pairRoster_.size());
    pairRoster_.push_back({local, pair, static_cast<std::uint8_t>(states_[local].cid.bit(pair)), kind,
                           ChannelOutcome::Silence});
  }

  std::vector<NodeIndex> members_;
  std::vector<NamingState> states_;
  SeasonLayout layout_;
  TournamentOptions options_;

  std::uint64_t season_ = 0;
  std::uint64_t seasonsUsed_ = 0;
  std::size_t unlabeled_ = 0;
  bool labelingOpen_ = true;
  bool overflowed_ = false;

  std::vector<std::vector<std::uint32_t>> wakersByPair_;
  std::vector<std::uint32_t> candidates_;
  std::vector<PairEntry> pairRoster_;
  std::vector<std::int32_t> entryOf_;

  std::vector<std::uint32_t> watchers_, pendingWatchers_;
  std::vector<std::uint8_t> watching_, watchHeard_, lastLabel_;
};

// Engine adapter for a single free-running tournament (no season cap, no
// watch): the standalone deterministic protocol, or its always-awake
// reference under the other policy.
class DetnamlProtocol {
 public:
  DetnamlProtocol(const std::vector<u128>& ids, u128 upperBound, WakePolicy policy)
      : layout_(SeasonLayout::for_upper_bound(upperBound)) {
    std::vector<NodeIndex> members(ids.size());
    std::vector<Codeword> cids;
    cids.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] < 1 || ids[i] > upperBound) {
        throw std::invalid_argument("detnaml: id " + to_string(ids[i]) + " outside [1, N]");
      }
      members[i] = static_cast<NodeIndex>(i);
      cids.push_back(encode_cid(ids[i], layout_.bitCount));
    }
    TournamentOptions options;
    options.policy = policy;
    tournament_ = GroupTournament(std::move(members), cids, layout_, options);
  }

  bool done() const { return tournament_.all_labeled(); }
  std::size_t node_count() const { return tournament_.size(); }

  void plan(Slot slot, std::vector<PlannedAction>& out) {
    std::uint64_t offset = slot % layout_.seasonLength;
    if (offset == 0) tournament_.begin_season(slot / layout_.seasonLength + 1);
    if (offset % 2 == 0) tournament_.begin_pair(static_cast<std::uint32_t>(offset / 2));
    tournament_.plan_sub(static_cast<int>(offset % 2), out);
  }

  void observe(NodeIndex node, Slot, ChannelOutcome heard) { tournament_.observe_local(node, heard); }

  void end_slot(Slot slot, std::vector<Failure>& failures) {
    std::uint64_t offset = slot % layout_.seasonLength;
    if (offset % 2 == 1) tournament_.end_pair();
    if (offset == layout_.seasonLength - 1) {
      tournament_.end_season(slot / layout_.seasonLength + 1, slot, failures);
    }
  }

  std::vector<std::uint64_t> labels() const { return tournament_.labels(); }
  TraceSnapshot snapshot(NodeIndex node) const { return tournament_.snapshot_local(node); }
  std::optional<std::uint64_t> season_of(Slot slot) const { return slot / layout_.seasonLength + 1; }
  std::optional<std::uint64_t> period_of(Slot) const { return std::nullopt; }

  const SeasonLayout& layout() const { return layout_; }

 private:
  SeasonLayout layout_;
  GroupTournament tournament_;
};

inline RunReport detnaml_run(const std::vector<u128>& ids, u128 upperBound,
                             const EngineOptions& options = {}) {
  if (ids.empty()) {
    RunReport empty;
    return empty;
  }
  DetnamlProtocol protocol(ids, upperBound, WakePolicy::Scheduled);
  return run_protocol(protocol, options);
}

inline RunReport reference_detnaml_run(const std::vector<u128>& ids, u128 upperBound,
                                       const EngineOptions& options = {}) {
  if (ids.empty()) {
    RunReport empty;
    return empty;
  }
  DetnamlProtocol protocol(ids, upperBound, WakePolicy::AlwaysAwake);
  return run_protocol(protocol, options);
}

}  // namespace beepsim
