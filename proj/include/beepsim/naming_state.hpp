#pragma once

// Per-node state for the deterministic naming tournament.
//
// A season is one full scan over the codeword: pair i occupies the two
// slots (t_2i, t_2i+1). Within a pair, a node holding bit 0 beeps first
// and listens second; a node holding bit 1 listens first and beeps second.
// Hearing a beep on the listening slot eliminates a 0-holder and promotes
// a 1-holder to eliminator. One node survives each season as candidate and
// takes the season index as its label.
//
// Between seasons a node remembers just enough to wake sparsely:
//   stl - the pair at which it was last eliminated (it must wake there to
//         re-check its eliminator),
//   stn - the pairs at which it eliminated someone (it must wake there to
//         keep the eliminated asleep).

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "channel.hpp"
#include "codeword.hpp"
#include "energy.hpp"
#include "int128.hpp"

namespace beepsim {

enum class Status : std::uint8_t { Null, Candidate, Eliminated, Eliminator };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::Null: return "NULL";
    case Status::Candidate: return "CANDIDATE";
    case Status::Eliminated: return "ELIMINATED";
    case Status::Eliminator: return "ELIMINATOR";
  }
  return "?";
}

// stl holds a pair index, or one of these two markers. The sentinel marks
// "no eliminator left above me" after a notification wake; any impossible
// slot value works, -2 shows up unambiguously in traces.
inline constexpr std::int32_t kStlNone = -1;
inline constexpr std::int32_t kStlSentinel = -2;

struct SeasonLayout {
  std::uint32_t bitCount = 0;      // pairs per season = codeword width
  std::uint32_t seasonLength = 0;  // slots per season = 2 * bitCount

  static SeasonLayout for_upper_bound(u128 upperBound) {
    SeasonLayout l;
    l.bitCount = cid_width(upperBound);
    l.seasonLength = 2 * l.bitCount;
    return l;
  }
};

// Set of pair indices, at most 128 pairs per season.
struct StnSet {
  u128 mask = 0;

  bool contains(std::uint32_t pair) const { return (mask >> pair) & 1; }
  void insert(std::uint32_t pair) { mask |= u128{1} << pair; }
  void erase(std::uint32_t pair) { mask &= ~(u128{1} << pair); }
  bool empty() const { return mask == 0; }

  friend bool operator==(const StnSet&, const StnSet&) = default;
};

struct NamingState {
  Codeword cid;
  Status status = Status::Null;
  std::int32_t stl = kStlNone;
  StnSet stn;
  std::uint64_t label = 0;  // 0 = unlabeled
};

// Action of the two-slot exchange: sub is 0 or 1 within the pair.
inline SlotAction test_action(int bit, int sub) {
  if (bit == 0) return sub == 0 ? SlotAction::Beep : SlotAction::Listen;
  return sub == 0 ? SlotAction::Listen : SlotAction::Beep;
}

// Outcome of the exchange given what the node heard on its listening slot.
// A 0-holder that hears a beep after beeping was outbid at this bit; a
// 1-holder that hears a beep before beeping has outbid someone.
inline Status test_result(int bit, ChannelOutcome heard) {
  if (bit == 0) {
    return heard == ChannelOutcome::BeepHeard ? Status::Eliminated : Status::Candidate;
  }
  return heard == ChannelOutcome::BeepHeard ? Status::Eliminator : Status::Candidate;
}

// Wake rule for pair i of season j (1-based). A candidate keeps testing; a
// null node wakes at its remembered slots, or everywhere in season one.
inline bool detnaml_should_wake(const NamingState& s, std::uint32_t pair, std::uint64_t season) {
  if (s.label != 0) return false;
  if (s.status == Status::Candidate) return true;
  if (s.status != Status::Null) return false;
  return s.stn.contains(pair) || s.stl == static_cast<std::int32_t>(pair) || season == 1;
}

// Energy attribution for a wake at pair i. The stn and stl triggers cannot
// both match one pair (an eliminator wake clears stl), but stn wins if a
// corrupted state ever presents both.
inline WakeKind detnaml_wake_kind(const NamingState& s, std::uint32_t pair, std::uint64_t season) {
  (void)season;
  if (s.status == Status::Candidate) return WakeKind::Other;
  if (s.stn.contains(pair)) return WakeKind::Stn;
  if (s.stl == static_cast<std::int32_t>(pair)) return WakeKind::Stl;
  return WakeKind::Other;
}

// State update after executing the exchange at pair i.
inline void detnaml_apply(NamingState& s, std::uint32_t pair, Status result) {
  switch (result) {
    case Status::Candidate:
      s.stn.erase(pair);
      if (s.cid.bit(pair) == 0) s.stl = kStlNone;
      s.status = Status::Candidate;
      break;
    case Status::Eliminated:
      s.stl = static_cast<std::int32_t>(pair);
      s.status = Status::Eliminated;
      break;
    case Status::Eliminator:
      s.stn.insert(pair);
      s.stl = kStlSentinel;
      s.status = Status::Candidate;
      break;
    case Status::Null:
      throw std::logic_error("detnaml_apply: exchange never yields NULL");
  }
}

struct SeasonEndResult {
  std::vector<std::size_t> labeled;  // indices into the span, label = season
  bool duplicate = false;            // more than one simultaneous candidate
};

// Season boundary: every unlabeled candidate takes the season index as its
// label (exactly one when identifiers are distinct; several simultaneous
// candidates mean duplicate identifiers and are reported, not repaired).
// Every node still unlabeled afterwards resets to NULL for the next season.
inline SeasonEndResult detnaml_season_end(std::span<NamingState> states, std::uint64_t season) {
  SeasonEndResult r;
  for (std::size_t i = 0; i < states.size(); ++i) {
    NamingState& s = states[i];
    if (s.label != 0) continue;
    if (s.status == Status::Candidate) {
      s.label = season;
      r.labeled.push_back(i);
    } else {
      s.status = Status::Null;
    }
  }
  r.duplicate = r.labeled.size() > 1;
  return r;
}

}  // namespace beepsim
