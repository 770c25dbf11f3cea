#pragma once

// Single-hop beeping channel. In every synchronous slot a node beeps,
// listens, or sleeps. A listener hears BEEP_HEARD iff at least one other
// node beeps in that slot; with more than one beeper the channel still
// carries a single indistinguishable beep. Beeping and sleeping nodes get
// no feedback, and a node cannot listen while beeping, so it never hears
// its own beep.

#include <cstddef>
#include <cstdint>
#include <map>

namespace beepsim {

using NodeIndex = std::uint32_t;
using Slot = std::uint64_t;

enum class SlotAction : std::uint8_t { Beep, Listen, Sleep };
enum class ChannelOutcome : std::uint8_t { Silence, BeepHeard };

inline const char* action_name(SlotAction a) {
  switch (a) {
    case SlotAction::Beep: return "BEEP";
    case SlotAction::Listen: return "LISTEN";
    case SlotAction::Sleep: return "SLEEP";
  }
  return "?";
}

inline const char* outcome_name(ChannelOutcome o) {
  return o == ChannelOutcome::BeepHeard ? "BEEP_HEARD" : "SILENCE";
}

// Pure slot resolution: outcomes are produced for listeners only.
inline std::map<NodeIndex, ChannelOutcome> resolve_channel(
    const std::map<NodeIndex, SlotAction>& actions) {
  std::size_t beeps = 0;
  for (const auto& [node, action] : actions) {
    (void)node;
    if (action == SlotAction::Beep) ++beeps;
  }
  ChannelOutcome heard = beeps > 0 ? ChannelOutcome::BeepHeard : ChannelOutcome::Silence;
  std::map<NodeIndex, ChannelOutcome> out;
  for (const auto& [node, action] : actions) {
    if (action == SlotAction::Listen) out.emplace(node, heard);
  }
  return out;
}

}  // namespace beepsim
