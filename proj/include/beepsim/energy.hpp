#pragma once

// Per-node energy accounting. A node spends one unit of energy per slot in
// which it beeps or listens; sleeping is free. Awake slots are attributed
// to one of three buckets by what triggered the wake-up:
//   wStl   - wake at the slot stored in the node's elimination record
//   wStn   - wake at a slot stored in the node's notification set
//   wOther - everything else (first-season scans, candidate continuation,
//            watch listening, handoff and counting traffic, size probing)
// The identity awake == wStl + wStn + wOther holds exactly at all times.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "channel.hpp"

namespace beepsim {

enum class WakeKind : std::uint8_t { Stl, Stn, Other };

struct NodeEnergy {
  std::uint64_t beeps = 0;
  std::uint64_t listens = 0;
  std::uint64_t wStl = 0;
  std::uint64_t wStn = 0;
  std::uint64_t wOther = 0;

  std::uint64_t awake() const { return beeps + listens; }
};

struct EnergyLedger {
  std::vector<NodeEnergy> nodes;
  std::uint64_t totalSlots = 0;

  EnergyLedger() = default;
  explicit EnergyLedger(std::size_t nodeCount) : nodes(nodeCount) {}

  void charge(NodeIndex node, SlotAction action, WakeKind kind, std::uint64_t slots = 1) {
    NodeEnergy& e = nodes.at(node);
    switch (action) {
      case SlotAction::Beep: e.beeps += slots; break;
      case SlotAction::Listen: e.listens += slots; break;
      case SlotAction::Sleep: throw std::logic_error("charge: sleeping costs nothing");
    }
    switch (kind) {
      case WakeKind::Stl: e.wStl += slots; break;
      case WakeKind::Stn: e.wStn += slots; break;
      case WakeKind::Other: e.wOther += slots; break;
    }
  }

  std::uint64_t max_awake() const {
    std::uint64_t m = 0;
    for (const NodeEnergy& e : nodes) m = e.awake() > m ? e.awake() : m;
    return m;
  }
};

}  // namespace beepsim
