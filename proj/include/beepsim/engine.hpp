#pragma once

// Synchronous slot engine. Each slot:
//   1. ask the protocol which nodes are awake and what they do (sparse
//      plan: sleeping nodes are simply absent),
//   2. charge energy for every beep and listen,
//   3. resolve the shared channel: every listener hears a beep iff at
//      least one other node beeped (beepers and sleepers learn nothing),
//   4. deliver outcomes to listeners, then let the protocol close the slot,
//   5. optionally emit one trace row per awake node.
//
// The engine never iterates over all nodes per slot; protocols are expected
// to plan in time proportional to the number of awake nodes.

#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "channel.hpp"
#include "energy.hpp"
#include "trace.hpp"

namespace beepsim {

enum class FailureKind : std::uint8_t { DuplicateLabel, GroupOverflow, EmptyGroup };

inline const char* failure_name(FailureKind k) {
  switch (k) {
    case FailureKind::DuplicateLabel: return "duplicate label";
    case FailureKind::GroupOverflow: return "group overflow";
    case FailureKind::EmptyGroup: return "empty group";
  }
  return "?";
}

struct Failure {
  FailureKind kind;
  Slot slot = 0;
  std::string detail;
};

struct PlannedAction {
  NodeIndex node = 0;
  SlotAction action = SlotAction::Sleep;
  WakeKind kind = WakeKind::Other;
};

struct RunReport {
  std::size_t nodes = 0;
  EnergyLedger energy;
  std::vector<std::uint64_t> labels;
  std::vector<Failure> failures;

  bool failure_free() const { return failures.empty(); }

  std::string to_text() const {
    std::ostringstream os;
    os << "nodes\t" << nodes << '\n';
    os << "slots\t" << energy.totalSlots << '\n';
    os << "maxAwake\t" << energy.max_awake() << '\n';
    std::uint64_t beeps = 0, listens = 0;
    for (const auto& e : energy.nodes) {
      beeps += e.beeps;
      listens += e.listens;
    }
    os << "beeps\t" << beeps << '\n';
    os << "listens\t" << listens << '\n';
    if (failures.empty()) {
      os << "failures\tnone\n";
    } else {
      for (const auto& f : failures) {
        os << "failure\t" << failure_name(f.kind) << "\tslot " << f.slot << '\t' << f.detail << '\n';
      }
    }
    return os.str();
  }
};

struct EngineOptions {
  std::ostream* trace = nullptr;  // emit TSV rows when set
  std::uint64_t maxSlots = std::uint64_t{1} << 40;  // guard against stuck protocols
};

template <typename P>
concept Protocol = requires(P p, const P cp, Slot slot, NodeIndex node, ChannelOutcome outcome,
                            std::vector<PlannedAction>& plan, std::vector<Failure>& failures) {
  { cp.done() } -> std::convertible_to<bool>;
  { cp.node_count() } -> std::convertible_to<std::size_t>;
  { p.plan(slot, plan) };
  { p.observe(node, slot, outcome) };
  { p.end_slot(slot, failures) };
  { cp.labels() } -> std::convertible_to<std::vector<std::uint64_t>>;
  { cp.snapshot(node) } -> std::convertible_to<TraceSnapshot>;
  { cp.season_of(slot) } -> std::convertible_to<std::optional<std::uint64_t>>;
  { cp.period_of(slot) } -> std::convertible_to<std::optional<std::uint64_t>>;
};

template <Protocol P>
RunReport run_protocol(P& protocol, const EngineOptions& options = {}) {
  RunReport report;
  report.nodes = protocol.node_count();
  report.energy.nodes.assign(report.nodes, NodeEnergy{});

  std::optional<TraceWriter> trace;
  if (options.trace != nullptr) trace.emplace(*options.trace);

  std::vector<PlannedAction> plan;
  std::vector<ChannelOutcome> heard;  // parallel to plan, listeners only
  Slot slot = 0;
  while (!protocol.done()) {
    if (slot >= options.maxSlots) throw std::runtime_error("run_protocol: slot budget exhausted");

    plan.clear();
    protocol.plan(slot, plan);

    std::uint64_t beepers = 0;
    for (const PlannedAction& a : plan) {
      if (a.action == SlotAction::Sleep) throw std::logic_error("run_protocol: planned SLEEP");
      report.energy.charge(a.node, a.action, a.kind);
      if (a.action == SlotAction::Beep) ++beepers;
    }

    heard.assign(plan.size(), ChannelOutcome::Silence);
    for (std::size_t i = 0; i < plan.size(); ++i) {
      if (plan[i].action != SlotAction::Listen) continue;
      heard[i] = beepers > 0 ? ChannelOutcome::BeepHeard : ChannelOutcome::Silence;
      protocol.observe(plan[i].node, slot, heard[i]);
    }

    protocol.end_slot(slot, report.failures);

    if (trace) {
      for (std::size_t i = 0; i < plan.size(); ++i) {
        TraceEvent e;
        e.slot = slot;
        e.season = protocol.season_of(slot);
        e.period = protocol.period_of(slot);
        e.node = plan[i].node;
        e.action = plan[i].action;
        if (plan[i].action == SlotAction::Listen) e.outcome = heard[i];
        e.after = protocol.snapshot(plan[i].node);
        trace->write(e);
      }
    }

    ++slot;
    report.energy.totalSlots = slot;
  }

  report.labels = protocol.labels();
  return report;
}

}  // namespace beepsim
