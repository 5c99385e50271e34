#pragma once

#include <variant>
#include <vector>

#include "evokernel/history.hpp"
#include "evokernel/report.hpp"
#include "evokernel/version.hpp"

namespace evokernel {

// Structural faults inside an event transaction. `kind` is one of:
// "precondition", "unknown-element-id", "duplicate-element-id",
// "terminate-dead", "class-mismatch", "event-order", "malformed-edit".
class EventError : public KernelError {
public:
    std::string kind;

    EventError(std::string k, const std::string& msg)
        : KernelError(msg), kind(std::move(k)) {}
};

// A structurally well-formed transaction whose result would break the
// history's well-formedness; the report explains what would break.
struct RejectedEvent {
    Tick at;
    ValidationReport report;
};

using ApplyOutcome = std::variant<History, RejectedEvent>;

// Every version a track carries has the class of its evolution.
ValidationReport check_separation(const History& h);

// An ancestor link between two object evolutions never silently drops
// while the two stay type-related: for evolutions h1, h2 defined at t and
// t+1, h1(t) ancestor-of h2(t) and h1(t+1) ~ h2(t+1) imply h1(t+1)
// ancestor-of h2(t+1). A passing pair additionally certifies the
// promotion law (a type promoted to a root forces its old ancestors to
// terminate); its failure alone is an internal inconsistency.
ValidationReport check_monotonous_ancestors(const History& h);

// Every step of an instance evolution keeps some object evolution aligned
// with it: for g defined at t and t+1 there is an object evolution h
// defined at both with h(t) ~ types(g, t) implying h(t+1) ~ types(g, t+1)
// (relatedness to a set being relatedness to some member). Violations are
// reported at state-change boundaries.
ValidationReport check_guided_evolution(const History& h);

// Every alive constraint definition holds over the largest interval,
// ending at the tick under scrutiny, throughout which the definition was
// in force unchanged; evaluation sees only that slice of the history.
ValidationReport check_constraints_hold(const History& h);

// The full well-formedness suite: universe axioms, every distinct
// snapshot's version checks, the four evolution checks above, and the
// cross-time typing discipline.
ValidationReport validate_history(const History& h);

bool is_amh(const History& h);

// Applies one transaction at tick t. Requires the history to be frozen at
// t (no changes after t, t at or beyond the horizon); edits take effect at
// t+1. Throws EventError on structural faults; returns RejectedEvent when
// a well-formed history would stop being well-formed. The input history is
// never modified.
ApplyOutcome apply_event(const History& h, Tick t, const TransactionBody& edits);

// Folds apply_event over events in strictly ascending tick order; stops at
// the first rejection. Throws EventError on unordered or duplicated ticks.
ApplyOutcome replay(History h, const std::vector<EventOccurrence>& events);

// The history is exactly the story the events tell: each event replays
// its own step (apply on the prefix before it yields the prefix after
// it), and every change tick beyond the initial state is backed by an
// event one tick earlier.
bool behaves(const std::vector<EventOccurrence>& events, const History& h);

// Well-behaved and well-formed at every moment of its life.
bool is_eis(const std::vector<EventOccurrence>& events, const History& h);

// Convenience transaction body: every instance typing alive at t that
// carries `subtype` gains `supertype` as well.
TransactionBody upcast_retyping_edits(const History& h, Tick t,
                                      const std::string& subtype,
                                      const std::string& supertype);

}  // namespace evokernel
