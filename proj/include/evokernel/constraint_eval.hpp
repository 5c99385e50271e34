#pragma once

#include "evokernel/constraints.hpp"
#include "evokernel/history.hpp"

namespace evokernel {

struct EvalError : KernelError {
    using KernelError::KernelError;
};

// Evaluates a constraint over a closed tick interval of a history. TOTAL
// and UNIQUE are checked at every tick of the interval; BEFORE/EQUALS reads
// first-entry ticks across the whole interval. Role references resolve
// against the universe's fact-type signatures; a reference no fact type of
// the universe carries is an error (unknown-role / unknown-otype).
bool eval_constraint(const History& h, const TickRange& interval, const ConstraintAst& ast);

}  // namespace evokernel
