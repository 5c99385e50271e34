#pragma once

#include <random>

#include "evokernel/constraints.hpp"
#include "evokernel/history.hpp"
#include "evokernel/report.hpp"

namespace evokernel {

// Bounds for randomly drawn well-formed histories. Values are clamped to
// small caps (8 types, 6 instances, 6 ticks) so the exhaustive
// cross-checks stay exhaustive in practice.
struct SmallUniverseSpec {
    std::size_t max_otypes = 5;
    std::size_t max_instances = 4;
    std::uint64_t max_ticks = 5;
    std::uint64_t seed = 0;
};

// Draws a random history that is well-formed by construction (a forest of
// object types with nested life intervals, chain typings with fresh
// values, matching label concretisations, explicit adapter, no
// constraints) and certifies it with the full validation suite before
// returning. Deterministic per seed. Throws KernelError when no candidate
// survives certification within the retry budget.
History generate_history(const SmallUniverseSpec& spec);

// Independent enumeration of the structural consequences a well-formed
// history must exhibit: shared roots coincide with type relatedness
// (CommonRoots, TypeRelPropagation), populations distribute over root
// populations (PopDist), every active type set is rooted (RootActive),
// and unrelated types never share instances, per tick (ExclPop) and over
// all time (StrongTyping). Everything is recomputed by direct scans over
// runs and relation pairs, bypassing the kernel's derivation helpers.
// Intended for small histories; call on well-formed input.
ValidationReport oracle_check_lemmas(const History& h);

// Reference evaluator: walks every tick of the interval and recomputes
// populations by scanning runs directly. Semantics match eval_constraint;
// only the computation strategy differs.
bool oracle_eval_constraint(const History& h, const TickRange& interval,
                            const ConstraintAst& ast);

// Random constraint over the universe's actual signature: role references
// drawn from real fact-type signatures, transition constraints from real
// type names. Shapes cover all four node kinds.
AstPtr generate_random_ast(const Universe& u, std::mt19937& rng);

}  // namespace evokernel
