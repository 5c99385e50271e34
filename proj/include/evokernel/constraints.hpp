#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "evokernel/isu.hpp"

namespace evokernel {

struct ParseError : KernelError {
    std::size_t position;
    ParseError(const std::string& msg, std::size_t pos)
        : KernelError(msg + " (at offset " + std::to_string(pos) + ")"),
          position(pos) {}
};

// "Otype.role": the role named `role` as played by `otype`.
struct RoleRef {
    std::string otype;
    std::string role;

    auto operator<=>(const RoleRef&) const = default;
    std::string render() const { return otype + "." + role; }
};

// Declarative guard language over populations:
//   TOTAL  { refs } - every member of the referenced populations plays at
//                     least one of the referenced roles, at every tick;
//   UNIQUE { refs } - per referenced role, no value fills it in two
//                     distinct alive tuples, at every tick;
//   a AND b         - conjunction;
//   ( x BEFORE y ) EQUALS z
//                   - every member of z's population entered x's population
//                     strictly before it first entered y's (first entries
//                     within the evaluation interval; never entering y is
//                     acceptable).
struct ConstraintAst {
    enum class Kind { Total, Unique, And, BeforeEquals };

    Kind kind = Kind::Total;
    std::set<RoleRef> refs;                                       // Total, Unique
    std::vector<std::shared_ptr<const ConstraintAst>> children;   // And
    std::string earlier, later, target;                           // BeforeEquals

    bool operator==(const ConstraintAst& other) const;
    std::string render() const;
};

using AstPtr = std::shared_ptr<const ConstraintAst>;

// Surface syntax, e.g.
//   TOTAL { Manufacturer.builds }
//   TOTAL { Airplane.build-by } AND UNIQUE { Airplane.has-as }
//   ( Unregistered-airplane BEFORE Registered-airplane ) EQUALS Airplane
// Identifiers are [A-Za-z_][A-Za-z0-9_-]*. Empty ref sets are rejected.
AstPtr parse_constraint(const std::string& text);

// And-flattened conjunct list; multi-ref UNIQUE nodes split per ref (their
// semantics is the conjunction of the singletons). TOTAL nodes do not split.
std::vector<AstPtr> flatten_conjuncts(const AstPtr& ast);

enum class ImplicationValue { Implied, NotImplied, Unknown };

inline const char* to_string(ImplicationValue v) {
    switch (v) {
        case ImplicationValue::Implied: return "implied";
        case ImplicationValue::NotImplied: return "not-implied";
        case ImplicationValue::Unknown: return "unknown";
    }
    return "unknown";
}

struct ImplicationVerdict {
    ImplicationValue value = ImplicationValue::Unknown;
    std::string justification;  // subsumption trace or counterexample; empty for Unknown
};

// Does d1 strengthen d2, i.e. every history satisfying d1 satisfies d2?
// Implied by syntactic conjunct subsumption (sound); NotImplied when a
// bounded search finds a small history satisfying d1 but not d2 (sound,
// constructive); Unknown otherwise. Deterministic.
ImplicationVerdict constr_implies(const AstPtr& d1, const AstPtr& d2);

}  // namespace evokernel
