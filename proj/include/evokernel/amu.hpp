#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "evokernel/constraints.hpp"
#include "evokernel/isu.hpp"
#include "evokernel/values.hpp"

namespace evokernel {

// A constraint definition: the surface text plus its parsed form. Equality
// is structural on the parsed form.
struct ConstraintDef {
    std::string text;
    AstPtr ast;

    static ConstraintDef parse(std::string text);
    bool operator==(const ConstraintDef& other) const;
};

// Everything a definition depends on: object types and concrete-domain
// assignments (label type, domain name).
struct DependsSet {
    std::set<std::string> otypes;
    std::set<std::pair<std::string, std::string>> domains;

    bool operator==(const DependsSet&) const = default;
    void merge(const DependsSet& other) {
        otypes.insert(other.otypes.begin(), other.otypes.end());
        domains.insert(other.domains.begin(), other.domains.end());
    }
};

// A role reference depends on its named player type and on every fact type
// of the universe that carries the referenced role for that player.
DependsSet depends_of(const ConstraintDef& def, const Universe& u);

// --- Technique adapter ---------------------------------------------------
//
// The Er adapter interprets the schema fields of ObjectTypeInfo; the
// Explicit adapter trusts the stored relations and accepts any schema and
// population (is_schema / is_pop constantly true).

// Unique top of x's hierarchy. Throws UniverseError: unknown-object-type,
// non-unique-top.
std::string er_top(const Universe& u, const std::string& x);

// Derived relatedness: equal tops.
bool er_type_related(const Universe& u, const std::string& x, const std::string& y);

// Every schema reference of a member stays inside the set: role players of
// fact types, declared supertypes, owners of label types, element types of
// power types. Vacuously true for the empty set.
bool er_is_schema(const Universe& u, const std::set<std::string>& otypes);

// Shape and closure rules for a population snapshot:
//  - label-typed values are atomic; entity-typed values are surrogates;
//    fact-typed values are tuples matching the role signature exactly;
//    power-typed values are sets;
//  - tuple role values populate the role's player type within the snapshot
//    (atomic, for label players);
//  - set members populate the power type's element type.
bool er_check_is_pop(const Universe& u, const std::set<std::string>& alive,
                     const std::vector<InstanceTyping>& typings);

// Adapter dispatch on u.adapter().
bool adapter_is_schema(const Universe& u, const std::set<std::string>& otypes);
bool adapter_is_pop(const Universe& u, const std::set<std::string>& alive,
                    const std::vector<InstanceTyping>& typings);

}  // namespace evokernel
