#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "evokernel/report.hpp"

namespace evokernel {

struct KernelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UniverseError : KernelError {
    using KernelError::KernelError;
};

enum class TypeKind { Label, NonLabel };

// One object type of the evolution state space. Versions of an evolving
// type are distinct entries here (e.g. a fact type before and after it is
// retargeted). The optional fields describe schema structure used by the
// ER-style adapter: role signatures on non-label types, a declared
// supertype (one covering parent_of edge), an owning type for label
// (attribute) types, and an element type for power types.
struct ObjectTypeInfo {
    std::string name;
    TypeKind kind = TypeKind::NonLabel;
    std::map<std::string, std::string> roles;  // role name -> player type
    std::optional<std::string> supertype;
    std::optional<std::string> owner;
    std::optional<std::string> power_of;
};

enum class AdapterKind { Er, Explicit };

using NamePair = std::pair<std::string, std::string>;
using RelationSet = std::set<NamePair>;

// Information structure universe: the finite set of object types together
// with the type-relatedness relation (~, reflexive-symmetric) and the
// ancestor relation (parent_of, transitively closed). Both closures are
// applied at construction; the relations cover the state space as a whole
// and do not evolve.
class Universe {
public:
    // `type_rel` and `parent_of` are covering pairs; parent_of pairs are
    // (ancestor, offspring). With the Er adapter and no explicit type_rel,
    // relatedness is derived from hierarchy tops. Throws UniverseError on
    // dangling name references or a non-unique top during derivation.
    static std::shared_ptr<const Universe> create(
        std::vector<ObjectTypeInfo> otypes, RelationSet type_rel,
        RelationSet parent_of, AdapterKind adapter);

    const std::map<std::string, ObjectTypeInfo>& otypes() const { return otypes_; }
    AdapterKind adapter() const { return adapter_; }
    const RelationSet& type_rel() const { return type_rel_; }
    const RelationSet& parent_of_pairs() const { return parent_of_; }
    bool explicit_type_rel_given() const { return explicit_type_rel_given_; }

    bool has_otype(const std::string& x) const { return otypes_.count(x) != 0; }
    const ObjectTypeInfo& info(const std::string& x) const;

    bool type_related(const std::string& x, const std::string& y) const;
    bool parent_of(const std::string& x, const std::string& y) const;

    bool is_root(const std::string& x) const;
    // x RootOf y: (x == y or x parent_of y) and x is a root.
    bool root_of(const std::string& x, const std::string& y) const;
    std::set<std::string> roots_of(const std::string& y) const;
    std::set<std::string> ancestors_of(const std::string& y) const;

    // Sub-universe over the given alive types: relations restricted to
    // alive pairs, adapter and type info carried over. Used for the
    // per-version information structure.
    Universe restricted_to(const std::set<std::string>& alive) const;

    bool operator==(const Universe& other) const {
        return otypes_names_equal(other) && type_rel_ == other.type_rel_ &&
               parent_of_ == other.parent_of_ && adapter_ == other.adapter_;
    }

private:
    std::map<std::string, ObjectTypeInfo> otypes_;
    RelationSet type_rel_;
    RelationSet parent_of_;
    AdapterKind adapter_ = AdapterKind::Explicit;
    bool explicit_type_rel_given_ = false;

    bool otypes_names_equal(const Universe& other) const;
    void check_name(const std::string& x) const;
    friend ValidationReport check_isu(const Universe&);
};

using TypePredicate = std::function<bool(const std::string&)>;

// ISU1..ISU7 plus, for an Er adapter given an explicit relation, agreement
// between the stored relation and the adapter-derived one
// (AdapterAgreement). ISU5 (finite ancestor chains) is discharged by
// finiteness plus the acyclicity surfaced through ISU4 after closure.
ValidationReport check_isu(const Universe& u);

// Strong inheritance: p(x) and x parent_of y imply p(y).
ValidationReport check_strong_inheritance(const Universe& u, const TypePredicate& p);

// Weak inheritance: p(y) and y not a root imply p holds for some parent of y.
ValidationReport check_weak_inheritance(const Universe& u, const TypePredicate& p);

bool is_root(const Universe& u, const std::string& x);
std::set<std::string> roots_of(const Universe& u, const std::string& y);
bool type_related(const Universe& u, const std::string& x, const std::string& y);

// Both root characterisations: x~y iff some z with x~z is a root of y, and
// x~y iff roots of x and y are related pairwise somewhere.
bool common_roots_holds(const Universe& u);

}  // namespace evokernel
