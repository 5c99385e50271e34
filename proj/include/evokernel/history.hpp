#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "evokernel/amu.hpp"
#include "evokernel/timeline.hpp"

namespace evokernel {

class ElementVersion;
using VersionPtr = std::shared_ptr<const ElementVersion>;

// Evolution classes; every element evolution tracks versions of exactly one
// class (evolution separation). Constraint definitions double as task
// definitions, but constraint-classed and task-classed evolutions stay
// disjoint, with rules that concern tasks quantifying over the union.
enum class ElementClass { ObjectType, Constraint, Task, InstanceTyping, Concretisation };

const char* to_string(ElementClass c);

enum class EditOp { Create, Set, Terminate };

// One primitive change inside a transaction body. Create introduces a fresh
// element evolution; Set gives an existing one a new current version;
// Terminate ends it. All take effect one tick after the event occurs.
struct Edit {
    EditOp op = EditOp::Set;
    std::string id;
    std::optional<ElementClass> cls;  // Create only
    VersionPtr version;               // Create / Set

    bool operator==(const Edit& other) const;
};

using TransactionBody = std::vector<Edit>;

// A task definition: either a constraint used as a guard, or an action
// with a concrete edit sequence plus the declared set of schema elements
// the action's specification rests on (its trigger and condition may refer
// to types its edit list never names).
struct ActionDef {
    TransactionBody edits;
    DependsSet uses;

    bool operator==(const ActionDef& other) const = default;
};

struct TaskDef {
    std::variant<ConstraintDef, ActionDef> body;

    bool is_guard() const { return std::holds_alternative<ConstraintDef>(body); }
    const ConstraintDef& guard() const { return std::get<ConstraintDef>(body); }
    const ActionDef& action() const { return std::get<ActionDef>(body); }

    bool operator==(const TaskDef& other) const = default;
};

// Sparse ownership maps: owning object type -> its private definition.
using OwnedConstraints = std::map<std::string, ConstraintDef>;
using OwnedTasks = std::map<std::string, TaskDef>;

struct ConcretisationVersion {
    std::string label;
    std::string domain;

    bool operator==(const ConcretisationVersion&) const = default;
};

// One version of an evolving element. Object-type versions are names into
// the universe's object types.
class ElementVersion {
public:
    using Payload = std::variant<std::string, OwnedConstraints, OwnedTasks,
                                 InstanceTyping, ConcretisationVersion>;

    Payload payload;

    ElementVersion() = default;
    explicit ElementVersion(Payload p) : payload(std::move(p)) {}

    ElementClass cls() const {
        return static_cast<ElementClass>(payload.index());
    }

    const std::string& otype() const { return std::get<std::string>(payload); }
    const OwnedConstraints& constraints() const { return std::get<OwnedConstraints>(payload); }
    const OwnedTasks& tasks() const { return std::get<OwnedTasks>(payload); }
    const InstanceTyping& typing() const { return std::get<InstanceTyping>(payload); }
    const ConcretisationVersion& concretisation() const {
        return std::get<ConcretisationVersion>(payload);
    }

    bool operator==(const ElementVersion& other) const { return payload == other.payload; }
};

inline bool Edit::operator==(const Edit& other) const {
    if (op != other.op || id != other.id || cls != other.cls) return false;
    if (!version != !other.version) return false;
    return !version || *version == *other.version;
}

VersionPtr make_version(ElementVersion::Payload p);

struct ElementEvolution {
    std::string id;
    ElementClass cls = ElementClass::ObjectType;
    TimedMap<ElementVersion> track;

    bool operator==(const ElementEvolution&) const = default;
};

// An application model history: a universe plus one evolution per element.
// Immutable; all operations return fresh histories. The horizon is the last
// tick at which anything changed, advanced past the structural value only
// by event application. Extensional equality ignores the horizon.
struct History {
    std::shared_ptr<const Universe> universe;
    std::map<std::string, ElementEvolution> elements;
    Tick horizon;

    bool operator==(const History& other) const {
        return *universe == *other.universe && elements == other.elements;
    }
};

History make_history(std::shared_ptr<const Universe> universe,
                     std::vector<ElementEvolution> elements);

// prefix over every track; elements undefined throughout the prefix drop
// out. Applying at or beyond the horizon is the identity.
History prefix_history(const History& h, Tick t);

// Tracks restricted to the range; evolutions with empty restrictions drop.
History restrict_history(const History& h, const TickRange& range);

// An event occurrence: a transaction fired at a tick. At most one per tick.
struct EventOccurrence {
    Tick at;
    TransactionBody edits;
};

// Task-definition dependencies: declared uses plus the types and domain
// assignments named by the edit payloads (guard tasks defer to their
// constraint).
DependsSet depends_of(const TaskDef& def, const Universe& u);
DependsSet depends_of(const Edit& edit);

}  // namespace evokernel
