#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace evokernel {

// Universal value domain: atomic strings and naturals, abstract surrogates,
// named-role tuples, and finite sets. Immutable; total ordering gives every
// collection of values a canonical, deterministic order.
struct InstanceValue {
    enum class Kind { Str, Nat, Sur, Tuple, Set };

    Kind kind = Kind::Sur;
    std::string text;      // Str payload or Sur identifier
    std::int64_t nat = 0;  // Nat payload
    std::vector<std::pair<std::string, InstanceValue>> fields;  // Tuple, key-sorted
    std::vector<InstanceValue> members;                         // Set, sorted, deduped

    static InstanceValue str(std::string s);
    static InstanceValue nat_value(std::int64_t n);
    static InstanceValue sur(std::string id);
    static InstanceValue tuple(std::vector<std::pair<std::string, InstanceValue>> fields);
    static InstanceValue set(std::vector<InstanceValue> members);

    bool is_atomic() const { return kind == Kind::Str || kind == Kind::Nat; }

    const InstanceValue* field(const std::string& role) const;

    // Compact single-line rendering: "s" quoted, naturals bare, surrogates
    // bare identifiers, {role: v, ...} tuples, #{...} sets.
    std::string render() const;

    bool operator==(const InstanceValue& other) const { return compare(*this, other) == 0; }
    bool operator<(const InstanceValue& other) const { return compare(*this, other) < 0; }

    static int compare(const InstanceValue& a, const InstanceValue& b);
};

using ValueSet = std::set<InstanceValue>;

// Concrete domains are a fixed registry: String (all character strings) and
// Natno (the non-negative integers).
bool known_domain(const std::string& name);
// Membership of a value in a named domain; false for unknown domains and
// for non-atomic values.
bool domain_contains(const std::string& name, const InstanceValue& v);
// Whether the value belongs to any concrete domain at all.
bool in_some_domain(const InstanceValue& v);

// A typing judgement: a value together with the non-empty set of object
// types it is an instance of.
struct InstanceTyping {
    InstanceValue value;
    std::set<std::string> types;

    bool operator==(const InstanceTyping&) const = default;
};

}  // namespace evokernel
