#include "evokernel/isu.hpp"

#include <algorithm>

namespace evokernel {

namespace {

void close_reflexive_symmetric(RelationSet& rel,
                               const std::map<std::string, ObjectTypeInfo>& otypes) {
    RelationSet out;
    for (const auto& [name, info] : otypes) out.insert({name, name});
    for (const auto& [a, b] : rel) {
        out.insert({a, b});
        out.insert({b, a});
    }
    rel = std::move(out);
}

void close_transitive(RelationSet& rel) {
    bool changed = true;
    while (changed) {
        changed = false;
        RelationSet next = rel;
        for (const auto& [a, b] : rel)
            for (const auto& [c, d] : rel)
                if (b == c && !next.count({a, d})) {
                    next.insert({a, d});
                    changed = true;
                }
        rel = std::move(next);
    }
}

}  // namespace

const ObjectTypeInfo& Universe::info(const std::string& x) const {
    auto it = otypes_.find(x);
    if (it == otypes_.end()) throw UniverseError("unknown object type: " + x);
    return it->second;
}

void Universe::check_name(const std::string& x) const {
    if (!otypes_.count(x)) throw UniverseError("unknown object type: " + x);
}

bool Universe::otypes_names_equal(const Universe& other) const {
    if (otypes_.size() != other.otypes_.size()) return false;
    for (const auto& [name, info] : otypes_) {
        auto it = other.otypes_.find(name);
        if (it == other.otypes_.end()) return false;
        const ObjectTypeInfo& o = it->second;
        if (info.kind != o.kind || info.roles != o.roles ||
            info.supertype != o.supertype || info.owner != o.owner ||
            info.power_of != o.power_of)
            return false;
    }
    return true;
}

bool Universe::type_related(const std::string& x, const std::string& y) const {
    check_name(x);
    check_name(y);
    return type_rel_.count({x, y}) != 0;
}

bool Universe::parent_of(const std::string& x, const std::string& y) const {
    check_name(x);
    check_name(y);
    return parent_of_.count({x, y}) != 0;
}

bool Universe::is_root(const std::string& x) const {
    check_name(x);
    return std::none_of(parent_of_.begin(), parent_of_.end(),
                        [&](const NamePair& p) { return p.second == x; });
}

bool Universe::root_of(const std::string& x, const std::string& y) const {
    return (x == y || parent_of(x, y)) && is_root(x);
}

std::set<std::string> Universe::ancestors_of(const std::string& y) const {
    check_name(y);
    std::set<std::string> out;
    for (const auto& [a, b] : parent_of_)
        if (b == y) out.insert(a);
    return out;
}

std::set<std::string> Universe::roots_of(const std::string& y) const {
    std::set<std::string> out;
    if (is_root(y)) out.insert(y);
    for (const std::string& a : ancestors_of(y))
        if (is_root(a)) out.insert(a);
    return out;
}

Universe Universe::restricted_to(const std::set<std::string>& alive) const {
    Universe out;
    for (const std::string& name : alive) {
        auto it = otypes_.find(name);
        if (it != otypes_.end()) out.otypes_.insert(*it);
    }
    for (const auto& p : type_rel_)
        if (out.otypes_.count(p.first) && out.otypes_.count(p.second))
            out.type_rel_.insert(p);
    for (const auto& p : parent_of_)
        if (out.otypes_.count(p.first) && out.otypes_.count(p.second))
            out.parent_of_.insert(p);
    out.adapter_ = adapter_;
    out.explicit_type_rel_given_ = explicit_type_rel_given_;
    return out;
}

namespace {

// Unique maximal ancestor of x in a hierarchy, used to derive relatedness
// for the Er adapter. Throws on a diamond with two maximal ancestors.
std::string top_of(const Universe& u, const std::string& x) {
    std::set<std::string> candidates = u.ancestors_of(x);
    candidates.insert(x);
    std::set<std::string> tops;
    for (const std::string& c : candidates)
        if (u.ancestors_of(c).empty()) tops.insert(c);
    if (tops.size() != 1)
        throw UniverseError("non-unique top for object type: " + x);
    return *tops.begin();
}

}  // namespace

std::shared_ptr<const Universe> Universe::create(
    std::vector<ObjectTypeInfo> otypes, RelationSet type_rel,
    RelationSet parent_of, AdapterKind adapter) {
    auto u = std::make_shared<Universe>(Universe{});
    for (ObjectTypeInfo& info : otypes) {
        if (info.name.empty()) throw UniverseError("object type with empty name");
        std::string name = info.name;
        if (!u->otypes_.emplace(name, std::move(info)).second)
            throw UniverseError("duplicate object type: " + name);
    }
    auto require = [&](const std::string& ref, const std::string& what) {
        if (!u->otypes_.count(ref))
            throw UniverseError(what + " references unknown object type: " + ref);
    };
    for (const auto& [name, info] : u->otypes_) {
        for (const auto& [role, player] : info.roles) require(player, name + "." + role);
        if (info.supertype) {
            require(*info.supertype, "supertype of " + name);
            parent_of.insert({*info.supertype, name});
        }
        if (info.owner) require(*info.owner, "owner of " + name);
        if (info.power_of) require(*info.power_of, "element type of " + name);
    }
    for (const auto& [a, b] : type_rel) {
        require(a, "type_rel");
        require(b, "type_rel");
    }
    for (const auto& [a, b] : parent_of) {
        require(a, "parent_of");
        require(b, "parent_of");
    }

    u->adapter_ = adapter;
    u->explicit_type_rel_given_ = !type_rel.empty();
    u->parent_of_ = std::move(parent_of);
    close_transitive(u->parent_of_);

    if (adapter == AdapterKind::Er && type_rel.empty()) {
        for (const auto& [x, ix] : u->otypes_)
            for (const auto& [y, iy] : u->otypes_)
                if (top_of(*u, x) == top_of(*u, y)) type_rel.insert({x, y});
    }
    u->type_rel_ = std::move(type_rel);
    close_reflexive_symmetric(u->type_rel_, u->otypes_);
    return u;
}

ValidationReport check_isu(const Universe& u) {
    ValidationReport r;
    const auto& rel = u.type_rel_;
    const auto& par = u.parent_of_;

    for (const auto& [name, info] : u.otypes_)
        if (!rel.count({name, name}))
            r.add("ISU1", std::nullopt, {name});
    for (const auto& [a, b] : rel)
        if (!rel.count({b, a}))
            r.add("ISU2", std::nullopt, {a, b});
    for (const auto& [a, b] : par)
        for (const auto& [c, d] : par)
            if (b == c && !par.count({a, d}))
                r.add("ISU3", std::nullopt, {a, d});
    for (const auto& [a, b] : par)
        if (a == b)
            r.add("ISU4", std::nullopt, {a});
    for (const auto& [a, b] : rel)
        for (const auto& [c, d] : par)
            if (b == c && !rel.count({a, d}))
                r.add("ISU6", std::nullopt, {a, b, d});
    for (const auto& [x, y] : rel) {
        if (u.is_root(y)) continue;
        bool found = false;
        for (const std::string& z : u.ancestors_of(y))
            if (rel.count({x, z})) {
                found = true;
                break;
            }
        if (!found) r.add("ISU7", std::nullopt, {x, y});
    }

    if (u.adapter_ == AdapterKind::Er && u.explicit_type_rel_given_) {
        try {
            for (const auto& [x, ix] : u.otypes_)
                for (const auto& [y, iy] : u.otypes_) {
                    bool derived = top_of(u, x) == top_of(u, y);
                    bool stored = rel.count({x, y}) != 0;
                    if (derived != stored)
                        r.add("AdapterAgreement", std::nullopt, {x, y});
                }
        } catch (const UniverseError& e) {
            r.add("AdapterAgreement", std::nullopt, {e.what()});
        }
    }
    r.sort();
    return r;
}

ValidationReport check_strong_inheritance(const Universe& u, const TypePredicate& p) {
    ValidationReport r;
    for (const auto& [x, y] : u.parent_of_pairs())
        if (p(x) && !p(y))
            r.add("StrongInheritance", std::nullopt, {x, y});
    return r;
}

ValidationReport check_weak_inheritance(const Universe& u, const TypePredicate& p) {
    ValidationReport r;
    for (const auto& [name, info] : u.otypes()) {
        if (!p(name) || u.is_root(name)) continue;
        bool found = false;
        for (const std::string& a : u.ancestors_of(name))
            if (p(a)) {
                found = true;
                break;
            }
        if (!found) r.add("WeakInheritance", std::nullopt, {name});
    }
    return r;
}

bool is_root(const Universe& u, const std::string& x) { return u.is_root(x); }

std::set<std::string> roots_of(const Universe& u, const std::string& y) {
    return u.roots_of(y);
}

bool type_related(const Universe& u, const std::string& x, const std::string& y) {
    return u.type_related(x, y);
}

bool common_roots_holds(const Universe& u) {
    for (const auto& [x, ix] : u.otypes()) {
        for (const auto& [y, iy] : u.otypes()) {
            bool related = u.type_related(x, y);

            bool via_root = false;
            for (const auto& [z, iz] : u.otypes())
                if (u.type_related(x, z) && u.root_of(z, y)) {
                    via_root = true;
                    break;
                }
            if (related != via_root) return false;

            bool roots_related = false;
            for (const std::string& rx : u.roots_of(x)) {
                for (const std::string& ry : u.roots_of(y))
                    if (u.type_related(rx, ry)) {
                        roots_related = true;
                        break;
                    }
                if (roots_related) break;
            }
            if (related != roots_related) return false;
        }
    }
    return true;
}

}  // namespace evokernel
