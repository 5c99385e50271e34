#include "evokernel/amu.hpp"

#include <algorithm>

namespace evokernel {

ConstraintDef ConstraintDef::parse(std::string text) {
    ConstraintDef d;
    d.ast = parse_constraint(text);
    d.text = std::move(text);
    return d;
}

bool ConstraintDef::operator==(const ConstraintDef& other) const {
    if (!ast || !other.ast) return !ast && !other.ast && text == other.text;
    return *ast == *other.ast;
}

namespace {

// Fact types of the universe carrying `role` with player `otype`.
std::set<std::string> bearing_fact_types(const Universe& u, const RoleRef& ref) {
    std::set<std::string> out;
    for (const auto& [name, info] : u.otypes()) {
        auto it = info.roles.find(ref.role);
        if (it != info.roles.end() && it->second == ref.otype) out.insert(name);
    }
    return out;
}

void collect_depends(const ConstraintAst& ast, const Universe& u, DependsSet& out) {
    switch (ast.kind) {
        case ConstraintAst::Kind::Total:
        case ConstraintAst::Kind::Unique:
            for (const RoleRef& ref : ast.refs) {
                out.otypes.insert(ref.otype);
                auto bearing = bearing_fact_types(u, ref);
                out.otypes.insert(bearing.begin(), bearing.end());
            }
            break;
        case ConstraintAst::Kind::And:
            for (const AstPtr& c : ast.children) collect_depends(*c, u, out);
            break;
        case ConstraintAst::Kind::BeforeEquals:
            out.otypes.insert(ast.earlier);
            out.otypes.insert(ast.later);
            out.otypes.insert(ast.target);
            break;
    }
}

}  // namespace

DependsSet depends_of(const ConstraintDef& def, const Universe& u) {
    DependsSet out;
    if (def.ast) collect_depends(*def.ast, u, out);
    return out;
}

std::string er_top(const Universe& u, const std::string& x) {
    std::set<std::string> candidates = u.ancestors_of(x);
    candidates.insert(x);
    std::set<std::string> tops;
    for (const std::string& c : candidates)
        if (u.ancestors_of(c).empty()) tops.insert(c);
    if (tops.size() != 1) throw UniverseError("non-unique top for object type: " + x);
    return *tops.begin();
}

bool er_type_related(const Universe& u, const std::string& x, const std::string& y) {
    return er_top(u, x) == er_top(u, y);
}

bool er_is_schema(const Universe& u, const std::set<std::string>& otypes) {
    for (const std::string& name : otypes) {
        if (!u.has_otype(name)) return false;
        const ObjectTypeInfo& info = u.info(name);
        for (const auto& [role, player] : info.roles)
            if (!otypes.count(player)) return false;
        if (info.supertype && !otypes.count(*info.supertype)) return false;
        if (info.owner && !otypes.count(*info.owner)) return false;
        if (info.power_of && !otypes.count(*info.power_of)) return false;
    }
    return true;
}

namespace {

bool populates(const std::vector<InstanceTyping>& typings, const InstanceValue& v,
               const std::string& otype) {
    return std::any_of(typings.begin(), typings.end(), [&](const InstanceTyping& t) {
        return t.types.count(otype) != 0 && t.value == v;
    });
}

}  // namespace

bool er_check_is_pop(const Universe& u, const std::set<std::string>& alive,
                     const std::vector<InstanceTyping>& typings) {
    for (const InstanceTyping& t : typings) {
        for (const std::string& x : t.types) {
            if (!u.has_otype(x)) return false;
            const ObjectTypeInfo& info = u.info(x);
            if (info.kind == TypeKind::Label) {
                if (!t.value.is_atomic()) return false;
                continue;
            }
            if (!info.roles.empty()) {
                if (t.value.kind != InstanceValue::Kind::Tuple) return false;
                if (t.value.fields.size() != info.roles.size()) return false;
                for (const auto& [role, player] : info.roles) {
                    const InstanceValue* filler = t.value.field(role);
                    if (!filler) return false;
                    if (!u.has_otype(player)) return false;
                    if (u.info(player).kind == TypeKind::Label) {
                        if (!filler->is_atomic()) return false;
                    } else if (!populates(typings, *filler, player)) {
                        return false;
                    }
                }
                continue;
            }
            if (info.power_of) {
                if (t.value.kind != InstanceValue::Kind::Set) return false;
                for (const InstanceValue& m : t.value.members)
                    if (!populates(typings, m, *info.power_of)) return false;
                continue;
            }
            if (t.value.kind != InstanceValue::Kind::Sur) return false;
        }
    }
    (void)alive;
    return true;
}

bool adapter_is_schema(const Universe& u, const std::set<std::string>& otypes) {
    switch (u.adapter()) {
        case AdapterKind::Er: return er_is_schema(u, otypes);
        case AdapterKind::Explicit: return true;
    }
    return true;
}

bool adapter_is_pop(const Universe& u, const std::set<std::string>& alive,
                    const std::vector<InstanceTyping>& typings) {
    switch (u.adapter()) {
        case AdapterKind::Er: return er_check_is_pop(u, alive, typings);
        case AdapterKind::Explicit: return true;
    }
    return true;
}

}  // namespace evokernel
