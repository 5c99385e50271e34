#include "evokernel/constraint_eval.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "evokernel/version.hpp"

namespace evokernel {

namespace {

// Fact types whose signature carries `ref.role` played by `ref.otype`.
std::vector<std::string> fact_types_for(const Universe& u, const RoleRef& ref) {
    if (!u.has_otype(ref.otype))
        throw EvalError("unknown object type in role reference: " + ref.render());
    std::vector<std::string> out;
    for (const auto& [name, info] : u.otypes()) {
        if (info.kind != TypeKind::NonLabel) continue;
        auto it = info.roles.find(ref.role);
        if (it != info.roles.end() && it->second == ref.otype) out.push_back(name);
    }
    if (out.empty())
        throw EvalError("no fact type carries role reference: " + ref.render());
    return out;
}

// Ticks at which any population inside the interval can differ from its
// predecessor, in ascending order. Populations are constant between
// breakpoints, so checking these covers the whole interval.
std::vector<Tick> sample_ticks(const History& h, const TickRange& interval) {
    Tick lo = interval.lo;
    Tick end = interval.hi ? *interval.hi : std::max(h.horizon, lo);
    if (end < lo) end = lo;
    std::set<Tick> ticks{lo};
    for (const auto& [id, e] : h.elements)
        for (Tick b : e.track.breakpoints())
            if (lo < b && b <= end) ticks.insert(b);
    return {ticks.begin(), ticks.end()};
}

bool plays_some_role(const Universe& u, const AppModelVersion& v,
                     const InstanceValue& value, const std::set<RoleRef>& refs) {
    for (const RoleRef& ref : refs) {
        for (const std::string& f : fact_types_for(u, ref)) {
            if (!v.otypes.count(f)) continue;
            for (const InstanceValue& w : pop_at(v, f)) {
                const InstanceValue* filler = w.field(ref.role);
                if (filler && *filler == value) return true;
            }
        }
    }
    return false;
}

bool eval_at(const History& h, const AppModelVersion& v, const ConstraintAst& ast);

bool eval_total(const History& h, const AppModelVersion& v, const ConstraintAst& ast) {
    const Universe& u = *h.universe;
    ValueSet domain;
    for (const RoleRef& ref : ast.refs) {
        fact_types_for(u, ref);  // reject unresolvable references
        ValueSet p = pop_at(v, ref.otype);
        domain.insert(p.begin(), p.end());
    }
    for (const InstanceValue& value : domain)
        if (!plays_some_role(u, v, value, ast.refs)) return false;
    return true;
}

bool eval_unique(const History& h, const AppModelVersion& v, const ConstraintAst& ast) {
    const Universe& u = *h.universe;
    for (const RoleRef& ref : ast.refs) {
        ValueSet seen;
        for (const std::string& f : fact_types_for(u, ref)) {
            if (!v.otypes.count(f)) continue;
            for (const InstanceValue& w : pop_at(v, f)) {
                const InstanceValue* filler = w.field(ref.role);
                if (!filler) continue;
                if (!seen.insert(*filler).second) return false;
            }
        }
    }
    return true;
}

bool eval_at(const History& h, const AppModelVersion& v, const ConstraintAst& ast) {
    switch (ast.kind) {
        case ConstraintAst::Kind::Total: return eval_total(h, v, ast);
        case ConstraintAst::Kind::Unique: return eval_unique(h, v, ast);
        default: throw EvalError("not a per-tick constraint");
    }
}

bool eval_before_equals(const History& h, const TickRange& interval,
                        const ConstraintAst& ast) {
    const Universe& u = *h.universe;
    for (const std::string& name : {ast.earlier, ast.later, ast.target})
        if (!u.has_otype(name))
            throw EvalError("unknown object type in transition constraint: " + name);

    std::vector<Tick> ticks = sample_ticks(h, interval);
    // First tick inside the interval at which each value populates each of
    // the three object types.
    std::map<InstanceValue, Tick> first_earlier, first_later;
    ValueSet targets;
    for (Tick t : ticks) {
        for (const InstanceValue& value : pop_at(h, t, ast.earlier))
            first_earlier.emplace(value, t);
        for (const InstanceValue& value : pop_at(h, t, ast.later))
            first_later.emplace(value, t);
        ValueSet p = pop_at(h, t, ast.target);
        targets.insert(p.begin(), p.end());
    }
    for (const InstanceValue& value : targets) {
        auto later = first_later.find(value);
        if (later == first_later.end()) continue;  // never the later kind: fine
        auto earlier = first_earlier.find(value);
        if (earlier == first_earlier.end()) return false;
        if (!(earlier->second < later->second)) return false;
    }
    return true;
}

}  // namespace

bool eval_constraint(const History& h, const TickRange& interval,
                     const ConstraintAst& ast) {
    switch (ast.kind) {
        case ConstraintAst::Kind::And:
            for (const AstPtr& child : ast.children)
                if (!eval_constraint(h, interval, *child)) return false;
            return true;
        case ConstraintAst::Kind::BeforeEquals:
            return eval_before_equals(h, interval, ast);
        case ConstraintAst::Kind::Total:
        case ConstraintAst::Kind::Unique: {
            for (Tick t : sample_ticks(h, interval))
                if (!eval_at(h, derive_version(h, t), ast)) return false;
            return true;
        }
    }
    throw EvalError("unreachable constraint kind");
}

}  // namespace evokernel
