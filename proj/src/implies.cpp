#include <random>
#include <set>
#include <string>
#include <vector>

#include "evokernel/constraint_eval.hpp"
#include "evokernel/constraints.hpp"
#include "evokernel/version.hpp"

namespace evokernel {

namespace {

std::set<std::string> ref_otypes(const std::set<RoleRef>& refs) {
    std::set<std::string> out;
    for (const RoleRef& r : refs) out.insert(r.otype);
    return out;
}

// Does conjunct a entail conjunct b on every history?
bool conjunct_entails(const ConstraintAst& a, const ConstraintAst& b) {
    using Kind = ConstraintAst::Kind;
    if (b.kind == Kind::Total) {
        if (a.kind != Kind::Total) return false;
        // Fewer permitted roles over a domain at least as wide is stronger.
        bool refs_subset = std::includes(b.refs.begin(), b.refs.end(),
                                         a.refs.begin(), a.refs.end());
        std::set<std::string> da = ref_otypes(a.refs), db = ref_otypes(b.refs);
        bool domain_covers = std::includes(da.begin(), da.end(),
                                           db.begin(), db.end());
        return refs_subset && domain_covers;
    }
    if (b.kind == Kind::Unique) return a.kind == Kind::Unique && a.refs == b.refs;
    if (b.kind == Kind::BeforeEquals)
        return a.kind == Kind::BeforeEquals && a.earlier == b.earlier &&
               a.later == b.later && a.target == b.target;
    return false;
}

void collect_names(const ConstraintAst& ast, std::set<RoleRef>& refs,
                   std::set<std::string>& entities) {
    switch (ast.kind) {
        case ConstraintAst::Kind::Total:
        case ConstraintAst::Kind::Unique:
            for (const RoleRef& r : ast.refs) {
                refs.insert(r);
                entities.insert(r.otype);
            }
            break;
        case ConstraintAst::Kind::And:
            for (const AstPtr& c : ast.children) collect_names(*c, refs, entities);
            break;
        case ConstraintAst::Kind::BeforeEquals:
            entities.insert(ast.earlier);
            entities.insert(ast.later);
            entities.insert(ast.target);
            break;
    }
}

struct ProbeSpace {
    std::shared_ptr<const Universe> universe;
    std::vector<std::string> entities;             // sorted player/subject types
    std::vector<std::pair<RoleRef, std::string>> facts;  // ref -> fact type name
};

// A tiny closed world containing every name the two definitions mention:
// one entity type per referenced player, one binary fact type per role
// reference (second role distinguishes tuples sharing a filler), everything
// pairwise type-related, explicit adapter. Every probe drawn over it is a
// well-formed history by construction.
ProbeSpace build_probe_space(const ConstraintAst& d1, const ConstraintAst& d2) {
    std::set<RoleRef> refs;
    std::set<std::string> entities;
    collect_names(d1, refs, entities);
    collect_names(d2, refs, entities);

    ProbeSpace space;
    std::vector<ObjectTypeInfo> otypes;
    std::set<std::string> taken = entities;
    for (const std::string& e : entities) {
        otypes.push_back({e, TypeKind::NonLabel, {}, {}, {}, {}});
        space.entities.push_back(e);
    }
    auto fresh = [&taken](std::string base) {
        while (taken.count(base)) base += "-x";
        taken.insert(base);
        return base;
    };
    std::string aux = fresh("probe-aux");
    otypes.push_back({aux, TypeKind::NonLabel, {}, {}, {}, {}});
    for (const RoleRef& r : refs) {
        std::string fname = fresh("probe-fact-" + r.otype + "-" + r.role);
        std::string aux_role = r.role == "probe-aux-role" ? "probe-aux-role-x"
                                                          : "probe-aux-role";
        otypes.push_back({fname,
                          TypeKind::NonLabel,
                          {{r.role, r.otype}, {aux_role, aux}},
                          {},
                          {},
                          {}});
        space.facts.emplace_back(r, fname);
    }
    RelationSet rel;
    for (const ObjectTypeInfo& a : otypes)
        for (const ObjectTypeInfo& b : otypes) rel.insert({a.name, b.name});
    space.universe = Universe::create(std::move(otypes), std::move(rel), {},
                                      AdapterKind::Explicit);
    return space;
}

History draw_probe(const ProbeSpace& space, std::mt19937& rng, Tick& last) {
    std::uniform_int_distribution<std::uint64_t> tick_dist(1, 3);
    std::uniform_int_distribution<int> coin(0, 1);
    Tick end = tick(3);
    last = end;

    const std::vector<std::string> pool{"u", "w"};
    std::vector<ElementEvolution> elements;
    for (const auto& [name, info] : space.universe->otypes()) {
        ElementEvolution e;
        e.id = "t-" + name;
        e.cls = ElementClass::ObjectType;
        e.track = TimedMap<ElementVersion>::from_runs(
            {{tick(1), std::nullopt, ElementVersion{name}}});
        elements.push_back(std::move(e));
    }
    auto alive_from = [&](const std::string& id, InstanceValue value,
                          const std::string& type, Tick from) {
        ElementEvolution e;
        e.id = id;
        e.cls = ElementClass::InstanceTyping;
        e.track = TimedMap<ElementVersion>::from_runs(
            {{from, std::nullopt,
              ElementVersion{InstanceTyping{std::move(value), {type}}}}});
        elements.push_back(std::move(e));
    };

    for (const std::string& ent : space.entities)
        for (const std::string& v : pool)
            if (coin(rng))
                alive_from("e-" + ent + "-" + v, InstanceValue::sur(v), ent,
                           tick(tick_dist(rng)));
    for (const auto& [ref, fname] : space.facts) {
        const std::string aux_role =
            space.universe->info(fname).roles.begin()->first == ref.role
                ? std::next(space.universe->info(fname).roles.begin())->first
                : space.universe->info(fname).roles.begin()->first;
        for (const std::string& v : pool)
            for (const std::string& a : {std::string("a1"), std::string("a2")})
                if (coin(rng))
                    alive_from("x-" + fname + "-" + v + "-" + a,
                               InstanceValue::tuple({{ref.role, InstanceValue::sur(v)},
                                                     {aux_role, InstanceValue::sur(a)}}),
                               fname, tick(tick_dist(rng)));
    }
    return make_history(space.universe, std::move(elements));
}

}  // namespace

ImplicationVerdict constr_implies(const AstPtr& d1, const AstPtr& d2) {
    std::vector<AstPtr> c1 = flatten_conjuncts(d1);
    std::vector<AstPtr> c2 = flatten_conjuncts(d2);

    // Sound syntactic route: every consequent conjunct is entailed by some
    // antecedent conjunct.
    bool all = true;
    std::string trace;
    for (const AstPtr& b : c2) {
        const ConstraintAst* wit = nullptr;
        for (const AstPtr& a : c1)
            if (conjunct_entails(*a, *b)) {
                wit = a.get();
                break;
            }
        if (!wit) {
            all = false;
            break;
        }
        if (!trace.empty()) trace += "; ";
        trace += b->render() + " follows from " + wit->render();
    }
    if (all) return {ImplicationValue::Implied, trace};

    // Constructive route: search small histories for a separating witness.
    ProbeSpace space = build_probe_space(*d1, *d2);
    std::mt19937 rng(0xE150C0DEu);
    for (int attempt = 1; attempt <= 200; ++attempt) {
        Tick end;
        History probe = draw_probe(space, rng, end);
        TickRange whole{tick(1), end};
        try {
            if (eval_constraint(probe, whole, *d1) &&
                !eval_constraint(probe, whole, *d2))
                return {ImplicationValue::NotImplied,
                        "separating history found (attempt " +
                            std::to_string(attempt) + ")"};
        } catch (const EvalError&) {
            break;  // references unresolvable even in the closed world
        }
    }
    return {ImplicationValue::Unknown, ""};
}

}  // namespace evokernel
