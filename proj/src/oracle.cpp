#include "evokernel/oracle.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "evokernel/constraint_eval.hpp"
#include "evokernel/evolution.hpp"

namespace evokernel {

namespace {

// ---- direct-scan primitives, deliberately bypassing derive_version ----

bool run_covers(const TimedMap<ElementVersion>::Run& run, Tick t) {
    return run.from <= t && (!run.to || t <= *run.to);
}

std::set<std::string> scan_alive_types(const History& h, Tick t) {
    std::set<std::string> out;
    for (const auto& [id, e] : h.elements) {
        if (e.cls != ElementClass::ObjectType) continue;
        for (const auto& run : e.track.runs())
            if (run_covers(run, t) && run.value.cls() == ElementClass::ObjectType)
                out.insert(run.value.otype());
    }
    return out;
}

std::vector<std::pair<std::string, const InstanceTyping*>> scan_typings(
    const History& h, Tick t) {
    std::vector<std::pair<std::string, const InstanceTyping*>> out;
    for (const auto& [id, e] : h.elements) {
        if (e.cls != ElementClass::InstanceTyping) continue;
        for (const auto& run : e.track.runs())
            if (run_covers(run, t) && run.value.cls() == ElementClass::InstanceTyping)
                out.emplace_back(id, &run.value.typing());
    }
    return out;
}

ValueSet scan_pop(const History& h, Tick t, const std::string& otype) {
    ValueSet out;
    for (const auto& [id, typing] : scan_typings(h, t))
        if (typing->types.count(otype)) out.insert(typing->value);
    return out;
}

Tick scan_last_change(const History& h) {
    Tick last{0};
    for (const auto& [id, e] : h.elements)
        for (const auto& run : e.track.runs()) {
            last = std::max(last, run.from);
            if (run.to) last = std::max(last, run.to->next());
        }
    return last;
}

bool pair_related(const Universe& u, const std::string& x, const std::string& y) {
    return u.type_rel().count({x, y}) != 0;
}

bool pair_ancestor(const Universe& u, const std::string& x, const std::string& y) {
    return x != y && u.parent_of_pairs().count({x, y}) != 0;
}

bool scan_is_root(const Universe& u, const std::string& x) {
    for (const auto& [name, info] : u.otypes())
        if (pair_ancestor(u, name, x)) return false;
    return true;
}

bool scan_root_of(const Universe& u, const std::string& z, const std::string& y) {
    return scan_is_root(u, z) && (z == y || pair_ancestor(u, z, y));
}

// Root within the alive restriction: alive with no alive proper ancestor.
bool alive_root(const Universe& u, const std::set<std::string>& alive,
                const std::string& x) {
    if (!alive.count(x)) return false;
    for (const std::string& y : alive)
        if (pair_ancestor(u, y, x)) return false;
    return true;
}

bool alive_root_of(const Universe& u, const std::set<std::string>& alive,
                   const std::string& z, const std::string& y) {
    return alive_root(u, alive, z) && (z == y || pair_ancestor(u, z, y));
}

}  // namespace

ValidationReport oracle_check_lemmas(const History& h) {
    ValidationReport r;
    const Universe& u = *h.universe;

    for (const auto& [x, xi] : u.otypes()) {
        for (const auto& [y, yi] : u.otypes()) {
            bool related = pair_related(u, x, y);
            bool shares_root = false;
            for (const auto& [z, zi] : u.otypes())
                if (pair_related(u, x, z) && scan_root_of(u, z, y)) {
                    shares_root = true;
                    break;
                }
            if (related != shares_root) r.add("CommonRoots", std::nullopt, {x, y});

            bool roots_related = false;
            for (const auto& [z1, z1i] : u.otypes()) {
                for (const auto& [z2, z2i] : u.otypes())
                    if (pair_related(u, z1, z2) && scan_root_of(u, z1, x) &&
                        scan_root_of(u, z2, y)) {
                        roots_related = true;
                        break;
                    }
                if (roots_related) break;
            }
            if (roots_related != related)
                r.add("TypeRelPropagation", std::nullopt, {x, y});
        }
    }

    Tick last = scan_last_change(h);
    std::map<std::string, ValueSet> ever;
    for (std::uint64_t n = 0; n <= last.v; ++n) {
        Tick t = tick(n);
        std::set<std::string> alive = scan_alive_types(h, t);

        for (const auto& [id, typing] : scan_typings(h, t))
            for (const std::string& y : typing->types) {
                bool rooted = false;
                for (const std::string& x : typing->types)
                    if (alive_root_of(u, alive, x, y)) {
                        rooted = true;
                        break;
                    }
                if (!rooted) r.add("RootActive", t, {id, y});
            }

        std::map<std::string, ValueSet> pops;
        for (const auto& [name, info] : u.otypes()) {
            pops[name] = scan_pop(h, t, name);
            ever[name].insert(pops[name].begin(), pops[name].end());
        }
        for (const std::string& x : alive)
            for (const InstanceValue& value : pops[x]) {
                bool covered = false;
                for (const std::string& z : alive)
                    if (alive_root_of(u, alive, z, x) && pops[z].count(value)) {
                        covered = true;
                        break;
                    }
                if (!covered) r.add("PopDist", t, {x, value.render()});
            }
        for (const auto& [x, px] : pops)
            for (const auto& [y, py] : pops) {
                if (x >= y || pair_related(u, x, y)) continue;
                for (const InstanceValue& value : px)
                    if (py.count(value)) r.add("ExclPop", t, {x, y, value.render()});
            }
    }
    for (const auto& [x, px] : ever)
        for (const auto& [y, py] : ever) {
            if (x >= y || pair_related(u, x, y)) continue;
            for (const InstanceValue& value : px)
                if (py.count(value))
                    r.add("StrongTyping", std::nullopt, {x, y, value.render()});
        }
    r.sort();
    return r;
}

namespace {

std::vector<std::string> scan_fact_types(const Universe& u, const RoleRef& ref) {
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

bool oracle_eval_at(const History& h, Tick t, const ConstraintAst& ast) {
    const Universe& u = *h.universe;
    std::set<std::string> alive = scan_alive_types(h, t);
    if (ast.kind == ConstraintAst::Kind::Total) {
        ValueSet domain;
        for (const RoleRef& ref : ast.refs) {
            scan_fact_types(u, ref);
            ValueSet p = scan_pop(h, t, ref.otype);
            domain.insert(p.begin(), p.end());
        }
        for (const InstanceValue& value : domain) {
            bool plays = false;
            for (const RoleRef& ref : ast.refs) {
                for (const std::string& f : scan_fact_types(u, ref)) {
                    if (!alive.count(f)) continue;
                    for (const InstanceValue& w : scan_pop(h, t, f)) {
                        const InstanceValue* filler = w.field(ref.role);
                        if (filler && *filler == value) {
                            plays = true;
                            break;
                        }
                    }
                    if (plays) break;
                }
                if (plays) break;
            }
            if (!plays) return false;
        }
        return true;
    }
    // Unique
    for (const RoleRef& ref : ast.refs) {
        ValueSet seen;
        for (const std::string& f : scan_fact_types(u, ref)) {
            if (!alive.count(f)) continue;
            for (const InstanceValue& w : scan_pop(h, t, f)) {
                const InstanceValue* filler = w.field(ref.role);
                if (!filler) continue;
                if (!seen.insert(*filler).second) return false;
            }
        }
    }
    return true;
}

}  // namespace

bool oracle_eval_constraint(const History& h, const TickRange& interval,
                            const ConstraintAst& ast) {
    Tick lo = interval.lo;
    Tick end = interval.hi ? *interval.hi : std::max(h.horizon, lo);
    if (end < lo) end = lo;
    switch (ast.kind) {
        case ConstraintAst::Kind::And:
            for (const AstPtr& child : ast.children)
                if (!oracle_eval_constraint(h, interval, *child)) return false;
            return true;
        case ConstraintAst::Kind::Total:
        case ConstraintAst::Kind::Unique:
            for (std::uint64_t n = lo.v; n <= end.v; ++n)
                if (!oracle_eval_at(h, tick(n), ast)) return false;
            return true;
        case ConstraintAst::Kind::BeforeEquals: {
            const Universe& u = *h.universe;
            for (const std::string& name : {ast.earlier, ast.later, ast.target})
                if (!u.has_otype(name))
                    throw EvalError("unknown object type in transition constraint: " +
                                    name);
            std::map<InstanceValue, Tick> first_earlier, first_later;
            ValueSet targets;
            for (std::uint64_t n = lo.v; n <= end.v; ++n) {
                Tick t = tick(n);
                for (const InstanceValue& value : scan_pop(h, t, ast.earlier))
                    first_earlier.emplace(value, t);
                for (const InstanceValue& value : scan_pop(h, t, ast.later))
                    first_later.emplace(value, t);
                ValueSet p = scan_pop(h, t, ast.target);
                targets.insert(p.begin(), p.end());
            }
            for (const InstanceValue& value : targets) {
                auto later = first_later.find(value);
                if (later == first_later.end()) continue;
                auto earlier = first_earlier.find(value);
                if (earlier == first_earlier.end()) return false;
                if (!(earlier->second < later->second)) return false;
            }
            return true;
        }
    }
    throw EvalError("unreachable constraint kind");
}

namespace {

template <typename T>
const T& pick(const std::vector<T>& xs, std::mt19937& rng) {
    return xs[rng() % xs.size()];
}

bool chance(std::mt19937& rng, unsigned percent) { return rng() % 100 < percent; }

}  // namespace

AstPtr generate_random_ast(const Universe& u, std::mt19937& rng) {
    std::vector<RoleRef> refs;
    std::vector<std::string> names;
    for (const auto& [name, info] : u.otypes()) {
        names.push_back(name);
        for (const auto& [role, player] : info.roles) refs.push_back({player, role});
    }
    auto leaf = [&]() -> AstPtr {
        auto node = std::make_shared<ConstraintAst>();
        if (refs.empty() || chance(rng, 25)) {
            node->kind = ConstraintAst::Kind::BeforeEquals;
            node->earlier = pick(names, rng);
            node->later = pick(names, rng);
            node->target = pick(names, rng);
        } else {
            node->kind = chance(rng, 50) ? ConstraintAst::Kind::Total
                                         : ConstraintAst::Kind::Unique;
            node->refs.insert(pick(refs, rng));
            if (chance(rng, 40)) node->refs.insert(pick(refs, rng));
        }
        return node;
    };
    if (chance(rng, 35)) {
        auto node = std::make_shared<ConstraintAst>();
        node->kind = ConstraintAst::Kind::And;
        node->children.push_back(leaf());
        node->children.push_back(leaf());
        return node;
    }
    return leaf();
}

namespace {

struct DrawnType {
    std::string name;
    TypeKind kind = TypeKind::NonLabel;
    std::optional<std::size_t> parent;
    std::map<std::string, std::string> roles;
    Tick from;
    std::optional<Tick> to;
    std::string domain;  // labels only
};

std::uint64_t between(std::mt19937& rng, std::uint64_t lo, std::uint64_t hi) {
    if (hi <= lo) return lo;
    return lo + rng() % (hi - lo + 1);
}

History draw_candidate(std::size_t max_otypes, std::size_t max_instances,
                       std::uint64_t max_ticks, std::mt19937& rng) {
    std::size_t n = 1 + rng() % max_otypes;
    std::vector<DrawnType> types(n);
    const std::vector<std::string> role_pool{"ra", "rb", "rc"};

    for (std::size_t i = 0; i < n; ++i) {
        DrawnType& t = types[i];
        t.name = "T" + std::to_string(i + 1);
        bool can_parent = false;
        for (std::size_t j = 0; j < i; ++j)
            if (types[j].kind == TypeKind::NonLabel) can_parent = true;
        if (i + 1 < n && chance(rng, 20)) {
            t.kind = TypeKind::Label;
            t.domain = chance(rng, 50) ? "Natno" : "String";
        } else if (can_parent && chance(rng, 50)) {
            std::size_t j;
            do {
                j = rng() % i;
            } while (types[j].kind == TypeKind::Label);
            t.parent = j;
        }
        // life interval nested inside the parent's
        Tick plo = t.parent ? types[*t.parent].from : tick(1);
        std::optional<Tick> phi = t.parent ? types[*t.parent].to : std::nullopt;
        t.from = tick(between(rng, plo.v, std::max(plo.v, max_ticks)));
        bool open = (!phi && chance(rng, 50));
        if (!open) {
            std::uint64_t cap = phi ? phi->v : max_ticks;
            t.to = tick(between(rng, t.from.v, std::max(t.from.v, cap)));
        }
    }
    // at least one fact type, plus a few more at random
    for (std::size_t i = 0; i < n; ++i) {
        DrawnType& t = types[i];
        if (t.kind == TypeKind::Label) continue;
        bool force = (i + 1 == n);
        if (!force && !chance(rng, 30)) continue;
        std::size_t arity = 2;
        std::set<std::string> used;
        for (std::size_t k = 0; k < arity; ++k) {
            std::string role = pick(role_pool, rng);
            if (!used.insert(role).second) continue;
            t.roles.emplace(role, types[rng() % n].name);
        }
        if (t.roles.empty()) t.roles.emplace(role_pool[0], types[rng() % n].name);
    }

    std::vector<ObjectTypeInfo> infos;
    RelationSet rel, parents;
    for (const DrawnType& t : types)
        infos.push_back({t.name, t.kind, t.roles, {}, {}, {}});
    // covering parent edges; trees induce the relatedness components
    std::vector<std::size_t> tree(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (types[i].parent) {
            parents.insert({types[*types[i].parent].name, types[i].name});
            tree[i] = tree[*types[i].parent];
        } else {
            tree[i] = i;
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (tree[i] == tree[j]) rel.insert({types[i].name, types[j].name});

    auto universe =
        Universe::create(std::move(infos), std::move(rel), std::move(parents),
                         AdapterKind::Explicit);

    std::vector<ElementEvolution> elements;
    auto single_run = [](std::string id, ElementClass cls, Tick from,
                         std::optional<Tick> to, ElementVersion version) {
        ElementEvolution e;
        e.id = std::move(id);
        e.cls = cls;
        e.track = TimedMap<ElementVersion>::from_runs({{from, to, std::move(version)}});
        return e;
    };
    for (std::size_t i = 0; i < n; ++i) {
        const DrawnType& t = types[i];
        elements.push_back(single_run("t-" + t.name, ElementClass::ObjectType, t.from,
                                      t.to, ElementVersion{t.name}));
        if (t.kind == TypeKind::Label)
            elements.push_back(single_run(
                "d-" + t.name, ElementClass::Concretisation, t.from, t.to,
                ElementVersion{ConcretisationVersion{t.name, t.domain}}));
    }

    std::uint64_t fresh = 0;
    const std::vector<std::string> filler_pool{"s1", "s2", "s3"};
    std::size_t instances = rng() % (max_instances + 1);
    for (std::size_t k = 0; k < instances; ++k) {
        std::size_t i = rng() % n;
        const DrawnType& t = types[i];
        std::set<std::string> chain{t.name};
        for (std::optional<std::size_t> p = t.parent; p; p = types[*p].parent)
            chain.insert(types[*p].name);

        Tick from = tick(between(rng, t.from.v, t.to ? t.to->v : max_ticks));
        std::optional<Tick> to;
        if (t.to || chance(rng, 50))
            to = tick(between(rng, from.v, t.to ? t.to->v : max_ticks));

        InstanceValue value = InstanceValue::sur("s-" + std::to_string(fresh++));
        if (t.kind == TypeKind::Label) {
            value = t.domain == "Natno"
                        ? InstanceValue::nat_value(static_cast<std::int64_t>(fresh++))
                        : InstanceValue::str("v-" + std::to_string(fresh++));
        } else if (!t.roles.empty()) {
            // First filler from a shared pool (so uniqueness can fail),
            // the rest fresh (so whole tuples stay distinct).
            std::vector<std::pair<std::string, InstanceValue>> fields;
            bool share = t.roles.size() >= 2;
            for (const auto& [role, player] : t.roles) {
                fields.emplace_back(role, share
                                              ? InstanceValue::sur(pick(filler_pool, rng))
                                              : InstanceValue::sur(
                                                    "s-" + std::to_string(fresh++)));
                share = false;
            }
            value = InstanceValue::tuple(std::move(fields));
        }
        elements.push_back(single_run("g" + std::to_string(k + 1),
                                      ElementClass::InstanceTyping, from, to,
                                      ElementVersion{InstanceTyping{value, chain}}));
    }
    return make_history(universe, std::move(elements));
}

}  // namespace

History generate_history(const SmallUniverseSpec& spec) {
    std::size_t max_otypes = std::clamp<std::size_t>(spec.max_otypes, 1, 8);
    std::size_t max_instances = std::min<std::size_t>(spec.max_instances, 6);
    std::uint64_t max_ticks = std::clamp<std::uint64_t>(spec.max_ticks, 1, 6);
    std::mt19937 rng(static_cast<std::uint32_t>(spec.seed));
    for (int attempt = 0; attempt < 10000; ++attempt) {
        History h = draw_candidate(max_otypes, max_instances, max_ticks, rng);
        if (is_amh(h)) return h;
    }
    throw KernelError("history generation exhausted its retry budget (seed " +
                      std::to_string(spec.seed) + ")");
}

}  // namespace evokernel
