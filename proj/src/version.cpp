#include "evokernel/version.hpp"

#include <algorithm>

namespace evokernel {

Universe AppModelVersion::restricted() const {
    return universe->restricted_to(otypes);
}

std::map<std::string, std::string> AppModelVersion::domain_map() const {
    std::map<std::string, std::string> out;
    for (const auto& [id, label, domain] : domain_entries) out.emplace(label, domain);
    return out;
}

std::vector<InstanceTyping> AppModelVersion::typing_list() const {
    std::vector<InstanceTyping> out;
    out.reserve(typings.size());
    for (const auto& [id, t] : typings) out.push_back(t);
    return out;
}

AppModelVersion derive_version(const History& h, Tick t) {
    AppModelVersion v;
    v.at = t;
    v.universe = h.universe;
    for (const auto& [id, e] : h.elements) {
        const ElementVersion* ver = e.track.at(t);
        if (!ver || ver->cls() != e.cls) continue;  // separation violations skip
        switch (e.cls) {
            case ElementClass::ObjectType:
                v.otypes.insert(ver->otype());
                break;
            case ElementClass::Constraint:
                v.constraints.emplace(id, ver->constraints());
                break;
            case ElementClass::Task:
                v.tasks.emplace(id, ver->tasks());
                break;
            case ElementClass::InstanceTyping:
                v.typings.emplace(id, ver->typing());
                break;
            case ElementClass::Concretisation:
                v.domain_entries.emplace_back(id, ver->concretisation().label,
                                              ver->concretisation().domain);
                break;
        }
    }
    std::sort(v.domain_entries.begin(), v.domain_entries.end());
    return v;
}

ValueSet pop_at(const AppModelVersion& v, const std::string& otype) {
    if (!v.universe->has_otype(otype))
        throw UniverseError("unknown object type: " + otype);
    ValueSet out;
    for (const auto& [id, t] : v.typings)
        if (t.types.count(otype)) out.insert(t.value);
    return out;
}

ValueSet pop_at(const History& h, Tick t, const std::string& otype) {
    return pop_at(derive_version(h, t), otype);
}

ValueSet pop_infinity(const History& h, const std::string& otype) {
    if (!h.universe->has_otype(otype))
        throw UniverseError("unknown object type: " + otype);
    std::set<Tick> ticks{h.horizon};
    for (const auto& [id, e] : h.elements)
        for (Tick b : e.track.breakpoints()) ticks.insert(b);
    ValueSet out;
    for (Tick t : ticks) {
        ValueSet p = pop_at(h, t, otype);
        out.insert(p.begin(), p.end());
    }
    return out;
}

namespace {

std::vector<std::string> sorted(const std::set<std::string>& s) {
    return {s.begin(), s.end()};
}

// Iterates all alive definitions: constraint elements first, then tasks.
template <typename Fn>
void each_owned(const AppModelVersion& v, Fn&& fn) {
    for (const auto& [id, owned] : v.constraints) {
        std::set<std::string> owners;
        for (const auto& [owner, def] : owned) owners.insert(owner);
        fn(id, owners);
    }
    for (const auto& [id, owned] : v.tasks) {
        std::set<std::string> owners;
        for (const auto& [owner, def] : owned) owners.insert(owner);
        fn(id, owners);
    }
}

}  // namespace

ValidationReport check_amv(const AppModelVersion& v) {
    ValidationReport r;
    const Universe& u = *v.universe;
    Universe at = v.restricted();
    Tick t = v.at;

    // ActiveLife
    for (const auto& [id, typing] : v.typings)
        for (const std::string& x : typing.types)
            if (!v.otypes.count(x)) r.add("ActiveLife", t, {id, x});

    // ActiveRelatedness
    for (const auto& [id, typing] : v.typings)
        for (const std::string& x : typing.types)
            for (const std::string& y : typing.types)
                if (x < y && !u.type_related(x, y))
                    r.add("ActiveRelatedness", t, {id, x, y});

    // FoundedActivity
    for (const auto& [id, typing] : v.typings) {
        auto p = [&](const std::string& x) { return typing.types.count(x) != 0; };
        for (const Violation& w : check_weak_inheritance(at, p).items())
            r.add("FoundedActivity", t, {id, w.witnesses.front()});
    }

    // UniqueRoot
    for (const auto& [id, typing] : v.typings) {
        std::set<std::string> roots;
        for (const std::string& x : typing.types)
            if (at.has_otype(x) && at.is_root(x)) roots.insert(x);
        if (roots.size() > 1) {
            std::vector<std::string> w{id};
            for (const std::string& x : roots) w.push_back(x);
            r.add("UniqueRoot", t, std::move(w));
        }
    }

    // LiveFoundation
    {
        auto p = [&](const std::string& x) { return v.otypes.count(x) != 0; };
        for (const Violation& w : check_weak_inheritance(at, p).items())
            r.add("LiveFoundation", t, {w.witnesses.front()});
    }

    // FullConcretisation
    {
        std::map<std::string, std::set<std::string>> assigned;
        for (const auto& [id, label, domain] : v.domain_entries) {
            assigned[label].insert(domain);
            if (!v.otypes.count(label) || !u.has_otype(label) ||
                u.info(label).kind != TypeKind::Label)
                r.add("FullConcretisation", t, {id, label, "assignment for a type that is not an alive label type"});
            if (!known_domain(domain))
                r.add("FullConcretisation", t, {id, label, "unknown domain " + domain});
        }
        for (const auto& [label, domains] : assigned)
            if (domains.size() > 1)
                r.add("FullConcretisation", t, {label, "conflicting assignments"});
        for (const std::string& x : v.otypes)
            if (u.has_otype(x) && u.info(x).kind == TypeKind::Label && !assigned.count(x))
                r.add("FullConcretisation", t, {x, "alive label type without domain"});
    }

    // LabelTyping
    {
        auto domains = v.domain_map();
        for (const auto& [id, typing] : v.typings) {
            if (!typing.value.is_atomic() || !in_some_domain(typing.value)) continue;
            for (const std::string& x : typing.types) {
                if (!u.has_otype(x)) continue;
                if (u.info(x).kind != TypeKind::Label) {
                    r.add("LabelTyping", t, {id, x, "concrete value typed by a non-label type"});
                    continue;
                }
                auto it = domains.find(x);
                if (it == domains.end() || !domain_contains(it->second, typing.value))
                    r.add("LabelTyping", t, {id, x, typing.value.render()});
            }
        }
    }

    // AliveDefinitions
    each_owned(v, [&](const std::string& id, const std::set<std::string>& owners) {
        for (const std::string& o : owners)
            if (!v.otypes.count(o)) r.add("AliveDefinitions", t, {id, o});
    });

    // TypeRelDef
    each_owned(v, [&](const std::string& id, const std::set<std::string>& owners) {
        for (const std::string& x : owners)
            for (const std::string& y : owners)
                if (x < y && !u.type_related(x, y)) r.add("TypeRelDef", t, {id, x, y});
    });

    // DefInheritance
    each_owned(v, [&](const std::string& id, const std::set<std::string>& owners) {
        auto p = [&](const std::string& x) { return owners.count(x) != 0; };
        for (const Violation& w : check_strong_inheritance(at, p).items())
            r.add("DefInheritance", t, {id, w.witnesses[0], w.witnesses[1]});
    });

    // DanglingTypes
    {
        auto domains = v.domain_map();
        auto check_depends = [&](const std::string& id, const DependsSet& d) {
            for (const std::string& x : d.otypes)
                if (!v.otypes.count(x)) r.add("DanglingTypes", t, {id, x});
            for (const auto& [label, domain] : d.domains) {
                auto it = domains.find(label);
                if (it == domains.end() || it->second != domain)
                    r.add("DanglingTypes", t, {id, label + " -> " + domain});
            }
        };
        for (const auto& [id, owned] : v.constraints)
            for (const auto& [owner, def] : owned)
                check_depends(id, depends_of(def, u));
        for (const auto& [id, owned] : v.tasks)
            for (const auto& [owner, def] : owned)
                check_depends(id, depends_of(def, u));
    }

    // Strengthening
    for (const auto& [id, owned] : v.constraints) {
        for (const auto& [x, dx] : owned) {
            for (const auto& [y, dy] : owned) {
                if (x == y || !at.has_otype(x) || !at.has_otype(y)) continue;
                if (!at.parent_of(x, y)) continue;
                ImplicationVerdict verdict = constr_implies(dy.ast, dx.ast);
                if (verdict.value == ImplicationValue::NotImplied)
                    r.add("Strengthening", t, {id, y, x, verdict.justification});
                else if (verdict.value == ImplicationValue::Unknown)
                    r.add("Strengthening", t, {id, y, x}, Severity::Warning);
            }
        }
    }

    r.sort();
    return r;
}

ValidationReport check_strong_typing(const History& h) {
    ValidationReport r;
    const Universe& u = *h.universe;

    std::map<std::string, ValueSet> pops;
    for (const auto& [name, info] : u.otypes()) pops.emplace(name, pop_infinity(h, name));

    // ExclRootPop: unrelated roots never share instances, at any time.
    for (const auto& [x, px] : pops) {
        for (const auto& [y, py] : pops) {
            if (x >= y || !u.is_root(x) || !u.is_root(y)) continue;
            if (u.type_related(x, y)) continue;
            for (const InstanceValue& value : px)
                if (py.count(value))
                    r.add("ExclRootPop", std::nullopt, {x, y, value.render()});
        }
    }
    bool root_rule_holds = r.items().empty();

    // Theorems that follow from the axioms; a disagreement while the
    // premises hold is an internal inconsistency, not an input error.
    if (root_rule_holds) {
        for (const auto& [x, px] : pops)
            for (const auto& [y, py] : pops) {
                if (x >= y || u.type_related(x, y)) continue;
                for (const InstanceValue& value : px)
                    if (py.count(value))
                        r.add("ExclPop", std::nullopt, {x, y, value.render()},
                              Severity::Internal);
            }
    }

    std::set<Tick> ticks{h.horizon};
    for (const auto& [id, e] : h.elements)
        for (Tick b : e.track.breakpoints()) ticks.insert(b);
    for (Tick t : ticks) {
        AppModelVersion v = derive_version(h, t);
        Universe at = v.restricted();
        // A typing is well-founded when its types are alive, every
        // non-root member has an ancestor member, and roots are unique.
        auto well_founded = [&](const InstanceTyping& typing) {
            std::size_t roots = 0;
            for (const std::string& x : typing.types) {
                if (!at.has_otype(x)) return false;
                if (at.is_root(x)) {
                    ++roots;
                    continue;
                }
                bool accompanied = false;
                for (const std::string& a : at.ancestors_of(x))
                    if (typing.types.count(a)) {
                        accompanied = true;
                        break;
                    }
                if (!accompanied) return false;
            }
            return roots <= 1;
        };
        bool all_well_founded = true;
        for (const auto& [tid, typing] : v.typings) {
            if (!well_founded(typing)) {
                all_well_founded = false;
                continue;
            }
            // RootActive: each member type is rooted by exactly one member.
            for (const std::string& y : typing.types) {
                std::size_t n = 0;
                for (const std::string& x : typing.types)
                    if (at.root_of(x, y)) ++n;
                if (n != 1) r.add("RootActive", t, {tid, y}, Severity::Internal);
            }
        }
        if (!all_well_founded) continue;
        // PopDist: each population is covered by its root populations.
        for (const std::string& x : v.otypes) {
            ValueSet covered;
            for (const std::string& root : at.roots_of(x)) {
                ValueSet rp = pop_at(v, root);
                covered.insert(rp.begin(), rp.end());
            }
            for (const InstanceValue& value : pop_at(v, x))
                if (!covered.count(value))
                    r.add("PopDist", t, {x, value.render()}, Severity::Internal);
        }
    }
    r.sort();
    return r;
}

ValidationReport check_version(const AppModelVersion& v) {
    ValidationReport r;
    std::set<std::string> unknown;
    for (const std::string& x : v.otypes)
        if (!v.universe->has_otype(x)) unknown.insert(x);
    if (!unknown.empty()) {
        // Not even a sub-schema of the universe; adapter checks would be
        // meaningless.
        r.add("IsSchema", v.at, sorted(unknown));
    } else {
        if (!adapter_is_schema(*v.universe, v.otypes))
            r.add("IsSchema", v.at, sorted(v.otypes));
        if (!adapter_is_pop(*v.universe, v.otypes, v.typing_list()))
            r.add("IsPop", v.at, {});
    }
    r.merge(check_amv(v));
    r.sort();
    return r;
}

bool is_am(const AppModelVersion& v) { return check_version(v).ok(); }

}  // namespace evokernel
