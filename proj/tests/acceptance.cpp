// Acceptance gate: seven end-to-end criteria, one pass/fail line each.
// Exits nonzero if any criterion fails. All comparisons are exact.

#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "evokernel/constraint_eval.hpp"
#include "evokernel/evolution.hpp"
#include "evokernel/io.hpp"
#include "evokernel/oracle.hpp"

using namespace evokernel;

namespace {

std::string fx(const std::string& name) {
    return std::string(FIXTURE_DIR) + "/" + name;
}

struct Checker {
    bool ok = true;
    std::string detail;

    void expect(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
    void note(const std::string& what) {
        if (ok) detail = what;
    }
};

ObjectTypeInfo otype(std::string name, TypeKind kind = TypeKind::NonLabel) {
    ObjectTypeInfo info;
    info.name = std::move(name);
    info.kind = kind;
    return info;
}

ElementEvolution evo(const std::string& id, ElementClass cls,
                     std::vector<TimedMap<ElementVersion>::Run> runs) {
    ElementEvolution e;
    e.id = id;
    e.cls = cls;
    e.track = TimedMap<ElementVersion>::from_runs(std::move(runs));
    return e;
}

ElementVersion ot(const std::string& name) { return ElementVersion{name}; }

ElementVersion typing(InstanceValue v, std::set<std::string> types) {
    return ElementVersion{InstanceTyping{std::move(v), std::move(types)}};
}

std::set<std::string> axioms_of(const ValidationReport& r) {
    std::set<std::string> names;
    for (const Violation& v : r.items()) names.insert(v.axiom);
    return names;
}

TimedMap<int> random_int_map(std::mt19937& rng) {
    std::uniform_int_distribution<int> coin(0, 3);
    std::vector<TimedMap<int>::Run> runs;
    std::uint64_t cursor = coin(rng);
    int n_runs = 1 + coin(rng);
    for (int i = 0; i < n_runs; ++i) {
        TimedMap<int>::Run r;
        r.from = tick(cursor);
        std::uint64_t len = coin(rng);
        bool open = (i == n_runs - 1) && coin(rng) == 0;
        r.to = open ? std::nullopt : std::optional<Tick>(tick(cursor + len));
        r.value = coin(rng);
        runs.push_back(r);
        if (open) break;
        cursor += len + 1 + coin(rng);
    }
    return TimedMap<int>::from_runs(std::move(runs));
}

// ---- criterion bodies ------------------------------------------------------

void store_reproduction(Checker& c) {
    History golden = load_history_file(fx("store_history.json"));
    std::set<std::string> early = {"Record", "Recording of Song on Record"};
    std::set<std::string> late = {"Medium", "Record",
                                  "Recording of Song on Medium"};
    for (std::uint64_t t = 1; t <= 3; ++t)
        c.expect(derive_version(golden, tick(t)).otypes == early,
                 "otype set at tick " + std::to_string(t));
    for (std::uint64_t t = 4; t <= 5; ++t)
        c.expect(derive_version(golden, tick(t)).otypes == late,
                 "otype set at tick " + std::to_string(t));

    History initial = load_history_file(fx("store_initial.json"));
    c.expect(initial == prefix_history(golden, tick(1)),
             "initial history is the tick-1 prefix");

    auto events = load_events_file(fx("store_events.json"));
    ApplyOutcome out = replay(initial, events);
    c.expect(std::holds_alternative<History>(out), "replay accepted");
    if (std::holds_alternative<History>(out))
        c.expect(std::get<History>(out) == golden, "replay rebuilds the history");
    c.expect(behaves(events, golden), "behaves");
    c.expect(is_eis(events, golden), "is_eis");
    c.note("snapshots, replay, behaves, is_eis");
}

void broker_roots(Checker& c) {
    History h = load_history_file(fx("broker_history.json"));
    c.expect(validate_history(h).ok(), "golden history validates");
    c.expect(check_isu(*h.universe).items().empty(), "universe satisfies isu rules");
    std::set<std::string> both = {"Boat", "House"};
    c.expect(h.universe->roots_of("Product") == both, "roots of Product");
    c.expect(h.universe->roots_of("Real estate") == both, "roots of Real estate");
    c.expect(common_roots_holds(*h.universe), "common-roots characterisation");

    History w1 = load_history_file(fx("broker_w1.json"));
    ValidationReport r = validate_history(w1);
    c.expect(r.count("UniqueRoot") == 1, "exactly one unique-root violation");
    for (const Violation& v : r.items())
        if (v.axiom == "UniqueRoot") {
            c.expect(v.tick == tick(1), "unique-root violation tick");
            c.expect(v.witnesses ==
                         std::vector<std::string>{"w1", "Boat", "House"},
                     "unique-root violation witnesses");
        }
    c.note("universe rules, roots, w1 rejection");
}

void airplane_constraints(Checker& c) {
    History h = load_history_file(fx("airplane_history.json"));
    c.expect(validate_history(h).ok(), "golden history validates");

    AppModelVersion v = derive_version(h, tick(3));
    c.expect(v.constraints.size() == 5, "five constraints alive");
    std::map<std::string, std::set<std::string>> expected_owners = {
        {"C1", {"Manufacturer"}},
        {"C2", {"Airplane"}},
        {"C3", {"Admission-code"}},
        {"C4", {"Airplane", "Registered-airplane", "Unregistered-airplane"}},
        {"C5", {"Airplane", "Registered-airplane", "Unregistered-airplane"}},
    };
    for (const auto& [id, owners] : expected_owners) {
        auto it = v.constraints.find(id);
        c.expect(it != v.constraints.end(), id + " present");
        if (it == v.constraints.end()) continue;
        std::set<std::string> got;
        for (const auto& [owner, def] : it->second) {
            got.insert(owner);
            bool parses = true;
            try {
                (void)parse_constraint(def.text);
            } catch (const ParseError&) {
                parses = false;
            }
            c.expect(parses, id + " text parses");
        }
        c.expect(got == owners, id + " ownership map");
    }

    AstPtr unreg = parse_constraint(
        "TOTAL { Airplane.build-by } AND TOTAL { Airplane.has-as }");
    AstPtr air = parse_constraint("TOTAL { Airplane.build-by, Airplane.has-as }");
    c.expect(constr_implies(unreg, air).value == ImplicationValue::Implied,
             "unregistered form implies airplane form");
    c.expect(constr_implies(air, unreg).value == ImplicationValue::NotImplied,
             "airplane form does not imply unregistered form");

    History bad = load_history_file(fx("airplane_c3_violation.json"));
    ValidationReport r = validate_history(bad);
    c.expect(r.items().size() == 1, "exactly one violation in the c3 fixture");
    if (!r.items().empty()) {
        c.expect(r.items()[0].axiom == "ConstraintsHold", "axiom of the c3 row");
        c.expect(r.items()[0].tick == tick(5), "tick of the c3 row");
    }
    c.note("ownership, implication, c3 detection");
}

void lemma_certification(Checker& c) {
    int lemma_failures = 0;
    int agreements = 0;
    int disagreements = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        SmallUniverseSpec spec;
        spec.seed = seed;
        History h = generate_history(spec);
        if (!oracle_check_lemmas(h).items().empty()) ++lemma_failures;
        if (seed < 100) {
            std::mt19937 rng(static_cast<std::uint32_t>(seed * 977 + 1));
            for (int i = 0; i < 5; ++i) {
                AstPtr ast = generate_random_ast(*h.universe, rng);
                std::uint64_t lo = rng() % (h.horizon.v + 1);
                TickRange interval{tick(lo), tick(lo + rng() % 3)};
                if (eval_constraint(h, interval, *ast) ==
                    oracle_eval_constraint(h, interval, *ast))
                    ++agreements;
                else
                    ++disagreements;
            }
        }
    }
    c.expect(lemma_failures == 0,
             std::to_string(lemma_failures) + " lemma failures in 1000 histories");
    c.expect(agreements == 500 && disagreements == 0,
             "evaluator agreement " + std::to_string(agreements) + "/500");
    c.note("1000 histories certified, 500/500 evaluator agreements");
}

void prefix_algebra(Checker& c) {
    std::mt19937 rng(20230415);
    std::uniform_int_distribution<std::uint64_t> pick(0, 9);
    for (int i = 0; i < 1000; ++i) {
        TimedMap<int> m = random_int_map(rng);
        Tick t = tick(pick(rng));
        Tick s = tick(pick(rng));
        c.expect(m.prefixed(t).prefixed(t) == m.prefixed(t),
                 "prefix is idempotent");
        Tick lo = s < t ? s : t;
        c.expect(m.prefixed(t).prefixed(s) == m.prefixed(lo),
                 "double prefix collapses to the earlier cut");
        c.expect(m.prefixed(s).prefixed(t) == m.prefixed(lo),
                 "double prefix collapses in either order");
    }
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        SmallUniverseSpec spec;
        spec.seed = seed + 5000;
        History h = generate_history(spec);
        Tick t = tick(pick(rng) % (h.horizon.v + 2));
        Tick s = tick(pick(rng) % (h.horizon.v + 2));
        Tick lo = s < t ? s : t;
        c.expect(prefix_history(prefix_history(h, t), s) == prefix_history(h, lo),
                 "history prefix corollary");
    }
    c.note("1000 map checks, 100 history checks");
}

void axiom_selectivity(Checker& c) {
    // Separation: an evolution whose declared class and carried versions
    // disagree.
    {
        auto u = Universe::create({otype("A")}, {}, {}, AdapterKind::Explicit);
        History h = make_history(
            u,
            {evo("ot-a", ElementClass::ObjectType,
                 {{tick(1), std::nullopt, ot("A")}}),
             evo("mix", ElementClass::ObjectType,
                 {{tick(1), std::nullopt, typing(InstanceValue::sur("v"), {"A"})}})});
        ValidationReport r = validate_history(h);
        c.expect(axioms_of(r) == std::set<std::string>{"EvolutionSeparation"},
                 "separation mutant flags only EvolutionSeparation");
        c.expect(r.count("EvolutionSeparation") == 1, "separation row count");
    }
    // Monotonous ancestors: two object evolutions swap an ancestor and its
    // offspring, so the parent link inverts while relatedness persists.
    {
        auto u = Universe::create({otype("X"), otype("Y")}, {{"X", "Y"}},
                                  {{"X", "Y"}}, AdapterKind::Explicit);
        History h = make_history(
            u, {evo("e1", ElementClass::ObjectType,
                    {{tick(1), tick(1), ot("X")}, {tick(2), std::nullopt, ot("Y")}}),
                evo("e2", ElementClass::ObjectType,
                    {{tick(1), tick(1), ot("Y")}, {tick(2), std::nullopt, ot("X")}})});
        ValidationReport r = validate_history(h);
        c.expect(axioms_of(r) == std::set<std::string>{"MonotonousAncestors"},
                 "ancestor mutant flags only MonotonousAncestors");
        c.expect(r.count("MonotonousAncestors") == 1, "ancestor row count");
    }
    // Guided evolution: a typing persists across a step no object evolution
    // witnesses.
    {
        auto u = Universe::create({otype("A"), otype("B"), otype("X")},
                                  {{"A", "X"}}, {}, AdapterKind::Explicit);
        History h = make_history(
            u, {evo("hA1", ElementClass::ObjectType, {{tick(1), tick(1), ot("A")}}),
                evo("hA2", ElementClass::ObjectType,
                    {{tick(2), std::nullopt, ot("A")}}),
                evo("hJ", ElementClass::ObjectType,
                    {{tick(1), tick(1), ot("X")}, {tick(2), std::nullopt, ot("B")}}),
                evo("g", ElementClass::InstanceTyping,
                    {{tick(1), std::nullopt,
                      typing(InstanceValue::sur("v"), {"A"})}})});
        ValidationReport r = validate_history(h);
        c.expect(axioms_of(r) == std::set<std::string>{"GuidedEvolution"},
                 "guided mutant flags only GuidedEvolution");
        c.expect(r.count("GuidedEvolution") == 1, "guided row count");
    }
    // Constraints hold: the fixture drops one role filler while its totality
    // constraint is in force.
    {
        History h = load_history_file(fx("airplane_c3_violation.json"));
        ValidationReport r = validate_history(h);
        c.expect(axioms_of(r) == std::set<std::string>{"ConstraintsHold"},
                 "constraint mutant flags only ConstraintsHold");
        c.expect(r.count("ConstraintsHold") == 1, "constraint row count");
    }
    c.note("four mutants, each caught by exactly its own rule");
}

void transaction_laws(Checker& c) {
    std::mt19937 rng(777);
    int accepted = 0;
    int rejected = 0;
    for (std::uint64_t seed = 0; seed < 3000 && accepted < 500; ++seed) {
        SmallUniverseSpec spec;
        spec.seed = seed;
        History h = generate_history(spec);
        Tick t = h.horizon;

        AppModelVersion v = derive_version(h, t);
        std::vector<std::string> entity_roots;
        for (const std::string& name : v.otypes) {
            const ObjectTypeInfo& info = h.universe->info(name);
            if (h.universe->is_root(name) && info.kind == TypeKind::NonLabel &&
                info.roles.empty() && !info.power_of)
                entity_roots.push_back(name);
        }
        std::vector<std::string> ids;
        for (const auto& [id, e] : h.elements)
            if (e.track.defined_at(t)) ids.push_back(id);

        for (int round = 0; round < 6; ++round) {
            TransactionBody edits;
            int choice = static_cast<int>(rng() % 3);
            std::string fresh = "fz-" + std::to_string(seed) + "-" +
                                std::to_string(round);
            if (choice == 0 && !entity_roots.empty()) {
                edits.push_back(Edit{
                    EditOp::Create, fresh, ElementClass::InstanceTyping,
                    make_version(InstanceTyping{InstanceValue::sur(fresh),
                                                {entity_roots.front()}})});
            } else if (choice == 1 && !v.otypes.empty()) {
                edits.push_back(Edit{EditOp::Create, fresh,
                                     ElementClass::ObjectType,
                                     make_version(std::string(*v.otypes.begin()))});
            } else if (!ids.empty()) {
                edits.push_back(
                    Edit{EditOp::Terminate, ids[rng() % ids.size()], {}, {}});
            }
            if (edits.empty()) continue;

            History before = h;
            ApplyOutcome out = apply_event(h, t, edits);
            if (std::holds_alternative<RejectedEvent>(out)) {
                ++rejected;
                const RejectedEvent& rej = std::get<RejectedEvent>(out);
                c.expect(rej.at == t, "rejection names the offending tick");
                c.expect(!rej.report.ok(), "rejection carries a failing report");
                c.expect(h == before, "rejected transaction leaves no trace");
                continue;
            }
            ++accepted;
            const History& next = std::get<History>(out);
            c.expect(next.horizon == t.next(), "horizon advances one step");
            c.expect(prefix_history(next, t) == h, "the past is preserved");
            c.expect(next == prefix_history(next, t.next()),
                     "nothing changes beyond the new step");
            for (const auto& [id, e] : h.elements) {
                bool touched = false;
                for (const Edit& ed : edits) touched = touched || ed.id == id;
                if (!touched)
                    c.expect(next.elements.at(id) == e,
                             "untouched element " + id + " unchanged");
            }
        }
    }
    c.expect(accepted >= 500, "only " + std::to_string(accepted) +
                                  " accepted transactions reached");
    c.note(std::to_string(accepted) + " accepted, " + std::to_string(rejected) +
           " rejected, laws held exactly");
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double budget_s;
        std::function<void(Checker&)> body;
    };
    const std::vector<Criterion> criteria = {
        {"rental-store reproduction", 1.0, store_reproduction},
        {"broker roots and w1 rejection", 1.0, broker_roots},
        {"airplane constraint suite", 1.0, airplane_constraints},
        {"lemma certification", 60.0, lemma_certification},
        {"prefix algebra", 10.0, prefix_algebra},
        {"axiom selectivity", 5.0, axiom_selectivity},
        {"transaction law suite", 30.0, transaction_laws},
    };

    bool all_ok = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Checker c;
        auto start = std::chrono::steady_clock::now();
        try {
            criteria[i].body(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
        c.expect(secs < criteria[i].budget_s,
                 "over time budget: " + std::to_string(secs) + " s");
        std::printf("criterion %zu (%s): %s (%s, %.2f s)\n", i + 1,
                    criteria[i].name, c.ok ? "PASS" : "FAIL", c.detail.c_str(),
                    secs);
        all_ok = all_ok && c.ok;
    }
    return all_ok ? 0 : 1;
}
