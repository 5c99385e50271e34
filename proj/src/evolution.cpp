#include "evokernel/evolution.hpp"

#include <algorithm>
#include <set>

#include "evokernel/constraint_eval.hpp"

namespace evokernel {

namespace {

std::set<Tick> all_breakpoints(const History& h) {
    std::set<Tick> out;
    for (const auto& [id, e] : h.elements)
        for (Tick b : e.track.breakpoints()) out.insert(b);
    return out;
}

// Ticks t for which the step (t, t+1) can differ from a neighbouring step;
// checking transitions at these covers every distinct transition.
std::set<Tick> pair_ticks(const History& h) {
    std::set<Tick> out;
    for (Tick b : all_breakpoints(h)) {
        out.insert(b.prev());
        out.insert(b);
    }
    return out;
}

const std::string* otype_at(const ElementEvolution& e, Tick t) {
    const ElementVersion* v = e.track.at(t);
    if (!v || v->cls() != ElementClass::ObjectType) return nullptr;
    return &v->otype();
}

const InstanceTyping* typing_at(const ElementEvolution& e, Tick t) {
    const ElementVersion* v = e.track.at(t);
    if (!v || v->cls() != ElementClass::InstanceTyping) return nullptr;
    return &v->typing();
}

bool related_to_some(const Universe& u, const std::string& x,
                     const std::set<std::string>& ys) {
    for (const std::string& y : ys)
        if (u.type_related(x, y)) return true;
    return false;
}

}  // namespace

ValidationReport check_separation(const History& h) {
    ValidationReport r;
    for (const auto& [id, e] : h.elements)
        for (const auto& run : e.track.runs())
            if (run.value.cls() != e.cls)
                r.add("EvolutionSeparation", run.from,
                      {id, to_string(e.cls), to_string(run.value.cls())});
    r.sort();
    return r;
}

ValidationReport check_monotonous_ancestors(const History& h) {
    ValidationReport r;
    const Universe& u = *h.universe;
    std::set<Tick> ticks = pair_ticks(h);
    for (const auto& [id1, e1] : h.elements) {
        if (e1.cls != ElementClass::ObjectType) continue;
        for (const auto& [id2, e2] : h.elements) {
            if (id1 == id2 || e2.cls != ElementClass::ObjectType) continue;
            for (Tick t : ticks) {
                const std::string* a = otype_at(e1, t);
                const std::string* b = otype_at(e2, t);
                const std::string* an = otype_at(e1, t.next());
                const std::string* bn = otype_at(e2, t.next());
                if (!a || !b) continue;
                if (!u.parent_of(*a, *b)) continue;
                if (an && bn && u.type_related(*an, *bn)) {
                    if (!u.parent_of(*an, *bn)) {
                        r.add("MonotonousAncestors", t, {id1, id2, *an, *bn});
                        continue;
                    }
                    // The axiom held here; the promotion law it entails
                    // must then hold too, or the kernel is inconsistent.
                    if (u.is_root(*bn))
                        r.add("PromotionTermination", t, {id1, id2, *bn},
                              Severity::Internal);
                }
            }
        }
    }
    r.sort();
    return r;
}

ValidationReport check_guided_evolution(const History& h) {
    ValidationReport r;
    const Universe& u = *h.universe;
    std::set<Tick> ticks = pair_ticks(h);
    for (const auto& [gid, g] : h.elements) {
        if (g.cls != ElementClass::InstanceTyping) continue;
        for (Tick t : ticks) {
            const InstanceTyping* now = typing_at(g, t);
            const InstanceTyping* then = typing_at(g, t.next());
            if (!now || !then) continue;
            bool witnessed = false;
            for (const auto& [hid, e] : h.elements) {
                if (e.cls != ElementClass::ObjectType) continue;
                const std::string* x = otype_at(e, t);
                const std::string* xn = otype_at(e, t.next());
                if (!x || !xn) continue;
                if (!related_to_some(u, *x, now->types) ||
                    related_to_some(u, *xn, then->types)) {
                    witnessed = true;
                    break;
                }
            }
            if (!witnessed) r.add("GuidedEvolution", t, {gid});
        }
    }
    r.sort();
    return r;
}

ValidationReport check_constraints_hold(const History& h) {
    ValidationReport r;
    std::set<Tick> bps = all_breakpoints(h);
    Tick last = bps.empty() ? tick(0) : *bps.rbegin();
    for (const auto& [id, e] : h.elements) {
        if (e.cls != ElementClass::Constraint) continue;
        for (const auto& run : e.track.runs()) {
            if (run.value.cls() != ElementClass::Constraint) continue;
            Tick bound = run.to ? std::min(*run.to, std::max(last, run.from))
                                : std::max(last, run.from);
            std::set<Tick> sample{run.from};
            for (Tick b : bps)
                if (run.from < b && b <= bound) sample.insert(b);
            for (Tick t : sample) {
                TickRange in_force{run.from, t};
                History slice = restrict_history(h, in_force);
                for (const auto& [owner, def] : run.value.constraints()) {
                    try {
                        if (!eval_constraint(slice, in_force, *def.ast))
                            r.add("ConstraintsHold", t, {id, owner, def.text});
                    } catch (const EvalError& err) {
                        r.add("ConstraintsHold", t,
                              {id, owner, std::string("evaluation error: ") + err.what()});
                    }
                }
            }
        }
    }
    r.sort();
    return r;
}

ValidationReport validate_history(const History& h) {
    ValidationReport r;
    r.merge(check_isu(*h.universe));
    // Every alive otype name must denote a universe type before snapshots
    // can be inspected against it.
    for (Tick b : all_breakpoints(h)) r.merge(check_version(derive_version(h, b)));
    r.merge(check_separation(h));
    r.merge(check_monotonous_ancestors(h));
    r.merge(check_guided_evolution(h));
    r.merge(check_constraints_hold(h));
    r.merge(check_strong_typing(h));
    r.sort();
    return r;
}

bool is_amh(const History& h) { return validate_history(h).ok(); }

ApplyOutcome apply_event(const History& h, Tick t, const TransactionBody& edits) {
    if (t < h.horizon)
        throw EventError("precondition",
                         "event at tick " + std::to_string(t.v) +
                             " lies before the horizon " + std::to_string(h.horizon.v));
    if (!(h == prefix_history(h, t)))
        throw EventError("precondition",
                         "history still changes after tick " + std::to_string(t.v));

    std::map<std::string, ElementEvolution> elements = h.elements;
    for (const Edit& edit : edits) {
        switch (edit.op) {
            case EditOp::Create: {
                if (!edit.version || !edit.cls)
                    throw EventError("malformed-edit",
                                     "create of " + edit.id + " needs a class and a version");
                if (elements.count(edit.id))
                    throw EventError("duplicate-element-id",
                                     "create of existing element " + edit.id);
                if (*edit.cls != edit.version->cls())
                    throw EventError("class-mismatch",
                                     "create of " + edit.id + " declares " +
                                         to_string(*edit.cls) + " but carries " +
                                         to_string(edit.version->cls()));
                ElementEvolution e;
                e.id = edit.id;
                e.cls = *edit.cls;
                e.track = TimedMap<ElementVersion>::from_runs(
                    {{t.next(), std::nullopt, *edit.version}});
                elements.emplace(edit.id, std::move(e));
                break;
            }
            case EditOp::Set: {
                auto it = elements.find(edit.id);
                if (it == elements.end())
                    throw EventError("unknown-element-id", "set of unknown element " + edit.id);
                if (!edit.version)
                    throw EventError("malformed-edit", "set of " + edit.id + " needs a version");
                if (edit.version->cls() != it->second.cls)
                    throw EventError("class-mismatch",
                                     "set of " + edit.id + " (" + to_string(it->second.cls) +
                                         ") carries " + to_string(edit.version->cls()));
                it->second.track = it->second.track.with_value_from(t.next(), *edit.version);
                break;
            }
            case EditOp::Terminate: {
                auto it = elements.find(edit.id);
                if (it == elements.end())
                    throw EventError("unknown-element-id",
                                     "terminate of unknown element " + edit.id);
                if (!it->second.track.defined_at(t))
                    throw EventError("terminate-dead",
                                     "terminate of " + edit.id + ", not alive at tick " +
                                         std::to_string(t.v));
                it->second.track = it->second.track.terminated_at(t);
                break;
            }
        }
    }

    History out{h.universe, std::move(elements), t.next()};
    if (is_amh(h) && !is_amh(out)) return RejectedEvent{t, validate_history(out)};
    return out;
}

ApplyOutcome replay(History h, const std::vector<EventOccurrence>& events) {
    std::optional<Tick> prev;
    for (const EventOccurrence& ev : events) {
        if (prev && !(*prev < ev.at))
            throw EventError("event-order", "events out of order at tick " +
                                                std::to_string(ev.at.v));
        prev = ev.at;
        ApplyOutcome outcome = apply_event(h, ev.at, ev.edits);
        if (std::holds_alternative<RejectedEvent>(outcome))
            return std::get<RejectedEvent>(outcome);
        h = std::get<History>(std::move(outcome));
    }
    return h;
}

bool behaves(const std::vector<EventOccurrence>& events, const History& h) {
    std::set<Tick> evented;
    for (const EventOccurrence& ev : events) {
        if (!evented.insert(ev.at).second) return false;  // two events, one tick
        try {
            ApplyOutcome outcome = apply_event(prefix_history(h, ev.at), ev.at, ev.edits);
            if (!std::holds_alternative<History>(outcome)) return false;
            if (!(std::get<History>(outcome) == prefix_history(h, ev.at.next())))
                return false;
        } catch (const EventError&) {
            return false;
        }
    }
    for (Tick s : all_breakpoints(h)) {
        if (s == tick(0)) continue;
        if (prefix_history(h, s.prev()).elements.empty()) continue;  // initial state
        if (!evented.count(s.prev())) return false;
    }
    return true;
}

bool is_eis(const std::vector<EventOccurrence>& events, const History& h) {
    if (!behaves(events, h)) return false;
    for (std::uint64_t t = 0; t <= h.horizon.v; ++t)
        if (!is_amh(prefix_history(h, tick(t)))) return false;
    return true;
}

TransactionBody upcast_retyping_edits(const History& h, Tick t,
                                      const std::string& subtype,
                                      const std::string& supertype) {
    TransactionBody out;
    for (const auto& [id, e] : h.elements) {
        const InstanceTyping* typing = typing_at(e, t);
        if (!typing || !typing->types.count(subtype)) continue;
        InstanceTyping next = *typing;
        next.types.insert(supertype);
        out.push_back(Edit{EditOp::Set, id, std::nullopt, make_version(std::move(next))});
    }
    return out;
}

}  // namespace evokernel
