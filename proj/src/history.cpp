#include "evokernel/history.hpp"

#include <algorithm>
#include <stdexcept>

namespace evokernel {

const char* to_string(ElementClass c) {
    switch (c) {
        case ElementClass::ObjectType: return "object_type";
        case ElementClass::Constraint: return "constraint";
        case ElementClass::Task: return "task";
        case ElementClass::InstanceTyping: return "instance_typing";
        case ElementClass::Concretisation: return "concretisation";
    }
    return "object_type";
}

VersionPtr make_version(ElementVersion::Payload p) {
    return std::make_shared<const ElementVersion>(std::move(p));
}

namespace {

Tick structural_horizon(const std::map<std::string, ElementEvolution>& elements) {
    Tick h{0};
    for (const auto& [id, e] : elements) h = std::max(h, e.track.last_change());
    return h;
}

}  // namespace

History make_history(std::shared_ptr<const Universe> universe,
                     std::vector<ElementEvolution> elements) {
    History h;
    h.universe = std::move(universe);
    for (ElementEvolution& e : elements) {
        if (e.track.empty()) continue;
        std::string id = e.id;
        if (!h.elements.emplace(id, std::move(e)).second)
            throw KernelError("duplicate element id: " + id);
    }
    h.horizon = structural_horizon(h.elements);
    return h;
}

History prefix_history(const History& h, Tick t) {
    History out;
    out.universe = h.universe;
    for (const auto& [id, e] : h.elements) {
        ElementEvolution pe{e.id, e.cls, e.track.prefixed(t)};
        if (!pe.track.empty()) out.elements.emplace(id, std::move(pe));
    }
    out.horizon = std::min(h.horizon, t);
    return out;
}

History restrict_history(const History& h, const TickRange& range) {
    History out;
    out.universe = h.universe;
    for (const auto& [id, e] : h.elements) {
        ElementEvolution re{e.id, e.cls, e.track.restricted(range)};
        if (!re.track.empty()) out.elements.emplace(id, std::move(re));
    }
    Tick cap = range.hi ? range.hi->next() : h.horizon;
    out.horizon = std::min(h.horizon, cap);
    return out;
}

DependsSet depends_of(const Edit& edit) {
    DependsSet out;
    if (!edit.version) return out;
    const ElementVersion& v = *edit.version;
    switch (v.cls()) {
        case ElementClass::ObjectType:
            out.otypes.insert(v.otype());
            break;
        case ElementClass::InstanceTyping:
            out.otypes.insert(v.typing().types.begin(), v.typing().types.end());
            break;
        case ElementClass::Concretisation:
            out.domains.insert({v.concretisation().label, v.concretisation().domain});
            break;
        case ElementClass::Constraint:
            for (const auto& [owner, def] : v.constraints()) out.otypes.insert(owner);
            break;
        case ElementClass::Task:
            for (const auto& [owner, def] : v.tasks()) out.otypes.insert(owner);
            break;
    }
    return out;
}

DependsSet depends_of(const TaskDef& def, const Universe& u) {
    if (def.is_guard()) return depends_of(def.guard(), u);
    const ActionDef& a = def.action();
    DependsSet out = a.uses;
    for (const Edit& e : a.edits) out.merge(depends_of(e));
    return out;
}

}  // namespace evokernel
