#include "evokernel/io.hpp"

#include <fstream>
#include <sstream>

namespace evokernel {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw LoadError(msg); }

const json& need(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) fail(where + ": missing \"" + key + "\"");
    return *it;
}

std::string need_string(const json& j, const char* key, const std::string& where) {
    const json& v = need(j, key, where);
    if (!v.is_string()) fail(where + ": \"" + std::string(key) + "\" must be a string");
    return v.get<std::string>();
}

Tick parse_tick(const json& j, const TickNames& names, const std::string& where) {
    if (j.is_number_unsigned() || j.is_number_integer()) {
        auto n = j.get<std::int64_t>();
        if (n < 0) fail(where + ": negative tick");
        return tick(static_cast<std::uint64_t>(n));
    }
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        auto it = names.find(s);
        if (it != names.end()) return it->second;
        if (s.size() > 1 && s[0] == 't' &&
            s.find_first_not_of("0123456789", 1) == std::string::npos)
            return tick(std::stoull(s.substr(1)));
        fail(where + ": unknown tick label \"" + s + "\"");
    }
    fail(where + ": tick must be an integer or a label");
}

ElementClass parse_class(const std::string& s, const std::string& where) {
    for (ElementClass c : {ElementClass::ObjectType, ElementClass::Constraint,
                           ElementClass::Task, ElementClass::InstanceTyping,
                           ElementClass::Concretisation})
        if (s == to_string(c)) return c;
    fail(where + ": unknown element class \"" + s + "\"");
}

EditOp parse_op(const std::string& s, const std::string& where) {
    if (s == "create") return EditOp::Create;
    if (s == "set") return EditOp::Set;
    if (s == "terminate") return EditOp::Terminate;
    fail(where + ": unknown edit op \"" + s + "\"");
}

DependsSet parse_uses(const json& j, const std::string& where) {
    DependsSet out;
    if (j.contains("otypes")) {
        if (!j["otypes"].is_array()) fail(where + ": \"otypes\" must be an array");
        for (const json& n : j["otypes"]) out.otypes.insert(n.get<std::string>());
    }
    if (j.contains("domains")) {
        if (!j["domains"].is_array()) fail(where + ": \"domains\" must be an array");
        for (const json& p : j["domains"]) {
            if (!p.is_array() || p.size() != 2)
                fail(where + ": each domain entry is a [label, domain] pair");
            out.domains.insert({p[0].get<std::string>(), p[1].get<std::string>()});
        }
    }
    return out;
}

Edit parse_edit(const json& j, const TickNames& names, const std::string& where);

ElementVersion parse_version(ElementClass cls, const json& j, const TickNames& names,
                             const std::string& where) {
    switch (cls) {
        case ElementClass::ObjectType:
            if (!j.is_string()) fail(where + ": object type version must be a name");
            return ElementVersion{j.get<std::string>()};
        case ElementClass::Constraint: {
            const json& owners = need(j, "owners", where);
            OwnedConstraints out;
            for (const auto& [otype, text] : owners.items()) {
                if (!text.is_string())
                    fail(where + ": constraint owned by " + otype + " must be text");
                try {
                    out.emplace(otype, ConstraintDef::parse(text.get<std::string>()));
                } catch (const ParseError& e) {
                    fail(where + ": " + e.what());
                }
            }
            return ElementVersion{std::move(out)};
        }
        case ElementClass::Task: {
            const json& owners = need(j, "owners", where);
            OwnedTasks out;
            for (const auto& [otype, body] : owners.items()) {
                if (body.is_string()) {
                    try {
                        out.emplace(otype,
                                    TaskDef{ConstraintDef::parse(body.get<std::string>())});
                    } catch (const ParseError& e) {
                        fail(where + ": " + e.what());
                    }
                } else if (body.is_object()) {
                    ActionDef action;
                    if (body.contains("edits"))
                        for (const json& e : body["edits"])
                            action.edits.push_back(
                                parse_edit(e, names, where + " action of " + otype));
                    if (body.contains("uses"))
                        action.uses = parse_uses(body["uses"], where);
                    out.emplace(otype, TaskDef{std::move(action)});
                } else {
                    fail(where + ": task owned by " + otype +
                         " must be guard text or an action object");
                }
            }
            return ElementVersion{std::move(out)};
        }
        case ElementClass::InstanceTyping: {
            InstanceTyping typing;
            typing.value = value_from_json(need(j, "value", where));
            const json& types = need(j, "types", where);
            if (!types.is_array()) fail(where + ": \"types\" must be an array");
            for (const json& t : types) typing.types.insert(t.get<std::string>());
            return ElementVersion{std::move(typing)};
        }
        case ElementClass::Concretisation:
            return ElementVersion{ConcretisationVersion{
                need_string(j, "label", where), need_string(j, "domain", where)}};
    }
    fail(where + ": unreachable class");
}

Edit parse_edit(const json& j, const TickNames& names, const std::string& where) {
    Edit out;
    out.op = parse_op(need_string(j, "op", where), where);
    out.id = need_string(j, "id", where);
    if (out.op == EditOp::Terminate) return out;
    ElementClass cls = parse_class(need_string(j, "class", where + " " + out.id), where);
    if (out.op == EditOp::Create) out.cls = cls;
    out.version = make_version(
        parse_version(cls, need(j, "version", where + " " + out.id), names, where)
            .payload);
    return out;
}

std::shared_ptr<const Universe> parse_universe(const json& j) {
    const std::string where = "universe";
    std::string adapter_name = need_string(j, "adapter", where);
    AdapterKind adapter;
    if (adapter_name == "er")
        adapter = AdapterKind::Er;
    else if (adapter_name == "explicit")
        adapter = AdapterKind::Explicit;
    else
        fail(where + ": unknown adapter \"" + adapter_name + "\"");

    std::vector<ObjectTypeInfo> otypes;
    const json& types = need(j, "otypes", where);
    if (!types.is_array()) fail(where + ": \"otypes\" must be an array");
    for (const json& t : types) {
        ObjectTypeInfo info;
        info.name = need_string(t, "name", where);
        std::string kind = need_string(t, "kind", where + " " + info.name);
        if (kind == "label")
            info.kind = TypeKind::Label;
        else if (kind == "nonlabel")
            info.kind = TypeKind::NonLabel;
        else
            fail(where + " " + info.name + ": unknown kind \"" + kind + "\"");
        if (t.contains("roles"))
            for (const auto& [role, player] : t["roles"].items())
                info.roles.emplace(role, player.get<std::string>());
        if (t.contains("supertype")) info.supertype = t["supertype"].get<std::string>();
        if (t.contains("owner")) info.owner = t["owner"].get<std::string>();
        if (t.contains("power_of")) info.power_of = t["power_of"].get<std::string>();
        otypes.push_back(std::move(info));
    }

    auto parse_pairs = [&](const char* key) {
        RelationSet out;
        if (!j.contains(key)) return out;
        for (const json& p : j[key]) {
            if (!p.is_array() || p.size() != 2)
                fail(where + ": each " + std::string(key) + " entry is a pair");
            out.insert({p[0].get<std::string>(), p[1].get<std::string>()});
        }
        return out;
    };
    try {
        return Universe::create(std::move(otypes), parse_pairs("type_rel"),
                                parse_pairs("parent_of"), adapter);
    } catch (const UniverseError& e) {
        fail(where + ": " + e.what());
    }
}

json tick_to_json(Tick t) { return json(t.v); }

json version_to_json(const ElementVersion& v);

json edit_to_json(const Edit& e) {
    json out;
    switch (e.op) {
        case EditOp::Create: out["op"] = "create"; break;
        case EditOp::Set: out["op"] = "set"; break;
        case EditOp::Terminate: out["op"] = "terminate"; break;
    }
    out["id"] = e.id;
    if (e.version) {
        out["class"] = to_string(e.version->cls());
        out["version"] = version_to_json(*e.version);
    }
    return out;
}

json version_to_json(const ElementVersion& v) {
    switch (v.cls()) {
        case ElementClass::ObjectType: return json(v.otype());
        case ElementClass::Constraint: {
            json owners = json::object();
            for (const auto& [otype, def] : v.constraints()) owners[otype] = def.text;
            return json{{"owners", owners}};
        }
        case ElementClass::Task: {
            json owners = json::object();
            for (const auto& [otype, def] : v.tasks()) {
                if (def.is_guard()) {
                    owners[otype] = def.guard().text;
                } else {
                    json body;
                    body["edits"] = json::array();
                    for (const Edit& e : def.action().edits)
                        body["edits"].push_back(edit_to_json(e));
                    json uses;
                    uses["otypes"] = json::array();
                    for (const std::string& o : def.action().uses.otypes)
                        uses["otypes"].push_back(o);
                    uses["domains"] = json::array();
                    for (const auto& [l, d] : def.action().uses.domains)
                        uses["domains"].push_back(json::array({l, d}));
                    body["uses"] = std::move(uses);
                    owners[otype] = std::move(body);
                }
            }
            return json{{"owners", owners}};
        }
        case ElementClass::InstanceTyping: {
            json out;
            out["value"] = value_to_json(v.typing().value);
            out["types"] = json::array();
            for (const std::string& t : v.typing().types) out["types"].push_back(t);
            return out;
        }
        case ElementClass::Concretisation:
            return json{{"label", v.concretisation().label},
                        {"domain", v.concretisation().domain}};
    }
    return json();
}

}  // namespace

json value_to_json(const InstanceValue& v) {
    switch (v.kind) {
        case InstanceValue::Kind::Str: return json{{"str", v.text}};
        case InstanceValue::Kind::Nat: return json{{"nat", v.nat}};
        case InstanceValue::Kind::Sur: return json{{"sur", v.text}};
        case InstanceValue::Kind::Tuple: {
            json fields = json::object();
            for (const auto& [role, member] : v.fields)
                fields[role] = value_to_json(member);
            return json{{"tuple", fields}};
        }
        case InstanceValue::Kind::Set: {
            json members = json::array();
            for (const InstanceValue& m : v.members) members.push_back(value_to_json(m));
            return json{{"set", members}};
        }
    }
    return json();
}

InstanceValue value_from_json(const json& j) {
    if (!j.is_object() || j.size() != 1)
        fail("value: expected exactly one of str/nat/sur/tuple/set");
    if (j.contains("str")) return InstanceValue::str(j["str"].get<std::string>());
    if (j.contains("nat")) return InstanceValue::nat_value(j["nat"].get<std::int64_t>());
    if (j.contains("sur")) return InstanceValue::sur(j["sur"].get<std::string>());
    if (j.contains("tuple")) {
        std::vector<std::pair<std::string, InstanceValue>> fields;
        for (const auto& [role, member] : j["tuple"].items())
            fields.emplace_back(role, value_from_json(member));
        return InstanceValue::tuple(std::move(fields));
    }
    if (j.contains("set")) {
        std::vector<InstanceValue> members;
        for (const json& m : j["set"]) members.push_back(value_from_json(m));
        return InstanceValue::set(std::move(members));
    }
    fail("value: expected one of str/nat/sur/tuple/set");
}

TickNames tick_names(const json& doc) {
    TickNames out;
    if (!doc.contains("ticks")) return out;
    const json& labels = doc["ticks"];
    if (!labels.is_array()) fail("\"ticks\" must be an array of labels");
    std::uint64_t i = 0;
    for (const json& l : labels) out.emplace(l.get<std::string>(), tick(i++));
    return out;
}

History load_history(const json& doc) {
    if (!doc.is_object()) fail("history document must be an object");
    TickNames names = tick_names(doc);
    auto universe = parse_universe(need(doc, "universe", "history"));

    std::vector<ElementEvolution> elements;
    if (doc.contains("evolutions")) {
        if (!doc["evolutions"].is_array()) fail("\"evolutions\" must be an array");
        for (const json& ej : doc["evolutions"]) {
            ElementEvolution e;
            e.id = need_string(ej, "id", "evolution");
            std::string where = "evolution " + e.id;
            e.cls = parse_class(need_string(ej, "class", where), where);
            std::vector<TimedMap<ElementVersion>::Run> runs;
            const json& track = need(ej, "track", where);
            if (!track.is_array()) fail(where + ": \"track\" must be an array");
            for (const json& rj : track) {
                TimedMap<ElementVersion>::Run run;
                run.from = parse_tick(need(rj, "from", where), names, where);
                if (rj.contains("to"))
                    run.to = parse_tick(rj["to"], names, where);
                run.value = parse_version(e.cls, need(rj, "version", where), names, where);
                runs.push_back(std::move(run));
            }
            try {
                e.track = TimedMap<ElementVersion>::from_runs(std::move(runs));
            } catch (const std::invalid_argument& err) {
                fail(where + ": " + err.what());
            }
            elements.push_back(std::move(e));
        }
    }
    if (doc.contains("domains")) {
        if (!doc["domains"].is_array()) fail("\"domains\" must be an array");
        std::set<std::string> seen;
        for (const json& dj : doc["domains"]) {
            std::string label = need_string(dj, "label", "domains");
            std::string where = "domains " + label;
            if (!seen.insert(label).second)
                fail(where + ": duplicate label; use an explicit evolution instead");
            ElementEvolution e;
            e.id = "domain-" + label;
            e.cls = ElementClass::Concretisation;
            TimedMap<ElementVersion>::Run run;
            run.from = parse_tick(need(dj, "from", where), names, where);
            if (dj.contains("to")) run.to = parse_tick(dj["to"], names, where);
            run.value =
                ElementVersion{ConcretisationVersion{label, need_string(dj, "domain", where)}};
            e.track = TimedMap<ElementVersion>::from_runs({std::move(run)});
            elements.push_back(std::move(e));
        }
    }

    History h = [&] {
        try {
            return make_history(universe, std::move(elements));
        } catch (const KernelError& e) {
            fail(std::string("history: ") + e.what());
        }
    }();
    if (doc.contains("horizon"))
        h.horizon = std::max(h.horizon, parse_tick(doc["horizon"], names, "horizon"));

    // Load-time sanity: alive otype names must denote universe types.
    for (const auto& [id, e] : h.elements) {
        if (e.cls != ElementClass::ObjectType) continue;
        for (const auto& run : e.track.runs())
            if (run.value.cls() == ElementClass::ObjectType &&
                !universe->has_otype(run.value.otype()))
                fail("evolution " + id + ": unknown object type \"" +
                     run.value.otype() + "\"");
    }
    return h;
}

History load_history_text(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) fail("history document is not valid JSON");
    return load_history(doc);
}

History load_history_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_history_text(buf.str());
}

std::vector<EventOccurrence> load_events(const json& doc, const TickNames& names) {
    if (!doc.is_array()) fail("event log must be an array");
    std::vector<EventOccurrence> out;
    for (const json& ej : doc) {
        EventOccurrence ev;
        ev.at = parse_tick(need(ej, "tick", "event"), names, "event");
        std::string where = "event at tick " + std::to_string(ev.at.v);
        const json& edits = need(ej, "edits", where);
        if (!edits.is_array()) fail(where + ": \"edits\" must be an array");
        for (const json& e : edits) ev.edits.push_back(parse_edit(e, names, where));
        out.push_back(std::move(ev));
    }
    std::sort(out.begin(), out.end(),
              [](const EventOccurrence& a, const EventOccurrence& b) { return a.at < b.at; });
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i - 1].at == out[i].at)
            fail("two events at tick " + std::to_string(out[i].at.v));
    return out;
}

std::vector<EventOccurrence> load_events_text(const std::string& text,
                                              const TickNames& names) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) fail("event log is not valid JSON");
    return load_events(doc, names);
}

std::vector<EventOccurrence> load_events_file(const std::string& path,
                                              const TickNames& names) {
    std::ifstream in(path);
    if (!in) fail("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_events_text(buf.str(), names);
}

json save_history(const History& h) {
    json doc;
    json uni;
    uni["adapter"] = h.universe->adapter() == AdapterKind::Er ? "er" : "explicit";
    uni["otypes"] = json::array();
    for (const auto& [name, info] : h.universe->otypes()) {
        json t;
        t["name"] = name;
        t["kind"] = info.kind == TypeKind::Label ? "label" : "nonlabel";
        if (!info.roles.empty()) {
            json roles = json::object();
            for (const auto& [role, player] : info.roles) roles[role] = player;
            t["roles"] = std::move(roles);
        }
        if (info.supertype) t["supertype"] = *info.supertype;
        if (info.owner) t["owner"] = *info.owner;
        if (info.power_of) t["power_of"] = *info.power_of;
        uni["otypes"].push_back(std::move(t));
    }
    uni["type_rel"] = json::array();
    for (const auto& [a, b] : h.universe->type_rel())
        uni["type_rel"].push_back(json::array({a, b}));
    uni["parent_of"] = json::array();
    for (const auto& [a, b] : h.universe->parent_of_pairs())
        uni["parent_of"].push_back(json::array({a, b}));
    doc["universe"] = std::move(uni);

    doc["evolutions"] = json::array();
    json domains = json::array();
    for (const auto& [id, e] : h.elements) {
        bool sugar = e.cls == ElementClass::Concretisation &&
                     e.track.runs().size() == 1 &&
                     e.track.runs().front().value.cls() == ElementClass::Concretisation &&
                     id == "domain-" + e.track.runs().front().value.concretisation().label;
        if (sugar) {
            const auto& run = e.track.runs().front();
            json d;
            d["label"] = run.value.concretisation().label;
            d["domain"] = run.value.concretisation().domain;
            d["from"] = tick_to_json(run.from);
            if (run.to) d["to"] = tick_to_json(*run.to);
            domains.push_back(std::move(d));
            continue;
        }
        json ej;
        ej["id"] = id;
        ej["class"] = to_string(e.cls);
        ej["track"] = json::array();
        for (const auto& run : e.track.runs()) {
            json rj;
            rj["from"] = tick_to_json(run.from);
            if (run.to) rj["to"] = tick_to_json(*run.to);
            rj["version"] = version_to_json(run.value);
            ej["track"].push_back(std::move(rj));
        }
        doc["evolutions"].push_back(std::move(ej));
    }
    if (!domains.empty()) doc["domains"] = std::move(domains);
    doc["horizon"] = tick_to_json(h.horizon);
    return doc;
}

json save_events(const std::vector<EventOccurrence>& events) {
    json out = json::array();
    for (const EventOccurrence& ev : events) {
        json ej;
        ej["tick"] = tick_to_json(ev.at);
        ej["edits"] = json::array();
        for (const Edit& e : ev.edits) ej["edits"].push_back(edit_to_json(e));
        out.push_back(std::move(ej));
    }
    return out;
}

json report_to_json(const ValidationReport& r) {
    json out = json::array();
    for (const Violation& v : r.items()) {
        json vj;
        vj["axiom"] = v.axiom;
        if (v.tick) vj["tick"] = tick_to_json(*v.tick);
        vj["witnesses"] = v.witnesses;
        switch (v.severity) {
            case Severity::Error: vj["severity"] = "error"; break;
            case Severity::Warning: vj["severity"] = "warning"; break;
            case Severity::Internal: vj["severity"] = "internal"; break;
        }
        out.push_back(std::move(vj));
    }
    return out;
}

}  // namespace evokernel
