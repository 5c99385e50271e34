#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "evokernel/history.hpp"
#include "evokernel/report.hpp"

namespace evokernel {

struct LoadError : KernelError {
    explicit LoadError(const std::string& msg) : KernelError(msg) {}
};

// Symbolic tick labels a history document declares ("ticks": [...] maps
// each label to its 0-based position). Labels of the shape tN always mean
// tick N, declared or not; plain integers are always accepted.
using TickNames = std::map<std::string, Tick>;

TickNames tick_names(const nlohmann::json& doc);

// Document shape:
// {
//   "ticks": ["start", ...],                  optional label declarations
//   "universe": {
//     "adapter": "er" | "explicit",
//     "otypes": [{"name", "kind": "label"|"nonlabel", "roles"?, "supertype"?,
//                 "owner"?, "power_of"?}, ...],
//     "type_rel": [[a, b], ...],              optional covering pairs
//     "parent_of": [[ancestor, offspring], ...]
//   },
//   "evolutions": [{"id", "class", "track": [{"from", "to"?, "version"}]}],
//   "domains": [{"label", "domain", "from", "to"?}, ...],   sugar
//   "horizon": n                              optional
// }
// Version payloads by class: object_type is the type name; constraint is
// {"owners": {otype: "CONSTRAINT TEXT"}}; task is {"owners": {otype:
// "guard text" | {"edits": [...], "uses": {"otypes": [...], "domains":
// [[label, domain], ...]}}}}; instance_typing is {"value": V, "types":
// [...]}; concretisation is {"label", "domain"}. Values V are tagged:
// {"str": s} | {"nat": n} | {"sur": name} | {"tuple": {role: V}} |
// {"set": [V]}.
History load_history(const nlohmann::json& doc);
History load_history_text(const std::string& text);
History load_history_file(const std::string& path);

// Event log shape: [{"tick": t, "edits": [{"op": "create"|"set"|
// "terminate", "id", "class"?, "version"?}]}]. Create and set carry both a
// class and a version; terminate carries neither. Ticks ascend strictly.
std::vector<EventOccurrence> load_events(const nlohmann::json& doc,
                                         const TickNames& names = {});
std::vector<EventOccurrence> load_events_text(const std::string& text,
                                              const TickNames& names = {});
std::vector<EventOccurrence> load_events_file(const std::string& path,
                                              const TickNames& names = {});

// Canonical save: integer ticks, sorted keys, single-run concretisation
// evolutions with id "domain-<label>" folded back into "domains". Loading
// the result reproduces the history exactly.
nlohmann::json save_history(const History& h);
nlohmann::json save_events(const std::vector<EventOccurrence>& events);

nlohmann::json value_to_json(const InstanceValue& v);
InstanceValue value_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const ValidationReport& r);

}  // namespace evokernel
