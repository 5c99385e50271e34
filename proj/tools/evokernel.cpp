#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "evokernel/constraint_eval.hpp"
#include "evokernel/evolution.hpp"
#include "evokernel/io.hpp"
#include "evokernel/oracle.hpp"
#include "evokernel/version.hpp"

using namespace evokernel;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitError = 2;

// Accepts a declared tick label, a plain number, or the tNNN shorthand.
Tick resolve_tick(const std::string& s, const TickNames& names) {
    auto it = names.find(s);
    if (it != names.end()) return it->second;
    if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos)
        return tick(std::stoull(s));
    if (s.size() > 1 && s[0] == 't' &&
        s.find_first_not_of("0123456789", 1) == std::string::npos)
        return tick(std::stoull(s.substr(1)));
    throw LoadError("unknown tick label \"" + s + "\"");
}

History load_with_names(const std::string& path, TickNames& names) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open " + path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw LoadError("history document is not valid JSON");
    names = tick_names(doc);
    return load_history(doc);
}

bool use_json(const std::string& format_flag) {
    std::string fmt = format_flag;
    if (fmt.empty()) {
        const char* env = std::getenv("EVOKERNEL_FORMAT");
        fmt = env ? env : "text";
    }
    if (fmt == "json") return true;
    if (fmt == "text") return false;
    throw CLI::ValidationError("--format", "expected \"text\" or \"json\"");
}

void print_report_text(const ValidationReport& r) {
    for (const Violation& v : r.items()) {
        std::string sev = v.severity == Severity::Error      ? "error"
                          : v.severity == Severity::Warning ? "warning"
                                                            : "internal";
        std::cout << v.axiom;
        if (v.tick) std::cout << " @" << v.tick->v;
        std::cout << " [" << sev << "]";
        for (std::size_t i = 0; i < v.witnesses.size(); ++i)
            std::cout << (i ? ", " : ": ") << v.witnesses[i];
        std::cout << "\n";
    }
}

int cmd_validate(const std::string& path, bool as_json) {
    History h = load_history_file(path);
    ValidationReport r = validate_history(h);
    if (as_json) {
        json out;
        out["ok"] = r.ok();
        out["violations"] = report_to_json(r);
        std::cout << out.dump(2) << "\n";
    } else {
        print_report_text(r);
        if (r.ok())
            std::cout << "ok\n";
        else
            std::cout << r.items().size() << " violation(s)\n";
    }
    return r.ok() ? kExitOk : kExitViolations;
}

int cmd_snapshot(const std::string& path, const std::string& at_label, bool as_json) {
    TickNames names;
    History h = load_with_names(path, names);
    Tick at = resolve_tick(at_label, names);
    AppModelVersion v = derive_version(h, at);
    if (as_json) {
        json out;
        out["at"] = at.v;
        out["otypes"] = json::array();
        for (const std::string& x : v.otypes) out["otypes"].push_back(x);
        out["typings"] = json::object();
        for (const auto& [id, typing] : v.typings) {
            json tj;
            tj["value"] = value_to_json(typing.value);
            tj["types"] = json::array();
            for (const std::string& x : typing.types) tj["types"].push_back(x);
            out["typings"][id] = std::move(tj);
        }
        out["constraints"] = json::object();
        for (const auto& [id, owned] : v.constraints) {
            json cj = json::object();
            for (const auto& [otype, def] : owned) cj[otype] = def.text;
            out["constraints"][id] = std::move(cj);
        }
        out["tasks"] = json::object();
        for (const auto& [id, owned] : v.tasks) {
            json tj = json::object();
            for (const auto& [otype, def] : owned)
                tj[otype] = def.is_guard() ? json(def.guard().text) : json("<action>");
            out["tasks"][id] = std::move(tj);
        }
        out["domains"] = json::object();
        for (const auto& [label, domain] : v.domain_map()) out["domains"][label] = domain;
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "snapshot at tick " << at.v << "\n";
        std::cout << "object types:";
        for (const std::string& x : v.otypes) std::cout << " " << x;
        std::cout << "\n";
        for (const auto& [id, typing] : v.typings) {
            std::cout << "typing " << id << ": " << typing.value.render() << " :";
            for (const std::string& x : typing.types) std::cout << " " << x;
            std::cout << "\n";
        }
        for (const auto& [id, owned] : v.constraints)
            for (const auto& [otype, def] : owned)
                std::cout << "constraint " << id << " (" << otype << "): " << def.text
                          << "\n";
        for (const auto& [id, owned] : v.tasks)
            for (const auto& [otype, def] : owned)
                std::cout << "task " << id << " (" << otype << "): "
                          << (def.is_guard() ? def.guard().text : "<action>") << "\n";
        for (const auto& [label, domain] : v.domain_map())
            std::cout << "domain " << label << " -> " << domain << "\n";
    }
    return kExitOk;
}

int cmd_apply(const std::string& history_path, const std::string& events_path,
              const std::string& out_path, bool as_json) {
    TickNames names;
    History h = load_with_names(history_path, names);
    std::vector<EventOccurrence> events = load_events_file(events_path, names);

    ApplyOutcome outcome = replay(h, events);
    bool accepted = std::holds_alternative<History>(outcome);
    bool well_behaved = false;
    json out;
    if (accepted) {
        const History& result = std::get<History>(outcome);
        well_behaved = behaves(events, result);
        if (!out_path.empty()) {
            std::ofstream of(out_path);
            if (!of) throw LoadError("cannot write " + out_path);
            of << save_history(result).dump(2) << "\n";
        }
        if (as_json) {
            out["accepted"] = true;
            out["behaves"] = well_behaved;
            out["horizon"] = result.horizon.v;
        } else {
            std::cout << "applied " << events.size() << " event(s), horizon "
                      << result.horizon.v << "\n";
            std::cout << "behaves: " << (well_behaved ? "true" : "false") << "\n";
        }
    } else {
        const RejectedEvent& rejected = std::get<RejectedEvent>(outcome);
        if (as_json) {
            out["accepted"] = false;
            out["rejected_at"] = rejected.at.v;
            out["violations"] = report_to_json(rejected.report);
        } else {
            std::cout << "rejected at tick " << rejected.at.v << "\n";
            print_report_text(rejected.report);
        }
    }
    if (as_json) std::cout << out.dump(2) << "\n";
    return accepted && well_behaved ? kExitOk : kExitViolations;
}

int cmd_graph(const std::string& path, const std::string& at_label) {
    TickNames names;
    History h = load_with_names(path, names);
    AppModelVersion v = derive_version(h, resolve_tick(at_label, names));
    Universe u = v.restricted();
    std::cout << "digraph roots {\n";
    for (const std::string& x : v.otypes) std::cout << "  \"" << x << "\";\n";
    for (const std::string& x : v.otypes)
        for (const std::string& y : v.otypes)
            if (x != y && u.root_of(x, y))
                std::cout << "  \"" << x << "\" -> \"" << y << "\";\n";
    std::cout << "}\n";
    return kExitOk;
}

int cmd_pop(const std::string& path, const std::string& otype,
            const std::string& at_label, bool infinity, bool as_json) {
    TickNames names;
    History h = load_with_names(path, names);
    if (!h.universe->has_otype(otype)) {
        std::cerr << "unknown object type: " << otype << "\n";
        return kExitViolations;
    }
    ValueSet pop;
    if (infinity)
        pop = pop_infinity(h, otype);
    else
        pop = pop_at(h, resolve_tick(at_label, names), otype);
    if (as_json) {
        json out = json::array();
        for (const InstanceValue& v : pop) out.push_back(value_to_json(v));
        std::cout << out.dump(2) << "\n";
    } else {
        for (const InstanceValue& v : pop) std::cout << v.render() << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"evolving information system kernel"};
    app.require_subcommand(1);
    std::string format;
    app.add_option("--format", format, "output format: text or json")
        ->envname("EVOKERNEL_FORMAT");

    std::string history_path, events_path, out_path, otype;
    std::string at_label, pop_at_label;
    bool infinity = false;

    CLI::App* validate = app.add_subcommand("validate", "check well-formedness");
    validate->add_option("history", history_path, "history document")->required();

    CLI::App* snapshot = app.add_subcommand("snapshot", "derive one version");
    snapshot->add_option("history", history_path, "history document")->required();
    snapshot->add_option("--at", at_label, "tick (number or label)")->required();

    CLI::App* apply = app.add_subcommand("apply", "apply an event log");
    apply->add_option("history", history_path, "history document")->required();
    apply->add_option("events", events_path, "event log")->required();
    apply->add_option("--out", out_path, "write the resulting history here");

    CLI::App* graph = app.add_subcommand("graph", "identification hierarchy as DOT");
    graph->add_option("history", history_path, "history document")->required();
    graph->add_option("--at", at_label, "tick (number or label)")->required();

    CLI::App* pop = app.add_subcommand("pop", "population of an object type");
    pop->add_option("history", history_path, "history document")->required();
    pop->add_option("otype", otype, "object type name")->required();
    pop->add_option("--at", pop_at_label, "tick (number or label)");
    pop->add_flag("--infinity", infinity, "union over all ticks");

    // Let global options (--format) appear after the subcommand too.
    for (CLI::App* sub : {validate, snapshot, apply, graph, pop}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e) ? kExitError : kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        bool as_json = use_json(format);
        if (*validate) return cmd_validate(history_path, as_json);
        if (*snapshot) return cmd_snapshot(history_path, at_label, as_json);
        if (*apply) return cmd_apply(history_path, events_path, out_path, as_json);
        if (*graph) return cmd_graph(history_path, at_label);
        if (*pop) {
            if (infinity == !pop_at_label.empty()) {
                std::cerr << "pop: pass exactly one of --at or --infinity\n";
                return kExitError;
            }
            return cmd_pop(history_path, otype, pop_at_label, infinity, as_json);
        }
    } catch (const LoadError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const EventError& e) {
        std::cerr << "event error (" << e.kind << "): " << e.what() << "\n";
        return kExitError;
    } catch (const KernelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
