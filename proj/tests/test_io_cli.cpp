#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "evokernel/evolution.hpp"
#include "evokernel/io.hpp"

using namespace evokernel;
using nlohmann::json;

namespace {

std::string fx(const std::string& name) {
    return std::string(FIXTURE_DIR) + "/" + name;
}

std::string q(const std::string& s) { return "'" + s + "'"; }

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_command(const std::string& cmd) {
    CliResult r;
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
    int rc = pclose(pipe);
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

CliResult run_cli(const std::string& args) {
    return run_command(std::string(EVOKERNEL_BIN) + " " + args);
}

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = "/tmp/" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("saving and reloading reproduces each fixture exactly") {
    for (const char* name :
         {"store_history.json", "store_initial.json", "broker_history.json",
          "broker_w1.json", "airplane_history.json", "airplane_c3_violation.json",
          "freq_store.json"}) {
        CAPTURE(name);
        History h = load_history_file(fx(name));
        json saved = save_history(h);
        History again = load_history(saved);
        CHECK(again == h);
        CHECK(again.horizon == h.horizon);
        // The canonical form is a fixed point.
        CHECK(save_history(again) == saved);
    }
}

TEST_CASE("event logs round-trip through their canonical form") {
    auto events = load_events_file(fx("store_events.json"));
    REQUIRE(events.size() == 2);
    CHECK(events[0].at == tick(2));
    CHECK(events[1].at == tick(3));
    CHECK(events[0].edits.size() == 1);
    CHECK(events[1].edits.size() == 5);

    auto again = load_events(save_events(events));
    REQUIRE(again.size() == events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        CHECK(again[i].at == events[i].at);
        CHECK(again[i].edits == events[i].edits);
    }
}

TEST_CASE("tick labels resolve by declaration, shape, or number") {
    json doc = json::parse(R"({"ticks": ["genesis", "first"]})");
    TickNames names = tick_names(doc);
    CHECK(names.at("genesis") == tick(0));
    CHECK(names.at("first") == tick(1));

    std::string text = R"({
      "ticks": ["genesis", "first"],
      "universe": {"adapter": "explicit",
                   "otypes": [{"name": "A", "kind": "nonlabel"}]},
      "evolutions": [
        {"id": "a", "class": "object_type",
         "track": [{"from": "first", "to": "t3", "version": "A"}]},
        {"id": "b", "class": "object_type",
         "track": [{"from": 2, "version": "A"}]}
      ]
    })";
    History h = load_history_text(text);
    CHECK(h.elements.at("a").track.first_defined() == tick(1));
    CHECK(h.elements.at("a").track.last_change() == tick(4));
    CHECK(h.elements.at("b").track.first_defined() == tick(2));

    CHECK_THROWS_WITH_AS(
        load_history_text(R"({
          "universe": {"adapter": "explicit",
                       "otypes": [{"name": "A", "kind": "nonlabel"}]},
          "evolutions": [{"id": "a", "class": "object_type",
                          "track": [{"from": "nowhere", "version": "A"}]}]
        })"),
        "evolution a: unknown tick label \"nowhere\"", LoadError);
}

TEST_CASE("malformed documents are rejected with precise messages") {
    CHECK_THROWS_WITH_AS(load_history_text("not json at all"),
                         "history document is not valid JSON", LoadError);
    CHECK_THROWS_AS(load_history_text(R"({"universe": {"adapter": "weird",
                                           "otypes": []}})"),
                    LoadError);

    std::string base = R"({"universe": {"adapter": "explicit", "otypes": [
        {"name": "A", "kind": "nonlabel"},
        {"name": "L", "kind": "label"}]})";

    // Alive otype names must denote universe types.
    CHECK_THROWS_WITH_AS(
        load_history_text(base + R"(, "evolutions": [{"id": "a",
            "class": "object_type",
            "track": [{"from": 1, "version": "Ghost"}]}]})"),
        "evolution a: unknown object type \"Ghost\"", LoadError);

    // Duplicate element ids.
    CHECK_THROWS_AS(
        load_history_text(base + R"(, "evolutions": [
            {"id": "a", "class": "object_type", "track": [{"from": 1, "version": "A"}]},
            {"id": "a", "class": "object_type", "track": [{"from": 2, "version": "A"}]}]})"),
        LoadError);

    // Overlapping runs inside one track.
    CHECK_THROWS_AS(
        load_history_text(base + R"(, "evolutions": [{"id": "a",
            "class": "object_type",
            "track": [{"from": 1, "to": 3, "version": "A"},
                       {"from": 2, "version": "A"}]}]})"),
        LoadError);

    // Negative ticks.
    CHECK_THROWS_AS(
        load_history_text(base + R"(, "evolutions": [{"id": "a",
            "class": "object_type", "track": [{"from": -1, "version": "A"}]}]})"),
        LoadError);

    // One domain assignment per label in the sugar section.
    CHECK_THROWS_WITH_AS(
        load_history_text(base + R"(, "domains": [
            {"label": "L", "domain": "String", "from": 1},
            {"label": "L", "domain": "Natno", "from": 2}]})"),
        "domains L: duplicate label; use an explicit evolution instead", LoadError);

    // Values carry exactly one tag.
    CHECK_THROWS_AS(
        load_history_text(base + R"(, "evolutions": [{"id": "g",
            "class": "instance_typing",
            "track": [{"from": 1, "version":
                {"value": {"str": "x", "nat": 1}, "types": ["A"]}}]}]})"),
        LoadError);

    // Two events on one tick.
    CHECK_THROWS_WITH_AS(
        load_events_text(R"([{"tick": 1, "edits": []}, {"tick": 1, "edits": []}])"),
        "two events at tick 1", LoadError);
    CHECK_THROWS_AS(load_events_text(R"({"not": "an array"})"), LoadError);
}

TEST_CASE("values round-trip through json") {
    InstanceValue nested = InstanceValue::tuple(
        {{"who", InstanceValue::sur("p1")},
         {"tags", InstanceValue::set({InstanceValue::str("a"),
                                      InstanceValue::nat_value(3)})}});
    CHECK(value_from_json(value_to_json(nested)) == nested);
    CHECK(value_to_json(InstanceValue::str("x")) == json{{"str", "x"}});
    CHECK(value_to_json(InstanceValue::nat_value(4)) == json{{"nat", 4}});
}

TEST_CASE("validation reports serialise tick-optional rows") {
    ValidationReport r;
    r.add("ExclRootPop", std::nullopt, {"A", "B"});
    r.add("UniqueRoot", tick(3), {"w"}, Severity::Warning);
    json j = report_to_json(r);
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 2);
    CHECK(j[0]["axiom"] == "ExclRootPop");
    CHECK(!j[0].contains("tick"));
    CHECK(j[0]["severity"] == "error");
    CHECK(j[0]["witnesses"] == json::array({"A", "B"}));
    CHECK(j[1]["tick"] == 3);
    CHECK(j[1]["severity"] == "warning");
}

TEST_CASE("cli: validate reports cleanliness through its exit code") {
    CliResult ok = run_cli("validate " + q(fx("store_history.json")));
    CHECK(ok.exit_code == 0);
    CHECK(ok.output == "ok\n");

    CliResult bad = run_cli("validate " + q(fx("broker_w1.json")));
    CHECK(bad.exit_code == 1);
    CHECK(bad.output ==
          "ExclRootPop [error]: Boat, House, w1\n"
          "ActiveRelatedness @1 [error]: w1, Boat, House\n"
          "UniqueRoot @1 [error]: w1, Boat, House\n"
          "3 violation(s)\n");

    CHECK(run_cli("validate /no/such/file.json").exit_code == 2);
    std::string junk = write_temp("evokernel_junk.json", "{{{");
    CliResult mal = run_cli("validate " + q(junk));
    CHECK(mal.exit_code == 2);
    CHECK(mal.output.find("not valid JSON") != std::string::npos);

    // Usage errors share the hard-error code.
    CHECK(run_cli("graph " + q(fx("broker_history.json"))).exit_code == 2);
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("cli: snapshot prints one version, ticks symbolic or numeric") {
    std::string expected =
        "snapshot at tick 4\n"
        "object types: Medium Record Recording of Song on Medium\n"
        "typing g1: \"Brothers in Arms\" : Medium Record\n"
        "typing g2: {of: \"Brothers in Arms\", on: \"Brothers in Arms\"} : "
        "Recording of Song on Medium\n"
        "domain Medium -> String\n"
        "domain Record -> String\n";
    CliResult at_label = run_cli("snapshot " + q(fx("store_history.json")) + " --at t4");
    CHECK(at_label.exit_code == 0);
    CHECK(at_label.output == expected);
    CliResult at_num = run_cli("snapshot " + q(fx("store_history.json")) + " --at 4");
    CHECK(at_num.output == expected);

    CliResult unknown =
        run_cli("snapshot " + q(fx("store_history.json")) + " --at nowhere");
    CHECK(unknown.exit_code == 2);
    CHECK(unknown.output.find("unknown tick label") != std::string::npos);
}

TEST_CASE("cli: apply extends a history and writes the result") {
    std::string out_path = "/tmp/evokernel_rebuilt.json";
    std::remove(out_path.c_str());
    CliResult r = run_cli("apply " + q(fx("store_initial.json")) + " " +
                          q(fx("store_events.json")) + " --out " + q(out_path));
    CHECK(r.exit_code == 0);
    CHECK(r.output == "applied 2 event(s), horizon 4\nbehaves: true\n");
    History rebuilt = load_history_file(out_path);
    CHECK(rebuilt == load_history_file(fx("store_history.json")));
    CHECK(rebuilt.horizon == tick(4));

    CliResult rej = run_cli("apply " + q(fx("freq_store.json")) + " " +
                            q(fx("freq_terminate_events.json")));
    CHECK(rej.exit_code == 1);
    CHECK(rej.output.find("rejected at tick 1") == 0);
    CHECK(rej.output.find("DanglingTypes @2 [error]: Init-freq, Frequency") !=
          std::string::npos);
}

TEST_CASE("cli: graph renders the restricted ancestor relation as DOT") {
    CliResult r = run_cli("graph " + q(fx("broker_history.json")) + " --at 1");
    CHECK(r.exit_code == 0);
    CHECK(r.output ==
          "digraph roots {\n"
          "  \"Boat\";\n"
          "  \"House\";\n"
          "  \"Product\";\n"
          "  \"Real estate\";\n"
          "  \"Boat\" -> \"Product\";\n"
          "  \"Boat\" -> \"Real estate\";\n"
          "  \"House\" -> \"Product\";\n"
          "  \"House\" -> \"Real estate\";\n"
          "}\n");
}

TEST_CASE("cli: pop needs exactly one scope and a real type") {
    CliResult inf = run_cli("pop " + q(fx("store_history.json")) + " Medium --infinity");
    CHECK(inf.exit_code == 0);
    CHECK(inf.output == "\"Brothers in Arms\"\n");

    CliResult at = run_cli("pop " + q(fx("store_history.json")) + " " +
                           q("Recording of Song on Record") + " --at t3");
    CHECK(at.exit_code == 0);
    CHECK(at.output == "{of: \"Brothers in Arms\", on: \"Brothers in Arms\"}\n");

    CliResult unknown =
        run_cli("pop " + q(fx("store_history.json")) + " Nope --infinity");
    CHECK(unknown.exit_code == 1);
    CHECK(unknown.output == "unknown object type: Nope\n");

    CHECK(run_cli("pop " + q(fx("store_history.json")) + " Medium").exit_code == 2);
    CHECK(run_cli("pop " + q(fx("store_history.json")) +
                  " Medium --at 1 --infinity").exit_code == 2);
}

TEST_CASE("cli: json output is selected by flag or environment") {
    CliResult r =
        run_cli("validate " + q(fx("broker_w1.json")) + " --format json");
    CHECK(r.exit_code == 1);
    json doc = json::parse(r.output);
    CHECK(doc["ok"] == false);
    REQUIRE(doc["violations"].size() == 3);
    CHECK(doc["violations"][0]["axiom"] == "ExclRootPop");
    CHECK(!doc["violations"][0].contains("tick"));
    CHECK(doc["violations"][2]["axiom"] == "UniqueRoot");
    CHECK(doc["violations"][2]["tick"] == 1);

    CliResult env = run_command(std::string("EVOKERNEL_FORMAT=json ") +
                                EVOKERNEL_BIN + " validate " +
                                q(fx("store_history.json")));
    CHECK(env.exit_code == 0);
    CHECK(json::parse(env.output)["ok"] == true);

    CliResult flag_wins = run_command(std::string("EVOKERNEL_FORMAT=json ") +
                                      EVOKERNEL_BIN + " validate " +
                                      q(fx("store_history.json")) +
                                      " --format text");
    CHECK(flag_wins.output == "ok\n");

    CliResult pop_json = run_cli("pop " + q(fx("store_history.json")) +
                                 " Medium --infinity --format json");
    CHECK(json::parse(pop_json.output) ==
          json::array({json{{"str", "Brothers in Arms"}}}));
}

TEST_CASE("cli: output is byte-deterministic") {
    std::string cmd = "validate " + q(fx("broker_w1.json"));
    CliResult a = run_cli(cmd);
    CliResult b = run_cli(cmd);
    CHECK(a.output == b.output);
    CHECK(a.exit_code == b.exit_code);

    std::string snap = "snapshot " + q(fx("airplane_history.json")) + " --at t5";
    CHECK(run_cli(snap).output == run_cli(snap).output);
}
