#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <string>
#include <vector>

#include "evokernel/io.hpp"
#include "evokernel/isu.hpp"

using namespace evokernel;

namespace {

std::string fx(const std::string& name) {
    return std::string(FIXTURE_DIR) + "/" + name;
}

ObjectTypeInfo otype(std::string name) {
    ObjectTypeInfo info;
    info.name = std::move(name);
    return info;
}

}  // namespace

TEST_CASE("universe construction rejects bad references") {
    CHECK_THROWS_WITH_AS(
        Universe::create({otype("A"), otype("A")}, {}, {}, AdapterKind::Explicit),
        "duplicate object type: A", UniverseError);
    CHECK_THROWS_WITH_AS(
        Universe::create({otype("")}, {}, {}, AdapterKind::Explicit),
        "object type with empty name", UniverseError);

    ObjectTypeInfo fact = otype("F");
    fact.roles = {{"r", "Nope"}};
    CHECK_THROWS_WITH_AS(
        Universe::create({otype("A"), fact}, {}, {}, AdapterKind::Explicit),
        "F.r references unknown object type: Nope", UniverseError);

    CHECK_THROWS_AS(Universe::create({otype("A")}, {{"A", "B"}}, {},
                                     AdapterKind::Explicit),
                    UniverseError);
    CHECK_THROWS_AS(Universe::create({otype("A")}, {}, {{"B", "A"}},
                                     AdapterKind::Explicit),
                    UniverseError);
}

TEST_CASE("supertype fields become ancestor edges and close transitively") {
    ObjectTypeInfo b = otype("B");
    b.supertype = "A";
    ObjectTypeInfo c = otype("C");
    c.supertype = "B";
    // Identification along an edge presupposes relatedness, so the chain
    // carries the full related closure.
    auto u = Universe::create({otype("A"), b, c},
                              {{"A", "B"}, {"B", "C"}, {"A", "C"}}, {},
                              AdapterKind::Explicit);

    CHECK(u->parent_of("A", "B"));
    CHECK(u->parent_of("B", "C"));
    CHECK(u->parent_of("A", "C"));
    CHECK(!u->parent_of("C", "A"));
    CHECK(u->is_root("A"));
    CHECK(!u->is_root("B"));
    CHECK(u->ancestors_of("C") == std::set<std::string>{"A", "B"});
    CHECK(u->roots_of("C") == std::set<std::string>{"A"});
    CHECK(u->root_of("A", "C"));
    CHECK(!u->root_of("B", "C"));
    CHECK(check_isu(*u).ok());
}

TEST_CASE("type relatedness closes reflexively and symmetrically") {
    auto u = Universe::create({otype("A"), otype("B"), otype("C")}, {{"A", "B"}},
                              {}, AdapterKind::Explicit);
    CHECK(u->type_related("A", "A"));
    CHECK(u->type_related("C", "C"));
    CHECK(u->type_related("A", "B"));
    CHECK(u->type_related("B", "A"));
    CHECK(!u->type_related("A", "C"));
}

TEST_CASE("er adapter derives relatedness from hierarchy tops") {
    History h = load_history_file(fx("store_history.json"));
    const Universe& u = *h.universe;
    CHECK(u.adapter() == AdapterKind::Er);
    CHECK(!u.explicit_type_rel_given());

    CHECK(u.type_related("Record", "Medium"));
    CHECK(u.type_related("Recording of Song on Record", "Recording of Song on Medium"));
    CHECK(!u.type_related("Record", "Recording of Song on Record"));
    CHECK(!u.type_related("Medium", "Recording of Song on Medium"));

    CHECK(u.roots_of("Record") == std::set<std::string>{"Medium"});
    CHECK(u.roots_of("Medium") == std::set<std::string>{"Medium"});
    CHECK(check_isu(u).ok());
    CHECK(common_roots_holds(u));
}

TEST_CASE("er derivation requires a unique hierarchy top") {
    CHECK_THROWS_WITH_AS(
        Universe::create({otype("A"), otype("B"), otype("C")}, {},
                         {{"A", "C"}, {"B", "C"}}, AdapterKind::Er),
        "non-unique top for object type: C", UniverseError);
    // The same diamond is fine when relatedness is given explicitly.
    auto u = Universe::create({otype("A"), otype("B"), otype("C")}, {{"A", "B"}},
                              {{"A", "C"}, {"B", "C"}}, AdapterKind::Explicit);
    CHECK(u->roots_of("C") == std::set<std::string>{"A", "B"});
}

TEST_CASE("broker universe satisfies every structure rule") {
    History h = load_history_file(fx("broker_history.json"));
    const Universe& u = *h.universe;
    CHECK(u.adapter() == AdapterKind::Explicit);
    CHECK(check_isu(u).ok());
    CHECK(common_roots_holds(u));

    CHECK(u.roots_of("Product") == std::set<std::string>{"Boat", "House"});
    CHECK(u.roots_of("Real estate") == std::set<std::string>{"Boat", "House"});
    CHECK(u.is_root("Boat"));
    CHECK(u.is_root("House"));
    CHECK(!u.is_root("Product"));
    // Closure supplies the grandparent edges the document leaves implicit.
    CHECK(u.parent_of("Boat", "Real estate"));
    CHECK(u.parent_of("House", "Real estate"));
    CHECK(!u.type_related("Boat", "House"));
}

TEST_CASE("relatedness must reach an ancestor of a non-root") {
    auto u = Universe::create({otype("A"), otype("P"), otype("C")},
                              {{"A", "C"}, {"P", "C"}}, {{"P", "C"}},
                              AdapterKind::Explicit);
    ValidationReport r = check_isu(*u);
    CHECK(!r.ok());
    REQUIRE(r.count("ISU7") == 1);
    REQUIRE(r.items().size() == 1);
    CHECK(r.items()[0].witnesses == std::vector<std::string>{"A", "C"});
}

TEST_CASE("er adapter flags a stored relation it would not derive") {
    auto u = Universe::create({otype("A"), otype("B")}, {{"A", "B"}}, {},
                              AdapterKind::Er);
    ValidationReport r = check_isu(*u);
    CHECK(!r.ok());
    // One row per ordered mismatching pair.
    CHECK(r.count("AdapterAgreement") == 2);
    CHECK(r.items().size() == 2);
}

TEST_CASE("restriction keeps only alive types and their relation pairs") {
    History h = load_history_file(fx("broker_history.json"));
    Universe r = h.universe->restricted_to({"Boat", "Product"});
    CHECK(r.otypes().size() == 2);
    CHECK(r.parent_of("Boat", "Product"));
    CHECK(r.type_related("Boat", "Product"));
    CHECK_THROWS_AS(r.type_related("Boat", "House"), UniverseError);
    // With House gone, Product's only root is Boat.
    CHECK(r.roots_of("Product") == std::set<std::string>{"Boat"});
}

TEST_CASE("inheritance closure checks") {
    auto u = Universe::create({otype("P"), otype("C")}, {}, {{"P", "C"}},
                              AdapterKind::Explicit);

    auto holds_p = [](const std::string& x) { return x == "P"; };
    ValidationReport strong = check_strong_inheritance(*u, holds_p);
    REQUIRE(strong.items().size() == 1);
    CHECK(strong.items()[0].axiom == "StrongInheritance");
    CHECK(strong.items()[0].witnesses == std::vector<std::string>{"P", "C"});
    // Roots carry no obligation downward once the child holds too.
    CHECK(check_strong_inheritance(*u, [](const std::string&) { return true; }).ok());
    CHECK(check_weak_inheritance(*u, holds_p).ok());

    auto holds_c = [](const std::string& x) { return x == "C"; };
    ValidationReport weak = check_weak_inheritance(*u, holds_c);
    REQUIRE(weak.items().size() == 1);
    CHECK(weak.items()[0].axiom == "WeakInheritance");
    CHECK(weak.items()[0].witnesses == std::vector<std::string>{"C"});
    CHECK(check_strong_inheritance(*u, holds_c).ok());
}
