#include <doctest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "pkb/ontology.hpp"

using namespace pkb;

namespace {

Ontology seed() { return Ontology::load(testutil::data("ontology/seed.ont")); }

std::set<std::string> names(const std::vector<DeclaredPredicate>& ps) {
    std::set<std::string> out;
    for (const auto& p : ps) out.insert(p.name + "/" + std::to_string(p.arity));
    return out;
}

}  // namespace

TEST_CASE("seed ontology: Vehicle under Device with its own predicates") {
    const auto ont = seed();
    const auto* v = ont.find("Vehicle");
    REQUIRE(v);
    CHECK(std::find(v->parents.begin(), v->parents.end(), "Device") != v->parents.end());
    std::set<std::string> own;
    for (const auto& p : v->predicates) own.insert(p.name);
    CHECK(own == std::set<std::string>{"travel_area", "mileage"});
    CHECK(ont.root().name == "Root");
    CHECK(ont.is_ancestor("Device", "Vehicle"));
    CHECK(ont.is_ancestor("Root", "Programmer"));
    CHECK_FALSE(ont.is_ancestor("Vehicle", "Device"));
    CHECK(ont.find_concept("vehicle") == v);
    CHECK(ont.find("vehicle") == nullptr);
    for (const char* n : {"Root", "Real", "Abstract", "Event", "Manmade", "Physical", "Sentient", "Living", "Animal",
                          "Fluid", "Device", "Vehicle", "Numeric", "Idea", "Cycle", "Programmer"})
        CHECK_MESSAGE(ont.find(n) != nullptr, n);
}

TEST_CASE("effective predicates include ancestors', ordered by declaring level") {
    const auto ont = seed();
    const auto eff = ont.effective_predicates("Vehicle");
    const auto set = names(eff);
    CHECK(set.contains("isa/2"));
    CHECK(set.contains("used_for/2"));
    CHECK(set.contains("mileage/3"));
    CHECK(eff.back().name == "travel_area");  // Vehicle is the deepest declaring node
    CHECK(eff.front().name == "can");        // Root predicates first, by name
    CHECK_THROWS_AS(ont.effective_predicates("Nope"), OntologyError);
}

TEST_CASE("property: siblings share exactly their common ancestors' predicates") {
    const auto ont = seed();
    for (const auto& a : ont.nodes())
        for (const auto& b : ont.nodes()) {
            if (a.name >= b.name) continue;
            const auto ea = names(ont.effective_predicates(a.name));
            const auto eb = names(ont.effective_predicates(b.name));
            std::set<std::string> common;
            std::set_intersection(ea.begin(), ea.end(), eb.begin(), eb.end(), std::inserter(common, common.end()));
            // every shared predicate is declared on some node that is (or is an ancestor of) both
            std::set<std::string> from_ancestors;
            for (const auto& n : ont.nodes()) {
                const bool ca = n.name == a.name || ont.is_ancestor(n.name, a.name);
                const bool cb = n.name == b.name || ont.is_ancestor(n.name, b.name);
                if (ca && cb)
                    for (const auto& p : n.predicates) from_ancestors.insert(p.name + "/" + std::to_string(p.arity));
            }
            for (const auto& p : from_ancestors) CHECK(common.contains(p));
        }
}

TEST_CASE("validation: cycles, dangling parents, duplicates, roots and levels") {
    try {
        Ontology::load(testutil::data("ontology/cyclic.ont"));
        FAIL("expected a cycle error");
    } catch (const OntologyError& e) {
        CHECK(std::string(e.what()).find("cycle: Alpha -> Beta -> Alpha") != std::string::npos);
    }
    CHECK_THROWS_AS(Ontology::parse("Root 0 -\nA 1 Missing\n"), OntologyError);
    CHECK_THROWS_AS(Ontology::parse("Root 0 -\nA 1 Root\nA 1 Root\n"), OntologyError);
    CHECK_THROWS_AS(Ontology::parse("Root 0 -\nOther 0 -\n"), OntologyError);
    CHECK_THROWS_AS(Ontology::parse("Root 1 -\n"), OntologyError);
    CHECK_THROWS_AS(Ontology::parse("Root 0 -\nA 0 Root\n"), OntologyError);
    CHECK_THROWS_AS(Ontology::parse("Root 0 -\n  isa\n"), OntologyError);
    CHECK_THROWS_AS(Ontology::parse(""), OntologyError);
}

TEST_CASE("canonical text parses back to the same graph") {
    const auto ont = seed();
    const auto again = Ontology::parse(ont.to_text());
    REQUIRE(again.nodes().size() == ont.nodes().size());
    for (std::size_t i = 0; i < ont.nodes().size(); ++i) {
        CHECK(again.nodes()[i].name == ont.nodes()[i].name);
        CHECK(again.nodes()[i].parents == ont.nodes()[i].parents);
        CHECK(again.nodes()[i].predicates == ont.nodes()[i].predicates);
    }
}

TEST_CASE("has_name is not inheritable; generated clauses follow the override pattern") {
    const auto ont = seed();
    const auto inh = ont.inheritable_predicates();
    CHECK(std::find(inh.begin(), inh.end(), "has_name") == inh.end());
    CHECK(std::find(inh.begin(), inh.end(), "can") != inh.end());
    CHECK(std::find(inh.begin(), inh.end(), "mileage") == inh.end());  // arity 3

    const auto cl = generate_inheritance_clauses({"isa", "can"});
    REQUIRE(cl.size() == 2);
    CHECK(print_statement(cl[0]) == "isa(X,Z) :- isa(X,Y), isa(Y,Z) @id=inh_isa, src=ontology.");
    CHECK(print_statement(cl[1]) == "can(X,Y) :- isa(X,Z), can(Z,Y), not(not_can(X,Y)) @id=inh_can, src=ontology.");
}

TEST_CASE("generated inheritance clauses reproduce hierarchy overrides") {
    KnowledgeStore s;
    load_program(s, "0.8::can(animal,motion_activity).\nisa(bird,animal).\nisa(penguin,bird).\n"
                    "0.9::can(bird,fly).\nnot_can(penguin,fly).\n");
    for (auto& c : generate_inheritance_clauses({"isa", "can"})) s.add_statement(c);
    CHECK(testutil::ask(s, "can(bird,motion_activity)?").answers[0].prob == doctest::Approx(0.8));
    CHECK(testutil::ask(s, "can(penguin,fly)?").answers[0].status == Status::KnownFalse);
}

TEST_CASE("certainty thresholds at the boundaries") {
    CHECK_FALSE(score_to_certainty(-2.0).has_value());
    CHECK_FALSE(score_to_certainty(0.0).has_value());
    CHECK(score_to_certainty(0.01) == CertaintyLevel::Tentative);
    CHECK(score_to_certainty(0.7) == CertaintyLevel::Tentative);
    CHECK(score_to_certainty(0.71) == CertaintyLevel::Likely);
    CHECK(score_to_certainty(1.4) == CertaintyLevel::Likely);
    CHECK(score_to_certainty(1.41) == CertaintyLevel::StronglyLikely);
    CHECK(score_to_certainty(2.0) == CertaintyLevel::StronglyLikely);
    CHECK_THROWS_AS(score_to_certainty(2.01), std::out_of_range);
    CHECK_THROWS_AS(score_to_certainty(-2.5), std::out_of_range);
    CHECK(probability(CertaintyLevel::Tentative) == 0.5);
    CHECK(probability(CertaintyLevel::Likely) == 0.7);
    CHECK(probability(CertaintyLevel::StronglyLikely) == 0.9);
    CHECK(probability(CertaintyLevel::Inherent) == 1.0);
}

TEST_CASE("property: certainty is monotone in the mean rating") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    auto rank = [](double m) {
        auto c = score_to_certainty(m);
        return c ? probability(*c) : 0.0;
    };
    for (int i = 0; i < 1000; ++i) {
        double a = d(rng), b = d(rng);
        if (a > b) std::swap(a, b);
        CHECK(rank(a) <= rank(b));
    }
}

TEST_CASE("crowd CSV: quoted phrases, warnings, skipped rows") {
    std::vector<CrowdWarning> w;
    const auto rows = parse_crowd_csv(
        "concept,predicate,object,r1,r2,r3\n"
        "bowl,can,\"hold, water\",2,1,2\n"
        "\"basin\",used_for,washing,1,1\n"
        "sparrow,can,sing,1,2,bad\n"
        "car,can,fly,-2,-1,-3\n"
        "Bad Name,can,fly,1,1,1\n",
        w);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].object == Term::phrase("hold, water"));
    CHECK(rows[0].subject == Term::symbol("bowl"));
    CHECK(rows[1].subject == Term::phrase("basin"));
    CHECK(rows[1].ratings == std::vector<int>{1, 1});
    CHECK(w.size() == 4);  // two ratings, 'bad', -3, bad name
    std::vector<CrowdWarning> w2;
    parse_crowd_csv("a,b,c\n", w2);
    CHECK_FALSE(w2.empty());
}

TEST_CASE("crowd ingestion: certainty facts, grounding and per-type report") {
    KnowledgeStore ctx;
    load_file(ctx, testutil::data("crowd/context.pkb"));
    const auto ont = Ontology::load(testutil::data("ontology/seed.ont"));
    std::vector<CrowdWarning> w;
    const auto rows = parse_crowd_csv(
        "concept,predicate,object,r1,r2,r3\n"
        "car,used_for,travel,2,2,1\n"   // 1.67 strongly likely
        "car,can,fly,-2,-1,-2\n"        // discarded
        "\"basin\",used_for,washing,1,1,1\n"  // grounded to bowl, likely
        "dog,can,swim,1,1,0\n",         // 0.67 tentative
        w);
    const auto res = ingest_crowdsource(rows, ctx, &ont);
    REQUIRE(res.facts.size() == 3);
    CHECK(res.facts[0].prob == 0.9);
    CHECK(*res.facts[0].id == "crowd_1");
    CHECK(*res.facts[0].source == "crowd");
    CHECK(res.facts[1].head.term() == parse_term("used_for(bowl,washing)"));
    CHECK(res.facts[1].prob == 0.7);
    CHECK(res.facts[2].prob == 0.5);
    CHECK(res.report.accepted == 3);
    CHECK(res.report.discarded == 1);
    CHECK(res.report.discarded_by_type.at("Vehicle") == 1);
    CHECK(res.report.percent("Vehicle", CertaintyLevel::StronglyLikely) == 100.0);
    CHECK(res.report.percent("Animal", CertaintyLevel::Tentative) == 100.0);
    CHECK(res.report.percent("Device", CertaintyLevel::Likely) == 100.0);
}
