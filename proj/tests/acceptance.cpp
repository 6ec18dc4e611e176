// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "gen.hpp"
#include "pkb/engine.hpp"
#include "pkb/format.hpp"
#include "pkb/ontology.hpp"
#include "pkb/parser.hpp"
#include "pkb/semparse.hpp"

using namespace pkb;

namespace {

std::string data(const std::string& rel) { return std::string(PKB_DATA_DIR) + "/" + rel; }

// Collects failed expectations for one criterion.
struct Check {
    std::vector<std::string> failures;
    std::vector<std::string> notes;

    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
    void near(double got, double want, double tol, const std::string& what) {
        std::ostringstream os;
        os << what << ": got " << got << ", want " << want;
        expect(std::abs(got - want) <= tol, os.str());
    }
};

KnowledgeStore kb(const std::string& file, const std::string& scenario = {}) {
    KnowledgeStore s;
    load_file(s, data("kb/" + file));
    s.seal();
    if (!scenario.empty()) load_file(s, data("kb/scenarios/" + scenario), Layer::Session);
    return s;
}

struct Asked {
    SolveResult result;
    std::vector<TraceVars> vars;
};

Asked ask(const KnowledgeStore& s, const std::string& q) {
    Asked a;
    const auto goals = parse_query(q, s, &a.vars);
    a.result = solve(s, goals);
    return a;
}

std::string binding(const Answer& a, const std::string& var) {
    for (const auto& [n, v] : a.bindings)
        if (n == var) return to_string(v);
    return {};
}

const Answer* with_binding(const SolveResult& r, const std::string& var, const std::string& value) {
    for (const auto& a : r.answers)
        if (binding(a, var) == value) return &a;
    return nullptr;
}

std::set<std::string> trace_set(const Answer& a) {
    std::set<std::string> ids;
    for (const auto& p : a.proofs)
        for (const auto& id : p.statement_ids()) ids.insert(id);
    return ids;
}

std::set<std::string> sources_of(const Answer& a, const KnowledgeStore& s) {
    std::set<std::string> out;
    for (const auto& id : trace_set(a))
        if (const Statement* st = s.find(id); st && st->source) out.insert(*st->source);
    return out;
}

// Single ground answer of a yes/no query.
const Answer& only(const Asked& a) { return a.result.answers.at(0); }

void expect_values(Check& c, const SolveResult& r, const std::string& var,
                   const std::map<std::string, double>& want, const std::string& label) {
    std::map<std::string, double> got;
    for (const auto& a : r.answers)
        if (a.status != Status::Unknown) got[binding(a, var)] = a.prob;
    c.expect(got.size() == want.size(), label + ": answer count " + std::to_string(got.size()));
    for (const auto& [v, p] : want) {
        auto it = got.find(v);
        if (it == got.end()) {
            c.expect(false, label + ": missing " + v);
            continue;
        }
        c.near(it->second, p, 1e-9, label + " " + v);
    }
}

// ---- criteria -----------------------------------------------------------

void example_format(Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto s = kb("example_format.pkb");
    c.near(only(ask(s, "can(car,move)?")).prob, 0.72, 1e-9, "can(car,move)");
    expect_values(c, ask(s, "can(X,move)?").result, "X", {{"animal", 0.6}, {"car", 0.72}}, "can(X,move)");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.expect(secs < 1.0, "runtime " + std::to_string(secs) + " s");
}

void base_scheme(Check& c) {
    const auto s = kb("base_scheme.pkb");
    using Set = std::set<std::string>;
    auto i1 = ask(s, "isa(F,S,T,person,organism)?");
    c.expect(only(i1).status == Status::Entailed && only(i1).prob == 1.0, "I1 is 1.0");
    c.expect(sources_of(only(i1), s) == Set{"wnet"}, "I1 source {wnet}");
    c.expect(trace_set(only(i1)) == Set{"f1"}, "I1 trace {f1}");
    const auto tb = trace_bindings(only(i1), i1.vars, s);
    c.expect(tb.size() == 3 && to_string(tb[0].second) == "[f1]" && to_string(tb[1].second) == "[wnet]" &&
                 to_string(tb[2].second) == "t_g",
             "I1 binds F=[f1], S=[wnet], T=t_g");
    auto i2 = ask(s, "isa(F,S,T,person,programmer)?");
    c.expect(only(i2).status == Status::Unknown && trace_set(only(i2)).empty(), "I2 unknown with empty trace");
    auto i3 = ask(s, "isa(F,S,T,person,car)?");
    c.expect(only(i3).status == Status::KnownFalse && trace_set(only(i3)) == Set{"f3"}, "I3 known_false {f3}");
    auto i4 = ask(s, "isa(F,S,T,programmer,Y)?");
    c.expect(i4.result.answers.size() == 2, "I4 has two answers");
    const Answer* person = with_binding(i4.result, "Y", "person");
    const Answer* organism = with_binding(i4.result, "Y", "organism");
    c.expect(person && trace_set(*person) == Set{"f2"}, "I4 person trace {f2}");
    c.expect(organism && trace_set(*organism) == Set{"f1", "f2", "c1"}, "I4 organism trace {f1,f2,c1}");
    c.expect(organism && sources_of(*organism, s) == Set{"kb", "wnet"}, "I4 organism sources {kb,wnet}");
}

void hierarchy(Check& c) {
    const auto s = kb("hierarchy.pkb");
    c.near(only(ask(s, "can(sparrow,motion_activity)?")).prob, 0.8, 1e-9, "I1");
    c.near(only(ask(s, "can(duck,fly)?")).prob, 0.9, 1e-9, "I2");
    const auto i3 = ask(s, "can(penguin,fly)?");
    c.expect(only(i3).status == Status::KnownFalse && only(i3).prob == 0.0, "I3 known_false 0");
    c.near(only(ask(s, "can(penguin2,fly)?")).prob, 0.9, 1e-9, "I4");
    c.near(only(ask(s, "can(new_bird,fly)?")).prob, 0.45, 1e-9, "I5");
    c.near(only(ask(s, "can(duck,swim)?")).prob, 0.9, 1e-9, "I6");
    c.expect(only(ask(s, "can(sparrow,swim)?")).status == Status::Unknown, "I7 unknown");
}

void free_text(Check& c) {
    const auto s = kb("free_text.pkb");
    expect_values(c, ask(s, "has_name(X,\"bowl\")?").result, "X", {{"bowl", 1.0}, {"roll_action", 0.6}}, "I1");
    expect_values(c, ask(s, "has_name(bowl,Y)?").result, "Y", {{"\"bowl\"", 1.0}, {"\"basin\"", 0.8}}, "I2");
    expect_values(c, ask(s, "has_name(Q,\"bowl\"), isa(Q,event)?").result, "Q", {{"roll_action", 0.6}}, "I3");
    expect_values(c, ask(s, "has_name(Q,\"bowl\"), used_for(Q,Y)?").result, "Y",
                  {{"phy_storage", 0.6}, {"\"eating soup\"", 0.6}}, "I4");
    expect_values(c, ask(s, "can(X,\"keep things\")?").result, "X",
                  {{"newobj", 0.7}, {"container", 0.6}, {"bowl", 0.6}}, "I5");
}

void event_roles(Check& c) {
    auto s = kb("event_roles.pkb", "event_q1.pkb");
    expect_values(c, ask(s, "agent(eat_ins,A)?").result, "A", {{"animal", 0.9}}, "I1 agent");
    expect_values(c, ask(s, "subevent(eat_ins,E)?").result, "E", {{"\"salivate\"", 0.5}}, "I1 subevent");
    s = kb("event_roles.pkb", "event_q2.pkb");
    expect_values(c, ask(s, "subevent(eat_i,E)?").result, "E", {{"\"crunch\"", 0.9}, {"\"salivate\"", 0.5}}, "I2");
    s = kb("event_roles.pkb", "event_q3.pkb");
    expect_values(c, ask(s, "instrument(eat_1,I)?").result, "I", {{"cutlery", 0.9}}, "I3");
    s = kb("event_roles.pkb", "event_q4.pkb");
    expect_values(c, ask(s, "instrument(eat_2,I)?").result, "I", {{"mouth", 0.9}}, "I4");
}

void temporal(Check& c) {
    auto s = kb("temporal.pkb", "temporal_q1.pkb");
    auto place = [&](const std::string& t) {
        std::map<std::string, double> out;
        for (const auto& a : ask(s, "location(" + t + ",air,P,R)?").result.answers)
            if (a.status == Status::Entailed) out[binding(a, "P") + "/" + binding(a, "R")] = a.prob;
        return out;
    };
    c.expect(place("t1") == std::map<std::string, double>{{"engine/out", 1.0}}, "I1 t1 engine out");
    c.expect(place("t2") == std::map<std::string, double>{{"intake/at", 1.0}}, "I1 t2 intake at");
    c.expect(place("t3") == std::map<std::string, double>{{"engine/in", 1.0}}, "I1 t3 engine in");
    s = kb("temporal.pkb", "temporal_q2.pkb");
    c.expect(place("t1") == std::map<std::string, double>{{"engine/out", 1.0}, {"propeller/at", 1.0}},
             "I2 t1 propeller at, engine out");
    s = kb("temporal.pkb", "temporal_q3.pkb");
    const auto i3 = ask(s, "temp(t3,water,X), more_than(t_g,X,tmp1)?");
    expect_values(c, i3.result, "X", {{"tdest", 0.9}}, "I3 temp after heating");
    c.expect(only(ask(s, "more_than(t_g,tdest,tmp1)?")).status == Status::Entailed, "I3 more_than true");
}

void physics(Check& c) {
    auto s = kb("physics.pkb", "physics_q1.pkb");
    c.expect(only(ask(s, "can(cup1,contain,ballx)?")).status == Status::KnownFalse, "I1 known_false");
    s = kb("physics.pkb", "physics_q2.pkb");
    expect_values(c, ask(s, "assoc_event(water,E)?").result, "E", {{"boil", 1.0}}, "I2 water");
    c.expect(only(ask(s, "assoc_event(olive_oil,E)?")).status == Status::Unknown, "I2 olive_oil unknown");
    s = kb("physics.pkb", "physics_q3.pkb");
    const auto& d = only(ask(s, "decreases(p1)?"));
    c.expect(d.status == Status::Entailed && d.prob == 1.0, "I3 decreases(p1) true");
    const auto ids = trace_set(d);
    c.expect(ids.contains("c5") && (ids.contains("c6") || ids.contains("c6b")), "I3 via gas-law clauses");
}

void higher_order(Check& c) {
    auto s = kb("higher_order.pkb", "higher_order_q1.pkb");
    std::set<std::string> foods;
    for (const auto& a : ask(s, "can(p1,eat,F)?").result.answers)
        if (a.status == Status::Entailed) foods.insert(binding(a, "F"));
    c.expect(foods == std::set<std::string>{"meat", "kebab", "tofu", "pizza"}, "I1 can eat all four foods");
    expect_values(c, ask(s, "prefers(p1,theme(eat1,F))?").result, "F", {{"tofu", 1.0}, {"pizza", 0.5}},
                  "I1 p1 prefers");
    expect_values(c, ask(s, "prefers(p2,theme(eat2,F))?").result, "F",
                  {{"meat", 1.0}, {"kebab", 1.0}, {"tofu", 1.0}, {"pizza", 1.0}}, "I1 p2 prefers");
    s = kb("higher_order.pkb", "higher_order_q2.pkb");
    const auto& p2 = only(ask(s, "can(p2,buy,home1)?"));
    c.expect(p2.status == Status::KnownFalse, "I2 p2 cannot buy home1");
    const auto& p3 = only(ask(s, "can(p3,buy,home1)?"));
    c.expect(p3.status == Status::Entailed && p3.prob == 1.0, "I2 p3 can buy home1 (1.0)");
}

void certainty(Check& c) {
    c.expect(!score_to_certainty(0.0).has_value(), "0 is discarded");
    c.expect(score_to_certainty(0.7) == CertaintyLevel::Tentative, "0.7 tentative");
    c.expect(score_to_certainty(0.7000001) == CertaintyLevel::Likely, "just above 0.7 likely");
    c.expect(score_to_certainty(1.4) == CertaintyLevel::Likely, "1.4 likely");
    c.expect(score_to_certainty(1.4000001) == CertaintyLevel::StronglyLikely, "just above 1.4 strongly likely");
    c.expect(score_to_certainty(2.0) == CertaintyLevel::StronglyLikely, "2.0 strongly likely");
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    auto rank = [](double m) {
        auto l = score_to_certainty(m);
        return l ? probability(*l) : 0.0;
    };
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
        double a = d(rng), b = d(rng);
        if (a > b) std::swap(a, b);
        if (rank(a) > rank(b)) ++bad;
    }
    c.expect(bad == 0, std::to_string(bad) + " monotonicity violations in 1000 samples");
}

void oracle(Check& c) {
    std::mt19937 rng(4242);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const auto prog = testgen::proof_disjoint_program(rng);
        KnowledgeStore s;
        load_program(s, prog.text);
        const auto goal = parse_query("q(x)?");
        const double e = solve(s, goal).answers.at(0).prob;
        const double o = brute_force_prob(s, goal.at(0));
        worst = std::max(worst, std::abs(e - o));
        c.expect(std::abs(e - o) <= 1e-12, "program " + std::to_string(i) + " differs");
    }
    std::ostringstream os;
    os << "max |engine - oracle| over 200 proof-disjoint programs: " << worst;
    c.notes.push_back(os.str());
    // shared-fact programs: report the divergence only
    std::size_t diverged = 0;
    double largest = 0.0;
    for (int i = 0; i < 50; ++i) {
        const auto prog = testgen::proof_disjoint_program(rng, true);
        KnowledgeStore s;
        load_program(s, prog.text);
        const auto goal = parse_query("q(x)?");
        const double gap = std::abs(solve(s, goal).answers.at(0).prob - brute_force_prob(s, goal.at(0)));
        if (gap > 1e-12) ++diverged;
        largest = std::max(largest, gap);
    }
    std::ostringstream sh;
    sh << "shared-fact programs: " << diverged << "/50 diverge, largest gap " << largest << " (reported, not asserted)";
    c.notes.push_back(sh.str());
}

void round_trip(Check& c) {
    std::mt19937 rng(77);
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
        const Statement s = testgen::statement(rng);
        const std::string text = print_statement(s);
        try {
            if (!(parse_statement(text) == s)) ++bad;
        } catch (const std::exception&) {
            ++bad;
        }
    }
    c.expect(bad == 0, std::to_string(bad) + " of 1000 statements failed the round trip");
}

void walkthrough(Check& c) {
    KnowledgeStore s;
    load_file(s, data("kb/semparse.pkb"));
    s.seal();
    const auto rules = load_rules(data("semparse/rules.txt"));
    const auto templates = load_templates(data("semparse/templates.txt"));
    const auto beam = parse_passage(load_document(data("semparse/figure.json")), rules, s);
    c.expect(beam.interpretations.size() == 2, "exactly 2 interpretations");
    for (const auto& in : beam.interpretations)
        for (const auto& f : in.facts)
            c.expect(to_string(f.head.term()) != "agent(increase_ins1,obstruction_ins1)",
                     in.id + " keeps agent(increase, obstruction)");
    c.expect(!beam.log.empty() && beam.log[0].discarded > 0, "strict mode discarded readings");
    const auto r = answer_question("What causes the pressure to increase?", templates, beam, s);
    c.expect(!r.unknown(), "question answered");
    if (r.unknown()) return;
    const auto& a = r.answers.front();
    c.expect(a.value && to_string(*a.value) == "obstruction_ins1", "answer is the obstruction instance");
    c.expect(a.sources.contains(a.interpretation), "trace names the interpretation source");
}

void synthetic(Check& c) {
    c.notes.push_back(
        "not reproducible here: the original KB statistics (574 concepts, 6799 facts, 299 clauses), the crowdsourced "
        "certainty distribution and the 267-sentence / 21-passage parsing run depend on unpublished data");
    c.notes.push_back("substitute: criteria 9-12 plus a 30-sentence synthetic corpus covering every rule");
    KnowledgeStore s;
    load_file(s, data("kb/semparse.pkb"));
    s.seal();
    const auto rules = load_rules(data("semparse/rules.txt"));
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(data("semparse/synthetic")))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::set<std::string> fired;
    std::size_t sentences = 0;
    ParseConfig cfg;
    for (const auto& f : files) {
        const auto doc = load_document(f.string());
        sentences += doc.sentences.size();
        const auto beam = parse_passage(doc, rules, s, cfg);
        c.expect(!beam.interpretations.empty() && beam.interpretations.size() <= cfg.k,
                 f.filename().string() + " beam size within k");
        for (const auto& app : beam.log) fired.insert(app.rule_id);
    }
    c.expect(sentences == 30, "corpus has " + std::to_string(sentences) + " sentences");
    for (const auto& r : rules) c.expect(fired.contains(r.id), "rule " + r.id + " never fired");
    c.notes.push_back(std::to_string(fired.size()) + "/" + std::to_string(rules.size()) + " rules fired over " +
                      std::to_string(sentences) + " sentences");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
        {"example-format table", example_format},
        {"base-scheme table with traces", base_scheme},
        {"hierarchy table", hierarchy},
        {"free-text table", free_text},
        {"event-roles table", event_roles},
        {"temporal table", temporal},
        {"physics table", physics},
        {"higher-order table", higher_order},
        {"certainty mapping", certainty},
        {"oracle equivalence", oracle},
        {"parser round trip", round_trip},
        {"semantic parsing walkthrough", walkthrough},
        {"desk-scale substitute for the corpus statistics", synthetic},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        try {
            criteria[i].second(c);
        } catch (const std::exception& e) {
            c.failures.push_back(std::string("exception: ") + e.what());
        }
        const bool ok = c.failures.empty();
        if (!ok) ++failed;
        std::cout << (ok ? "PASS " : "FAIL ") << (i + 1) << ": " << criteria[i].first << "\n";
        for (const auto& n : c.notes) std::cout << "    " << n << "\n";
        for (const auto& f : c.failures) std::cout << "    - " << f << "\n";
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
