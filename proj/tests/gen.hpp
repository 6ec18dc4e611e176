#pragma once

// Random generators shared by the property tests and the acceptance checks.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "pkb/store.hpp"
#include "pkb/term.hpp"

namespace testgen {

using pkb::GoalExpr;
using pkb::Term;

inline Term arg_term(std::mt19937& rng, int depth) {
    static const char* vars[] = {"X", "Y", "Z", "Var_2", "_G7"};
    static const char* syms[] = {"a", "car", "t_g", "phy_state", "x1"};
    static const char* phrases[] = {"keep things", "a", "say \"hi\"", "back\\slash", "", "crunch"};
    static const double nums[] = {0, 1, -2, 0.5, 30000, 1e-7, 3.25};
    switch (std::uniform_int_distribution<int>(0, depth > 0 ? 5 : 3)(rng)) {
    case 0: return Term::variable(vars[rng() % 5]);
    case 1: return Term::symbol(syms[rng() % 5]);
    case 2: return Term::phrase(phrases[rng() % 6]);
    case 3: return Term::number(nums[rng() % 7]);
    case 4: {
        std::vector<Term> args;
        for (int i = 0, n = 1 + static_cast<int>(rng() % 2); i < n; ++i) args.push_back(arg_term(rng, depth - 1));
        return Term::compound(rng() % 2 ? "f" : "val", std::move(args));
    }
    default: {
        std::vector<Term> xs;
        for (int i = 0, n = static_cast<int>(rng() % 3); i < n; ++i) xs.push_back(arg_term(rng, depth - 1));
        if (rng() % 3 == 0) return Term::make_list(xs, Term::variable("T"));
        return Term::make_list(xs);
    }
    }
}

inline Term atom_term(std::mt19937& rng) {
    static const char* preds[] = {"isa", "can", "has_name", "subevent", "more_than"};
    std::vector<Term> args;
    for (int i = 0, n = 1 + static_cast<int>(rng() % 3); i < n; ++i) args.push_back(arg_term(rng, 2));
    return Term::compound(preds[rng() % 5], std::move(args));
}

inline GoalExpr goal(std::mt19937& rng, int depth) {
    switch (std::uniform_int_distribution<int>(0, depth > 0 ? 6 : 2)(rng)) {
    case 0:
    case 1: return GoalExpr::atom(atom_term(rng));
    case 2: {
        static const pkb::CompareOp ops[] = {pkb::CompareOp::Gt, pkb::CompareOp::Ge, pkb::CompareOp::Lt,
                                             pkb::CompareOp::Le, pkb::CompareOp::Eq, pkb::CompareOp::Ne};
        return GoalExpr::compare(ops[rng() % 6], rng() % 2 ? Term::variable("X") : Term::number(2),
                                 rng() % 2 ? Term::variable("Y") : Term::number(0.5));
    }
    case 3:
        if (rng() % 2)
            return GoalExpr::builtin(Term::compound("sort", {Term::variable("L"), Term::variable("S")}));
        return GoalExpr::builtin(Term::compound("append", {Term::variable("A"), Term::variable("B"), Term::variable("C")}));
    case 4: return GoalExpr::negation(goal(rng, depth - 1));
    default: {
        std::vector<GoalExpr> gs;
        for (int i = 0, n = 2 + static_cast<int>(rng() % 2); i < n; ++i) gs.push_back(goal(rng, depth - 1));
        return rng() % 2 ? GoalExpr::conj(std::move(gs)) : GoalExpr::disj(std::move(gs));
    }
    }
}

inline pkb::Statement statement(std::mt19937& rng) {
    static const double probs[] = {1.0, 0.0, 0.5, 0.9, 0.123456789, 0.7};
    static const char* ids[] = {"f1", "c12", "inh_can", "my id", "x"};
    static const char* sources[] = {"kb", "wnet", "crowd", "interp_3", "two words"};
    pkb::Statement s;
    s.head = pkb::Atom(atom_term(rng));
    if (rng() % 2) s.body = goal(rng, 3);
    s.prob = rng() % 4 == 0 ? std::uniform_real_distribution<double>(0.0, 1.0)(rng) : probs[rng() % 6];
    if (rng() % 3) s.id = ids[rng() % 5];
    if (rng() % 3) s.source = sources[rng() % 5];
    if (rng() % 4 == 0) s.time_tag = rng() % 2 ? "t1" : "t_after";
    return s;
}

}  // namespace testgen

namespace testgen {

struct RandomProgram {
    std::string text;
    std::size_t uncertain = 0;  // statements with 0 < p < 1
};

/// Programs for goal `q(x)`. Each proof path owns its probabilistic
/// statements, so proofs are independent and noisy-or is exact. With
/// `shared`, every path also uses one common uncertain fact `s(x)`.
inline RandomProgram proof_disjoint_program(std::mt19937& rng, bool shared = false, std::size_t max_uncertain = 8) {
    RandomProgram out;
    auto prob = [&]() -> std::string {
        const int kind = static_cast<int>(rng() % 10);
        if (kind < 3) return "";
        if (kind == 3) return "0::";
        const double p = 0.05 + 0.9 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        return pkb::format_number(std::round(p * 1000) / 1000) + "::";
    };
    auto emit = [&](const std::string& stmt, const std::string& p) {
        if (p.empty() || p == "0::") {
            if (p == "0::") out.text += p;
        } else {
            if (out.uncertain >= max_uncertain) {
                out.text += stmt + "\n";  // certain once the budget is used up
                return;
            }
            ++out.uncertain;
            out.text += p;
        }
        out.text += stmt + "\n";
    };
    if (shared) emit("s(x).", "0.6::");
    const int paths = 1 + static_cast<int>(rng() % 3);
    for (int i = 1; i <= paths; ++i) {
        const std::string n = std::to_string(i);
        const std::string extra = shared ? ", s(X)" : "";
        switch (rng() % 3) {
        case 0:
            emit("q(X) :- a" + n + "(X), b" + n + "(X)" + extra + ".", prob());
            emit("a" + n + "(x).", prob());
            emit("b" + n + "(x).", prob());
            break;
        case 1:
            emit("q(X) :- m" + n + "(X)" + extra + ".", prob());
            emit("m" + n + "(X) :- g" + n + "(X).", prob());
            emit("g" + n + "(x).", prob());
            break;
        default:
            emit("q(X) :- h" + n + "(X), not(n" + n + "(X))" + extra + ".", prob());
            emit("h" + n + "(x).", prob());
            if (rng() % 2) emit("n" + n + "(x).", prob());
            break;
        }
    }
    return out;
}

}  // namespace testgen
