// Possible-world oracle. Shares only term/unification machinery with the
// top-down engine: derivability is decided by a bottom-up stratified fixpoint.
#include <functional>
#include <map>
#include <unordered_set>

#include "pkb/engine.hpp"

namespace pkb {

namespace {

std::string pred_key(const Term& t) { return t.name() + "/" + std::to_string(t.arity()); }

void body_atoms(const GoalExpr& g, bool negated, std::vector<std::pair<std::string, bool>>& out) {
    switch (g.kind) {
    case GoalExpr::Kind::Atom:
        out.emplace_back(pred_key(g.term), negated);
        break;
    case GoalExpr::Kind::Builtin:
        throw EngineError(EngineError::Kind::Type, "oracle does not support built-in " + g.term.name());
    case GoalExpr::Kind::Not:
        body_atoms(g.children[0], true, out);
        break;
    case GoalExpr::Kind::Compare:
        break;
    default:
        for (const auto& c : g.children) body_atoms(c, negated, out);
    }
}

struct Model {
    std::map<std::string, std::vector<Term>> atoms;
    std::unordered_set<std::string> seen;

    bool add(const Term& t) {
        if (!t.is_ground()) throw EngineError(EngineError::Kind::Instantiation, "non-ground derived atom " + to_string(t));
        if (!seen.insert(to_string(t)).second) return false;
        atoms[pred_key(t)].push_back(t);
        return true;
    }
};

void match(const GoalExpr& g, const Model& m, Substitution& s, const std::function<void()>& k) {
    switch (g.kind) {
    case GoalExpr::Kind::Atom: {
        auto it = m.atoms.find(pred_key(g.term));
        if (it == m.atoms.end()) return;
        // copy: the model may grow while a caller iterates
        const std::vector<Term> facts = it->second;
        for (const auto& f : facts) {
            const auto mark = s.mark();
            if (unify_in_place(g.term, f, s)) k();
            s.undo(mark);
        }
        return;
    }
    case GoalExpr::Kind::And: {
        std::function<void(std::size_t)> step = [&](std::size_t i) {
            if (i == g.children.size()) return k();
            match(g.children[i], m, s, [&] { step(i + 1); });
        };
        step(0);
        return;
    }
    case GoalExpr::Kind::Or:
        for (const auto& c : g.children) match(c, m, s, k);
        return;
    case GoalExpr::Kind::Not: {
        bool found = false;
        Substitution probe = s;
        match(g.children[0], m, probe, [&] { found = true; });
        if (!found) k();
        return;
    }
    case GoalExpr::Kind::Compare:
        if (eval_compare(g.op, g.lhs, g.rhs, s)) k();
        return;
    case GoalExpr::Kind::Builtin:
        throw EngineError(EngineError::Kind::Type, "oracle does not support built-ins");
    }
}

}  // namespace

double brute_force_prob(const KnowledgeStore& store, const GoalExpr& goal, std::size_t max_statements) {
    const auto all = store.statements();
    std::vector<const Statement*> uncertain;
    std::map<std::string, int> stratum;
    for (const auto* s : all) {
        stratum.emplace(pred_key(s->head.term()), 0);
        if (s->prob > 0.0 && s->prob < 1.0) uncertain.push_back(s);
    }
    if (uncertain.size() > max_statements)
        throw EngineError(EngineError::Kind::Budget, "oracle limited to " + std::to_string(max_statements) +
                                                         " probabilistic statements, got " +
                                                         std::to_string(uncertain.size()));

    // stratify: positive dependencies keep the level, negative ones raise it
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, bool>>>> deps;
    for (const auto* s : all) {
        if (s->is_fact()) continue;
        std::vector<std::pair<std::string, bool>> d;
        body_atoms(*s->body, false, d);
        for (const auto& [k, neg] : d) stratum.emplace(k, 0);
        deps.emplace_back(pred_key(s->head.term()), std::move(d));
    }
    const int cap = static_cast<int>(stratum.size()) + 1;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& [head, d] : deps) {
            for (const auto& [b, neg] : d) {
                const int need = stratum[b] + (neg ? 1 : 0);
                if (stratum[head] < need) {
                    stratum[head] = need;
                    changed = true;
                    if (need > cap) throw EngineError(EngineError::Kind::Stratification, "program is not stratified");
                }
            }
        }
    }
    int top = 0;
    for (const auto& [k, v] : stratum) top = std::max(top, v);

    double total = 0.0;
    const std::size_t n = uncertain.size();
    for (std::uint64_t world = 0; world < (std::uint64_t{1} << n); ++world) {
        double weight = 1.0;
        std::unordered_set<const Statement*> on;
        for (std::size_t i = 0; i < n; ++i) {
            const bool bit = (world >> i) & 1u;
            weight *= bit ? uncertain[i]->prob : 1.0 - uncertain[i]->prob;
            if (bit) on.insert(uncertain[i]);
        }
        auto active = [&](const Statement* s) { return s->prob >= 1.0 || on.contains(s); };

        Model m;
        for (const auto* s : all)
            if (s->is_fact() && active(s)) m.add(s->head.term());
        for (int level = 0; level <= top; ++level) {
            for (bool grew = true; grew;) {
                grew = false;
                for (const auto* s : all) {
                    if (s->is_fact() || !active(s) || stratum[pred_key(s->head.term())] != level) continue;
                    std::vector<Term> derived;
                    Substitution sub;
                    match(*s->body, m, sub, [&] { derived.push_back(apply(sub, s->head.term())); });
                    for (const auto& d : derived) grew = m.add(d) || grew;
                }
            }
        }
        bool holds = false;
        Substitution sub;
        match(goal, m, sub, [&] { holds = true; });
        if (holds) total += weight;
    }
    return total;
}

}  // namespace pkb
