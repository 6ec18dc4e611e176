#include "pkb/engine.hpp"

#include <algorithm>
#include <unordered_map>

#include "pkb/parser.hpp"

namespace pkb {

std::string_view to_string(Status s) {
    switch (s) {
    case Status::Entailed: return "entailed";
    case Status::KnownFalse: return "known_false";
    case Status::Unknown: return "unknown";
    }
    return "?";
}

std::vector<std::string> Proof::statement_ids() const {
    std::vector<std::string> out(facts_used.begin(), facts_used.end());
    out.insert(out.end(), clauses_used.begin(), clauses_used.end());
    std::sort(out.begin(), out.end());
    return out;
}

double noisy_or(const std::vector<double>& ps) {
    double miss = 1.0;
    for (double p : ps) miss *= (1.0 - p);
    return 1.0 - miss;
}

namespace {

struct BudgetStop {};

GoalExpr rename_goal(const GoalExpr& g, std::unordered_map<std::string, std::string>& m, VarCounter& c) {
    GoalExpr out = g;
    switch (g.kind) {
    case GoalExpr::Kind::Atom:
    case GoalExpr::Kind::Builtin:
        out.term = rename_term(g.term, m, c);
        break;
    case GoalExpr::Kind::Compare:
        out.lhs = rename_term(g.lhs, m, c);
        out.rhs = rename_term(g.rhs, m, c);
        break;
    default:
        for (auto& ch : out.children) ch = rename_goal(ch, m, c);
    }
    return out;
}

GoalExpr apply_goal(const Substitution& s, const GoalExpr& g) {
    GoalExpr out = g;
    switch (g.kind) {
    case GoalExpr::Kind::Atom:
    case GoalExpr::Kind::Builtin:
        out.term = apply(s, g.term);
        break;
    case GoalExpr::Kind::Compare:
        out.lhs = apply(s, g.lhs);
        out.rhs = apply(s, g.rhs);
        break;
    default:
        for (auto& ch : out.children) ch = apply_goal(s, ch);
    }
    return out;
}

struct Ancestor {
    std::string key;
    int neg_level;
};

struct Shared {
    const KnowledgeStore& store;
    const EngineConfig& cfg;
    VarCounter counter;
    std::map<std::string, NegationRecord> neg_cache;
    std::size_t steps = 0;
    bool incomplete = false;
};

// Builds the probabilistic-support key used for proof deduplication: two
// derivations relying on the same uncertain statements and the same
// uncertain negations describe the same event.
std::string support_key(const std::vector<const Statement*>& used, const std::vector<const NegationRecord*>& negs) {
    std::set<std::string> parts;
    for (const auto* s : used)
        if (s->prob < 1.0) parts.insert("s:" + *s->id);
    for (const auto* n : negs)
        if (n->factor < 1.0) parts.insert("n:" + n->goal_text);
    std::string key;
    for (const auto& p : parts) {
        key += p;
        key += '\x1f';
    }
    return key;
}

class Search {
public:
    Search(Shared& sh, int neg_level, std::vector<Ancestor> ancestors)
        : sh_(sh), neg_level_(neg_level), anc_(std::move(ancestors)) {}

    using Cont = std::function<void()>;

    void run(const std::vector<GoalExpr>& goals, int depth, const Cont& done) { conj(goals, 0, depth, done); }

    const Substitution& subst() const { return subst_; }

    Proof snapshot(const std::vector<std::string>& query_vars) const {
        Proof p;
        for (const auto& v : query_vars) p.bindings.emplace_back(v, apply(subst_, Term::variable(v)));
        std::set<std::string> seen_ids;
        double prob = 1.0;
        for (const auto* s : used_) {
            if (!seen_ids.insert(*s->id).second) continue;
            prob *= s->prob;
            if (s->is_fact()) {
                p.facts_used.insert(*s->id);
                p.sources_used.insert(*s->source);
            } else {
                p.clauses_used.insert(*s->id);
            }
        }
        std::map<std::string, int> neg_index;
        for (const auto* n : negs_) {
            if (neg_index.contains(n->goal_text)) continue;
            neg_index.emplace(n->goal_text, static_cast<int>(p.negations.size()));
            p.negations.push_back(*n);
            prob *= n->factor;
        }
        p.prob = prob;
        p.steps.reserve(steps_.size());
        for (const auto& st : steps_) {
            TraceStep t = st.step;
            t.goal = apply(subst_, t.goal);
            if (st.neg) t.negation = neg_index.at(st.neg->goal_text);
            p.steps.push_back(std::move(t));
        }
        return p;
    }

    std::string support() const { return support_key(used_, negs_); }

private:
    struct PendingStep {
        TraceStep step;
        const NegationRecord* neg = nullptr;
    };

    void tick() {
        if (++sh_.steps > sh_.cfg.step_budget) {
            sh_.incomplete = true;
            throw BudgetStop{};
        }
    }

    void conj(const std::vector<GoalExpr>& gs, std::size_t i, int depth, const Cont& k) {
        if (i == gs.size()) {
            k();
            return;
        }
        goal(gs[i], depth, [&, i, depth] { conj(gs, i + 1, depth, k); });
    }

    void goal(const GoalExpr& g, int depth, const Cont& k) {
        switch (g.kind) {
        case GoalExpr::Kind::Atom:
            call_atom(g.term, depth, k);
            return;
        case GoalExpr::Kind::And:
            conj(g.children, 0, depth, k);
            return;
        case GoalExpr::Kind::Or:
            for (const auto& c : g.children) goal(c, depth, k);
            return;
        case GoalExpr::Kind::Not:
            call_not(g.children[0], depth, k);
            return;
        case GoalExpr::Kind::Compare: {
            tick();
            if (!eval_compare(g.op, g.lhs, g.rhs, subst_)) return;
            TraceStep st;
            st.kind = TraceStep::Kind::Compare;
            st.depth = depth;
            st.goal = Term::compound(std::string(to_string(g.op)), {g.lhs, g.rhs});
            steps_.push_back({st});
            k();
            steps_.pop_back();
            return;
        }
        case GoalExpr::Kind::Builtin: {
            tick();
            eval_builtin(g.term, subst_, [&] {
                TraceStep st;
                st.kind = TraceStep::Kind::Builtin;
                st.depth = depth;
                st.goal = g.term;
                steps_.push_back({st});
                k();
                steps_.pop_back();
            });
            return;
        }
        }
    }

    void call_atom(const Term& call, int depth, const Cont& k) {
        tick();
        const Term g = apply(subst_, call);
        bool skip_clauses = false;
        if (sh_.cfg.loop_check) {
            const std::string key = variant_key(g);
            for (const auto& a : anc_) {
                if (a.key != key) continue;
                if (a.neg_level < neg_level_)
                    throw EngineError(EngineError::Kind::Stratification,
                                      "goal depends on its own negation: " + to_string(g));
                // A variant ancestor is already exploring this goal's clauses;
                // stored facts still answer it directly.
                skip_clauses = true;
            }
        }
        const auto found = sh_.store.lookup(g.name(), g.arity()).to_vector();
        for (const Statement* s : found) {
            if (s->is_fact()) {
                const auto mark = subst_.mark();
                Term head = s->head.term();
                if (!head.is_ground()) {
                    std::unordered_map<std::string, std::string> m;
                    head = rename_term(head, m, sh_.counter);
                }
                if (!unify_in_place(g, head, subst_)) continue;
                push_statement(s, TraceStep::Kind::Fact, depth, g);
                k();
                pop_statement();
                subst_.undo(mark);
                continue;
            }
            if (skip_clauses) continue;
            if (depth >= sh_.cfg.depth_limit) {
                // only an incomplete search if the clause could have applied
                std::unordered_map<std::string, std::string> m;
                Substitution probe = subst_;
                if (unify_in_place(g, rename_term(s->head.term(), m, sh_.counter), probe)) sh_.incomplete = true;
                continue;
            }
            std::unordered_map<std::string, std::string> m;
            Term head = rename_term(s->head.term(), m, sh_.counter);
            const auto mark = subst_.mark();
            if (!unify_in_place(g, head, subst_)) continue;
            GoalExpr body = rename_goal(*s->body, m, sh_.counter);
            push_statement(s, TraceStep::Kind::Clause, depth, g);
            anc_.push_back({variant_key(g), neg_level_});
            goal(body, depth + 1, [&] {
                Ancestor saved = std::move(anc_.back());
                anc_.pop_back();
                k();
                anc_.push_back(std::move(saved));
            });
            anc_.pop_back();
            pop_statement();
            subst_.undo(mark);
        }
    }

    void call_not(const GoalExpr& inner, int depth, const Cont& k) {
        tick();
        GoalExpr g = apply_goal(subst_, inner);
        std::vector<std::string> vars;
        g.collect_vars(vars);
        if (!vars.empty())
            throw EngineError(EngineError::Kind::Instantiation, "negation of non-ground goal: not(" + print_goal(g) + ")");
        const std::string text = print_goal(g);
        auto it = sh_.neg_cache.find(text);
        if (it == sh_.neg_cache.end()) {
            NegationRecord rec;
            rec.goal_text = text;
            rec.goal = g.kind == GoalExpr::Kind::Atom ? g.term : Term::phrase(text);
            Search sub(sh_, neg_level_ + 1, anc_);
            std::set<std::string> seen;
            sub.run({g}, depth, [&] {
                if (rec.proofs.size() >= sh_.cfg.max_proofs) return;
                if (!seen.insert(sub.support()).second) return;
                rec.proofs.push_back(sub.snapshot({}));
            });
            std::vector<double> ps;
            for (const auto& p : rec.proofs) ps.push_back(p.prob);
            rec.goal_prob = noisy_or(ps);
            rec.factor = 1.0 - rec.goal_prob;
            rec.status = rec.proofs.empty() ? Status::Unknown
                         : rec.goal_prob > 0 ? Status::Entailed
                                             : Status::KnownFalse;
            it = sh_.neg_cache.emplace(text, std::move(rec)).first;
        }
        const NegationRecord* rec = &it->second;
        TraceStep st;
        st.kind = TraceStep::Kind::Negation;
        st.depth = depth;
        st.goal = Term::compound("not", {rec->goal});
        st.prob = rec->factor;
        negs_.push_back(rec);
        steps_.push_back({st, rec});
        k();
        steps_.pop_back();
        negs_.pop_back();
    }

    void push_statement(const Statement* s, TraceStep::Kind kind, int depth, const Term& goal) {
        TraceStep st;
        st.kind = kind;
        st.depth = depth;
        st.goal = goal;
        st.statement_id = *s->id;
        st.source = *s->source;
        st.prob = s->prob;
        used_.push_back(s);
        steps_.push_back({st});
    }

    void pop_statement() {
        used_.pop_back();
        steps_.pop_back();
    }

    Shared& sh_;
    int neg_level_;
    std::vector<Ancestor> anc_;
    Substitution subst_;
    std::vector<const Statement*> used_;
    std::vector<const NegationRecord*> negs_;
    std::vector<PendingStep> steps_;
};

bool user_var(const std::string& name) { return !name.empty() && name[0] != '_'; }

}  // namespace

SolveResult solve(const KnowledgeStore& store, const std::vector<GoalExpr>& goals, const EngineConfig& cfg) {
    if (cfg.depth_limit < 1) throw std::invalid_argument("depth_limit must be >= 1");
    SolveResult result;
    for (const auto& g : goals) {
        std::vector<std::string> vs;
        g.collect_vars(vs);
        for (auto& v : vs)
            if (user_var(v) && std::find(result.query_vars.begin(), result.query_vars.end(), v) == result.query_vars.end())
                result.query_vars.push_back(v);
    }

    struct Group {
        Answer answer;
        std::set<std::string> supports;
    };
    std::vector<Group> groups;
    std::unordered_map<std::string, std::size_t> by_binding;

    Shared sh{store, cfg, {}, {}, 0, false};
    Search search(sh, 0, {});
    try {
        search.run(goals, 0, [&] {
            std::vector<Term> vals;
            for (const auto& v : result.query_vars) vals.push_back(apply(search.subst(), Term::variable(v)));
            const std::string key = variant_key(Term::compound("ans", vals.empty() ? std::vector<Term>{Term::nil()} : vals));
            auto [it, inserted] = by_binding.emplace(key, groups.size());
            if (inserted) {
                Group g;
                for (std::size_t i = 0; i < vals.size(); ++i) g.answer.bindings.emplace_back(result.query_vars[i], vals[i]);
                groups.push_back(std::move(g));
            }
            Group& grp = groups[it->second];
            if (!grp.supports.insert(search.support()).second) return;
            if (grp.answer.proofs.size() >= cfg.max_proofs) {
                sh.incomplete = true;
                return;
            }
            grp.answer.proofs.push_back(search.snapshot(result.query_vars));
        });
    } catch (const BudgetStop&) {
    }
    result.steps = sh.steps;
    result.possibly_incomplete = sh.incomplete;

    for (auto& g : groups) {
        Answer& a = g.answer;
        std::vector<double> ps;
        for (const auto& p : a.proofs) ps.push_back(p.prob);
        a.prob = noisy_or(ps);
        a.status = a.prob > 0 ? Status::Entailed : Status::KnownFalse;
        result.answers.push_back(std::move(a));
    }
    std::stable_sort(result.answers.begin(), result.answers.end(),
                     [](const Answer& x, const Answer& y) { return x.prob > y.prob; });
    if (!result.query_vars.empty() && !cfg.keep_false_bindings) {
        const bool any_true = std::any_of(result.answers.begin(), result.answers.end(),
                                          [](const Answer& a) { return a.prob > 0; });
        if (any_true)
            std::erase_if(result.answers, [](const Answer& a) { return a.status == Status::KnownFalse; });
    }
    if (cfg.answer_limit && result.answers.size() > *cfg.answer_limit) result.answers.resize(*cfg.answer_limit);
    if (result.answers.empty()) {
        Answer unknown;
        for (const auto& v : result.query_vars) unknown.bindings.emplace_back(v, Term::variable(v));
        result.answers.push_back(std::move(unknown));
    }
    return result;
}

SolveResult solve(const KnowledgeStore& store, const GoalExpr& goal, const EngineConfig& cfg) {
    return solve(store, std::vector<GoalExpr>{goal}, cfg);
}

double eval_negation(const KnowledgeStore& store, const GoalExpr& g, const EngineConfig& cfg) {
    std::vector<std::string> vars;
    g.collect_vars(vars);
    if (!vars.empty())
        throw EngineError(EngineError::Kind::Instantiation, "negation of non-ground goal: not(" + print_goal(g) + ")");
    return 1.0 - solve(store, g, cfg).answers.front().prob;
}

}  // namespace pkb
