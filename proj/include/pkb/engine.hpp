#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pkb/store.hpp"

namespace pkb {

struct EngineConfig {
    int depth_limit = 12;           // clause expansions along one branch
    std::size_t max_proofs = 64;    // kept per answer binding
    std::optional<std::size_t> answer_limit;
    bool loop_check = true;
    std::size_t step_budget = 2'000'000;  // resolution steps per solve
    // Open queries drop zero-probability bindings when some binding is
    // entailed; set to keep every binding that has a proof.
    bool keep_false_bindings = false;
};

enum class Status { Entailed, KnownFalse, Unknown };
std::string_view to_string(Status s);

class EngineError : public std::runtime_error {
public:
    enum class Kind { Instantiation, Type, Stratification, Budget };
    EngineError(Kind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct Proof;

/// Outcome of one not(g) evaluation inside a proof.
struct NegationRecord {
    Term goal;                 // ground goal text as a term (conjunctions are wrapped)
    std::string goal_text;
    double goal_prob = 0.0;    // noisy-or probability of g
    double factor = 1.0;       // 1 - goal_prob
    Status status = Status::Unknown;
    std::vector<Proof> proofs;
};

/// One step in a derivation, preorder with nesting depth.
struct TraceStep {
    enum class Kind { Fact, Clause, Builtin, Compare, Negation };
    Kind kind = Kind::Fact;
    int depth = 0;
    Term goal;                 // instantiated at proof completion
    std::string statement_id;  // facts and clauses
    std::string source;
    double prob = 1.0;         // statement probability or negation factor
    int negation = -1;         // index into Proof::negations for Negation steps
};

struct Proof {
    std::vector<std::pair<std::string, Term>> bindings;  // query variables, query order
    std::set<std::string> facts_used;
    std::set<std::string> clauses_used;
    std::set<std::string> sources_used;  // positive facts only
    std::vector<NegationRecord> negations;
    std::vector<TraceStep> steps;
    double prob = 1.0;

    /// Sorted statement ids (facts and clauses).
    std::vector<std::string> statement_ids() const;
};

struct Answer {
    std::vector<std::pair<std::string, Term>> bindings;
    double prob = 0.0;
    Status status = Status::Unknown;
    std::vector<Proof> proofs;
};

struct SolveResult {
    std::vector<std::string> query_vars;
    std::vector<Answer> answers;
    bool possibly_incomplete = false;  // depth limit or step budget cut a branch
    std::size_t steps = 0;
};

/// Noisy-or: 1 - prod(1 - p).
double noisy_or(const std::vector<double>& ps);

/// Solve a left-to-right goal sequence sharing bindings.
SolveResult solve(const KnowledgeStore& store, const std::vector<GoalExpr>& goals, const EngineConfig& config = {});
SolveResult solve(const KnowledgeStore& store, const GoalExpr& goal, const EngineConfig& config = {});

/// P(not g) = 1 - P(g); g must be ground.
double eval_negation(const KnowledgeStore& store, const GoalExpr& g, const EngineConfig& config = {});

/// Deterministic built-ins. Calls `k` once per solution with `s` extended;
/// `s` is restored afterwards.
void eval_builtin(const Term& call, Substitution& s, const std::function<void()>& k);
bool eval_compare(CompareOp op, const Term& lhs, const Term& rhs, const Substitution& s);

/// Decimal with 12 significant digits, trailing zeros trimmed, never in
/// exponent form.
std::string format_prob(double p);

/// Human-readable explanation: per proof derivation tree with ids, sources
/// and probabilities, noisy-or arithmetic, and a status line.
std::string explain(const Answer& answer);

/// Exact possible-world probability of a ground goal by enumerating every
/// truth assignment of the probabilistic statements (0 < p < 1). Built-ins
/// are not supported. Throws EngineError(Budget) above `max_statements`.
double brute_force_prob(const KnowledgeStore& store, const GoalExpr& goal, std::size_t max_statements = 20);

}  // namespace pkb
