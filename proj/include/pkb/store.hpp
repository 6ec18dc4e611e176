#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pkb/term.hpp"

namespace pkb {

class Ontology;

/// A predicate applied to arguments. Wraps a callable term (symbol for
/// zero arity, compound otherwise); predicate/arity is the index key.
class Atom {
public:
    Atom() = default;
    explicit Atom(Term t);
    Atom(std::string predicate, std::vector<Term> args);

    const std::string& predicate() const { return term_.name(); }
    std::size_t arity() const { return term_.arity(); }
    const std::vector<Term>& args() const { return term_.args(); }
    const Term& term() const { return term_; }

    bool operator==(const Atom& o) const { return term_ == o.term_; }

private:
    Term term_ = Term::symbol("true");
};

enum class CompareOp { Gt, Ge, Lt, Le, Eq, Ne };

std::string_view to_string(CompareOp op);

/// Body goal tree.
struct GoalExpr {
    enum class Kind { Atom, And, Or, Not, Compare, Builtin };

    Kind kind = Kind::Atom;
    Term term;                      // Atom / Builtin: the call term
    std::vector<GoalExpr> children; // And / Or: >= 2; Not: exactly 1
    CompareOp op = CompareOp::Eq;
    Term lhs, rhs;                  // Compare operands

    static GoalExpr atom(Term t);
    static GoalExpr builtin(Term t);
    static GoalExpr conj(std::vector<GoalExpr> gs);
    static GoalExpr disj(std::vector<GoalExpr> gs);
    static GoalExpr negation(GoalExpr g);
    static GoalExpr compare(CompareOp op, Term l, Term r);

    void collect_vars(std::vector<std::string>& out) const;

    bool operator==(const GoalExpr& o) const;
};

/// Names recognised as deterministic built-ins rather than stored predicates.
bool is_builtin(std::string_view name, std::size_t arity);

/// Line/column of a statement in its source file (1-based; 0 = unknown).
struct SourceLoc {
    std::string file;
    int line = 0;
    int column = 0;
};

inline constexpr std::string_view kGeneralTime = "t_g";

/// A probabilistic fact (no body) or clause.
struct Statement {
    Atom head;
    std::optional<GoalExpr> body;
    double prob = 1.0;
    std::optional<std::string> id;
    std::optional<std::string> source;
    std::string time_tag = std::string(kGeneralTime);
    SourceLoc loc;  // not part of equality

    bool is_fact() const { return !body.has_value(); }

    bool operator==(const Statement& o) const {
        return head == o.head && body == o.body && prob == o.prob && id == o.id && source == o.source &&
               time_tag == o.time_tag;
    }
};

/// Type constraint on the filler of an event role:
/// `role(E, F)` with `isa(E, event_concept)` requires `isa(F, required_type)`.
struct SelRestriction {
    std::string role;
    std::string event_concept;
    std::string required_type;

    bool operator==(const SelRestriction&) const = default;
};

class StoreError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Layer { Base, Session };

/// Statements visible for one predicate/arity, base layer first.
struct LookupResult {
    std::span<const Statement* const> base;
    std::span<const Statement* const> session;

    std::size_t size() const { return base.size() + session.size(); }
    bool empty() const { return size() == 0; }
    std::vector<const Statement*> to_vector() const;
};

/// Indexed statement store with an immutable (after seal()) base layer and a
/// clearable session overlay. Copies share the base layer.
class KnowledgeStore {
public:
    KnowledgeStore();

    /// Index `s`, assigning `f_<n>` / `c_<n>` when no id is given (session
    /// statements get `sf_<n>` / `sc_<n>`). Returns the id.
    std::string add_statement(Statement s, Layer layer = Layer::Base);

    LookupResult lookup(std::string_view predicate, std::size_t arity) const;
    const Statement* find(std::string_view id) const;

    void seal();
    bool sealed() const;
    void clear_session();
    std::size_t session_size() const;
    std::size_t size() const;

    /// All statements, base then session, insertion order.
    std::vector<const Statement*> statements() const;

    void set_default_source(std::string src);
    const std::string& default_source() const;
    std::set<std::string> sources() const;

    void declare_traced(std::string predicate, std::size_t surface_arity);
    bool is_traced(std::string_view predicate, std::size_t surface_arity) const;
    const std::set<std::pair<std::string, std::size_t>>& traced() const;

    void add_restriction(SelRestriction r);
    std::vector<SelRestriction> restrictions() const;
    /// Restrictions declared for `role` (any event concept).
    std::vector<SelRestriction> restrictions_for(std::string_view role) const;

    void set_ontology(std::shared_ptr<const Ontology> ont);
    const Ontology* ontology() const;

private:
    struct LayerData;
    LayerData& writable_base();

    std::shared_ptr<LayerData> base_;
    std::shared_ptr<LayerData> session_;
    std::shared_ptr<const Ontology> ontology_;
};

}  // namespace pkb
