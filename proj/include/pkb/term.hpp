#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pkb {

enum class TermKind : std::uint8_t { Variable, Symbol, Phrase, Number, Compound, List };

class Term;

namespace detail {
struct TermNode;
}

/// Immutable logic term. Copies share structure.
///
/// Lists are cons cells (`List` kind, two args: head and tail) terminated by
/// the symbol `[]`; use make_list() / list_elements() to work with them as
/// sequences.
class Term {
public:
    Term();  // the nil symbol `[]`

    static Term variable(std::string name);
    static Term symbol(std::string name);
    static Term phrase(std::string text);
    static Term number(double value);
    static Term compound(std::string functor, std::vector<Term> args);
    static Term cons(Term head, Term tail);
    static Term nil();
    static Term make_list(std::span<const Term> elements, std::optional<Term> tail = std::nullopt);

    TermKind kind() const;
    bool is_var() const { return kind() == TermKind::Variable; }
    bool is_symbol() const { return kind() == TermKind::Symbol; }
    bool is_phrase() const { return kind() == TermKind::Phrase; }
    bool is_number() const { return kind() == TermKind::Number; }
    bool is_compound() const { return kind() == TermKind::Compound; }
    bool is_cons() const { return kind() == TermKind::List; }
    bool is_nil() const;
    /// Symbol or compound: something that can stand as an atom.
    bool is_callable() const { return is_symbol() || is_compound(); }

    /// Variable/symbol name, phrase text, or compound functor.
    const std::string& name() const;
    double value() const;
    const std::vector<Term>& args() const;
    std::size_t arity() const { return args().size(); }

    bool is_ground() const;
    void collect_vars(std::vector<std::string>& out) const;

    bool operator==(const Term& other) const;
    bool operator!=(const Term& other) const { return !(*this == other); }

    const void* identity() const { return node_.get(); }

private:
    explicit Term(std::shared_ptr<const detail::TermNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const detail::TermNode> node_;
};

/// Elements of a list term plus its tail (nil for a proper list).
/// Returns nullopt when `t` is not a list at all.
struct ListView {
    std::vector<Term> elements;
    Term tail;
    bool proper() const { return tail.is_nil(); }
};
std::optional<ListView> list_elements(const Term& t);

/// Total order: variables < numbers < symbols < phrases < compounds/lists.
/// Within a kind: numeric value, lexicographic text, then arity/name/args.
int compare_terms(const Term& a, const Term& b);

/// Substitution with an undo trail. Bindings are never rebound; walk()
/// follows chains, so the map stays idempotent as long as unify() is used.
class Substitution {
public:
    std::size_t mark() const { return trail_.size(); }
    void undo(std::size_t mark);

    void bind(const std::string& var, Term value);
    const Term* lookup(const std::string& var) const;
    bool empty() const { return map_.empty(); }
    std::size_t size() const { return map_.size(); }

    /// Follow variable chains until an unbound variable or non-variable.
    Term walk(const Term& t) const;

    const std::unordered_map<std::string, Term>& bindings() const { return map_; }

private:
    std::unordered_map<std::string, Term> map_;
    std::vector<std::string> trail_;
};

/// Most general unifier extending `bindings` (occurs-check on), or nullopt.
std::optional<Substitution> unify(const Term& a, const Term& b, const Substitution& bindings);

/// In-place variant used by the engine; on failure the substitution is
/// restored to its state at entry.
bool unify_in_place(const Term& a, const Term& b, Substitution& s);

/// Replace bound variables transitively.
Term apply(const Substitution& s, const Term& t);

/// Fresh-variable supply for renaming clauses apart.
class VarCounter {
public:
    std::uint64_t next() { return ++n_; }
    std::uint64_t current() const { return n_; }

private:
    std::uint64_t n_ = 0;
};

/// Rename every variable in `t` to a globally fresh name. `mapping` is shared
/// across calls so that head and body of one statement are renamed together.
Term rename_term(const Term& t, std::unordered_map<std::string, std::string>& mapping,
                 VarCounter& counter);

/// Canonical surface text: `f(a,"b c",[1,2|T])`. Parseable back by the
/// lang parser for any term built from parseable names.
std::string to_string(const Term& t);

/// Shortest decimal text that round-trips the double, never in exponent form.
std::string format_number(double v);

/// Variables replaced by their first-occurrence ordinal; two terms are
/// variants of each other iff their keys are equal.
std::string variant_key(const Term& t);

}  // namespace pkb
