#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pkb/store.hpp"

namespace pkb {

struct DeclaredPredicate {
    std::string name;
    std::size_t arity = 2;
    std::string description;
    bool inheritable = true;

    bool operator==(const DeclaredPredicate&) const = default;
};

struct OntologyNode {
    std::string name;
    int level = 0;
    std::vector<std::string> parents;
    std::vector<DeclaredPredicate> predicates;
};

class OntologyError : public std::runtime_error {
public:
    OntologyError(const std::string& msg, int line = 0) : std::runtime_error(msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Concept-group DAG. Node names are case-sensitive in the file; lookups
/// through find_concept() ignore case so KB symbols (`vehicle`) resolve to
/// nodes (`Vehicle`).
class Ontology {
public:
    /// Parse the `.ont` text format and validate the graph.
    static Ontology parse(std::string_view text, std::string_view file = {});
    static Ontology load(const std::string& path);

    /// Build from nodes directly; validates like parse().
    static Ontology from_nodes(std::vector<OntologyNode> nodes);

    const std::vector<OntologyNode>& nodes() const { return nodes_; }
    const OntologyNode* find(std::string_view name) const;
    const OntologyNode* find_concept(std::string_view name) const;
    const OntologyNode& root() const;

    /// Proper ancestors, nearest levels last; deterministic.
    std::vector<std::string> ancestors(std::string_view name) const;
    bool is_ancestor(std::string_view ancestor, std::string_view node) const;

    /// Declared predicates of the node and all its ancestors, ordered by the
    /// level of the declaring node, then name. Throws on unknown node.
    std::vector<DeclaredPredicate> effective_predicates(std::string_view name) const;

    /// Binary predicates flagged inheritable anywhere in the graph, sorted.
    std::vector<std::string> inheritable_predicates() const;

    /// Canonical `.ont` text.
    std::string to_text() const;

private:
    void validate() const;
    std::vector<OntologyNode> nodes_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

/// `isa(X,Z):-isa(X,Y),isa(Y,Z).` once, then for each predicate p (other
/// than isa) `p(X,Y):-isa(X,Z),p(Z,Y),not(not_p(X,Y)).`
std::vector<Statement> generate_inheritance_clauses(const std::vector<std::string>& predicates);

enum class CertaintyLevel { Tentative, Likely, StronglyLikely, Inherent };
std::string_view to_string(CertaintyLevel c);
double probability(CertaintyLevel c);

/// Mean crowd rating in [-2,2] to a certainty level; nullopt means discard.
/// Upper bounds are closed: 0.7 is tentative, 1.4 is likely.
std::optional<CertaintyLevel> score_to_certainty(double mean);

// ---- crowdsourced ingestion -------------------------------------------

struct CrowdRow {
    Term subject;    // symbol or phrase
    std::string predicate;
    Term object;     // symbol or phrase
    std::vector<int> ratings;
    int line = 0;
};

struct CrowdWarning {
    int line = 0;
    std::string message;
};

/// Parse CSV with header `concept,predicate,object,r1,r2,...`. Quoted
/// cells are phrases; malformed rows are skipped with a warning.
std::vector<CrowdRow> parse_crowd_csv(std::string_view text, std::vector<CrowdWarning>& warnings);

struct IngestReport {
    std::size_t rows = 0;
    std::size_t accepted = 0;
    std::size_t discarded = 0;
    std::vector<CrowdWarning> warnings;
    // concept type -> level -> count (accepted facts only)
    std::map<std::string, std::map<CertaintyLevel, std::size_t>> by_type;
    std::map<std::string, std::size_t> discarded_by_type;

    /// Percentage of a type's accepted facts at `level`.
    double percent(const std::string& type, CertaintyLevel level) const;
    std::string to_text() const;
};

struct IngestResult {
    std::vector<Statement> facts;
    IngestReport report;
};

/// Mean of ratings -> certainty -> fact with source "crowd". Phrases are
/// grounded through has_name (best-probability concept) when `store` knows
/// them. Concept types come from the deepest ontology node the subject isa.
IngestResult ingest_crowdsource(const std::vector<CrowdRow>& rows, const KnowledgeStore& store,
                                const Ontology* ontology);

}  // namespace pkb
