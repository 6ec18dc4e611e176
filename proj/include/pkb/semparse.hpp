#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pkb/engine.hpp"
#include "pkb/store.hpp"

namespace pkb {

// ---- dependency trees -------------------------------------------------

struct DepToken {
    int index = 0;
    std::string text;
    std::string lemma;
    std::string pos;
    int head = -1;  // -1 for the root
    std::string dep;
};

using Sentence = std::vector<DepToken>;

struct Document {
    std::string name;
    std::vector<Sentence> sentences;
};

class CorpusError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exactly one root, contiguous 0-based indices, heads in range, no cycles.
void validate_sentence(const Sentence& s);

/// JSON document: either an array of sentences or {"sentences": [...]}; a
/// sentence is an array of token objects {index,text,lemma,pos,head,dep}.
Document parse_document(std::string_view json_text, std::string name = {});
Document load_document(const std::string& path);

// ---- mapping rules ----------------------------------------------------

struct EdgePattern {
    std::string dep;   // dependency label
    std::string head;  // slot name
    std::string dep_slot;  // slot name or "_" (anonymous)
    bool negated = false;  // !dep(H,_): no such edge may exist
};

struct Guard {
    enum class Field { Lemma, Pos, Text };
    Field field = Field::Lemma;
    std::string slot;
    std::string value;
    bool equal = true;
};

struct Production {
    double confidence = 1.0;
    std::vector<Term> atoms;  // arguments are slot variables
};

struct MappingRule {
    std::string id;
    std::vector<EdgePattern> edges;
    std::vector<Guard> guards;
    std::vector<Production> productions;
};

class RuleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<MappingRule> parse_rules(std::string_view text, std::string_view file = {});
std::vector<MappingRule> load_rules(const std::string& path);

/// Every slot assignment (slot -> token index) satisfying the rule's edges
/// and guards, in lexicographic order of the assigned indices.
std::vector<std::map<std::string, int>> match_rule(const MappingRule& rule, const Sentence& s);

// ---- interpretations and beam -----------------------------------------

struct Interpretation {
    std::string id;  // also the source name of its facts
    double score = 1.0;
    std::vector<Statement> facts;
    std::map<std::string, std::vector<std::string>> registry;  // concept -> instances, oldest first
    std::map<int, Term> sentence_tokens;  // token -> argument term, current sentence only
};

struct ParseConfig {
    std::size_t k = 3;
    bool strict = true;
    double lambda = 0.1;     // lenient-mode penalty factor
    std::size_t wsd_limit = 3;
    EngineConfig engine;
};

/// Concepts c with has_name(c, text) provable, best first.
std::vector<std::pair<std::string, double>> ground_phrase(std::string_view text, const KnowledgeStore& store,
                                                          const EngineConfig& cfg = {});

enum class SelVerdict { Keep, Discard, Penalize };

/// `store` must already contain the interpretation's facts (session layer).
SelVerdict check_selectional(const Term& fact, const KnowledgeStore& store, const ParseConfig& cfg);

/// Determiner rule: a/an/another create a fresh `<concept>_ins<n>` (with an
/// isa fact); anything else reuses the latest instance, creating one if none.
std::string instance_for(const std::string& concept_name, std::string_view determiner, Interpretation& interp,
                         bool force_new = false);

struct RuleApplication {
    std::string rule_id;
    std::size_t sentence = 0;
    std::size_t successors = 0;  // interpretations produced before pruning
    std::size_t discarded = 0;   // candidate readings rejected by restrictions
};

struct Beam {
    std::vector<Interpretation> interpretations;
    std::vector<RuleApplication> log;
};

/// Parse one passage. The beam starts with a single empty interpretation
/// and is pruned to the top k (stable by interpretation id) after every rule
/// application. Nothing carries over between calls.
Beam parse_passage(const Document& doc, const std::vector<MappingRule>& rules, const KnowledgeStore& store,
                   const ParseConfig& cfg = {});

/// Copy of `store` with the interpretation's facts (plus `extra`) as the
/// session layer.
KnowledgeStore with_interpretation(const KnowledgeStore& store, const Interpretation& interp,
                                   const std::vector<Statement>& extra = {});

// ---- question answering -----------------------------------------------

struct QuestionTemplate {
    std::string id;
    std::vector<std::string> pattern;  // words, `$SLOT`, or `[word]` (optional)
    std::vector<std::string> assumptions;  // atom texts with $SLOT placeholders
    std::string query;                     // query text with $SLOT placeholders
    std::string answer_var;
};

std::vector<QuestionTemplate> parse_templates(std::string_view text, std::string_view file = {});
std::vector<QuestionTemplate> load_templates(const std::string& path);

struct QaAnswer {
    std::string interpretation;
    double interpretation_score = 0.0;
    std::optional<Term> value;  // binding of the answer variable
    double prob = 0.0;
    Status status = Status::Unknown;
    std::set<std::string> sources;
    std::vector<std::string> statement_ids;
    Answer detail;
};

struct QaResult {
    std::string question;
    std::string template_id;  // empty when no template matched
    std::string query;
    std::vector<QaAnswer> answers;  // entailed or known-false answers only
    bool unknown() const { return answers.empty(); }
};

QaResult answer_question(std::string_view question, const std::vector<QuestionTemplate>& templates,
                         const Beam& beam, const KnowledgeStore& store, const ParseConfig& cfg = {});

}  // namespace pkb
