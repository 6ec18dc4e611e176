#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pkb/engine.hpp"
#include "pkb/ontology.hpp"
#include "pkb/parser.hpp"
#include "pkb/semparse.hpp"

namespace pkb {

/// Text for people; Json is one JSON object per line with a fixed key order,
/// so identical inputs give byte-identical output.
enum class OutputFormat { Text, Json };

/// Statements behind one top-level goal of an answer, merged over proofs.
struct GoalTrace {
    std::vector<std::string> ids;      // sorted
    std::vector<std::string> sources;  // sorted, facts and clauses
    std::string time;                  // time tag of the first fact used
};

GoalTrace goal_trace(const Answer& a, std::size_t goal_index, const KnowledgeStore& store);

/// Bindings for trace variables of traced predicates (ids and sources as
/// sorted lists, time as a symbol).
std::vector<std::pair<std::string, Term>> trace_bindings(const Answer& a, const std::vector<TraceVars>& vars,
                                                         const KnowledgeStore& store);

struct QueryPrintOptions {
    OutputFormat format = OutputFormat::Text;
    bool explain = false;
    std::optional<std::size_t> top;
};

std::string render_query(const std::string& query_text, const SolveResult& r, const std::vector<TraceVars>& vars,
                         const KnowledgeStore& store, const QueryPrintOptions& opts);

std::string render_beam(const std::string& document, const Beam& beam, OutputFormat fmt);

std::string render_qa(const std::string& document, const QaResult& r, OutputFormat fmt, bool explain);

std::string render_ingest(const IngestReport& r, OutputFormat fmt);

}  // namespace pkb
