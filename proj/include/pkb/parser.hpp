#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pkb/store.hpp"

namespace pkb {

class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, int line, int column, std::string file = {});

    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& file() const { return file_; }
    const std::string& message() const { return message_; }

private:
    std::string message_;
    int line_;
    int column_;
    std::string file_;
};

struct TracedDirective {
    std::string predicate;
    std::size_t arity;  // surface arity, including the three trace arguments
    bool operator==(const TracedDirective&) const = default;
};

struct SelectionalDirective {
    SelRestriction restriction;
    bool operator==(const SelectionalDirective&) const = default;
};

struct SourceDefaultDirective {
    std::string source;
    bool operator==(const SourceDefaultDirective&) const = default;
};

using Directive = std::variant<TracedDirective, SelectionalDirective, SourceDefaultDirective>;

struct ProgramItem {
    std::variant<Statement, Directive> value;
    SourceLoc loc;
    bool operator==(const ProgramItem& o) const { return value == o.value; }
};

struct ProgramText {
    std::vector<ProgramItem> items;

    std::vector<Statement> statements() const;
    bool operator==(const ProgramText&) const = default;
};

/// Parse a `.pkb` program. Traced-form statements (see TracedDirective) are
/// normalised as they are read: the leading `[ids], [sources], time`
/// arguments move into statement metadata.
ProgramText parse_program(std::string_view text, std::string_view file = {});

/// Parse a single statement terminated by `.`.
Statement parse_statement(std::string_view text);

/// Parse a query `g1, g2, ... ?` (or `.`). Each element is one goal of a
/// left-to-right conjunction sharing bindings. Predicates listed in `traced`
/// are stripped of their trace arguments; the stripped variable names are
/// reported through `trace_vars` when non-null.
struct TraceVars {
    std::string ids, sources, time;  // variable names, empty if not variables
};
std::vector<GoalExpr> parse_query(std::string_view text);
std::vector<GoalExpr> parse_query(std::string_view text, const KnowledgeStore& store,
                                  std::vector<TraceVars>* trace_vars = nullptr);

/// Parse a bare term (used by config files and tests).
Term parse_term(std::string_view text);

std::string print_goal(const GoalExpr& g);
/// Canonical statement text; parse_statement(print_statement(s)) == s.
std::string print_statement(const Statement& s);
std::string print_directive(const Directive& d);
std::string print_program(const ProgramText& p);

/// Parse `text` and add every statement to `store` in `layer`; directives
/// always update the base layer. Returns the ids of the added statements.
std::vector<std::string> load_program(KnowledgeStore& store, std::string_view text, std::string_view file = {},
                                      Layer layer = Layer::Base);
std::vector<std::string> load_file(KnowledgeStore& store, const std::string& path, Layer layer = Layer::Base);

}  // namespace pkb
