#pragma once

#include <set>
#include <string>

#include "pkb/engine.hpp"
#include "pkb/parser.hpp"

namespace testutil {

inline std::string data(const std::string& rel) { return std::string(PKB_DATA_DIR) + "/" + rel; }

inline pkb::KnowledgeStore kb_from(const std::string& text) {
    pkb::KnowledgeStore s;
    pkb::load_program(s, text);
    return s;
}

inline pkb::KnowledgeStore kb_file(const std::string& rel, const std::string& scenario = {}) {
    pkb::KnowledgeStore s;
    pkb::load_file(s, data(rel));
    s.seal();
    if (!scenario.empty()) pkb::load_file(s, data(scenario), pkb::Layer::Session);
    return s;
}

inline pkb::SolveResult ask(const pkb::KnowledgeStore& s, const std::string& q, pkb::EngineConfig cfg = {}) {
    return pkb::solve(s, pkb::parse_query(q, s), cfg);
}

/// Answer whose first binding prints as `value`; nullptr if none.
inline const pkb::Answer* find_answer(const pkb::SolveResult& r, const std::string& value) {
    for (const auto& a : r.answers)
        if (!a.bindings.empty() && pkb::to_string(a.bindings.front().second) == value) return &a;
    return nullptr;
}

inline std::set<std::string> trace_ids(const pkb::Answer& a) {
    std::set<std::string> ids;
    for (const auto& p : a.proofs)
        for (const auto& id : p.statement_ids()) ids.insert(id);
    return ids;
}

}  // namespace testutil
