#include "pkb/format.hpp"

#include <json.hpp>

namespace pkb {

namespace {

using ojson = nlohmann::ordered_json;

std::string line(const ojson& j) { return j.dump() + "\n"; }

std::string indent(const std::string& text, const std::string& pad) {
    std::string out;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        out += pad + text.substr(start, end - start) + "\n";
        start = end + 1;
    }
    return out;
}

struct AnswerSets {
    std::set<std::string> facts, clauses, sources;
};

AnswerSets answer_sets(const Answer& a, const KnowledgeStore& store) {
    AnswerSets s;
    for (const auto& p : a.proofs) {
        s.facts.insert(p.facts_used.begin(), p.facts_used.end());
        s.clauses.insert(p.clauses_used.begin(), p.clauses_used.end());
    }
    for (const auto* ids : {&s.facts, &s.clauses})
        for (const auto& id : *ids)
            if (const Statement* st = store.find(id); st && st->source) s.sources.insert(*st->source);
    return s;
}

std::string join(const std::set<std::string>& xs) {
    std::string out;
    for (const auto& x : xs) out += (out.empty() ? "" : ",") + x;
    return out;
}

ojson array(const std::set<std::string>& xs) {
    ojson a = ojson::array();
    for (const auto& x : xs) a.push_back(x);
    return a;
}

// Bindings shown to the user: the variable's own name means "unbound".
std::vector<std::pair<std::string, Term>> shown_bindings(const Answer& a) {
    std::vector<std::pair<std::string, Term>> out;
    for (const auto& [name, value] : a.bindings)
        if (!(value.is_var() && value.name() == name)) out.emplace_back(name, value);
    return out;
}

}  // namespace

GoalTrace goal_trace(const Answer& a, std::size_t goal_index, const KnowledgeStore& store) {
    std::set<std::string> ids, sources;
    std::string time;
    for (const auto& p : a.proofs) {
        std::size_t top = 0;
        bool inside = false;
        for (const auto& st : p.steps) {
            if (st.depth == 0) {
                inside = top++ == goal_index;
            }
            if (!inside || st.statement_id.empty()) continue;
            ids.insert(st.statement_id);
            const Statement* s = store.find(st.statement_id);
            if (!s) continue;
            if (s->source) sources.insert(*s->source);
            if (time.empty() && s->is_fact()) time = s->time_tag;
        }
    }
    return {{ids.begin(), ids.end()}, {sources.begin(), sources.end()}, time.empty() ? std::string(kGeneralTime) : time};
}

std::vector<std::pair<std::string, Term>> trace_bindings(const Answer& a, const std::vector<TraceVars>& vars,
                                                         const KnowledgeStore& store) {
    std::vector<std::pair<std::string, Term>> out;
    if (a.status == Status::Unknown) return out;
    auto symbols = [](const std::vector<std::string>& xs) {
        std::vector<Term> ts;
        for (const auto& x : xs) ts.push_back(Term::symbol(x));
        return Term::make_list(ts);
    };
    for (std::size_t i = 0; i < vars.size(); ++i) {
        const auto& v = vars[i];
        if (v.ids.empty() && v.sources.empty() && v.time.empty()) continue;
        const GoalTrace t = goal_trace(a, i, store);
        if (!v.ids.empty()) out.emplace_back(v.ids, symbols(t.ids));
        if (!v.sources.empty()) out.emplace_back(v.sources, symbols(t.sources));
        if (!v.time.empty()) out.emplace_back(v.time, Term::symbol(t.time));
    }
    return out;
}

std::string render_query(const std::string& query_text, const SolveResult& r, const std::vector<TraceVars>& vars,
                         const KnowledgeStore& store, const QueryPrintOptions& opts) {
    std::string out;
    std::size_t n = r.answers.size();
    if (opts.top) n = std::min(n, *opts.top);
    for (std::size_t i = 0; i < n; ++i) {
        const Answer& a = r.answers[i];
        auto binds = shown_bindings(a);
        for (auto& tb : trace_bindings(a, vars, store)) binds.push_back(std::move(tb));
        const AnswerSets sets = answer_sets(a, store);
        if (opts.format == OutputFormat::Json) {
            ojson j;
            j["query"] = query_text;
            ojson b = ojson::object();
            for (const auto& [name, value] : binds) b[name] = to_string(value);
            j["bindings"] = b;
            j["prob"] = format_prob(a.prob);
            j["status"] = std::string(to_string(a.status));
            j["facts"] = array(sets.facts);
            j["clauses"] = array(sets.clauses);
            j["sources"] = array(sets.sources);
            j["proofs"] = a.proofs.size();
            j["incomplete"] = r.possibly_incomplete;
            if (opts.explain) j["explanation"] = explain(a);
            out += line(j);
            continue;
        }
        std::string head;
        for (const auto& [name, value] : binds) head += name + "=" + to_string(value) + "  ";
        if (a.status == Status::Unknown) {
            out += head + "unknown\n";
        } else {
            out += head + format_prob(a.prob) + "  " + std::string(to_string(a.status)) + "  trace={" +
                   join(sets.facts) + (sets.facts.empty() || sets.clauses.empty() ? "" : ",") + join(sets.clauses) +
                   "} sources={" + join(sets.sources) + "}\n";
        }
        if (opts.explain) out += indent(explain(a), "    ");
    }
    if (opts.format == OutputFormat::Text && n < r.answers.size())
        out += "(" + std::to_string(r.answers.size() - n) + " more answers not shown)\n";
    if (opts.format == OutputFormat::Text && r.possibly_incomplete)
        out += "warning: search cut by the depth limit or step budget; results may be incomplete\n";
    return out;
}

std::string render_beam(const std::string& document, const Beam& beam, OutputFormat fmt) {
    std::string out;
    if (fmt == OutputFormat::Json) {
        for (const auto& in : beam.interpretations) {
            ojson j;
            j["document"] = document;
            j["interpretation"] = in.id;
            j["score"] = format_prob(in.score);
            ojson facts = ojson::array();
            for (const auto& f : in.facts) facts.push_back(to_string(f.head.term()));
            j["facts"] = facts;
            out += line(j);
        }
        return out;
    }
    out += "document " + document + ": " + std::to_string(beam.interpretations.size()) + " interpretation(s)\n";
    for (const auto& in : beam.interpretations) {
        out += "  " + in.id + "  score=" + format_prob(in.score) + "\n";
        for (const auto& f : in.facts) out += "    " + to_string(f.head.term()) + ".\n";
    }
    return out;
}

std::string render_qa(const std::string& document, const QaResult& r, OutputFormat fmt, bool explain_answers) {
    std::string out;
    if (fmt == OutputFormat::Json) {
        auto base = [&] {
            ojson j;
            j["document"] = document;
            j["question"] = r.question;
            j["template"] = r.template_id.empty() ? ojson(nullptr) : ojson(r.template_id);
            j["query"] = r.query.empty() ? ojson(nullptr) : ojson(r.query);
            return j;
        };
        if (r.unknown()) {
            ojson j = base();
            j["status"] = "unknown";
            out += line(j);
        }
        for (const auto& a : r.answers) {
            ojson j = base();
            j["interpretation"] = a.interpretation;
            j["interpretation_score"] = format_prob(a.interpretation_score);
            j["answer"] = a.value ? ojson(to_string(*a.value)) : ojson(nullptr);
            j["prob"] = format_prob(a.prob);
            j["status"] = std::string(to_string(a.status));
            j["sources"] = array(a.sources);
            j["statements"] = array({a.statement_ids.begin(), a.statement_ids.end()});
            if (explain_answers) j["explanation"] = explain(a.detail);
            out += line(j);
        }
        return out;
    }
    out += "Q: " + r.question + "\n";
    if (!r.template_id.empty()) out += "  query (" + r.template_id + "): " + r.query + "\n";
    if (r.unknown()) {
        out += "  unknown\n";
        return out;
    }
    for (const auto& a : r.answers) {
        out += "  " + (a.value ? to_string(*a.value) : std::string("yes")) + "  " + format_prob(a.prob) + "  " +
               std::string(to_string(a.status)) + "  [" + a.interpretation + " score=" +
               format_prob(a.interpretation_score) + "] sources={" + join(a.sources) + "} trace={" +
               join({a.statement_ids.begin(), a.statement_ids.end()}) + "}\n";
        if (explain_answers) out += indent(explain(a.detail), "      ");
    }
    return out;
}

std::string render_ingest(const IngestReport& r, OutputFormat fmt) {
    if (fmt == OutputFormat::Text) return r.to_text();
    ojson j;
    j["rows"] = r.rows;
    j["accepted"] = r.accepted;
    j["discarded"] = r.discarded;
    ojson types = ojson::object();
    std::set<std::string> names;
    for (const auto& [t, m] : r.by_type) names.insert(t);
    for (const auto& [t, n] : r.discarded_by_type) names.insert(t);
    for (const auto& t : names) {
        ojson e;
        for (auto level : {CertaintyLevel::Tentative, CertaintyLevel::Likely, CertaintyLevel::StronglyLikely})
            e[std::string(to_string(level))] = r.percent(t, level);
        auto d = r.discarded_by_type.find(t);
        e["discarded"] = d == r.discarded_by_type.end() ? 0 : d->second;
        types[t] = e;
    }
    j["types"] = types;
    ojson w = ojson::array();
    for (const auto& x : r.warnings) w.push_back({{"line", x.line}, {"message", x.message}});
    j["warnings"] = w;
    return line(j);
}

}  // namespace pkb
