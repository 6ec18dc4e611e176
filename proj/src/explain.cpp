#include <cmath>
#include <cstdio>

#include "pkb/engine.hpp"

namespace pkb {

std::string format_prob(double p) {
    if (p == 0.0 || !std::isfinite(p)) return p == 0.0 ? "0" : format_number(p);
    const int magnitude = static_cast<int>(std::floor(std::log10(std::fabs(p))));
    const int decimals = std::max(0, 11 - magnitude);
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, p);
    std::string s(buf);
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

namespace {

std::string join(const std::set<std::string>& xs) {
    std::string out = "{";
    bool first = true;
    for (const auto& x : xs) {
        if (!first) out += ", ";
        first = false;
        out += x;
    }
    return out + "}";
}

std::string step_text(const TraceStep& st) {
    if (st.kind == TraceStep::Kind::Compare)
        return to_string(st.goal.args()[0]) + " " + st.goal.name() + " " + to_string(st.goal.args()[1]);
    return to_string(st.goal);
}

void render_proof(std::string& out, const Proof& p, const std::string& indent) {
    for (const auto& st : p.steps) {
        out += indent;
        out.append(static_cast<std::size_t>(st.depth) * 2, ' ');
        switch (st.kind) {
        case TraceStep::Kind::Fact:
        case TraceStep::Kind::Clause:
            out += st.kind == TraceStep::Kind::Fact ? "fact " : "clause ";
            out += st.statement_id + " [" + st.source + "] p=" + format_prob(st.prob) + ": " + step_text(st);
            break;
        case TraceStep::Kind::Builtin:
            out += "builtin: " + step_text(st);
            break;
        case TraceStep::Kind::Compare:
            out += "compare: " + step_text(st);
            break;
        case TraceStep::Kind::Negation: {
            const auto& n = p.negations.at(static_cast<std::size_t>(st.negation));
            out += "negation: not(" + n.goal_text + ") = 1 - " + format_prob(n.goal_prob) + " = " +
                   format_prob(n.factor) + " (inner " + std::string(to_string(n.status)) + ")";
            out += '\n';
            for (std::size_t i = 0; i < n.proofs.size(); ++i) {
                out += indent;
                out.append(static_cast<std::size_t>(st.depth) * 2 + 2, ' ');
                out += "inner proof " + std::to_string(i + 1) + " p=" + format_prob(n.proofs[i].prob) + "\n";
                render_proof(out, n.proofs[i], indent + std::string(static_cast<std::size_t>(st.depth) * 2 + 4, ' '));
            }
            continue;
        }
        }
        out += '\n';
    }
}

}  // namespace

std::string explain(const Answer& a) {
    std::string out;
    out += "status: " + std::string(to_string(a.status));
    if (a.status == Status::Unknown) {
        out += " (no proof found; empty trace)\n";
        return out;
    }
    out += a.status == Status::KnownFalse ? " (proved with probability 0)\n" : "\n";
    out += "noisy-or: 1 - ";
    for (const auto& p : a.proofs) out += "(1 - " + format_prob(p.prob) + ")";
    out += " = " + format_prob(a.prob) + "\n";
    for (std::size_t i = 0; i < a.proofs.size(); ++i) {
        const Proof& p = a.proofs[i];
        out += "proof " + std::to_string(i + 1) + ": p=" + format_prob(p.prob) + "\n";
        render_proof(out, p, "  ");
        out += "  facts: " + join(p.facts_used) + "\n";
        out += "  clauses: " + join(p.clauses_used) + "\n";
        out += "  sources: " + join(p.sources_used) + "\n";
    }
    return out;
}

}  // namespace pkb
