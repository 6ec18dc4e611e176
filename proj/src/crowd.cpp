#include <cctype>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "pkb/engine.hpp"
#include "pkb/ontology.hpp"

namespace pkb {

namespace {

struct Cell {
    std::string text;
    bool quoted = false;
};

// RFC 4180 style: quoted cells may contain commas and doubled quotes.
std::optional<std::vector<Cell>> split_csv(const std::string& line) {
    std::vector<Cell> cells;
    Cell cur;
    std::size_t i = 0;
    bool in_quotes = false, after_quote = false;
    for (; i < line.size(); ++i) {
        char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.text += '"';
                    ++i;
                } else {
                    in_quotes = false;
                    after_quote = true;
                }
            } else {
                cur.text += c;
            }
            continue;
        }
        if (c == ',') {
            cells.push_back(std::move(cur));
            cur = Cell{};
            after_quote = false;
        } else if (c == '"' && !after_quote && std::all_of(cur.text.begin(), cur.text.end(), ::isspace)) {
            cur.text.clear();
            cur.quoted = true;
            in_quotes = true;
        } else if (after_quote) {
            if (!std::isspace(static_cast<unsigned char>(c))) return std::nullopt;
        } else {
            cur.text += c;
        }
    }
    if (in_quotes) return std::nullopt;
    cells.push_back(std::move(cur));
    for (auto& cell : cells) {
        if (cell.quoted) continue;
        auto a = cell.text.find_first_not_of(" \t");
        auto b = cell.text.find_last_not_of(" \t");
        cell.text = a == std::string::npos ? "" : cell.text.substr(a, b - a + 1);
    }
    return cells;
}

bool identifier(const std::string& s) {
    if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::optional<Term> cell_term(const Cell& c) {
    if (c.quoted) return Term::phrase(c.text);
    if (identifier(c.text)) return Term::symbol(c.text);
    return std::nullopt;
}

Term ground(const Term& t, const KnowledgeStore& store) {
    if (!t.is_phrase()) return t;
    auto r = solve(store, GoalExpr::atom(Term::compound("has_name", {Term::variable("C"), t})));
    const Answer& best = r.answers.front();
    if (best.status != Status::Entailed || best.bindings.empty()) return t;
    const Term& c = best.bindings.front().second;
    return c.is_symbol() ? c : t;
}

std::string concept_type(const Term& subject, const KnowledgeStore& store, const Ontology* ont) {
    if (!ont || !subject.is_symbol()) return "other";
    const OntologyNode* best = ont->find_concept(subject.name());
    auto r = solve(store, GoalExpr::atom(Term::compound("isa", {subject, Term::variable("T")})));
    for (const auto& a : r.answers) {
        if (a.status != Status::Entailed || a.bindings.empty() || !a.bindings.front().second.is_symbol()) continue;
        const OntologyNode* n = ont->find_concept(a.bindings.front().second.name());
        if (n && (!best || n->level > best->level)) best = n;
    }
    return best ? best->name : "other";
}

}  // namespace

std::vector<CrowdRow> parse_crowd_csv(std::string_view text, std::vector<CrowdWarning>& warnings) {
    std::vector<CrowdRow> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        auto cells = split_csv(line);
        if (!header_seen) {
            header_seen = true;
            if (!cells || cells->size() < 4 || (*cells)[0].text != "concept" || (*cells)[1].text != "predicate" ||
                (*cells)[2].text != "object")
                warnings.push_back({lineno, "header must be concept,predicate,object,r1,..."});
            continue;
        }
        auto warn = [&](const std::string& m) { warnings.push_back({lineno, m + "; row skipped"}); };
        if (!cells) {
            warn("unbalanced quotes");
            continue;
        }
        if (cells->size() < 4) {
            warn("expected concept, predicate, object and at least one rating");
            continue;
        }
        CrowdRow row;
        row.line = lineno;
        auto c = cell_term((*cells)[0]);
        auto o = cell_term((*cells)[2]);
        if (!c || !o || (*cells)[1].quoted || !identifier((*cells)[1].text)) {
            warn("subject and object must be identifiers or quoted phrases, predicate an identifier");
            continue;
        }
        row.subject = *c;
        row.predicate = (*cells)[1].text;
        row.object = *o;
        bool ok = true;
        for (std::size_t i = 3; i < cells->size() && ok; ++i) {
            const std::string& s = (*cells)[i].text;
            if (s.empty() && i + 1 == cells->size()) break;  // trailing comma
            try {
                std::size_t used = 0;
                int v = std::stoi(s, &used);
                if (used != s.size() || v < -2 || v > 2) throw std::invalid_argument(s);
                row.ratings.push_back(v);
            } catch (const std::exception&) {
                warn("rating '" + s + "' is not an integer in [-2,2]");
                ok = false;
            }
        }
        if (!ok) continue;
        if (row.ratings.empty()) {
            warn("no ratings");
            continue;
        }
        if (row.ratings.size() < 3)
            warnings.push_back({lineno, "only " + std::to_string(row.ratings.size()) + " rating(s); at least 3 expected"});
        rows.push_back(std::move(row));
    }
    if (!header_seen) warnings.push_back({0, "empty input"});
    return rows;
}

double IngestReport::percent(const std::string& type, CertaintyLevel level) const {
    auto it = by_type.find(type);
    if (it == by_type.end()) return 0.0;
    std::size_t total = 0;
    for (const auto& [l, n] : it->second) total += n;
    if (total == 0) return 0.0;
    auto jt = it->second.find(level);
    return jt == it->second.end() ? 0.0 : 100.0 * static_cast<double>(jt->second) / static_cast<double>(total);
}

std::string IngestReport::to_text() const {
    std::string out;
    out += "rows: " + std::to_string(rows) + "\n";
    out += "accepted: " + std::to_string(accepted) + "\n";
    out += "discarded: " + std::to_string(discarded) + "\n";
    out += "warnings: " + std::to_string(warnings.size()) + "\n";
    std::set<std::string> types;
    for (const auto& [t, m] : by_type) types.insert(t);
    for (const auto& [t, n] : discarded_by_type) types.insert(t);
    for (const auto& t : types) {
        out += "type " + t + ":";
        for (auto level : {CertaintyLevel::Tentative, CertaintyLevel::Likely, CertaintyLevel::StronglyLikely}) {
            char buf[64];
            std::snprintf(buf, sizeof buf, " %s=%.1f%%", std::string(to_string(level)).c_str(), percent(t, level));
            out += buf;
        }
        auto d = discarded_by_type.find(t);
        out += " discarded=" + std::to_string(d == discarded_by_type.end() ? 0 : d->second) + "\n";
    }
    for (const auto& w : warnings) out += "warning line " + std::to_string(w.line) + ": " + w.message + "\n";
    return out;
}

IngestResult ingest_crowdsource(const std::vector<CrowdRow>& rows, const KnowledgeStore& store,
                                const Ontology* ontology) {
    IngestResult res;
    std::size_t n = 0;
    for (const auto& row : rows) {
        ++res.report.rows;
        const double mean = std::accumulate(row.ratings.begin(), row.ratings.end(), 0.0) /
                            static_cast<double>(row.ratings.size());
        const Term subject = ground(row.subject, store);
        const std::string type = concept_type(subject, store, ontology);
        auto level = score_to_certainty(mean);
        if (!level) {
            ++res.report.discarded;
            ++res.report.discarded_by_type[type];
            continue;
        }
        ++res.report.accepted;
        ++res.report.by_type[type][*level];
        Statement s;
        s.head = Atom(Term::compound(row.predicate, {subject, ground(row.object, store)}));
        s.prob = probability(*level);
        s.id = "crowd_" + std::to_string(++n);
        s.source = "crowd";
        res.facts.push_back(std::move(s));
    }
    return res;
}

}  // namespace pkb
