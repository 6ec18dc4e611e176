// Template-based question answering over a beam of interpretations.
#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

#include "pkb/parser.hpp"
#include "pkb/semparse.hpp"

namespace pkb {

namespace {

std::string trim(std::string_view s) {
    auto a = s.find_first_not_of(" \t\r");
    if (a == std::string_view::npos) return {};
    auto b = s.find_last_not_of(" \t\r");
    return std::string(s.substr(a, b - a + 1));
}

std::vector<std::string> words(std::string_view text) {
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    std::string w;
    while (in >> w) {
        std::string clean;
        for (char c : w) {
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '\'')
                clean += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
        if (!clean.empty()) out.push_back(clean);
    }
    return out;
}

bool is_slot(const std::string& p) { return p.size() > 1 && p[0] == '$'; }
bool is_optional(const std::string& p) { return p.size() > 2 && p.front() == '[' && p.back() == ']'; }

bool match_pattern(const std::vector<std::string>& pat, const std::vector<std::string>& ws, std::size_t i,
                   std::size_t j, std::map<std::string, std::string>& slots) {
    if (i == pat.size()) return j == ws.size();
    const std::string& p = pat[i];
    if (is_optional(p)) {
        const std::string w = p.substr(1, p.size() - 2);
        if (j < ws.size() && ws[j] == w && match_pattern(pat, ws, i + 1, j + 1, slots)) return true;
        return match_pattern(pat, ws, i + 1, j, slots);
    }
    if (j == ws.size()) return false;
    if (is_slot(p)) {
        slots[p] = ws[j];
        if (match_pattern(pat, ws, i + 1, j + 1, slots)) return true;
        slots.erase(p);
        return false;
    }
    return p == ws[j] && match_pattern(pat, ws, i + 1, j + 1, slots);
}

bool identifier(const std::string& s) {
    if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::string substitute(std::string text, const std::map<std::string, std::string>& values) {
    // longest slot names first so $AB is not clobbered by $A
    std::vector<std::pair<std::string, std::string>> v(values.begin(), values.end());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
    for (const auto& [slot, value] : v) {
        for (auto p = text.find(slot); p != std::string::npos; p = text.find(slot, p + value.size()))
            text.replace(p, slot.size(), value);
    }
    return text;
}

}  // namespace

std::vector<QuestionTemplate> parse_templates(std::string_view text, std::string_view file) {
    std::vector<QuestionTemplate> out;
    std::optional<QuestionTemplate> cur;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    const std::string prefix = file.empty() ? std::string("line ") : std::string(file) + ":";
    auto fail = [&](const std::string& m) { return RuleError(prefix + std::to_string(lineno) + ": " + m); };
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.rfind("template ", 0) == 0) {
            if (cur) throw fail("missing 'end' before new template");
            cur = QuestionTemplate{};
            cur->id = trim(line.substr(9));
            if (cur->id.empty()) throw fail("template needs an id");
            continue;
        }
        if (!cur) throw fail("expected 'template <id>'");
        if (line == "end") {
            if (cur->pattern.empty()) throw fail("template " + cur->id + " has no pattern");
            if (cur->query.empty()) throw fail("template " + cur->id + " has no query");
            if (cur->answer_var.empty()) throw fail("template " + cur->id + " has no answer variable");
            for (const auto& p : cur->pattern)
                if (is_slot(p) && cur->query.find(p) == std::string::npos) {
                    bool used = false;
                    for (const auto& a : cur->assumptions) used = used || a.find(p) != std::string::npos;
                    if (!used) throw fail("slot " + p + " is never used");
                }
            out.push_back(std::move(*cur));
            cur.reset();
            continue;
        }
        auto field = [&](std::string_view key) -> std::optional<std::string> {
            if (line.rfind(key, 0) != 0) return std::nullopt;
            return trim(std::string_view(line).substr(key.size()));
        };
        if (auto v = field("pattern:")) {
            for (const auto& w : [&] {
                     std::vector<std::string> ws;
                     std::istringstream ss(*v);
                     std::string w;
                     while (ss >> w) ws.push_back(w);
                     return ws;
                 }()) {
                if (is_slot(w) || is_optional(w)) {
                    cur->pattern.push_back(w);
                } else {
                    auto ws = words(w);
                    cur->pattern.insert(cur->pattern.end(), ws.begin(), ws.end());
                }
            }
        } else if (auto v = field("assume:")) {
            cur->assumptions.push_back(*v);
        } else if (auto v = field("query:")) {
            cur->query = *v;
        } else if (auto v = field("answer:")) {
            cur->answer_var = *v;
        } else {
            throw fail("unrecognised line '" + line + "'");
        }
    }
    if (cur) throw fail("template " + cur->id + " is missing 'end'");
    return out;
}

std::vector<QuestionTemplate> load_templates(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RuleError("cannot open templates " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_templates(ss.str(), path);
}

QaResult answer_question(std::string_view question, const std::vector<QuestionTemplate>& templates,
                         const Beam& beam, const KnowledgeStore& store, const ParseConfig& cfg) {
    QaResult res;
    res.question = std::string(question);
    const auto ws = words(question);
    const QuestionTemplate* tpl = nullptr;
    std::map<std::string, std::string> slots;
    for (const auto& t : templates) {
        slots.clear();
        if (match_pattern(t.pattern, ws, 0, 0, slots)) {
            tpl = &t;
            break;
        }
    }
    if (!tpl) return res;
    res.template_id = tpl->id;

    // slot words name concepts: best has_name grounding, else the word itself
    std::map<std::string, std::string> values;
    for (const auto& [slot, word] : slots) {
        auto g = ground_phrase(word, store, cfg.engine);
        if (!g.empty()) {
            values[slot] = g.front().first;
        } else if (identifier(word)) {
            values[slot] = word;
        } else {
            values[slot] = to_string(Term::phrase(word));
        }
    }
    res.query = substitute(tpl->query, values);
    std::string qtext = trim(res.query);
    if (!qtext.empty() && qtext.back() != '?' && qtext.back() != '.') qtext += '?';
    const auto goals = parse_query(qtext, store);

    std::vector<Statement> assumed;
    for (const auto& a : tpl->assumptions) {
        Statement s;
        s.head = Atom(parse_term(substitute(a, values)));
        s.id = "assume_" + std::to_string(assumed.size() + 1);
        s.source = "question";
        assumed.push_back(std::move(s));
    }

    for (const auto& in : beam.interpretations) {
        const KnowledgeStore view = with_interpretation(store, in, assumed);
        const auto r = solve(view, goals, cfg.engine);
        for (const auto& a : r.answers) {
            if (a.status == Status::Unknown) continue;
            QaAnswer qa;
            qa.interpretation = in.id;
            qa.interpretation_score = in.score;
            for (const auto& [name, value] : a.bindings)
                if (name == tpl->answer_var) qa.value = value;
            qa.prob = a.prob;
            qa.status = a.status;
            std::set<std::string> ids;
            for (const auto& p : a.proofs)
                for (const auto& id : p.statement_ids()) ids.insert(id);
            qa.statement_ids.assign(ids.begin(), ids.end());
            for (const auto& id : ids)
                if (const Statement* s = view.find(id); s && s->source) qa.sources.insert(*s->source);
            qa.detail = a;
            res.answers.push_back(std::move(qa));
        }
    }
    return res;
}

}  // namespace pkb
