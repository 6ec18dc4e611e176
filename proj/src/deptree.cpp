// Dependency-tree corpus loading and mapping-rule matching.
#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "pkb/parser.hpp"
#include "pkb/semparse.hpp"

namespace pkb {

namespace {

using json = nlohmann::json;

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(std::string_view s) {
    auto a = s.find_first_not_of(" \t\r");
    if (a == std::string_view::npos) return {};
    auto b = s.find_last_not_of(" \t\r");
    return std::string(s.substr(a, b - a + 1));
}

template <class Error>
std::string read_file(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(std::string("cannot open ") + what + " " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Sentence parse_sentence(const json& arr, std::size_t which) {
    const std::string where = "sentence " + std::to_string(which + 1);
    if (!arr.is_array()) throw CorpusError(where + ": expected an array of tokens");
    Sentence s;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& t = arr[i];
        const std::string tw = where + ", token " + std::to_string(i);
        if (!t.is_object()) throw CorpusError(tw + ": expected an object");
        DepToken tok;
        try {
            tok.index = t.value("index", static_cast<int>(i));
            tok.text = t.at("text").get<std::string>();
            tok.lemma = t.contains("lemma") ? t["lemma"].get<std::string>() : lower(tok.text);
            tok.pos = t.value("pos", std::string("X"));
            tok.head = t.at("head").get<int>();
            tok.dep = t.at("dep").get<std::string>();
        } catch (const json::exception& e) {
            throw CorpusError(tw + ": " + e.what());
        }
        s.push_back(std::move(tok));
    }
    try {
        validate_sentence(s);
    } catch (const CorpusError& e) {
        throw CorpusError(where + ": " + e.what());
    }
    return s;
}

// Split on commas outside parentheses and quotes.
std::vector<std::string> split_top(std::string_view text) {
    std::vector<std::string> out;
    int depth = 0;
    char quote = 0;
    std::string cur;
    for (char c : text) {
        if (quote) {
            if (c == quote) quote = 0;
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '(' || c == '[') {
            ++depth;
        } else if (c == ')' || c == ']') {
            --depth;
        } else if (c == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
            continue;
        }
        cur += c;
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

bool anonymous(const Term& t) { return t.is_var() && !t.name().empty() && t.name()[0] == '_'; }

}  // namespace

void validate_sentence(const Sentence& s) {
    if (s.empty()) throw CorpusError("empty sentence");
    const int n = static_cast<int>(s.size());
    int roots = 0;
    for (int i = 0; i < n; ++i) {
        const auto& t = s[static_cast<std::size_t>(i)];
        if (t.index != i) throw CorpusError("token indices must be 0.." + std::to_string(n - 1) + " in order");
        if (t.head == -1) {
            ++roots;
        } else if (t.head < 0 || t.head >= n || t.head == i) {
            throw CorpusError("token " + std::to_string(i) + " has invalid head " + std::to_string(t.head));
        }
    }
    if (roots != 1) throw CorpusError("expected exactly one root, found " + std::to_string(roots));
    for (int i = 0; i < n; ++i) {
        int cur = i;
        for (int steps = 0; cur != -1; ++steps) {
            if (steps > n) throw CorpusError("head cycle through token " + std::to_string(i));
            cur = s[static_cast<std::size_t>(cur)].head;
        }
    }
}

Document parse_document(std::string_view json_text, std::string name) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw CorpusError(std::string("invalid JSON: ") + e.what());
    }
    if (j.is_object()) {
        if (!j.contains("sentences")) throw CorpusError("object documents need a \"sentences\" array");
        if (name.empty() && j.contains("name") && j["name"].is_string()) name = j["name"].get<std::string>();
        j = j["sentences"];
    }
    if (!j.is_array()) throw CorpusError("expected an array of sentences");
    Document d;
    d.name = std::move(name);
    for (std::size_t i = 0; i < j.size(); ++i) d.sentences.push_back(parse_sentence(j[i], i));
    return d;
}

Document load_document(const std::string& path) {
    std::string stem = path;
    if (auto p = stem.find_last_of('/'); p != std::string::npos) stem = stem.substr(p + 1);
    if (auto p = stem.rfind('.'); p != std::string::npos) stem = stem.substr(0, p);
    try {
        return parse_document(read_file<CorpusError>(path, "corpus"), stem);
    } catch (const CorpusError& e) {
        throw CorpusError(path + ": " + e.what());
    }
}

// ---- rules ----------------------------------------------------------------

std::vector<MappingRule> parse_rules(std::string_view text, std::string_view file) {
    std::vector<MappingRule> rules;
    std::optional<MappingRule> cur;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    const std::string prefix = file.empty() ? std::string("line ") : std::string(file) + ":";
    auto fail = [&](const std::string& m) -> RuleError { return RuleError(prefix + std::to_string(lineno) + ": " + m); };
    static const std::regex guard_re(R"(^(lemma|pos|text)\(\s*([A-Z][A-Za-z0-9_]*)\s*\)\s*(!=|=)\s*(\S+)$)");
    static const std::regex produce_re(R"(^produce\s+([0-9]*\.?[0-9]+)\s*:\s*(.+)$)");

    while (std::getline(in, raw)) {
        ++lineno;
        if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.rfind("rule ", 0) == 0) {
            if (cur) throw fail("missing 'end' before new rule");
            cur = MappingRule{};
            cur->id = trim(line.substr(5));
            if (cur->id.empty()) throw fail("rule needs an id");
            for (const auto& r : rules)
                if (r.id == cur->id) throw fail("duplicate rule id " + cur->id);
            continue;
        }
        if (!cur) throw fail("expected 'rule <id>'");
        if (line == "end") {
            if (cur->edges.empty()) throw fail("rule " + cur->id + " has no match line");
            if (cur->productions.empty()) throw fail("rule " + cur->id + " has no productions");
            // every slot used outside positive edges must be bound by one
            std::set<std::string> bound;
            for (const auto& e : cur->edges) {
                if (e.negated) continue;
                bound.insert(e.head);
                if (e.dep_slot != "_") bound.insert(e.dep_slot);
            }
            for (const auto& e : cur->edges)
                if (e.negated && !bound.contains(e.head)) throw fail("negated edge head " + e.head + " is unbound");
            for (const auto& g : cur->guards)
                if (!bound.contains(g.slot)) throw fail("guard slot " + g.slot + " is unbound");
            for (const auto& p : cur->productions)
                for (const auto& a : p.atoms)
                    for (const auto& arg : a.args())
                        if (!arg.is_var() || anonymous(arg) || !bound.contains(arg.name()))
                            throw fail("production argument " + to_string(arg) + " is not a bound slot");
            rules.push_back(std::move(*cur));
            cur.reset();
            continue;
        }
        if (line.rfind("match:", 0) == 0) {
            for (auto part : split_top(line.substr(6))) {
                EdgePattern e;
                if (!part.empty() && part[0] == '!') {
                    e.negated = true;
                    part = trim(part.substr(1));
                }
                Term t;
                try {
                    t = parse_term(part);
                } catch (const std::exception& ex) {
                    throw fail("bad edge pattern '" + part + "': " + ex.what());
                }
                if (!t.is_compound() || t.arity() != 2 || !t.args()[0].is_var() || !t.args()[1].is_var() ||
                    anonymous(t.args()[0]))
                    throw fail("edge pattern must be label(Head,Dependent) over slots: " + part);
                e.dep = t.name();
                e.head = t.args()[0].name();
                e.dep_slot = anonymous(t.args()[1]) ? "_" : t.args()[1].name();
                if (!e.negated && e.dep_slot == "_") throw fail("positive edge needs a named dependent: " + part);
                cur->edges.push_back(std::move(e));
            }
            continue;
        }
        if (line.rfind("where:", 0) == 0) {
            for (const auto& part : split_top(line.substr(6))) {
                std::smatch m;
                if (!std::regex_match(part, m, guard_re)) throw fail("bad guard '" + part + "'");
                Guard g;
                g.field = m[1] == "lemma" ? Guard::Field::Lemma : m[1] == "pos" ? Guard::Field::Pos : Guard::Field::Text;
                g.slot = m[2];
                g.equal = m[3] == "=";
                g.value = m[4];
                cur->guards.push_back(std::move(g));
            }
            continue;
        }
        std::smatch m;
        if (std::regex_match(line, m, produce_re)) {
            Production p;
            p.confidence = std::stod(m[1]);
            if (p.confidence <= 0.0 || p.confidence > 1.0) throw fail("confidence must be in (0,1]");
            for (const auto& part : split_top(m[2].str())) {
                Term t;
                try {
                    t = parse_term(part);
                } catch (const std::exception& ex) {
                    throw fail("bad production atom '" + part + "': " + ex.what());
                }
                if (!t.is_compound()) throw fail("production atom needs arguments: " + part);
                p.atoms.push_back(std::move(t));
            }
            if (p.atoms.empty()) throw fail("empty production");
            cur->productions.push_back(std::move(p));
            continue;
        }
        throw fail("unrecognised line '" + line + "'");
    }
    if (cur) throw fail("rule " + cur->id + " is missing 'end'");
    return rules;
}

std::vector<MappingRule> load_rules(const std::string& path) { return parse_rules(read_file<RuleError>(path, "rules"), path); }

std::vector<std::map<std::string, int>> match_rule(const MappingRule& rule, const Sentence& s) {
    std::vector<std::string> order;  // slots in first-appearance order
    for (const auto& e : rule.edges) {
        if (e.negated) continue;
        for (const auto* n : {&e.head, &e.dep_slot})
            if (std::find(order.begin(), order.end(), *n) == order.end()) order.push_back(*n);
    }
    std::vector<const EdgePattern*> positive;
    for (const auto& e : rule.edges)
        if (!e.negated) positive.push_back(&e);

    const int n = static_cast<int>(s.size());
    std::vector<std::map<std::string, int>> out;
    std::map<std::string, int> b;

    auto accept = [&]() {
        for (const auto& e : rule.edges) {
            if (!e.negated) continue;
            const int h = b.at(e.head);
            for (const auto& t : s) {
                if (t.head != h || t.dep != e.dep) continue;
                if (e.dep_slot == "_" || !b.contains(e.dep_slot) || b.at(e.dep_slot) == t.index) return false;
            }
        }
        for (const auto& g : rule.guards) {
            const auto& t = s[static_cast<std::size_t>(b.at(g.slot))];
            const std::string& v = g.field == Guard::Field::Lemma ? t.lemma : g.field == Guard::Field::Pos ? t.pos : t.text;
            if ((v == g.value) != g.equal) return false;
        }
        return true;
    };

    std::function<void(std::size_t)> step = [&](std::size_t i) {
        if (i == positive.size()) {
            if (accept()) out.push_back(b);
            return;
        }
        const auto& e = *positive[i];
        auto hi = b.find(e.head);
        auto di = b.find(e.dep_slot);
        for (int d = 0; d < n; ++d) {
            const auto& t = s[static_cast<std::size_t>(d)];
            if (t.dep != e.dep || t.head < 0) continue;
            if (di != b.end() && di->second != d) continue;
            if (hi != b.end() && hi->second != t.head) continue;
            const bool bind_h = hi == b.end(), bind_d = di == b.end();
            if (bind_h && bind_d && e.head == e.dep_slot) continue;
            if (bind_h) b[e.head] = t.head;
            if (bind_d) b[e.dep_slot] = d;
            step(i + 1);
            if (bind_h) b.erase(e.head);
            if (bind_d) b.erase(e.dep_slot);
            hi = b.find(e.head);
            di = b.find(e.dep_slot);
        }
    };
    step(0);

    auto key = [&](const std::map<std::string, int>& m) {
        std::vector<int> k;
        for (const auto& slot : order) k.push_back(m.at(slot));
        return k;
    };
    std::sort(out.begin(), out.end(), [&](const auto& x, const auto& y) { return key(x) < key(y); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace pkb
