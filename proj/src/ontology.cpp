#include "pkb/ontology.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace pkb {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

bool valid_name(std::string_view s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

DeclaredPredicate parse_predicate_line(const std::string& line, int lineno) {
    // pred/arity [noinherit] ["description"]
    DeclaredPredicate p;
    std::string rest = line;
    if (auto q = rest.find('"'); q != std::string::npos) {
        auto e = rest.rfind('"');
        if (e == q) throw OntologyError("unterminated description", lineno);
        p.description = rest.substr(q + 1, e - q - 1);
        if (!trim(rest.substr(e + 1)).empty()) throw OntologyError("text after description", lineno);
        rest = rest.substr(0, q);
    }
    std::istringstream in(rest);
    std::string sig, flag;
    in >> sig;
    auto slash = sig.find('/');
    if (slash == std::string::npos) throw OntologyError("predicate must be written name/arity: " + sig, lineno);
    p.name = sig.substr(0, slash);
    if (!valid_name(p.name) || !std::islower(static_cast<unsigned char>(p.name[0])))
        throw OntologyError("bad predicate name: " + p.name, lineno);
    try {
        std::size_t used = 0;
        int a = std::stoi(sig.substr(slash + 1), &used);
        if (used != sig.size() - slash - 1 || a < 0) throw std::invalid_argument("");
        p.arity = static_cast<std::size_t>(a);
    } catch (const std::exception&) {
        throw OntologyError("bad arity in " + sig, lineno);
    }
    while (in >> flag) {
        if (flag == "noinherit")
            p.inheritable = false;
        else
            throw OntologyError("unknown predicate flag: " + flag, lineno);
    }
    return p;
}

}  // namespace

Ontology Ontology::parse(std::string_view text, std::string_view file) {
    std::vector<OntologyNode> nodes;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    auto fail = [&](const std::string& msg) -> OntologyError {
        return OntologyError((file.empty() ? "" : std::string(file) + ":") + std::to_string(lineno) + ": " + msg,
                             lineno);
    };
    while (std::getline(in, raw)) {
        ++lineno;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::string line = raw;
        if (auto h = line.find('#'); h != std::string::npos && line.find('"') > h) line = line.substr(0, h);
        if (trim(line).empty()) continue;
        const bool indented = std::isspace(static_cast<unsigned char>(line[0]));
        if (indented) {
            if (nodes.empty()) throw fail("predicate line before any node");
            try {
                nodes.back().predicates.push_back(parse_predicate_line(trim(line), lineno));
            } catch (const OntologyError& e) {
                throw fail(e.what());
            }
            continue;
        }
        std::istringstream fields(line);
        OntologyNode n;
        std::string level, parents, extra;
        if (!(fields >> n.name >> level >> parents) || (fields >> extra))
            throw fail("node line must be: Name level parents");
        if (!valid_name(n.name)) throw fail("bad node name: " + n.name);
        try {
            std::size_t used = 0;
            n.level = std::stoi(level, &used);
            if (used != level.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw fail("bad level: " + level);
        }
        if (parents != "-") {
            std::stringstream ps(parents);
            std::string p;
            while (std::getline(ps, p, ',')) {
                if (!valid_name(p)) throw fail("bad parent name: " + p);
                n.parents.push_back(p);
            }
        }
        nodes.push_back(std::move(n));
    }
    try {
        return from_nodes(std::move(nodes));
    } catch (const OntologyError& e) {
        throw OntologyError((file.empty() ? "" : std::string(file) + ": ") + e.what(), e.line());
    }
}

Ontology Ontology::load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw OntologyError(path + ": cannot open file");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str(), path);
}

Ontology Ontology::from_nodes(std::vector<OntologyNode> nodes) {
    Ontology o;
    for (auto& n : nodes) {
        if (o.index_.contains(n.name)) throw OntologyError("duplicate node: " + n.name);
        o.index_.emplace(n.name, o.nodes_.size());
        o.nodes_.push_back(std::move(n));
    }
    o.validate();
    return o;
}

void Ontology::validate() const {
    std::size_t roots = 0;
    for (const auto& n : nodes_) {
        for (const auto& p : n.parents)
            if (!index_.contains(p)) throw OntologyError("dangling parent " + p + " of " + n.name);
        if (n.parents.empty()) {
            ++roots;
            if (n.level != 0) throw OntologyError("root node " + n.name + " must have level 0");
        } else if (n.level < 1) {
            throw OntologyError("non-root node " + n.name + " must have level >= 1");
        }
        std::set<std::pair<std::string, std::size_t>> seen;
        for (const auto& p : n.predicates)
            if (!seen.emplace(p.name, p.arity).second)
                throw OntologyError("predicate " + p.name + " declared twice on " + n.name);
    }
    if (nodes_.empty()) throw OntologyError("empty ontology");
    if (roots != 1) throw OntologyError("ontology needs exactly one root, found " + std::to_string(roots));

    // depth-first cycle search reporting the path
    std::vector<int> state(nodes_.size(), 0);
    std::vector<std::string> path;
    std::function<void(std::size_t)> visit = [&](std::size_t i) {
        state[i] = 1;
        path.push_back(nodes_[i].name);
        for (const auto& p : nodes_[i].parents) {
            std::size_t j = index_.find(p)->second;
            if (state[j] == 1) {
                std::string msg = "cycle: ";
                auto start = std::find(path.begin(), path.end(), p);
                for (auto it = start; it != path.end(); ++it) msg += *it + " -> ";
                msg += p;
                throw OntologyError(msg);
            }
            if (state[j] == 0) visit(j);
        }
        path.pop_back();
        state[i] = 2;
    };
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (state[i] == 0) visit(i);
}

const OntologyNode* Ontology::find(std::string_view name) const {
    auto it = index_.find(name);
    return it == index_.end() ? nullptr : &nodes_[it->second];
}

const OntologyNode* Ontology::find_concept(std::string_view name) const {
    if (auto* n = find(name)) return n;
    const std::string l = lower(name);
    for (const auto& n : nodes_)
        if (lower(n.name) == l) return &n;
    return nullptr;
}

const OntologyNode& Ontology::root() const {
    for (const auto& n : nodes_)
        if (n.parents.empty()) return n;
    throw OntologyError("no root");
}

std::vector<std::string> Ontology::ancestors(std::string_view name) const {
    const OntologyNode* start = find(name);
    if (!start) throw OntologyError("unknown node: " + std::string(name));
    std::set<std::string> seen;
    std::vector<const OntologyNode*> stack{start};
    while (!stack.empty()) {
        const OntologyNode* n = stack.back();
        stack.pop_back();
        for (const auto& p : n->parents)
            if (seen.insert(p).second) stack.push_back(find(p));
    }
    std::vector<std::string> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end(), [&](const std::string& a, const std::string& b) {
        int la = find(a)->level, lb = find(b)->level;
        return la != lb ? la < lb : a < b;
    });
    return out;
}

bool Ontology::is_ancestor(std::string_view ancestor, std::string_view node) const {
    auto a = ancestors(node);
    return std::find(a.begin(), a.end(), ancestor) != a.end();
}

std::vector<DeclaredPredicate> Ontology::effective_predicates(std::string_view name) const {
    auto chain = ancestors(name);
    chain.emplace_back(name);
    struct Entry {
        int level;
        DeclaredPredicate p;
    };
    std::map<std::pair<std::string, std::size_t>, Entry> best;
    for (const auto& nname : chain) {
        const OntologyNode* n = find(nname);
        for (const auto& p : n->predicates) {
            auto key = std::make_pair(p.name, p.arity);
            auto it = best.find(key);
            if (it == best.end() || n->level < it->second.level) best[key] = Entry{n->level, p};
        }
    }
    std::vector<Entry> entries;
    for (auto& [k, e] : best) entries.push_back(e);
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.level != b.level) return a.level < b.level;
        if (a.p.name != b.p.name) return a.p.name < b.p.name;
        return a.p.arity < b.p.arity;
    });
    std::vector<DeclaredPredicate> out;
    for (auto& e : entries) out.push_back(std::move(e.p));
    return out;
}

std::vector<std::string> Ontology::inheritable_predicates() const {
    std::set<std::string> yes, no;
    for (const auto& n : nodes_)
        for (const auto& p : n.predicates) {
            if (p.arity != 2) continue;
            (p.inheritable ? yes : no).insert(p.name);
        }
    std::vector<std::string> out;
    for (const auto& p : yes)
        if (!no.contains(p)) out.push_back(p);
    return out;
}

std::string Ontology::to_text() const {
    std::string out;
    for (const auto& n : nodes_) {
        out += n.name + " " + std::to_string(n.level) + " ";
        if (n.parents.empty()) {
            out += "-";
        } else {
            for (std::size_t i = 0; i < n.parents.size(); ++i) out += (i ? "," : "") + n.parents[i];
        }
        out += "\n";
        for (const auto& p : n.predicates) {
            out += "  " + p.name + "/" + std::to_string(p.arity);
            if (!p.inheritable) out += " noinherit";
            if (!p.description.empty()) out += " \"" + p.description + "\"";
            out += "\n";
        }
    }
    return out;
}

std::vector<Statement> generate_inheritance_clauses(const std::vector<std::string>& predicates) {
    const Term X = Term::variable("X"), Y = Term::variable("Y"), Z = Term::variable("Z");
    auto atom = [](const std::string& p, Term a, Term b) { return Term::compound(p, {std::move(a), std::move(b)}); };
    std::vector<Statement> out;
    Statement trans;
    trans.head = Atom(atom("isa", X, Z));
    trans.body = GoalExpr::conj({GoalExpr::atom(atom("isa", X, Y)), GoalExpr::atom(atom("isa", Y, Z))});
    trans.id = "inh_isa";
    trans.source = "ontology";
    out.push_back(std::move(trans));
    std::set<std::string> done;
    for (const auto& p : predicates) {
        if (p == "isa" || !done.insert(p).second) continue;
        Statement s;
        s.head = Atom(atom(p, X, Y));
        s.body = GoalExpr::conj({GoalExpr::atom(atom("isa", X, Z)), GoalExpr::atom(atom(p, Z, Y)),
                                 GoalExpr::negation(GoalExpr::atom(atom("not_" + p, X, Y)))});
        s.id = "inh_" + p;
        s.source = "ontology";
        out.push_back(std::move(s));
    }
    return out;
}

std::string_view to_string(CertaintyLevel c) {
    switch (c) {
    case CertaintyLevel::Tentative: return "tentative";
    case CertaintyLevel::Likely: return "likely";
    case CertaintyLevel::StronglyLikely: return "strongly_likely";
    case CertaintyLevel::Inherent: return "inherent";
    }
    return "?";
}

double probability(CertaintyLevel c) {
    switch (c) {
    case CertaintyLevel::Tentative: return 0.5;
    case CertaintyLevel::Likely: return 0.7;
    case CertaintyLevel::StronglyLikely: return 0.9;
    case CertaintyLevel::Inherent: return 1.0;
    }
    return 0.0;
}

std::optional<CertaintyLevel> score_to_certainty(double mean) {
    if (!(mean >= -2.0 && mean <= 2.0)) throw std::out_of_range("mean rating outside [-2,2]");
    if (mean <= 0.0) return std::nullopt;
    if (mean <= 0.7) return CertaintyLevel::Tentative;
    if (mean <= 1.4) return CertaintyLevel::Likely;
    return CertaintyLevel::StronglyLikely;
}

}  // namespace pkb
