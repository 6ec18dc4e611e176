#include "pkb/term.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace pkb {

namespace detail {
struct TermNode {
    TermKind kind;
    std::string text;
    double number = 0.0;
    std::vector<Term> args;
    bool ground = true;
};
}  // namespace detail

using detail::TermNode;

namespace {

const std::shared_ptr<const TermNode>& nil_node() {
    static const auto n = std::make_shared<const TermNode>(TermNode{TermKind::Symbol, "[]", 0.0, {}, true});
    return n;
}

const std::vector<Term>& no_args() {
    static const std::vector<Term> empty;
    return empty;
}

void append_phrase(std::string& out, const std::string& text) {
    out += '"';
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    out += '"';
}

void print_into(std::string& out, const Term& t);

void print_list(std::string& out, const Term& t) {
    out += '[';
    Term cur = t;
    bool first = true;
    while (cur.is_cons()) {
        if (!first) out += ',';
        first = false;
        print_into(out, cur.args()[0]);
        cur = cur.args()[1];
    }
    if (!cur.is_nil()) {
        out += '|';
        print_into(out, cur);
    }
    out += ']';
}

void print_into(std::string& out, const Term& t) {
    switch (t.kind()) {
    case TermKind::Variable:
        out += t.name();
        break;
    case TermKind::Symbol:
        out += t.name();
        break;
    case TermKind::Phrase:
        append_phrase(out, t.name());
        break;
    case TermKind::Number:
        out += format_number(t.value());
        break;
    case TermKind::Compound:
        out += t.name();
        out += '(';
        for (std::size_t i = 0; i < t.args().size(); ++i) {
            if (i) out += ',';
            print_into(out, t.args()[i]);
        }
        out += ')';
        break;
    case TermKind::List:
        print_list(out, t);
        break;
    }
}

int kind_rank(TermKind k) {
    switch (k) {
    case TermKind::Variable: return 0;
    case TermKind::Number: return 1;
    case TermKind::Symbol: return 2;
    case TermKind::Phrase: return 3;
    case TermKind::Compound:
    case TermKind::List: return 4;
    }
    return 5;
}

bool occurs(const std::string& var, const Term& t, const Substitution& s) {
    Term w = s.walk(t);
    if (w.is_var()) return w.name() == var;
    if (w.is_compound() || w.is_cons()) {
        for (const auto& a : w.args())
            if (occurs(var, a, s)) return true;
    }
    return false;
}

bool unify_rec(const Term& a, const Term& b, Substitution& s) {
    Term x = s.walk(a);
    Term y = s.walk(b);
    if (x.identity() == y.identity()) return true;
    if (x.is_var() && y.is_var() && x.name() == y.name()) return true;
    if (x.is_var()) {
        if (occurs(x.name(), y, s)) return false;
        s.bind(x.name(), y);
        return true;
    }
    if (y.is_var()) {
        if (occurs(y.name(), x, s)) return false;
        s.bind(y.name(), x);
        return true;
    }
    if (x.kind() != y.kind()) return false;
    switch (x.kind()) {
    case TermKind::Symbol:
    case TermKind::Phrase:
        return x.name() == y.name();
    case TermKind::Number:
        return x.value() == y.value();
    case TermKind::Compound:
        if (x.name() != y.name()) return false;
        [[fallthrough]];
    case TermKind::List: {
        const auto& xa = x.args();
        const auto& ya = y.args();
        if (xa.size() != ya.size()) return false;
        for (std::size_t i = 0; i < xa.size(); ++i)
            if (!unify_rec(xa[i], ya[i], s)) return false;
        return true;
    }
    case TermKind::Variable:
        break;
    }
    return false;
}

void variant_into(std::string& out, const Term& t, std::unordered_map<std::string, int>& seen) {
    switch (t.kind()) {
    case TermKind::Variable: {
        auto [it, inserted] = seen.emplace(t.name(), static_cast<int>(seen.size()));
        out += "_V";
        out += std::to_string(it->second);
        break;
    }
    case TermKind::Compound:
    case TermKind::List:
        out += t.is_cons() ? "'[|]'" : t.name();
        out += '(';
        for (std::size_t i = 0; i < t.args().size(); ++i) {
            if (i) out += ',';
            variant_into(out, t.args()[i], seen);
        }
        out += ')';
        break;
    default:
        print_into(out, t);
    }
}

}  // namespace

Term::Term() : node_(nil_node()) {}

Term Term::variable(std::string name) {
    return Term(std::make_shared<const TermNode>(TermNode{TermKind::Variable, std::move(name), 0.0, {}, false}));
}

Term Term::symbol(std::string name) {
    if (name == "[]") return nil();
    return Term(std::make_shared<const TermNode>(TermNode{TermKind::Symbol, std::move(name), 0.0, {}, true}));
}

Term Term::phrase(std::string text) {
    return Term(std::make_shared<const TermNode>(TermNode{TermKind::Phrase, std::move(text), 0.0, {}, true}));
}

Term Term::number(double value) {
    return Term(std::make_shared<const TermNode>(TermNode{TermKind::Number, {}, value, {}, true}));
}

Term Term::compound(std::string functor, std::vector<Term> args) {
    if (args.empty()) return symbol(std::move(functor));
    bool ground = true;
    for (const auto& a : args) ground = ground && a.is_ground();
    return Term(std::make_shared<const TermNode>(
        TermNode{TermKind::Compound, std::move(functor), 0.0, std::move(args), ground}));
}

Term Term::cons(Term head, Term tail) {
    bool ground = head.is_ground() && tail.is_ground();
    return Term(std::make_shared<const TermNode>(
        TermNode{TermKind::List, "'[|]'", 0.0, {std::move(head), std::move(tail)}, ground}));
}

Term Term::nil() { return Term(nil_node()); }

Term Term::make_list(std::span<const Term> elements, std::optional<Term> tail) {
    Term result = tail ? *tail : nil();
    for (auto it = elements.rbegin(); it != elements.rend(); ++it) result = cons(*it, result);
    return result;
}

TermKind Term::kind() const { return node_->kind; }
bool Term::is_nil() const { return node_ == nil_node() || (node_->kind == TermKind::Symbol && node_->text == "[]"); }
const std::string& Term::name() const { return node_->text; }
double Term::value() const { return node_->number; }
const std::vector<Term>& Term::args() const { return node_->args.empty() ? no_args() : node_->args; }
bool Term::is_ground() const { return node_->ground; }

void Term::collect_vars(std::vector<std::string>& out) const {
    if (is_var()) {
        for (const auto& v : out)
            if (v == name()) return;
        out.push_back(name());
        return;
    }
    for (const auto& a : args()) a.collect_vars(out);
}

bool Term::operator==(const Term& other) const {
    if (node_ == other.node_) return true;
    if (kind() != other.kind()) return false;
    switch (kind()) {
    case TermKind::Number:
        return value() == other.value();
    case TermKind::Variable:
    case TermKind::Symbol:
    case TermKind::Phrase:
        return name() == other.name();
    case TermKind::Compound:
    case TermKind::List:
        return name() == other.name() && args() == other.args();
    }
    return false;
}

std::optional<ListView> list_elements(const Term& t) {
    if (!t.is_cons() && !t.is_nil()) return std::nullopt;
    ListView v;
    Term cur = t;
    while (cur.is_cons()) {
        v.elements.push_back(cur.args()[0]);
        cur = cur.args()[1];
    }
    v.tail = cur;
    return v;
}

int compare_terms(const Term& a, const Term& b) {
    int ra = kind_rank(a.kind()), rb = kind_rank(b.kind());
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (a.kind()) {
    case TermKind::Number:
        if (a.value() == b.value()) return 0;
        return a.value() < b.value() ? -1 : 1;
    case TermKind::Variable:
    case TermKind::Symbol:
    case TermKind::Phrase:
        return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
    case TermKind::Compound:
    case TermKind::List: {
        if (a.arity() != b.arity()) return a.arity() < b.arity() ? -1 : 1;
        int c = a.name().compare(b.name());
        if (c != 0) return c < 0 ? -1 : 1;
        for (std::size_t i = 0; i < a.arity(); ++i) {
            int r = compare_terms(a.args()[i], b.args()[i]);
            if (r != 0) return r;
        }
        return 0;
    }
    }
    return 0;
}

void Substitution::undo(std::size_t mark) {
    while (trail_.size() > mark) {
        map_.erase(trail_.back());
        trail_.pop_back();
    }
}

void Substitution::bind(const std::string& var, Term value) {
    auto [it, inserted] = map_.emplace(var, std::move(value));
    if (!inserted) throw std::logic_error("variable rebound: " + var);
    trail_.push_back(var);
}

const Term* Substitution::lookup(const std::string& var) const {
    auto it = map_.find(var);
    return it == map_.end() ? nullptr : &it->second;
}

Term Substitution::walk(const Term& t) const {
    Term cur = t;
    while (cur.is_var()) {
        const Term* next = lookup(cur.name());
        if (!next) break;
        cur = *next;
    }
    return cur;
}

std::optional<Substitution> unify(const Term& a, const Term& b, const Substitution& bindings) {
    Substitution s = bindings;
    if (!unify_rec(a, b, s)) return std::nullopt;
    return s;
}

bool unify_in_place(const Term& a, const Term& b, Substitution& s) {
    auto m = s.mark();
    if (unify_rec(a, b, s)) return true;
    s.undo(m);
    return false;
}

Term apply(const Substitution& s, const Term& t) {
    if (t.is_ground() || s.empty()) return t;
    Term w = s.walk(t);
    if (w.is_var()) return w;
    if (w.is_compound() || w.is_cons()) {
        std::vector<Term> args;
        args.reserve(w.arity());
        bool changed = false;
        for (const auto& a : w.args()) {
            args.push_back(apply(s, a));
            changed = changed || args.back().identity() != a.identity();
        }
        if (!changed) return w;
        if (w.is_cons()) return Term::cons(std::move(args[0]), std::move(args[1]));
        return Term::compound(w.name(), std::move(args));
    }
    return w;
}

Term rename_term(const Term& t, std::unordered_map<std::string, std::string>& mapping, VarCounter& counter) {
    if (t.is_ground()) return t;
    if (t.is_var()) {
        auto it = mapping.find(t.name());
        if (it == mapping.end()) it = mapping.emplace(t.name(), "_G" + std::to_string(counter.next())).first;
        return Term::variable(it->second);
    }
    std::vector<Term> args;
    args.reserve(t.arity());
    for (const auto& a : t.args()) args.push_back(rename_term(a, mapping, counter));
    if (t.is_cons()) return Term::cons(std::move(args[0]), std::move(args[1]));
    return Term::compound(t.name(), std::move(args));
}

std::string to_string(const Term& t) {
    std::string out;
    print_into(out, t);
    return out;
}

std::string format_number(double v) {
    if (v == 0.0) return "0";
    if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
    char buf[512];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
    if (res.ec != std::errc{}) return std::to_string(v);
    return std::string(buf, res.ptr);
}

std::string variant_key(const Term& t) {
    std::unordered_map<std::string, int> seen;
    std::string out;
    variant_into(out, t, seen);
    return out;
}

}  // namespace pkb
