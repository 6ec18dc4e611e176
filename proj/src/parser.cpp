#include "pkb/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace pkb {

ParseError::ParseError(std::string message, int line, int column, std::string file)
    : std::runtime_error((file.empty() ? std::string() : file + ":") + std::to_string(line) + ":" +
                         std::to_string(column) + ": " + message),
      message_(std::move(message)),
      line_(line),
      column_(column),
      file_(std::move(file)) {}

namespace {

enum class Tok {
    End,
    Number,
    Var,
    Name,
    Phrase,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Bar,
    Comma,
    Semicolon,
    Dot,
    Question,
    DoubleColon,
    Neck,     // :-
    At,
    Assign,   // =
    NotOp,    // \+
    Cmp,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    double number = 0.0;
    CompareOp cmp = CompareOp::Eq;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    Lexer(std::string_view src, std::string file) : src_(src), file_(std::move(file)) { advance(); }

    const Token& peek() const { return cur_; }
    Token take() {
        Token t = cur_;
        advance();
        return t;
    }
    [[noreturn]] void fail(const std::string& msg, const Token& at) const {
        throw ParseError(msg, at.line, at.column, file_);
    }
    [[noreturn]] void fail(const std::string& msg) const { fail(msg, cur_); }
    const std::string& file() const { return file_; }

private:
    char at(std::size_t i) const { return i < src_.size() ? src_[i] : '\0'; }

    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '%') {
                while (pos_ < src_.size() && src_[pos_] != '\n') bump();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                bump();
            } else {
                break;
            }
        }
    }

    static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

    void advance() {
        skip_space();
        cur_ = Token{};
        cur_.line = line_;
        cur_.column = col_;
        if (pos_ >= src_.size()) {
            cur_.kind = Tok::End;
            return;
        }
        char c = src_[pos_];
        auto single = [&](Tok k) {
            cur_.kind = k;
            cur_.text = std::string(1, c);
            bump();
        };
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '-' && std::isdigit(static_cast<unsigned char>(at(pos_ + 1))))) {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() && ident_char(src_[pos_])) bump();
            cur_.text = std::string(src_.substr(start, pos_ - start));
            cur_.kind = (std::isupper(static_cast<unsigned char>(c)) || c == '_') ? Tok::Var : Tok::Name;
            return;
        }
        if (c == '"' || c == '\'') {
            lex_phrase(c);
            return;
        }
        switch (c) {
        case '(': single(Tok::LParen); return;
        case ')': single(Tok::RParen); return;
        case '[': single(Tok::LBracket); return;
        case ']': single(Tok::RBracket); return;
        case '|': single(Tok::Bar); return;
        case ',': single(Tok::Comma); return;
        case ';': single(Tok::Semicolon); return;
        case '?': single(Tok::Question); return;
        case '@': single(Tok::At); return;
        case '.': single(Tok::Dot); return;
        default: break;
        }
        auto two = [&](std::string_view s) { return src_.substr(pos_, s.size()) == s; };
        auto emit = [&](Tok k, std::string_view s, CompareOp op = CompareOp::Eq) {
            cur_.kind = k;
            cur_.text = std::string(s);
            cur_.cmp = op;
            for (std::size_t i = 0; i < s.size(); ++i) bump();
        };
        if (two("::")) return emit(Tok::DoubleColon, "::");
        if (two(":-")) return emit(Tok::Neck, ":-");
        if (two("\\==")) return emit(Tok::Cmp, "\\==", CompareOp::Ne);
        if (two("\\+")) return emit(Tok::NotOp, "\\+");
        if (two(">=")) return emit(Tok::Cmp, ">=", CompareOp::Ge);
        if (two("=<")) return emit(Tok::Cmp, "=<", CompareOp::Le);
        if (two("==")) return emit(Tok::Cmp, "==", CompareOp::Eq);
        if (two(">")) return emit(Tok::Cmp, ">", CompareOp::Gt);
        if (two("<")) return emit(Tok::Cmp, "<", CompareOp::Lt);
        if (two("=")) return emit(Tok::Assign, "=");
        fail(std::string("unexpected character '") + c + "'");
    }

    void lex_number() {
        std::size_t start = pos_;
        if (src_[pos_] == '-') bump();
        while (std::isdigit(static_cast<unsigned char>(at(pos_)))) bump();
        if (at(pos_) == '.' && std::isdigit(static_cast<unsigned char>(at(pos_ + 1)))) {
            bump();
            while (std::isdigit(static_cast<unsigned char>(at(pos_)))) bump();
        }
        if ((at(pos_) == 'e' || at(pos_) == 'E') &&
            (std::isdigit(static_cast<unsigned char>(at(pos_ + 1))) ||
             ((at(pos_ + 1) == '-' || at(pos_ + 1) == '+') && std::isdigit(static_cast<unsigned char>(at(pos_ + 2)))))) {
            bump();
            if (at(pos_) == '-' || at(pos_) == '+') bump();
            while (std::isdigit(static_cast<unsigned char>(at(pos_)))) bump();
        }
        cur_.text = std::string(src_.substr(start, pos_ - start));
        cur_.kind = Tok::Number;
        auto res = std::from_chars(cur_.text.data(), cur_.text.data() + cur_.text.size(), cur_.number);
        if (res.ec != std::errc{}) fail("malformed number '" + cur_.text + "'");
        if (ident_char(at(pos_))) fail("malformed number '" + cur_.text + at(pos_) + "'");
    }

    void lex_phrase(char quote) {
        Token start = cur_;
        bump();
        std::string text;
        while (true) {
            if (pos_ >= src_.size()) fail("unterminated quote", start);
            char c = src_[pos_];
            if (c == quote) {
                bump();
                break;
            }
            if (c == '\\') {
                bump();
                if (pos_ >= src_.size()) fail("unterminated quote", start);
                char e = src_[pos_];
                text += e == 'n' ? '\n' : e == 't' ? '\t' : e;
                bump();
                continue;
            }
            text += c;
            bump();
        }
        cur_.kind = Tok::Phrase;
        cur_.text = std::move(text);
    }

    std::string_view src_;
    std::string file_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token cur_;
};

struct Context {
    // predicate/full-arity pairs declared traced
    std::set<std::pair<std::string, std::size_t>> traced;
    std::set<std::pair<std::string, std::size_t>> used;
};

class Parser {
public:
    Parser(std::string_view text, std::string file, Context ctx) : lex_(text, std::move(file)), ctx_(std::move(ctx)) {}

    ProgramText program() {
        ProgramText p;
        while (lex_.peek().kind != Tok::End) p.items.push_back(item());
        return p;
    }

    Statement single_statement() {
        auto it = item();
        if (lex_.peek().kind != Tok::End) lex_.fail("trailing input after statement");
        if (!std::holds_alternative<Statement>(it.value)) lex_.fail("expected a statement, found a directive");
        return std::get<Statement>(std::move(it.value));
    }

    std::vector<GoalExpr> query(std::vector<TraceVars>* tv) {
        if (lex_.peek().kind == Tok::Question || lex_.peek().kind == Tok::Dot || lex_.peek().kind == Tok::End)
            lex_.fail("empty query");
        GoalExpr g = disjunction();
        Token end = lex_.take();
        if (end.kind != Tok::Question && end.kind != Tok::Dot) lex_.fail("expected '?' or '.' after query", end);
        if (lex_.peek().kind != Tok::End) lex_.fail("trailing input after query");
        std::vector<GoalExpr> goals;
        if (g.kind == GoalExpr::Kind::And)
            goals = std::move(g.children);
        else
            goals.push_back(std::move(g));
        for (auto& q : goals) {
            TraceVars vars;
            q = strip_traced_goal(q, &vars);
            if (tv) tv->push_back(vars);
        }
        return goals;
    }

    Term lone_term() {
        Term t = term();
        if (lex_.peek().kind == Tok::Dot) lex_.take();
        if (lex_.peek().kind != Tok::End) lex_.fail("trailing input after term");
        return t;
    }

private:
    Token expect(Tok k, const char* what) {
        if (lex_.peek().kind != k) lex_.fail(std::string("expected ") + what);
        return lex_.take();
    }

    ProgramItem item() {
        ProgramItem it;
        const Token& first = lex_.peek();
        it.loc = SourceLoc{lex_.file(), first.line, first.column};
        if (first.kind == Tok::Neck) {
            lex_.take();
            it.value = directive();
            expect(Tok::Dot, "'.' after directive");
            return it;
        }
        Statement s = statement();
        s.loc = it.loc;
        it.value = std::move(s);
        return it;
    }

    Directive directive() {
        Token at = lex_.peek();
        Term t = term();
        auto name_of = [&](const Term& a) -> std::string {
            if (a.is_symbol() || a.is_phrase()) return a.name();
            lex_.fail("directive argument must be a name", at);
        };
        if (t.is_compound() && t.name() == "traced" && t.arity() == 2 && t.args()[1].is_number()) {
            double n = t.args()[1].value();
            if (n < 3 || n != static_cast<double>(static_cast<std::size_t>(n)))
                lex_.fail("traced arity must be an integer >= 3", at);
            TracedDirective d{name_of(t.args()[0]), static_cast<std::size_t>(n)};
            if (ctx_.used.contains({d.predicate, d.arity}) || ctx_.used.contains({d.predicate, d.arity - 3}))
                lex_.fail("traced(" + d.predicate + ", " + std::to_string(d.arity) + ") declared after first use", at);
            ctx_.traced.emplace(d.predicate, d.arity);
            return d;
        }
        if (t.is_compound() && t.name() == "selectional" && t.arity() == 3) {
            return SelectionalDirective{{name_of(t.args()[0]), name_of(t.args()[1]), name_of(t.args()[2])}};
        }
        if (t.is_compound() && t.name() == "source_default" && t.arity() == 1) {
            return SourceDefaultDirective{name_of(t.args()[0])};
        }
        lex_.fail("unknown directive " + to_string(t), at);
    }

    Statement statement() {
        Statement s;
        Token start = lex_.peek();
        if (start.kind == Tok::Number) {
            Token p = lex_.take();
            if (lex_.peek().kind != Tok::DoubleColon) lex_.fail("expected '::' after probability");
            lex_.take();
            if (!(p.number >= 0.0 && p.number <= 1.0)) lex_.fail("probability outside [0,1]: " + p.text, p);
            s.prob = p.number;
        }
        Token head_tok = lex_.peek();
        Term head = term();
        if (!head.is_callable() || head.is_nil()) lex_.fail("statement head must be an atom", head_tok);
        if (is_builtin(head.name(), head.arity())) lex_.fail("cannot define built-in " + head.name(), head_tok);
        if (lex_.peek().kind == Tok::Neck) {
            lex_.take();
            s.body = disjunction();
        }
        if (lex_.peek().kind == Tok::At) {
            lex_.take();
            annotation(s);
        }
        expect(Tok::Dot, "'.' at end of statement");

        const bool traced = ctx_.traced.contains({head.name(), head.arity()});
        s.head = Atom(head);
        if (traced) normalise_traced(s, head_tok);
        ctx_.used.emplace(head.name(), head.arity());
        return s;
    }

    void annotation(Statement& s) {
        while (true) {
            Token key = expect(Tok::Name, "annotation key");
            expect(Tok::Assign, "'=' in annotation");
            Token val = lex_.take();
            std::string v;
            if (val.kind == Tok::Name || val.kind == Tok::Phrase || val.kind == Tok::Var || val.kind == Tok::Number)
                v = val.text;
            else
                lex_.fail("annotation value expected", val);
            if (key.text == "id")
                s.id = v;
            else if (key.text == "src")
                s.source = v;
            else if (key.text == "time")
                s.time_tag = v;
            else
                lex_.fail("unknown annotation key '" + key.text + "'", key);
            if (lex_.peek().kind != Tok::Comma) break;
            lex_.take();
        }
    }

    GoalExpr disjunction() {
        std::vector<GoalExpr> parts;
        parts.push_back(conjunction());
        while (lex_.peek().kind == Tok::Semicolon) {
            lex_.take();
            parts.push_back(conjunction());
        }
        return GoalExpr::disj(std::move(parts));
    }

    GoalExpr conjunction() {
        std::vector<GoalExpr> parts;
        parts.push_back(unary());
        while (lex_.peek().kind == Tok::Comma) {
            lex_.take();
            parts.push_back(unary());
        }
        return GoalExpr::conj(std::move(parts));
    }

    GoalExpr unary() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::NotOp) {
            lex_.take();
            return GoalExpr::negation(unary());
        }
        if (t.kind == Tok::LParen) {
            lex_.take();
            GoalExpr g = disjunction();
            expect(Tok::RParen, "')'");
            return g;
        }
        if (t.kind == Tok::Name && t.text == "not") {
            Token name = lex_.take();
            if (lex_.peek().kind == Tok::LParen) {
                lex_.take();
                GoalExpr g = disjunction();
                expect(Tok::RParen, "')' after not(...)");
                return GoalExpr::negation(std::move(g));
            }
            return finish_goal(Term::symbol(name.text), name);
        }
        Token at = lex_.peek();
        Term lhs = term();
        return finish_goal(std::move(lhs), at);
    }

    GoalExpr finish_goal(Term lhs, const Token& at) {
        if (lex_.peek().kind == Tok::Cmp) {
            CompareOp op = lex_.take().cmp;
            Term rhs = term();
            return GoalExpr::compare(op, std::move(lhs), std::move(rhs));
        }
        if (!lhs.is_callable() || lhs.is_nil()) lex_.fail("goal must be an atom or comparison", at);
        if (is_builtin(lhs.name(), lhs.arity())) return GoalExpr::builtin(std::move(lhs));
        ctx_.used.emplace(lhs.name(), lhs.arity());
        return GoalExpr::atom(std::move(lhs));
    }

    Term term() {
        Token t = lex_.take();
        switch (t.kind) {
        case Tok::Number:
            return Term::number(t.number);
        case Tok::Var:
            if (t.text == "_") return Term::variable("_Anon" + std::to_string(++anon_));
            return Term::variable(t.text);
        case Tok::Phrase:
            return Term::phrase(t.text);
        case Tok::Name: {
            if (lex_.peek().kind != Tok::LParen) return Term::symbol(t.text);
            lex_.take();
            std::vector<Term> args;
            if (lex_.peek().kind == Tok::RParen) lex_.fail("empty argument list");
            args.push_back(term());
            while (lex_.peek().kind == Tok::Comma) {
                lex_.take();
                args.push_back(term());
            }
            expect(Tok::RParen, "')' after arguments");
            return Term::compound(t.text, std::move(args));
        }
        case Tok::LBracket: {
            std::vector<Term> elems;
            std::optional<Term> tail;
            if (lex_.peek().kind == Tok::RBracket) {
                lex_.take();
                return Term::nil();
            }
            elems.push_back(term());
            while (lex_.peek().kind == Tok::Comma) {
                lex_.take();
                elems.push_back(term());
            }
            if (lex_.peek().kind == Tok::Bar) {
                lex_.take();
                tail = term();
            }
            expect(Tok::RBracket, "']' to close list");
            return Term::make_list(elems, tail);
        }
        default:
            lex_.fail(t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'", t);
        }
    }

    // --- traced-form normalisation -------------------------------------

    bool is_traced(const Term& t) const { return t.is_compound() && ctx_.traced.contains({t.name(), t.arity()}); }

    static Term strip3(const Term& t) {
        std::vector<Term> rest(t.args().begin() + 3, t.args().end());
        return Term::compound(t.name(), std::move(rest));
    }

    GoalExpr strip_traced_goal(const GoalExpr& g, TraceVars* vars) {
        switch (g.kind) {
        case GoalExpr::Kind::Atom:
            if (is_traced(g.term)) {
                if (vars) {
                    const auto& a = g.term.args();
                    if (a[0].is_var()) vars->ids = a[0].name();
                    if (a[1].is_var()) vars->sources = a[1].name();
                    if (a[2].is_var()) vars->time = a[2].name();
                }
                return GoalExpr::atom(strip3(g.term));
            }
            return g;
        case GoalExpr::Kind::And:
        case GoalExpr::Kind::Or:
        case GoalExpr::Kind::Not: {
            GoalExpr out = g;
            for (auto& c : out.children) c = strip_traced_goal(c, nullptr);
            return out;
        }
        default:
            return g;
        }
    }

    void normalise_traced(Statement& s, const Token& at) {
        const Term head = s.head.term();
        const auto& a = head.args();
        if (s.is_fact()) {
            auto ids = list_elements(a[0]);
            auto srcs = list_elements(a[1]);
            if (!ids || !ids->proper() || ids->elements.size() != 1 || !ids->elements[0].is_symbol())
                lex_.fail("traced fact needs a one-element id list as first argument", at);
            if (!srcs || !srcs->proper() || srcs->elements.empty())
                lex_.fail("traced fact needs a source list as second argument", at);
            if (!a[2].is_symbol()) lex_.fail("traced fact needs a time point as third argument", at);
            if (s.id && *s.id != ids->elements[0].name()) lex_.fail("conflicting fact ids", at);
            s.id = ids->elements[0].name();
            const Term& src = srcs->elements[0];
            if (!src.is_symbol() && !src.is_phrase()) lex_.fail("source must be a name", at);
            s.source = src.name();
            s.time_tag = a[2].name();
            s.head = Atom(strip3(head));
            return;
        }
        // Clause: the first three head arguments must be variables; every
        // built-in goal that only shuffles trace lists is dropped, and the
        // clause id is recovered from the constant it conses onto the list.
        std::vector<std::string> trace_vars;
        for (int i = 0; i < 3; ++i) {
            if (!a[i].is_var()) lex_.fail("traced clause head needs variables in trace positions", at);
            trace_vars.push_back(a[i].name());
        }
        std::vector<GoalExpr> body;
        if (s.body->kind == GoalExpr::Kind::And)
            body = s.body->children;
        else
            body.push_back(*s.body);
        for (auto& g : body) {
            if (g.kind == GoalExpr::Kind::Atom && is_traced(g.term)) {
                for (int i = 0; i < 3; ++i) g.term.args()[i].collect_vars(trace_vars);
            }
        }
        std::vector<bool> dropped(body.size(), false);
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < body.size(); ++i) {
                if (dropped[i] || body[i].kind != GoalExpr::Kind::Builtin) continue;
                std::vector<std::string> vs;
                body[i].collect_vars(vs);
                bool touches = std::any_of(vs.begin(), vs.end(), [&](const std::string& v) {
                    return std::find(trace_vars.begin(), trace_vars.end(), v) != trace_vars.end();
                });
                if (!touches) continue;
                dropped[i] = true;
                changed = true;
                for (auto& v : vs)
                    if (std::find(trace_vars.begin(), trace_vars.end(), v) == trace_vars.end()) trace_vars.push_back(v);
            }
        }
        std::set<std::string> clause_ids;
        std::vector<GoalExpr> kept;
        for (std::size_t i = 0; i < body.size(); ++i) {
            if (dropped[i]) {
                collect_list_symbols(body[i].term, clause_ids);
                continue;
            }
            kept.push_back(strip_traced_goal(body[i], nullptr));
        }
        if (kept.empty()) lex_.fail("traced clause has no logical body", at);
        GoalExpr new_body = GoalExpr::conj(std::move(kept));
        std::vector<std::string> remaining;
        new_body.collect_vars(remaining);
        Term new_head = strip3(head);
        new_head.collect_vars(remaining);
        for (const auto& v : remaining) {
            // the time variable may legitimately stay shared between goals
            if (v == a[2].name()) continue;
            if (std::find(trace_vars.begin(), trace_vars.end(), v) != trace_vars.end())
                lex_.fail("trace variable " + v + " used outside trace bookkeeping", at);
        }
        if (clause_ids.size() > 1) lex_.fail("ambiguous clause id in trace bookkeeping", at);
        if (clause_ids.size() == 1) {
            if (s.id && *s.id != *clause_ids.begin()) lex_.fail("conflicting clause ids", at);
            s.id = *clause_ids.begin();
        }
        s.head = Atom(new_head);
        s.body = std::move(new_body);
    }

    static void collect_list_symbols(const Term& t, std::set<std::string>& out) {
        if (t.is_cons()) {
            if (t.args()[0].is_symbol()) out.insert(t.args()[0].name());
        }
        for (const auto& a : t.args()) collect_list_symbols(a, out);
    }

    Lexer lex_;
    Context ctx_;
    int anon_ = 0;
};

Context context_from(const KnowledgeStore* store) {
    Context c;
    if (store) c.traced = store->traced();
    return c;
}

bool bare_name(const std::string& s) {
    if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::string name_or_phrase(const std::string& s) { return bare_name(s) ? s : to_string(Term::phrase(s)); }

void print_goal_into(std::string& out, const GoalExpr& g, GoalExpr::Kind parent) {
    using K = GoalExpr::Kind;
    switch (g.kind) {
    case K::Atom:
    case K::Builtin:
        out += to_string(g.term);
        return;
    case K::Compare:
        out += to_string(g.lhs);
        out += ' ';
        out += to_string(g.op);
        out += ' ';
        out += to_string(g.rhs);
        return;
    case K::Not:
        out += "not(";
        print_goal_into(out, g.children[0], K::Not);
        out += ')';
        return;
    case K::And:
    case K::Or: {
        // `,` binds tighter than `;`; anything nested in its own kind, and an
        // Or inside an And, needs parentheses to survive a round trip.
        bool paren = (parent == g.kind) || (g.kind == K::Or && parent == K::And);
        if (paren) out += '(';
        const char* sep = g.kind == K::And ? ", " : "; ";
        for (std::size_t i = 0; i < g.children.size(); ++i) {
            if (i) out += sep;
            print_goal_into(out, g.children[i], g.kind);
        }
        if (paren) out += ')';
        return;
    }
    }
}

}  // namespace

std::vector<Statement> ProgramText::statements() const {
    std::vector<Statement> out;
    for (const auto& it : items)
        if (auto* s = std::get_if<Statement>(&it.value)) out.push_back(*s);
    return out;
}

ProgramText parse_program(std::string_view text, std::string_view file) {
    Parser p(text, std::string(file), context_from(nullptr));
    return p.program();
}

Statement parse_statement(std::string_view text) {
    Parser p(text, {}, context_from(nullptr));
    return p.single_statement();
}

std::vector<GoalExpr> parse_query(std::string_view text) {
    Parser p(text, {}, context_from(nullptr));
    return p.query(nullptr);
}

std::vector<GoalExpr> parse_query(std::string_view text, const KnowledgeStore& store,
                                  std::vector<TraceVars>* trace_vars) {
    Parser p(text, {}, context_from(&store));
    return p.query(trace_vars);
}

Term parse_term(std::string_view text) {
    Parser p(text, {}, Context{});
    return p.lone_term();
}

std::string print_goal(const GoalExpr& g) {
    std::string out;
    print_goal_into(out, g, GoalExpr::Kind::Atom);
    return out;
}

std::string print_statement(const Statement& s) {
    std::string out;
    if (s.prob != 1.0) {
        out += format_number(s.prob);
        out += "::";
    }
    out += to_string(s.head.term());
    if (s.body) {
        out += " :- ";
        out += print_goal(*s.body);
    }
    std::vector<std::string> ann;
    if (s.id) ann.push_back("id=" + name_or_phrase(*s.id));
    if (s.source) ann.push_back("src=" + name_or_phrase(*s.source));
    if (s.time_tag != kGeneralTime) ann.push_back("time=" + name_or_phrase(s.time_tag));
    if (!ann.empty()) {
        out += " @";
        for (std::size_t i = 0; i < ann.size(); ++i) {
            if (i) out += ", ";
            out += ann[i];
        }
    }
    out += '.';
    return out;
}

std::string print_directive(const Directive& d) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, TracedDirective>)
                return ":- traced(" + name_or_phrase(v.predicate) + ", " + std::to_string(v.arity) + ").";
            else if constexpr (std::is_same_v<T, SelectionalDirective>)
                return ":- selectional(" + name_or_phrase(v.restriction.role) + ", " +
                       name_or_phrase(v.restriction.event_concept) + ", " +
                       name_or_phrase(v.restriction.required_type) + ").";
            else
                return ":- source_default(" + name_or_phrase(v.source) + ").";
        },
        d);
}

std::string print_program(const ProgramText& p) {
    std::string out;
    for (const auto& it : p.items) {
        if (auto* s = std::get_if<Statement>(&it.value))
            out += print_statement(*s);
        else
            out += print_directive(std::get<Directive>(it.value));
        out += '\n';
    }
    return out;
}

std::vector<std::string> load_program(KnowledgeStore& store, std::string_view text, std::string_view file,
                                      Layer layer) {
    Parser parser(text, std::string(file), context_from(&store));
    ProgramText prog = parser.program();
    std::vector<std::string> ids;
    for (auto& it : prog.items) {
        if (auto* d = std::get_if<Directive>(&it.value)) {
            if (auto* t = std::get_if<TracedDirective>(d))
                store.declare_traced(t->predicate, t->arity);
            else if (auto* sd = std::get_if<SelectionalDirective>(d))
                store.add_restriction(sd->restriction);
            else
                store.set_default_source(std::get<SourceDefaultDirective>(*d).source);
            continue;
        }
        auto& s = std::get<Statement>(it.value);
        try {
            ids.push_back(store.add_statement(std::move(s), layer));
        } catch (const StoreError& e) {
            throw ParseError(e.what(), it.loc.line, it.loc.column, std::string(file));
        }
    }
    return ids;
}

std::vector<std::string> load_file(KnowledgeStore& store, const std::string& path, Layer layer) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file", 0, 0, path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_program(store, ss.str(), path, layer);
}

}  // namespace pkb
