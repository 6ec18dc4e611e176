#include <algorithm>

#include "pkb/engine.hpp"

namespace pkb {

namespace {

[[noreturn]] void instantiation(const std::string& what) {
    throw EngineError(EngineError::Kind::Instantiation, "insufficiently instantiated: " + what);
}

std::optional<std::vector<Term>> proper_list(const Term& t) {
    auto lv = list_elements(t);
    if (!lv || !lv->proper()) return std::nullopt;
    return std::move(lv->elements);
}

void unify_then(const Term& a, const Term& b, Substitution& s, const std::function<void()>& k) {
    const auto mark = s.mark();
    if (unify_in_place(a, b, s)) {
        k();
        s.undo(mark);
    }
}

}  // namespace

void eval_builtin(const Term& call, Substitution& s, const std::function<void()>& k) {
    const auto& name = call.name();
    const auto& args = call.args();
    if (name == "append" && args.size() == 3) {
        const Term a = apply(s, args[0]);
        if (auto front = proper_list(a)) {
            unify_then(Term::make_list(*front, apply(s, args[1])), args[2], s, k);
            return;
        }
        const Term c = apply(s, args[2]);
        auto whole = proper_list(c);
        if (!whole) instantiation(to_string(call));
        // enumerate every split of the third argument
        for (std::size_t i = 0; i <= whole->size(); ++i) {
            std::span<const Term> all(*whole);
            const auto mark = s.mark();
            if (unify_in_place(args[0], Term::make_list(all.first(i)), s) &&
                unify_in_place(args[1], Term::make_list(all.subspan(i)), s))
                k();
            s.undo(mark);
        }
        return;
    }
    if (name == "append" && args.size() == 2) {
        auto outer = proper_list(apply(s, args[0]));
        if (!outer) instantiation(to_string(call));
        std::vector<Term> flat;
        for (const auto& l : *outer) {
            auto inner = proper_list(l);
            if (!inner) instantiation(to_string(call));
            flat.insert(flat.end(), inner->begin(), inner->end());
        }
        unify_then(Term::make_list(flat), args[1], s, k);
        return;
    }
    if (name == "sort" && args.size() == 2) {
        auto elems = proper_list(apply(s, args[0]));
        if (!elems) instantiation(to_string(call));
        std::stable_sort(elems->begin(), elems->end(),
                         [](const Term& x, const Term& y) { return compare_terms(x, y) < 0; });
        elems->erase(std::unique(elems->begin(), elems->end(),
                                 [](const Term& x, const Term& y) { return compare_terms(x, y) == 0; }),
                     elems->end());
        unify_then(Term::make_list(*elems), args[1], s, k);
        return;
    }
    throw EngineError(EngineError::Kind::Type, "unknown built-in " + name + "/" + std::to_string(args.size()));
}

bool eval_compare(CompareOp op, const Term& lhs, const Term& rhs, const Substitution& s) {
    const Term l = apply(s, lhs);
    const Term r = apply(s, rhs);
    if (!l.is_ground() || !r.is_ground())
        instantiation(to_string(l) + " " + std::string(to_string(op)) + " " + to_string(r));
    if (l.is_number() && r.is_number()) {
        const double x = l.value(), y = r.value();
        switch (op) {
        case CompareOp::Gt: return x > y;
        case CompareOp::Ge: return x >= y;
        case CompareOp::Lt: return x < y;
        case CompareOp::Le: return x <= y;
        case CompareOp::Eq: return x == y;
        case CompareOp::Ne: return x != y;
        }
    }
    if (op == CompareOp::Eq) return l == r;
    if (op == CompareOp::Ne) return l != r;
    throw EngineError(EngineError::Kind::Type, "comparison needs numbers: " + to_string(l) + " " +
                                                   std::string(to_string(op)) + " " + to_string(r));
}

}  // namespace pkb
