#include "pkb/store.hpp"

#include <algorithm>

namespace pkb {

Atom::Atom(Term t) : term_(std::move(t)) {
    if (!term_.is_callable()) throw StoreError("atom must be a symbol or compound: " + to_string(term_));
}

Atom::Atom(std::string predicate, std::vector<Term> args)
    : Atom(Term::compound(std::move(predicate), std::move(args))) {}

std::string_view to_string(CompareOp op) {
    switch (op) {
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "=<";
    case CompareOp::Eq: return "==";
    case CompareOp::Ne: return "\\==";
    }
    return "?";
}

GoalExpr GoalExpr::atom(Term t) {
    GoalExpr g;
    g.kind = Kind::Atom;
    g.term = std::move(t);
    return g;
}

GoalExpr GoalExpr::builtin(Term t) {
    GoalExpr g;
    g.kind = Kind::Builtin;
    g.term = std::move(t);
    return g;
}

GoalExpr GoalExpr::conj(std::vector<GoalExpr> gs) {
    if (gs.size() == 1) return std::move(gs.front());
    GoalExpr g;
    g.kind = Kind::And;
    g.children = std::move(gs);
    return g;
}

GoalExpr GoalExpr::disj(std::vector<GoalExpr> gs) {
    if (gs.size() == 1) return std::move(gs.front());
    GoalExpr g;
    g.kind = Kind::Or;
    g.children = std::move(gs);
    return g;
}

GoalExpr GoalExpr::negation(GoalExpr inner) {
    GoalExpr g;
    g.kind = Kind::Not;
    g.children.push_back(std::move(inner));
    return g;
}

GoalExpr GoalExpr::compare(CompareOp op, Term l, Term r) {
    GoalExpr g;
    g.kind = Kind::Compare;
    g.op = op;
    g.lhs = std::move(l);
    g.rhs = std::move(r);
    return g;
}

void GoalExpr::collect_vars(std::vector<std::string>& out) const {
    switch (kind) {
    case Kind::Atom:
    case Kind::Builtin:
        term.collect_vars(out);
        break;
    case Kind::Compare:
        lhs.collect_vars(out);
        rhs.collect_vars(out);
        break;
    default:
        for (const auto& c : children) c.collect_vars(out);
    }
}

bool GoalExpr::operator==(const GoalExpr& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
    case Kind::Atom:
    case Kind::Builtin:
        return term == o.term;
    case Kind::Compare:
        return op == o.op && lhs == o.lhs && rhs == o.rhs;
    default:
        return children == o.children;
    }
}

bool is_builtin(std::string_view name, std::size_t arity) {
    return (name == "append" && (arity == 2 || arity == 3)) || (name == "sort" && arity == 2);
}

std::vector<const Statement*> LookupResult::to_vector() const {
    std::vector<const Statement*> v(base.begin(), base.end());
    v.insert(v.end(), session.begin(), session.end());
    return v;
}

struct KnowledgeStore::LayerData {
    std::vector<std::shared_ptr<const Statement>> statements;
    std::unordered_map<std::string, std::vector<const Statement*>> index;
    std::unordered_map<std::string, const Statement*> by_id;
    std::size_t fact_counter = 0;
    std::size_t clause_counter = 0;

    // base-only metadata
    bool sealed = false;
    std::string default_source = "kb";
    std::set<std::pair<std::string, std::size_t>> traced;
    std::vector<SelRestriction> restrictions;
};

namespace {
std::string index_key(std::string_view pred, std::size_t arity) {
    std::string k(pred);
    k += '/';
    k += std::to_string(arity);
    return k;
}
}  // namespace

KnowledgeStore::KnowledgeStore()
    : base_(std::make_shared<LayerData>()), session_(std::make_shared<LayerData>()) {}

KnowledgeStore::LayerData& KnowledgeStore::writable_base() {
    if (base_->sealed) throw StoreError("base layer is sealed");
    if (base_.use_count() > 1) base_ = std::make_shared<LayerData>(*base_);
    return *base_;
}

std::string KnowledgeStore::add_statement(Statement s, Layer layer) {
    if (!(s.prob >= 0.0 && s.prob <= 1.0))
        throw StoreError("probability outside [0,1]: " + format_number(s.prob));
    if (layer == Layer::Session && session_.use_count() > 1) session_ = std::make_shared<LayerData>(*session_);
    LayerData& L = layer == Layer::Base ? writable_base() : *session_;

    if (!s.id) {
        const bool fact = s.is_fact();
        std::size_t& counter = fact ? L.fact_counter : L.clause_counter;
        std::string prefix = layer == Layer::Base ? (fact ? "f_" : "c_") : (fact ? "sf_" : "sc_");
        do {
            s.id = prefix + std::to_string(++counter);
        } while (find(*s.id));
    } else if (find(*s.id)) {
        throw StoreError("duplicate statement id: " + *s.id);
    }
    if (!s.source) s.source = base_->default_source;

    auto owned = std::make_shared<const Statement>(std::move(s));
    const Statement* ptr = owned.get();
    L.statements.push_back(std::move(owned));
    L.index[index_key(ptr->head.predicate(), ptr->head.arity())].push_back(ptr);
    L.by_id.emplace(*ptr->id, ptr);
    return *ptr->id;
}

LookupResult KnowledgeStore::lookup(std::string_view predicate, std::size_t arity) const {
    LookupResult r;
    const auto key = index_key(predicate, arity);
    if (auto it = base_->index.find(key); it != base_->index.end()) r.base = it->second;
    if (auto it = session_->index.find(key); it != session_->index.end()) r.session = it->second;
    return r;
}

const Statement* KnowledgeStore::find(std::string_view id) const {
    const std::string k(id);
    if (auto it = base_->by_id.find(k); it != base_->by_id.end()) return it->second;
    if (auto it = session_->by_id.find(k); it != session_->by_id.end()) return it->second;
    return nullptr;
}

void KnowledgeStore::seal() { writable_base().sealed = true; }
bool KnowledgeStore::sealed() const { return base_->sealed; }

void KnowledgeStore::clear_session() { session_ = std::make_shared<LayerData>(); }
std::size_t KnowledgeStore::session_size() const { return session_->statements.size(); }
std::size_t KnowledgeStore::size() const { return base_->statements.size() + session_->statements.size(); }

std::vector<const Statement*> KnowledgeStore::statements() const {
    std::vector<const Statement*> out;
    out.reserve(size());
    for (const auto& s : base_->statements) out.push_back(s.get());
    for (const auto& s : session_->statements) out.push_back(s.get());
    return out;
}

void KnowledgeStore::set_default_source(std::string src) { writable_base().default_source = std::move(src); }
const std::string& KnowledgeStore::default_source() const { return base_->default_source; }

std::set<std::string> KnowledgeStore::sources() const {
    std::set<std::string> out;
    for (const auto* s : statements()) out.insert(*s->source);
    return out;
}

void KnowledgeStore::declare_traced(std::string predicate, std::size_t surface_arity) {
    if (surface_arity < 3) throw StoreError("traced predicate needs at least 3 arguments: " + predicate);
    writable_base().traced.emplace(std::move(predicate), surface_arity);
}

bool KnowledgeStore::is_traced(std::string_view predicate, std::size_t surface_arity) const {
    return base_->traced.contains({std::string(predicate), surface_arity});
}

const std::set<std::pair<std::string, std::size_t>>& KnowledgeStore::traced() const { return base_->traced; }

void KnowledgeStore::add_restriction(SelRestriction r) {
    auto& L = writable_base();
    if (std::find(L.restrictions.begin(), L.restrictions.end(), r) == L.restrictions.end())
        L.restrictions.push_back(std::move(r));
}

std::vector<SelRestriction> KnowledgeStore::restrictions() const { return base_->restrictions; }

std::vector<SelRestriction> KnowledgeStore::restrictions_for(std::string_view role) const {
    std::vector<SelRestriction> out;
    for (const auto& r : base_->restrictions)
        if (r.role == role) out.push_back(r);
    return out;
}

void KnowledgeStore::set_ontology(std::shared_ptr<const Ontology> ont) { ontology_ = std::move(ont); }
const Ontology* KnowledgeStore::ontology() const { return ontology_.get(); }

}  // namespace pkb
