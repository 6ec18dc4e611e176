// Rule-based semantic parsing into a beam of scored interpretations.
#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "pkb/semparse.hpp"

namespace pkb {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool entailed(const KnowledgeStore& store, Term goal, const EngineConfig& cfg) {
    auto r = solve(store, GoalExpr::atom(std::move(goal)), cfg);
    for (const auto& a : r.answers)
        if (a.status == Status::Entailed) return true;
    return false;
}

int id_number(const std::string& id) {
    auto p = id.find_last_of('_');
    return p == std::string::npos ? 0 : std::stoi(id.substr(p + 1));
}

void retag(Interpretation& in, const std::string& id) {
    in.id = id;
    for (std::size_t i = 0; i < in.facts.size(); ++i) {
        in.facts[i].id = id + "_f" + std::to_string(i + 1);
        in.facts[i].source = id;
    }
}

void add_fact(Interpretation& in, Term head) {
    for (const auto& f : in.facts)
        if (f.head.term() == head) return;
    Statement s;
    s.head = Atom(std::move(head));
    s.id = in.id + "_f" + std::to_string(in.facts.size() + 1);
    s.source = in.id;
    in.facts.push_back(std::move(s));
}

bool modifier_pos(const std::string& pos) { return pos == "ADJ" || pos == "ADV"; }

struct Candidate {
    std::optional<std::string> concept_name;  // nullopt: the phrase is kept as is
    double prob = 1.0;
};

class Parser {
public:
    Parser(const std::vector<MappingRule>& rules, const KnowledgeStore& store, const ParseConfig& cfg)
        : rules_(rules), store_(store), cfg_(cfg) {}

    Beam run(const Document& doc) {
        Beam beam;
        Interpretation init;
        init.id = "interp_" + std::to_string(++next_id_);
        beam.interpretations.push_back(std::move(init));
        for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
            const Sentence& sent = doc.sentences[si];
            for (auto& in : beam.interpretations) in.sentence_tokens.clear();
            for (const auto& rule : rules_) {
                for (const auto& m : match_rule(rule, sent)) {
                    RuleApplication app{rule.id, si, 0, 0};
                    std::vector<Interpretation> next;
                    for (const auto& in : beam.interpretations) {
                        auto succ = expand(in, rule, m, sent, app.discarded);
                        if (succ.empty()) {
                            next.push_back(in);  // every reading rejected: keep the parent
                        } else if (succ.size() == 1) {
                            next.push_back(std::move(succ.front()));
                        } else {
                            for (auto& s : succ) {
                                retag(s, "interp_" + std::to_string(++next_id_));
                                next.push_back(std::move(s));
                            }
                        }
                    }
                    app.successors = next.size();
                    std::stable_sort(next.begin(), next.end(), [](const Interpretation& a, const Interpretation& b) {
                        if (a.score != b.score) return a.score > b.score;
                        return id_number(a.id) < id_number(b.id);
                    });
                    if (next.size() > cfg_.k) next.resize(cfg_.k);
                    beam.interpretations = std::move(next);
                    beam.log.push_back(app);
                }
            }
        }
        for (auto& in : beam.interpretations) in.sentence_tokens.clear();
        return beam;
    }

private:
    const std::vector<Candidate>& candidates(const DepToken& t) {
        auto it = wsd_.find(t.lemma);
        if (it != wsd_.end()) return it->second;
        std::vector<Candidate> c;
        auto g = ground_phrase(t.lemma, store_, cfg_.engine);
        if (g.empty() && lower(t.text) != t.lemma) g = ground_phrase(lower(t.text), store_, cfg_.engine);
        for (const auto& [name, p] : g) {
            if (c.size() >= cfg_.wsd_limit) break;
            c.push_back({name, p});
        }
        if (c.empty()) c.push_back({std::nullopt, 1.0});
        return wsd_.emplace(t.lemma, std::move(c)).first->second;
    }

    static std::string determiner(const Sentence& s, int token) {
        for (const auto& t : s)
            if (t.head == token && t.dep == "det") return lower(t.lemma);
        return {};
    }

    std::vector<Interpretation> expand(const Interpretation& parent, const MappingRule& rule,
                                       const std::map<std::string, int>& match, const Sentence& sent,
                                       std::size_t& discarded) {
        std::vector<Interpretation> out;
        for (const auto& prod : rule.productions) {
            // tokens needing a sense, in slot order of first use
            std::vector<int> fresh;
            for (const auto& a : prod.atoms)
                for (const auto& arg : a.args()) {
                    const int tok = match.at(arg.name());
                    if (!parent.sentence_tokens.contains(tok) &&
                        std::find(fresh.begin(), fresh.end(), tok) == fresh.end())
                        fresh.push_back(tok);
                }
            std::vector<const std::vector<Candidate>*> options;
            for (int tok : fresh) options.push_back(&candidates(sent[static_cast<std::size_t>(tok)]));

            std::vector<std::size_t> pick(fresh.size(), 0);
            for (bool more = true; more;) {
                Interpretation c = parent;
                c.score *= prod.confidence;
                for (std::size_t i = 0; i < fresh.size(); ++i) {
                    const DepToken& t = sent[static_cast<std::size_t>(fresh[i])];
                    const Candidate& cand = (*options[i])[pick[i]];
                    c.score *= cand.prob;
                    Term term = Term::phrase(t.lemma);
                    if (cand.concept_name) {
                        if (modifier_pos(t.pos)) {
                            term = Term::symbol(*cand.concept_name);
                        } else {
                            term = Term::symbol(instance_for(*cand.concept_name, determiner(sent, t.index), c,
                                                             t.pos == "VERB"));
                        }
                    }
                    c.sentence_tokens[t.index] = term;
                }
                std::vector<Term> produced;
                for (const auto& a : prod.atoms) {
                    std::vector<Term> args;
                    for (const auto& arg : a.args()) args.push_back(c.sentence_tokens.at(match.at(arg.name())));
                    produced.push_back(Term::compound(a.name(), std::move(args)));
                }
                for (const auto& f : produced) add_fact(c, f);

                bool keep = true;
                const KnowledgeStore view = with_interpretation(store_, c);
                for (const auto& f : produced) {
                    const auto v = check_selectional(f, view, cfg_);
                    if (v == SelVerdict::Discard) {
                        keep = false;
                        break;
                    }
                    if (v == SelVerdict::Penalize) c.score *= cfg_.lambda;
                }
                if (keep) {
                    out.push_back(std::move(c));
                } else {
                    ++discarded;
                }

                // odometer over sense choices, last token fastest
                more = false;
                for (std::size_t i = pick.size(); i-- > 0;) {
                    if (++pick[i] < options[i]->size()) {
                        more = true;
                        break;
                    }
                    pick[i] = 0;
                }
            }
        }
        return out;
    }

    const std::vector<MappingRule>& rules_;
    const KnowledgeStore& store_;
    const ParseConfig& cfg_;
    int next_id_ = 0;
    std::unordered_map<std::string, std::vector<Candidate>> wsd_;
};

}  // namespace

std::vector<std::pair<std::string, double>> ground_phrase(std::string_view text, const KnowledgeStore& store,
                                                          const EngineConfig& cfg) {
    std::vector<std::pair<std::string, double>> out;
    auto r = solve(store, GoalExpr::atom(Term::compound("has_name", {Term::variable("C"), Term::phrase(std::string(text))})),
                   cfg);
    for (const auto& a : r.answers) {
        if (a.status != Status::Entailed || a.bindings.empty()) continue;
        const Term& c = a.bindings.front().second;
        if (c.is_symbol()) out.emplace_back(c.name(), a.prob);
    }
    return out;
}

SelVerdict check_selectional(const Term& fact, const KnowledgeStore& store, const ParseConfig& cfg) {
    if (!fact.is_compound() || fact.arity() != 2) return SelVerdict::Keep;
    const Term& event = fact.args()[0];
    const Term& filler = fact.args()[1];
    for (const auto& r : store.restrictions_for(fact.name())) {
        if (!entailed(store, Term::compound("isa", {event, Term::symbol(r.event_concept)}), cfg.engine)) continue;
        if (!entailed(store, Term::compound("isa", {filler, Term::symbol(r.required_type)}), cfg.engine))
            return cfg.strict ? SelVerdict::Discard : SelVerdict::Penalize;
    }
    return SelVerdict::Keep;
}

std::string instance_for(const std::string& concept_name, std::string_view determiner, Interpretation& interp,
                         bool force_new) {
    auto& list = interp.registry[concept_name];
    const bool fresh = force_new || determiner == "a" || determiner == "an" || determiner == "another";
    if (!fresh && !list.empty()) return list.back();
    std::string name = concept_name + "_ins" + std::to_string(list.size() + 1);
    list.push_back(name);
    add_fact(interp, Term::compound("isa", {Term::symbol(name), Term::symbol(concept_name)}));
    return name;
}

Beam parse_passage(const Document& doc, const std::vector<MappingRule>& rules, const KnowledgeStore& store,
                   const ParseConfig& cfg) {
    if (cfg.k == 0) throw std::invalid_argument("beam width k must be at least 1");
    return Parser(rules, store, cfg).run(doc);
}

KnowledgeStore with_interpretation(const KnowledgeStore& store, const Interpretation& interp,
                                   const std::vector<Statement>& extra) {
    KnowledgeStore view = store;
    view.clear_session();
    for (const auto& f : interp.facts) view.add_statement(f, Layer::Session);
    for (const auto& f : extra) view.add_statement(f, Layer::Session);
    return view;
}

}  // namespace pkb
