// pkb: command-line front end for the probabilistic knowledge base.
#include <unistd.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pkb/engine.hpp"
#include "pkb/format.hpp"
#include "pkb/ontology.hpp"
#include "pkb/parser.hpp"
#include "pkb/semparse.hpp"

namespace fs = std::filesystem;
using namespace pkb;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInput = 2, kInternal = 3 };

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Common {
    std::vector<std::string> kb;
    std::string ontology;
    int depth = 12;
    std::string format = "text";
    bool explain = false;
    std::size_t top = 0;  // 0: all
    bool inherit = false;
};

void add_kb_options(CLI::App* cmd, Common& c) {
    cmd->add_option("--kb", c.kb, "knowledge-base file (repeatable; searched on PKB_PATH)")->allow_extra_args(false);
    cmd->add_option("--ontology", c.ontology, "ontology file (.ont)");
    cmd->add_flag("--inherit", c.inherit, "add inheritance clauses generated from the ontology");
    cmd->add_option("--depth", c.depth, "clause-expansion depth limit")->check(CLI::PositiveNumber);
}

void add_output_options(CLI::App* cmd, Common& c) {
    cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "structured", "json"}));
    cmd->add_flag("--explain", c.explain, "print derivation traces");
    cmd->add_option("--top", c.top, "show at most N answers")->check(CLI::PositiveNumber);
}

OutputFormat output_format(const Common& c) { return c.format == "text" ? OutputFormat::Text : OutputFormat::Json; }

std::vector<std::string> search_path() {
    std::vector<std::string> dirs;
    const char* env = std::getenv("PKB_PATH");
    if (!env) return dirs;
    std::stringstream ss(env);
    std::string d;
    while (std::getline(ss, d, ':'))
        if (!d.empty()) dirs.push_back(d);
    return dirs;
}

std::string resolve(const std::string& name) {
    if (fs::exists(name)) return name;
    if (!fs::path(name).is_absolute()) {
        for (const auto& dir : search_path()) {
            for (const auto& cand : {fs::path(dir) / name, fs::path(dir) / (name + ".pkb")})
                if (fs::is_regular_file(cand)) return cand.string();
        }
    }
    throw InputError("cannot find " + name + " (looked in the working directory and PKB_PATH)");
}

std::vector<std::string> kb_files(const Common& c) {
    std::vector<std::string> out;
    for (const auto& k : c.kb) out.push_back(resolve(k));
    if (out.empty()) {
        // without --kb, plain files on PKB_PATH form the default KB
        for (const auto& e : search_path())
            if (fs::is_regular_file(e)) out.push_back(e);
    }
    return out;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

EngineConfig engine_config(const Common& c) {
    EngineConfig cfg;
    cfg.depth_limit = c.depth;
    return cfg;
}

KnowledgeStore load_kb(const Common& c, bool require_kb) {
    KnowledgeStore store;
    const auto files = kb_files(c);
    if (require_kb && files.empty() && c.ontology.empty())
        throw CLI::ValidationError("--kb", "at least one --kb file is required (or set PKB_PATH)");
    for (const auto& f : files) load_program(store, read_text(f), f);
    if (!c.ontology.empty()) {
        auto ont = std::make_shared<Ontology>(Ontology::load(resolve(c.ontology)));
        if (c.inherit)
            for (auto& s : generate_inheritance_clauses(ont->inheritable_predicates())) {
                if (s.id && store.find(*s.id)) continue;
                store.add_statement(std::move(s));
            }
        store.set_ontology(std::move(ont));
    }
    store.seal();
    return store;
}

std::string run_query(const KnowledgeStore& store, const std::string& text, const Common& c) {
    std::vector<TraceVars> tv;
    const auto goals = parse_query(text, store, &tv);
    const auto r = solve(store, goals, engine_config(c));
    QueryPrintOptions opts;
    opts.format = output_format(c);
    opts.explain = c.explain;
    if (c.top) opts.top = c.top;
    std::string out;
    if (opts.format == OutputFormat::Text) out += "?- " + text + "\n";
    return out + render_query(text, r, tv, store, opts);
}

// ---- subcommands ----------------------------------------------------------

int cmd_check(const Common& c, const std::vector<std::string>& files) {
    std::vector<std::string> kbs = c.kb;
    std::vector<std::string> onts;
    std::vector<std::string> corpora;
    if (!c.ontology.empty()) onts.push_back(c.ontology);
    for (const auto& f : files) {
        const auto ext = fs::path(f).extension().string();
        (ext == ".ont" ? onts : ext == ".json" ? corpora : kbs).push_back(f);
    }
    if (kbs.empty() && onts.empty() && corpora.empty())
        throw CLI::ValidationError("check", "nothing to check: give KB, ontology or corpus files");
    int errors = 0;
    auto report = [&](const std::string& what) {
        std::cout << "error: " << what << "\n";
        ++errors;
    };
    for (const auto& k : kbs) {
        try {
            KnowledgeStore store;
            const auto path = resolve(k);
            const auto ids = load_program(store, read_text(path), path);
            std::cout << "ok " << path << " (" << ids.size() << " statements)\n";
        } catch (const ParseError& e) {
            report(e.what());
        } catch (const InputError& e) {
            report(e.what());
        }
    }
    for (const auto& o : onts) {
        try {
            const auto path = resolve(o);
            const auto ont = Ontology::load(path);
            std::cout << "ok " << path << " (" << ont.nodes().size() << " concept groups)\n";
        } catch (const OntologyError& e) {
            report(e.what());
        } catch (const InputError& e) {
            report(e.what());
        }
    }
    for (const auto& d : corpora) {
        try {
            const auto doc = load_document(resolve(d));
            std::cout << "ok " << d << " (" << doc.sentences.size() << " sentences)\n";
        } catch (const CorpusError& e) {
            report(e.what());
        } catch (const InputError& e) {
            report(e.what());
        }
    }
    return errors ? kInput : kOk;
}

int cmd_query(const Common& c, const std::vector<std::string>& scenarios, const std::vector<std::string>& queries) {
    KnowledgeStore store = load_kb(c, true);
    for (const auto& s : scenarios) {
        const auto path = resolve(s);
        load_program(store, read_text(path), path, Layer::Session);
    }
    for (const auto& q : queries) std::cout << run_query(store, q, c);
    return kOk;
}

int cmd_repl(const Common& c) {
    KnowledgeStore store = load_kb(c, false);
    const bool interactive = isatty(STDIN_FILENO);
    std::string pending, line;
    auto prompt = [&] {
        if (interactive) std::cout << (pending.empty() ? "?- " : "|  ") << std::flush;
    };
    prompt();
    while (std::getline(std::cin, line)) {
        if (auto p = line.find('%'); p != std::string::npos && line.find('"') == std::string::npos) line.erase(p);
        pending += (pending.empty() ? "" : "\n") + line;
        auto last = pending.find_last_not_of(" \t\r\n");
        if (last == std::string::npos) {
            pending.clear();
            prompt();
            continue;
        }
        if (pending[last] != '.' && pending[last] != '?') {
            prompt();
            continue;
        }
        std::string input = pending.substr(pending.find_first_not_of(" \t\r\n"));
        pending.clear();
        try {
            if (input == "quit." || input == "exit." || input == "halt.") break;
            if (input == "reset.") {
                store.clear_session();
                std::cout << "session cleared\n";
            } else if (input.rfind("assert ", 0) == 0) {
                const auto ids = load_program(store, input.substr(7), "<repl>", Layer::Session);
                std::cout << "asserted " << ids.size() << " statement(s)\n";
            } else if (input.rfind("load ", 0) == 0) {
                auto name = input.substr(5, input.size() - 6);
                name.erase(0, name.find_first_not_of(" \t\""));
                name.erase(name.find_last_not_of(" \t\"") + 1);
                const auto path = resolve(name);
                const auto ids = load_program(store, read_text(path), path, Layer::Session);
                std::cout << "loaded " << ids.size() << " statement(s) from " << path << "\n";
            } else if (input == "help.") {
                std::cout << "goal, goal ?        run a query\n"
                             "assert <stmt>.      add to the session\n"
                             "load <file>.        add a file to the session\n"
                             "reset.              clear the session\n"
                             "quit.               leave\n";
            } else {
                std::cout << run_query(store, input, c);
            }
        } catch (const ParseError& e) {
            std::cout << "error: " << e.what() << "\n";
        } catch (const StoreError& e) {
            std::cout << "error: " << e.what() << "\n";
        } catch (const EngineError& e) {
            std::cout << "error: " << e.what() << "\n";
        } catch (const InputError& e) {
            std::cout << "error: " << e.what() << "\n";
        }
        prompt();
    }
    return kOk;
}

int cmd_ingest(const Common& c, const std::string& csv, const std::string& out) {
    KnowledgeStore store = load_kb(c, false);
    std::vector<CrowdWarning> warnings;
    const auto rows = parse_crowd_csv(read_text(resolve(csv)), warnings);
    auto result = ingest_crowdsource(rows, store, store.ontology());
    result.report.warnings.insert(result.report.warnings.begin(), warnings.begin(), warnings.end());
    std::string text = "% Crowdsourced facts from " + fs::path(csv).filename().string() + "\n";
    for (const auto& s : result.facts) text += print_statement(s) + "\n";
    if (out.empty()) {
        std::cout << text;
        std::cerr << render_ingest(result.report, output_format(c));
    } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw InputError("cannot write " + out);
        f << text;
        std::cout << render_ingest(result.report, output_format(c));
    }
    return kOk;
}

struct QaOptions {
    std::string rules, templates, questions_file;
    std::vector<std::string> questions, corpora;
    std::size_t k = 3;
    bool strict = true, lenient = false;
};

int cmd_qa(const Common& c, const QaOptions& o) {
    KnowledgeStore store = load_kb(c, true);
    const auto rules = load_rules(resolve(o.rules));
    std::vector<QuestionTemplate> templates;
    if (!o.templates.empty()) templates = load_templates(resolve(o.templates));
    std::vector<std::string> questions = o.questions;
    if (!o.questions_file.empty()) {
        std::istringstream in(read_text(resolve(o.questions_file)));
        std::string q;
        while (std::getline(in, q))
            if (q.find_first_not_of(" \t\r") != std::string::npos && q[0] != '#') questions.push_back(q);
    }
    if (!questions.empty() && templates.empty())
        throw CLI::ValidationError("--templates", "questions need a templates file");
    ParseConfig cfg;
    cfg.k = o.k;
    cfg.strict = !o.lenient;
    cfg.engine = engine_config(c);
    const auto fmt = output_format(c);
    for (const auto& path : o.corpora) {
        const auto doc = load_document(resolve(path));
        const std::string name = doc.name.empty() ? path : doc.name;
        const auto beam = parse_passage(doc, rules, store, cfg);
        std::cout << render_beam(name, beam, fmt);
        for (const auto& q : questions) std::cout << render_qa(name, answer_question(q, templates, beam, store, cfg), fmt, c.explain);
    }
    return kOk;
}

int cmd_ontology(const Common& c, const std::string& file, const std::string& node, bool clauses) {
    const auto path = resolve(file.empty() ? c.ontology : file);
    const auto ont = Ontology::load(path);
    if (!node.empty()) {
        const auto* n = ont.find(node);
        if (!n) throw InputError("unknown concept group " + node);
        const auto anc = ont.ancestors(node);
        std::cout << n->name << " level " << n->level << "\n";
        std::cout << "ancestors:";
        for (const auto& a : anc) std::cout << " " << a;
        std::cout << "\npredicates:\n";
        for (const auto& p : ont.effective_predicates(node)) {
            std::cout << "  " << p.name << "/" << p.arity << (p.inheritable ? "" : " noinherit");
            if (!p.description.empty()) std::cout << "  \"" << p.description << "\"";
            std::cout << "\n";
        }
    } else if (clauses) {
        for (const auto& s : generate_inheritance_clauses(ont.inheritable_predicates()))
            std::cout << print_statement(s) << "\n";
    } else {
        std::cout << ont.to_text();
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pkb: probabilistic commonsense knowledge base"};
    app.require_subcommand(1);
    Common c;

    auto* check = app.add_subcommand("check", "parse and validate KB, ontology and corpus files");
    std::vector<std::string> check_files;
    add_kb_options(check, c);
    check->add_option("files", check_files, "files to check (.pkb, .ont, .json)");

    auto* query = app.add_subcommand("query", "answer one or more queries");
    std::vector<std::string> scenarios, queries;
    add_kb_options(query, c);
    add_output_options(query, c);
    query->add_option("--scenario", scenarios, "session facts for this run (repeatable)")->allow_extra_args(false);
    query->add_option("queries", queries, "queries such as 'can(X,move)?'")->required();

    auto* repl = app.add_subcommand("repl", "interactive session");
    add_kb_options(repl, c);
    add_output_options(repl, c);

    auto* ingest = app.add_subcommand("ingest", "turn crowd ratings (CSV) into KB facts");
    std::string csv, out;
    add_kb_options(ingest, c);
    ingest->add_option("csv", csv, "ratings file: concept,predicate,object,r1,r2,...")->required();
    ingest->add_option("-o,--out", out, "write facts here (default: stdout, report on stderr)");
    ingest->add_option("--format", c.format, "report format")->check(CLI::IsMember({"text", "structured", "json"}));

    auto* qa = app.add_subcommand("qa", "parse passages and answer questions");
    QaOptions qo;
    add_kb_options(qa, c);
    add_output_options(qa, c);
    qa->add_option("--rules", qo.rules, "mapping-rule file")->required();
    qa->add_option("--templates", qo.templates, "question-template file");
    qa->add_option("-q,--question", qo.questions, "question (repeatable)")->allow_extra_args(false);
    qa->add_option("--questions", qo.questions_file, "file with one question per line");
    qa->add_option("--k", qo.k, "beam width")->check(CLI::PositiveNumber);
    auto* strict = qa->add_flag("--strict", qo.strict, "discard readings that fail a restriction (default)");
    auto* lenient = qa->add_flag("--lenient", qo.lenient, "penalise readings that fail a restriction");
    strict->excludes(lenient);
    qa->add_option("corpus", qo.corpora, "dependency-tree documents (.json)")->required();

    auto* ontology = app.add_subcommand("ontology", "validate and inspect an ontology");
    std::string ont_file, node;
    bool clauses = false;
    ontology->add_option("file", ont_file, "ontology file (.ont)");
    ontology->add_option("--ontology", c.ontology, "ontology file (.ont)");
    ontology->add_option("--node", node, "show ancestors and effective predicates of a concept group");
    ontology->add_flag("--clauses", clauses, "print generated inheritance clauses");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (*check) return cmd_check(c, check_files);
        if (*query) return cmd_query(c, scenarios, queries);
        if (*repl) return cmd_repl(c);
        if (*ingest) return cmd_ingest(c, csv, out);
        if (*qa) return cmd_qa(c, qo);
        if (*ontology) {
            if (ont_file.empty() && c.ontology.empty())
                throw CLI::ValidationError("ontology", "an ontology file is required");
            return cmd_ontology(c, ont_file, node, clauses);
        }
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const OntologyError& e) {
        std::cerr << "error: " << e.what() << (e.line() ? " (line " + std::to_string(e.line()) + ")" : "") << "\n";
        return kInput;
    } catch (const CorpusError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const RuleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const StoreError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const EngineError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}
