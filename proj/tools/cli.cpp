#include "cli.hpp"

#include "tmem/engine.hpp"
#include "tmem/error.hpp"
#include "tmem/eval.hpp"
#include "tmem/service.hpp"
#include "tmem/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace tmem {

namespace {

using json = nlohmann::json;

struct GlobalOptions {
    std::string db = "tm.db";
    std::string global_db;
    std::size_t order = kDefaultOrder;
    double k = kDefaultMultiplier;
    std::string lexicon;
    std::string rules;
    std::size_t limit = 5;
    std::uint64_t seed = 7;
    std::string format = "text";
    std::string source_lang = "en";
    std::string target_lang = "hi";

    bool structured() const { return format == "structured"; }

    EngineConfig engine_config() const
    {
        EngineConfig c;
        c.local_path = db;
        if (!global_db.empty()) {
            c.global_path = global_db;
        }
        c.order = order;
        c.k = k;
        if (!lexicon.empty()) {
            c.lexicon_path = lexicon;
        }
        if (!rules.empty()) {
            c.rules_path = rules;
        }
        c.source_lang = source_lang;
        c.target_lang = target_lang;
        return c;
    }
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::io, "cannot read " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& contents)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << contents) || !out.flush()) {
        throw Error(ErrorCode::io, "cannot write " + path);
    }
}

std::string join_args(const std::vector<std::string>& words)
{
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) {
            out += ' ';
        }
        out += w;
    }
    return out;
}

std::string fixed(double value, int digits = 4)
{
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << value;
    return s.str();
}

json row_json(const MatchRow& r)
{
    return {{"rank", r.rank},
            {"score", r.score.value},
            {"kind", std::string(to_string(r.kind))},
            {"unit_id", r.unit_id},
            {"source", r.source},
            {"target", r.target}};
}

void print_row(std::ostream& out, const MatchRow& r)
{
    out << r.rank << '\t' << fixed(r.score.value) << '\t' << to_string(r.kind) << '\t' << r.unit_id << '\t'
        << r.source << '\t' << r.target << '\n';
}

Scope scope_or_throw(const std::string& text)
{
    if (auto s = parse_scope(text)) {
        return *s;
    }
    throw Error(ErrorCode::validation, "scope must be local or global");
}

int cmd_query(const GlobalOptions& g, const std::vector<std::string>& words, std::ostream& out)
{
    Engine engine(g.engine_config());
    const auto split = engine.split(join_args(words));
    json sentences = json::array();
    for (const auto& seg : split.segments) {
        const auto rows = engine.query(seg.raw, g.limit);
        if (g.structured()) {
            json results = json::array();
            for (const auto& r : rows) {
                results.push_back(row_json(r));
            }
            sentences.push_back({{"text", seg.raw}, {"results", results}});
            continue;
        }
        if (split.segments.size() > 1) {
            out << "# " << seg.raw << '\n';
        }
        if (rows.empty()) {
            out << "no match\n";
        }
        for (const auto& r : rows) {
            print_row(out, r);
        }
    }
    if (g.structured()) {
        out << json{{"k", g.k}, {"order", g.order}, {"sentences", sentences}}.dump(2) << '\n';
    }
    return 0;
}

int cmd_suggest(const GlobalOptions& g, const std::vector<std::string>& words, std::ostream& out)
{
    Engine engine(g.engine_config());
    const auto split = engine.split(join_args(words));
    json sentences = json::array();
    for (const auto& seg : split.segments) {
        const auto view = engine.suggest(seg.raw, g.limit);
        if (g.structured()) {
            json sm = json::array();
            for (const auto& r : view.sentence_matches) {
                sm.push_back(row_json(r));
            }
            json pm = json::array();
            for (const auto& p : view.phrase_matches) {
                json sugg = json::array();
                for (const auto& s : p.suggestions) {
                    sugg.push_back(row_json(s));
                }
                pm.push_back({{"phrase", p.phrase}, {"span", {p.span.start, p.span.end}}, {"suggestions", sugg}});
            }
            sentences.push_back({{"text", seg.raw},
                                 {"primary", view.primary ? row_json(*view.primary) : json()},
                                 {"sentence_matches", sm},
                                 {"phrase_matches", pm}});
            continue;
        }
        out << "# " << seg.raw << '\n';
        if (view.sentence_matches.empty() && view.phrase_matches.empty()) {
            out << "no suggestions: translate from scratch\n";
            continue;
        }
        if (view.primary) {
            out << "exact: " << view.primary->target << '\n';
        }
        for (const auto& r : view.sentence_matches) {
            print_row(out, r);
        }
        for (const auto& p : view.phrase_matches) {
            out << "phrase [" << p.span.start << ',' << p.span.end << "] " << p.phrase << '\n';
            for (const auto& s : p.suggestions) {
                out << "  ";
                print_row(out, s);
            }
        }
    }
    if (g.structured()) {
        out << json{{"k", g.k}, {"order", g.order}, {"sentences", sentences}}.dump(2) << '\n';
    }
    return 0;
}

int cmd_commit(const GlobalOptions& g, const std::string& source, const std::string& target, const std::string& scope,
               const std::string& author, std::ostream& out)
{
    Engine engine(g.engine_config());
    CommitRequest req;
    req.source = source;
    req.target = target;
    req.scope = scope_or_throw(scope);
    req.author = author;
    req.source_lang = g.source_lang;
    req.target_lang = g.target_lang;
    const auto result = engine.commit(req);
    if (g.structured()) {
        out << json{{"created", result.created}, {"unit_id", result.unit.id}}.dump() << '\n';
    } else {
        out << (result.created ? "committed " : "unchanged ") << result.unit.id << '\n';
    }
    return 0;
}

int cmd_import(const GlobalOptions& g, const std::string& file, const std::string& scope, std::ostream& out)
{
    Engine engine(g.engine_config());
    const auto summary = engine.import_tmx(read_file(file), scope_or_throw(scope));
    if (g.structured()) {
        out << json{{"added", summary.added}, {"skipped", summary.skipped}, {"malformed", summary.malformed}}.dump()
            << '\n';
    } else {
        out << "added " << summary.added << ", skipped " << summary.skipped << ", malformed " << summary.malformed
            << '\n';
    }
    return 0;
}

int cmd_export(const GlobalOptions& g, const std::string& scope, const std::string& output, std::ostream& out)
{
    Engine engine(g.engine_config());
    ExportScope s = ExportScope::all;
    if (scope == "local") {
        s = ExportScope::local;
    } else if (scope == "global") {
        s = ExportScope::global;
    } else if (scope != "all") {
        throw Error(ErrorCode::validation, "scope must be local, global or all");
    }
    const auto tmx = engine.export_tmx(s);
    if (output.empty()) {
        out << tmx;
    } else {
        write_file(output, tmx);
    }
    return 0;
}

int cmd_stats(const GlobalOptions& g, std::ostream& out)
{
    Engine engine(g.engine_config());
    const auto s = engine.stats();
    if (g.structured()) {
        out << json{{"units", s.units},
                    {"local_units", s.local_units},
                    {"global_units", s.global_units},
                    {"grams", s.grams},
                    {"words", s.words},
                    {"k", g.k},
                    {"order", g.order}}
                   .dump()
            << '\n';
    } else {
        out << "units\t" << s.units << "\nlocal\t" << s.local_units << "\nglobal\t" << s.global_units << "\ngrams\t"
            << s.grams << "\nwords\t" << s.words << "\nk\t" << g.k << "\norder\t" << g.order << '\n';
    }
    return 0;
}

std::vector<std::size_t> parse_sizes(const std::string& text)
{
    std::vector<std::size_t> sizes;
    std::istringstream in(text);
    for (std::string part; std::getline(in, part, ',');) {
        try {
            std::size_t used = 0;
            sizes.push_back(std::stoul(part, &used));
            if (used != part.size()) {
                throw std::invalid_argument(part);
            }
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::validation, "--sizes expects three comma-separated counts");
        }
    }
    if (sizes.size() != 3) {
        throw Error(ErrorCode::validation, "--sizes expects three comma-separated counts");
    }
    return sizes;
}

int cmd_make_testsets(const GlobalOptions& g, const std::string& out_dir, const std::string& sizes_text,
                      std::size_t synthesize, std::ostream& out)
{
    const auto s = parse_sizes(sizes_text);
    const TestSetSizes sizes{s[0], s[1], s[2]};
    auto store = TmStore::open(g.db);

    std::vector<UnitId> pool;
    if (synthesize > 0) {
        std::vector<CommitRequest> requests;
        for (auto& p : synthesize_corpus(synthesize, g.seed)) {
            requests.push_back({std::move(p.source), std::move(p.target), g.source_lang, g.target_lang,
                                Scope::local, "synthetic", Origin::imported});
        }
        const auto oov_start = requests.size();
        for (auto& p : synthesize_oov(sizes.unseen, g.seed ^ 0x9e3779b97f4a7c15ULL)) {
            requests.push_back({std::move(p.source), std::move(p.target), g.source_lang, g.target_lang,
                                Scope::local, "synthetic", Origin::imported});
        }
        const auto results = store.commit_all(requests);
        for (std::size_t i = oov_start; i < results.size(); ++i) {
            pool.push_back(results[i].unit.id);
        }
    }

    const auto sets = make_testsets(store.units(), sizes, g.seed, pool);
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    auto write_set = [&](const char* name, const std::vector<TestLine>& lines) {
        std::ostringstream buf;
        write_testset(buf, lines);
        write_file((dir / name).string(), buf.str());
    };
    write_set("set_a.tsv", sets.complete);
    write_set("set_b.tsv", sets.partial);
    write_set("set_c.tsv", sets.unseen);
    store.remove_all(sets.held_out);

    out << "wrote " << sets.complete.size() << " complete, " << sets.partial.size() << " partial, "
        << sets.unseen.size() << " held-out sentences to " << out_dir << "; " << store.size()
        << " units remain in " << g.db << '\n';
    return 0;
}

int cmd_eval(const GlobalOptions& g, const std::vector<std::string>& files, const std::string& trace_path,
             std::ostream& out)
{
    Engine engine(g.engine_config());
    std::vector<EvalResult> results;
    for (const auto& file : files) {
        std::ifstream in(file, std::ios::binary);
        if (!in) {
            throw Error(ErrorCode::io, "cannot read " + file);
        }
        const auto parsed = read_testset(in);
        const auto name = std::filesystem::path(file).stem().string();
        results.push_back(engine.with_index([&](const TmIndex& index, const Chunker& chunker) {
            return evaluate(index, chunker, parsed, name, g.limit, g.source_lang);
        }));
    }

    if (!trace_path.empty()) {
        std::ostringstream trace;
        trace << "set\tline\texact\tcovered\tbest_correct\tlatency_ms\tsource\tbest_target\n";
        for (const auto& r : results) {
            for (const auto& t : r.trace) {
                trace << r.row.name << '\t' << t.line_no << '\t' << t.exact << '\t' << t.covered << '\t'
                      << t.best_correct << '\t' << fixed(t.latency_ms, 3) << '\t' << t.source << '\t'
                      << t.best_target << '\n';
            }
        }
        write_file(trace_path, trace.str());
    }

    if (g.structured()) {
        json rows = json::array();
        for (const auto& r : results) {
            rows.push_back({{"set", r.row.name},
                            {"count", r.row.count},
                            {"malformed", r.row.malformed},
                            {"exact_rate", r.row.exact_rate},
                            {"coverage_rate", r.row.coverage_rate},
                            {"best_accuracy", r.row.best_accuracy},
                            {"mean_latency_ms", r.row.mean_latency_ms},
                            {"p95_latency_ms", r.row.p95_latency_ms}});
        }
        out << json{{"rows", rows}}.dump(2) << '\n';
        return 0;
    }
    out << "set\tcount\tmalformed\texact\tcoverage\tbest_acc\tmean_ms\tp95_ms\n";
    for (const auto& r : results) {
        out << r.row.name << '\t' << r.row.count << '\t' << r.row.malformed << '\t' << fixed(r.row.exact_rate, 2)
            << '\t' << fixed(r.row.coverage_rate, 2) << '\t' << fixed(r.row.best_accuracy, 2) << '\t'
            << fixed(r.row.mean_latency_ms, 3) << '\t' << fixed(r.row.p95_latency_ms, 3) << '\n';
    }
    out << "# partial-match sets built by make-testsets are seeded word perturbations of TM sources\n";
    return 0;
}

HttpServer* g_server = nullptr;

extern "C" void on_signal(int)
{
    if (g_server != nullptr) {
        g_server->stop();
    }
}

int cmd_serve(const GlobalOptions& g, const std::string& host, int port, const std::vector<std::string>& cors,
              std::ostream& out, std::ostream& err)
{
    Engine engine(g.engine_config());
    HttpServer server(engine, {host, port, cors});
    const int bound = server.bind();
    if (bound < 0) {
        err << "tm: cannot bind " << host << ':' << port << '\n';
        return 1;
    }
    out << "serving " << engine.stats().units << " units on http://" << host << ':' << bound << std::endl;
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    server.listen();
    g_server = nullptr;
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Translation memory with trigram fuzzy matching and chunk-anchored phrase suggestions", "tm"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--db", g.db, "Local store file")->capture_default_str();
    app.add_option("--global-db", g.global_db, "Shared (global) store file");
    app.add_option("--order", g.order, "Word n-gram order")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--k", g.k, "Similarity multiplier")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--lexicon", g.lexicon, "Part-of-speech lexicon (word<TAB>TAG)")->check(CLI::ExistingFile);
    app.add_option("--rules", g.rules, "Sentence segmentation rules")->check(CLI::ExistingFile);
    app.add_option("--limit", g.limit, "Results per list")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
    app.add_option("--format", g.format, "Output format")
        ->capture_default_str()
        ->check(CLI::IsMember({"text", "structured"}));
    app.add_option("--source-lang", g.source_lang, "Source language tag")->capture_default_str();
    app.add_option("--target-lang", g.target_lang, "Target language tag")->capture_default_str();

    std::vector<std::string> words;
    std::string scope = "local";
    std::string author;
    std::string file;
    std::string output;
    std::string commit_source;
    std::string commit_target;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::vector<std::string> cors;
    std::vector<std::string> eval_files;
    std::string trace_path;
    std::string out_dir = "testsets";
    std::string sizes = "200,200,200";
    std::size_t synthesize = 0;

    auto* import = app.add_subcommand("import", "Import a TMX file into a store");
    import->add_option("file", file, "TMX file")->required()->check(CLI::ExistingFile);
    import->add_option("--scope", scope, "local or global")->capture_default_str();

    auto* exp = app.add_subcommand("export", "Write a store as TMX");
    auto* export_scope = exp->add_option("--scope", scope, "local, global or all");
    exp->add_option("-o,--output", output, "Output file (default stdout)");

    auto* query = app.add_subcommand("query", "Rank TM sentences by trigram similarity");
    query->add_option("text", words, "Query text")->required();

    auto* suggest = app.add_subcommand("suggest", "Sentence matches plus phrase suggestions");
    suggest->add_option("text", words, "Query text")->required();

    auto* commit = app.add_subcommand("commit", "Save a translation pair");
    commit->add_option("source", commit_source, "Source sentence")->required();
    commit->add_option("target", commit_target, "Target sentence")->required();
    commit->add_option("--scope", scope, "local or global")->capture_default_str();
    commit->add_option("--author", author, "Author name");

    auto* serve = app.add_subcommand("serve", "Run the HTTP API");
    serve->add_option("--host", host, "Bind address")->capture_default_str();
    serve->add_option("--port", port, "Port (0 picks one)")->capture_default_str();
    serve->add_option("--cors", cors, "Allowed CORS origin (repeatable, * for any)");

    auto* eval = app.add_subcommand("eval", "Evaluate test sets (source<TAB>gold per line)");
    eval->add_option("files", eval_files, "Test set files")->required()->check(CLI::ExistingFile);
    eval->add_option("--trace", trace_path, "Write the per-line audit trace here");

    auto* make = app.add_subcommand("make-testsets", "Sample complete, partial and held-out test sets");
    make->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
    make->add_option("--sizes", sizes, "Sizes of sets A,B,C")->capture_default_str();
    make->add_option("--synthesize", synthesize, "First add this many synthetic units (plus an out-of-vocabulary pool)");

    auto* stats = app.add_subcommand("stats", "Show store and index statistics");

    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    if (argv.empty()) {
        argv.push_back("tm");
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "tm: " << e.what() << '\n' << app.help();
        return 2;
    }

    try {
        if (app.got_subcommand(import)) {
            return cmd_import(g, file, scope, out);
        }
        if (app.got_subcommand(exp)) {
            return cmd_export(g, export_scope->count() ? scope : "all", output, out);
        }
        if (app.got_subcommand(query)) {
            return cmd_query(g, words, out);
        }
        if (app.got_subcommand(suggest)) {
            return cmd_suggest(g, words, out);
        }
        if (app.got_subcommand(commit)) {
            return cmd_commit(g, commit_source, commit_target, scope, author, out);
        }
        if (app.got_subcommand(serve)) {
            return cmd_serve(g, host, port, cors, out, err);
        }
        if (app.got_subcommand(eval)) {
            return cmd_eval(g, eval_files, trace_path, out);
        }
        if (app.got_subcommand(make)) {
            return cmd_make_testsets(g, out_dir, sizes, synthesize, out);
        }
        if (app.got_subcommand(stats)) {
            return cmd_stats(g, out);
        }
    } catch (const Error& e) {
        err << "tm: " << to_string(e.code()) << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "tm: " << e.what() << '\n';
        return 1;
    }
    err << app.help();
    return 2;
}

} // namespace tmem
