#include "principar/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "principar/bench.hpp"
#include "principar/forest.hpp"
#include "principar/oracle.hpp"

#ifndef PRINCIPAR_DATA_DIR
#define PRINCIPAR_DATA_DIR "data"
#endif

namespace principar {

std::string default_grammar_path() {
    if (const char* env = std::getenv("PRINCIPAR_GRAMMAR"); env && *env) return env;
    return std::string(PRINCIPAR_DATA_DIR) + "/english.gn";
}

std::string default_lexicon_path() {
    if (const char* env = std::getenv("PRINCIPAR_LEXICON"); env && *env) return env;
    return std::string(PRINCIPAR_DATA_DIR) + "/toy.lex";
}

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LexiconError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// A directory is a two-tier lexicon; a file is a text lexicon held in memory.
std::unique_ptr<LexiconStore> open_lexicon(const FeatureRegistry& reg, const std::string& path) {
    if (fs::is_directory(path)) return LexiconStore::open_dir(reg, path);
    auto store = std::make_unique<LexiconStore>(reg);
    std::size_t parsed = 0;
    std::vector<SExpr> exprs;
    try {
        exprs = parse_sexprs(read_file(path), &parsed);
    } catch (const SExprError& e) {
        throw LexiconError(path + ": entry " + std::to_string(parsed + 1) + ": " + e.what());
    }
    for (std::size_t i = 0; i < exprs.size(); ++i) {
        try {
            store->put_memory(entry_from_sexpr(reg, exprs[i]));
        } catch (const std::exception& e) {
            throw LexiconError(path + ": entry " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return store;
}

struct SentenceOutput {
    std::string text;
    std::string diagnostics;
    bool parsed = false;
};

struct ParseOptions {
    std::string format = "bracketed";
    bool stats = false;
    bool json = false;
    ParserConfig config;
};

std::string format_ms(double ms) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << ms;
    return os.str();
}

SentenceOutput parse_one(const GrammarNetwork& net, LexiconStore& store, const std::string& sentence,
                         const ParseOptions& opts) {
    SentenceOutput o;
    auto t0 = std::chrono::steady_clock::now();
    auto result = parse(net, store, sentence, opts.config);
    auto forest = build_forest(net, result.chart);
    auto trees = prune_and_output(forest, opts.config.max_trees);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    auto fstats = forest_stats(forest);

    std::ostringstream os;
    TreeFormat fmt = opts.format == "graph" ? TreeFormat::Graph : TreeFormat::Bracketed;
    for (const auto& t : trees) {
        os << render(net, t, fmt);
        if (fmt == TreeFormat::Bracketed) os << '\n';
    }
    if (opts.json) {
        nlohmann::ordered_json j;
        j["sentence"] = sentence;
        j["tokens"] = result.chart.tokens.size();
        j["items"] = result.stats.items;
        j["messages_sent"] = result.stats.messages_sent;
        j["messages_blocked"] = result.stats.messages_blocked;
        j["forest_trees"] = fstats.trees;
        if (forest.empty())
            j["best_weight"] = nullptr;
        else
            j["best_weight"] = fstats.min_weight.value();
        j["parse_ms"] = ms;
        os << j.dump() << '\n';
    } else if (opts.stats) {
        os << "stats: tokens=" << result.chart.tokens.size() << " items=" << result.stats.items
           << " messages_sent=" << result.stats.messages_sent << " messages_blocked=" << result.stats.messages_blocked
           << " forest_trees=" << fstats.trees << " best_weight=" << (forest.empty() ? "-" : fstats.min_weight.str())
           << " output_trees=" << trees.size() << " parse_ms=" << format_ms(ms) << '\n';
    }
    o.text = os.str();
    std::ostringstream diag;
    for (const auto& d : result.diagnostics) diag << sentence << ": " << d << '\n';
    o.diagnostics = diag.str();
    o.parsed = !trees.empty();
    return o;
}

int cmd_parse(const std::string& grammar, const std::string& lexicon, std::vector<std::string> sentences,
              const ParseOptions& opts, unsigned jobs, std::istream& in, std::ostream& out, std::ostream& err) {
    auto net = load_network_file(grammar);
    auto store = open_lexicon(net.registry, lexicon);
    if (sentences.empty()) {
        std::string line;
        while (std::getline(in, line))
            if (line.find_first_not_of(" \t\r") != std::string::npos) sentences.push_back(line);
    }
    std::vector<SentenceOutput> results(sentences.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < sentences.size(); i = next++)
            results[i] = parse_one(net, *store, sentences[i], opts);
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(sentences.size())));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    bool all = true;
    for (const auto& r : results) {
        out << r.text;
        err << r.diagnostics;
        all = all && r.parsed;
    }
    return all ? 0 : 2;
}

int cmd_lex(const std::string& action, const std::vector<std::string>& operands, const std::string& grammar,
            const std::string& lexicon, std::ostream& out) {
    if (action == "compile") {
        if (operands.size() != 2) throw UsageError("usage: lex compile <input.lex> <output.plex>");
        auto s = compile_secondary_file(operands[0], operands[1]);
        out << "entries=" << s.entries << " buckets=" << s.buckets << " occupied=" << s.occupied_buckets
            << " max_bucket=" << s.max_bucket << " mean_occupied=" << std::fixed << std::setprecision(3)
            << s.mean_occupied << '\n';
        return 0;
    }
    auto net = load_network_file(grammar);
    if (action == "get") {
        if (operands.size() != 1) throw UsageError("usage: lex get <word>");
        auto store = open_lexicon(net.registry, lexicon);
        auto e = store->get(operands[0]);
        out << (e ? render_entry(net.registry, *e) : std::string("absent")) << '\n';
        return 0;
    }
    if (action == "put") {
        if (operands.size() != 1) throw UsageError("usage: lex put '<entry>'");
        if (!fs::is_directory(lexicon)) throw UsageError("lex put needs a lexicon directory, got " + lexicon);
        auto store = open_lexicon(net.registry, lexicon);
        LexicalEntry e;
        try {
            e = parse_entry(net.registry, operands[0]);
        } catch (const RegistryError& ex) {
            throw LexiconError(ex.what());
        }
        store->put(e);
        out << "stored " << e.key << '\n';
        return 0;
    }
    throw UsageError("unknown lex action '" + action + "' (expected get, put or compile)");
}

struct BenchOptions {
    std::size_t entries = 90000;
    std::size_t lookups = 100000;
    std::string dir;
    std::uint64_t seed = 1;
    std::vector<int> lengths{10, 20, 40, 80};
    int grammars = 100;
    int sentences = 20;
    int maxlen = 10;
};

int cmd_bench(const std::string& what, const BenchOptions& b, const std::string& grammar, std::ostream& out) {
    if (what == "lexicon") {
        auto net = load_network_file(grammar);
        std::string dir = b.dir.empty() ? (fs::temp_directory_path() / "principar-bench").string() : b.dir;
        auto r = bench_lexicon(net.registry, dir, b.entries, b.lookups, b.seed);
        out << std::fixed << std::setprecision(3) << "entries=" << r.entries << " build_s=" << r.build_seconds
            << " buckets=" << r.table.buckets << " max_bucket=" << r.table.max_bucket << '\n'
            << "cold lookups=" << r.cold_lookups << " mean_us=" << r.cold_mean_us << " median_us=" << r.cold_median_us
            << '\n'
            << "warm lookups=" << r.warm_lookups << " mean_us=" << r.warm_mean_us << " median_us=" << r.warm_median_us
            << '\n';
        return 0;
    }
    if (what == "scaling") {
        auto r = bench_scaling(b.lengths);
        out << std::fixed << std::setprecision(6);
        for (std::size_t i = 0; i < r.lengths.size(); ++i)
            out << "n=" << r.lengths[i] << " seconds=" << r.seconds[i] << " items=" << r.items[i] << '\n';
        out << std::setprecision(3) << "slope=" << r.slope << '\n';
        return 0;
    }
    if (what == "oracle") {
        auto r = run_oracle_suite(b.grammars, b.sentences, b.maxlen, b.seed);
        for (const auto& f : r.failures) out << "mismatch: " << f << '\n';
        out << "grammars=" << r.grammars << " sentences=" << r.sentences << " trees=" << r.trees << '\n'
            << r.mismatches << " mismatches\n";
        return r.mismatches == 0 ? 0 : 2;
    }
    throw UsageError("unknown benchmark '" + what + "' (expected lexicon, scaling or oracle)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Principle-based parser with a two-tier lexicon", "principar"};
    app.require_subcommand(1);
    std::string grammar = default_grammar_path();
    std::string lexicon = default_lexicon_path();
    app.add_option("--grammar", grammar, "Grammar network file (default: $PRINCIPAR_GRAMMAR or bundled)");
    app.add_option("--lexicon", lexicon, "Lexicon directory, or a text lexicon file");

    auto* parse_cmd = app.add_subcommand("parse", "Parse sentences (arguments, or one per line on stdin)");
    parse_cmd->fallthrough();
    ParseOptions popts;
    std::vector<std::string> sentences;
    std::string stats_mode;
    unsigned jobs = 1;
    std::string guess;
    parse_cmd->add_option("sentences", sentences, "Sentences to parse");
    parse_cmd->add_option("--format", popts.format, "Output format")->check(CLI::IsMember({"bracketed", "graph"}));
    auto* stats_opt = parse_cmd->add_option("--stats", stats_mode, "Print statistics (--stats=json for JSON)")
                          ->check(CLI::IsMember({"text", "json"}));
    parse_cmd->add_option("--max-trees", popts.config.max_trees, "Maximum trees printed per sentence")
        ->check(CLI::PositiveNumber);
    parse_cmd->add_option("--jobs", jobs, "Parse input lines concurrently")->check(CLI::PositiveNumber);
    auto* guess_opt = parse_cmd->add_option("--guess-unknown", guess, "Guess categories for unknown words (default n,v)");

    auto* lex_cmd = app.add_subcommand("lex", "Inspect or update the lexicon");
    lex_cmd->fallthrough();
    std::string lex_action;
    std::vector<std::string> lex_operands;
    lex_cmd->add_option("action", lex_action, "get, put or compile")->required();
    lex_cmd->add_option("operands", lex_operands, "Word, entry, or input and output paths");

    auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark");
    bench_cmd->fallthrough();
    std::string bench_what;
    BenchOptions bopts;
    bench_cmd->add_option("benchmark", bench_what, "lexicon, scaling or oracle")->required();
    bench_cmd->add_option("--entries", bopts.entries, "Synthetic lexicon size");
    bench_cmd->add_option("--lookups", bopts.lookups, "Number of timed lookups");
    bench_cmd->add_option("--dir", bopts.dir, "Working directory for the table");
    bench_cmd->add_option("--seed", bopts.seed, "Random seed");
    bench_cmd->add_option("--lengths", bopts.lengths, "Sentence lengths")->delimiter(',');
    bench_cmd->add_option("--grammars", bopts.grammars, "Random grammars");
    bench_cmd->add_option("--sentences", bopts.sentences, "Sentences per grammar");
    bench_cmd->add_option("--maxlen", bopts.maxlen, "Maximum sentence length");

    // Bare `--stats` and `--guess-unknown` take their defaults; a value must
    // be attached with `=` so a following sentence is not swallowed.
    std::vector<std::string> argv_store{"principar"};
    bool operands_only = false;
    for (const auto& a : args) {
        if (a == "--") operands_only = true;
        if (!operands_only && a == "--stats")
            argv_store.push_back("--stats=text");
        else if (!operands_only && a == "--guess-unknown")
            argv_store.push_back("--guess-unknown=n,v");
        else
            argv_store.push_back(a);
    }
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (parse_cmd->parsed()) {
            if (stats_opt->count()) {
                popts.stats = true;
                popts.json = stats_mode == "json";
            }
            if (guess_opt->count()) {
                popts.config.guess_unknown = true;
                popts.config.guess_categories.clear();
                std::stringstream cats(guess);
                for (std::string c; std::getline(cats, c, ',');)
                    if (!c.empty()) popts.config.guess_categories.push_back(c);
            }
            return cmd_parse(grammar, lexicon, sentences, popts, jobs, in, out, err);
        }
        if (lex_cmd->parsed()) return cmd_lex(lex_action, lex_operands, grammar, lexicon, out);
        if (bench_cmd->parsed()) return cmd_bench(bench_what, bopts, grammar, out);
    } catch (const GrammarError& e) {
        err << "grammar error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    return run_cli(args, std::cin, out, err);
}

}  // namespace principar
