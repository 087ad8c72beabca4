#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "laws.hpp"
#include "principar/cli.hpp"

namespace {

using principar::laws::data_path;
using principar::laws::test_data_path;
namespace fs = std::filesystem;

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args, const std::string& input = "", const std::string& lexicon = data_path("toy.lex")) {
    std::vector<std::string> full = {"--grammar", data_path("english.gn"), "--lexicon", lexicon};
    full.insert(full.end(), args.begin(), args.end());
    std::istringstream in(input);
    std::ostringstream out, err;
    Run r;
    r.code = principar::run_cli(full, in, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) out.push_back(l);
    return out;
}

TEST(Cli, ParsesArgumentsAndPrintsTrees) {
    auto r = cli({"parse", "Kim left"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "(IP (NP (Nbar (N Kim))) (Ibar (I) (VP (Vbar (V left)))))\n");
    EXPECT_TRUE(r.err.empty());
}

TEST(Cli, PrunesToTheBestTree) {
    auto r = cli({"parse", "Who did Kim love?"});
    EXPECT_EQ(r.code, 0);
    ASSERT_EQ(lines(r.out).size(), 1u);
    EXPECT_NE(r.out.find("(AUX did)"), std::string::npos);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(cli({"parse", "the the"}).code, 2);
    auto unknown = cli({"parse", "zzxq zzxq"});
    EXPECT_EQ(unknown.code, 2);
    EXPECT_NE(unknown.err.find("unknown word 'zzxq' at position 1"), std::string::npos);
    EXPECT_EQ(cli({"parse", "Kim left", "the the"}).code, 2);
    EXPECT_EQ(cli({"frobnicate"}).code, 1);
    EXPECT_EQ(cli({"parse", "--format", "xml", "Kim left"}).code, 1);

    std::ostringstream out, err;
    EXPECT_EQ(principar::run_cli({"--grammar", "/nonexistent.gn", "parse", "Kim left"}, out, err), 1);
    EXPECT_NE(err.str().find("grammar error"), std::string::npos);
}

TEST(Cli, ReadsSentencesFromInput) {
    auto r = cli({"parse"}, "Kim left\n\nJohn read the story about Kim\n");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(lines(r.out).size(), 2u);
}

TEST(Cli, JsonStats) {
    auto r = cli({"parse", "--stats=json", "Kim left", "the the"});
    EXPECT_EQ(r.code, 2);
    auto ls = lines(r.out);
    std::vector<nlohmann::json> stats;
    for (const auto& l : ls)
        if (!l.empty() && l[0] == '{') stats.push_back(nlohmann::json::parse(l));
    ASSERT_EQ(stats.size(), 2u);
    for (const char* field :
         {"sentence", "tokens", "items", "messages_sent", "messages_blocked", "forest_trees", "best_weight", "parse_ms"})
        EXPECT_TRUE(stats[0].contains(field)) << field;
    EXPECT_EQ(stats[0]["tokens"], 2);
    EXPECT_EQ(stats[0]["forest_trees"], 1);
    EXPECT_DOUBLE_EQ(stats[0]["best_weight"].get<double>(), 7.0);
    EXPECT_EQ(stats[1]["forest_trees"], 0);
    EXPECT_TRUE(stats[1]["best_weight"].is_null());
}

TEST(Cli, TextStatsDoNotSwallowTheSentence) {
    auto r = cli({"parse", "--stats", "Kim left"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("stats: tokens=2"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("forest_trees=1"), std::string::npos);
}

TEST(Cli, GuessUnknown) {
    EXPECT_EQ(cli({"parse", "--guess-unknown", "zzxq left"}).code, 0);
    EXPECT_EQ(cli({"parse", "--guess-unknown=v", "zzxq left"}).code, 2);
    EXPECT_EQ(cli({"parse", "--guess-unknown=n", "zzxq left"}).code, 0);
}

TEST(Cli, JobsPreserveOrderAndOutput) {
    std::string input;
    for (int i = 0; i < 6; ++i)
        input += "Kim left\nJohn read the story about Kim\nWho did Kim love?\nkim did love mary\nthe the\n";
    auto serial = cli({"parse", "--stats=json"}, input);
    auto parallel = cli({"parse", "--stats=json", "--jobs", "4"}, input);
    EXPECT_EQ(serial.code, parallel.code);
    auto strip_time = [](const std::string& s) {
        std::string out;
        for (const auto& l : lines(s)) {
            if (!l.empty() && l[0] == '{') {
                auto j = nlohmann::json::parse(l);
                j.erase("parse_ms");
                out += j.dump() + "\n";
            } else {
                out += l + "\n";
            }
        }
        return out;
    };
    EXPECT_EQ(strip_time(serial.out), strip_time(parallel.out));
    EXPECT_EQ(serial.err, parallel.err);
}

TEST(Cli, GraphFormat) {
    auto a = cli({"parse", "--format", "graph", "Kim left"});
    auto b = cli({"parse", "--format", "graph", "Kim left"});
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out.rfind("digraph parse {", 0), 0u);
}

TEST(Cli, MaxTrees) {
    auto r = cli({"parse", "--max-trees", "1", "kim did love mary"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(lines(r.out).size(), 1u);
}

TEST(Cli, LexiconRoundTrip) {
    auto dir = fs::temp_directory_path() / "principar_cli_lex";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto compiled = cli({"lex", "compile", data_path("toy.lex"), (dir / "secondary.plex").string()});
    EXPECT_EQ(compiled.code, 0);
    EXPECT_EQ(compiled.out.rfind("entries=", 0), 0u) << compiled.out;
    EXPECT_NE(compiled.out.find("buckets="), std::string::npos);

    auto in_dir = [&](std::vector<std::string> args) { return cli(std::move(args), "", dir.string()); };
    EXPECT_EQ(in_dir({"lex", "get", "kim"}).out, "(kim (subcat ((cat n) (nform norm))))\n");
    EXPECT_EQ(in_dir({"lex", "get", "blorp"}).out, "absent\n");
    auto put = in_dir({"lex", "put", "(blorp (subcat ((cat v) -passive (tense past))))"});
    EXPECT_EQ(put.code, 0);
    EXPECT_EQ(in_dir({"lex", "get", "blorp"}).out, "(blorp (subcat ((cat v) (tense past) -passive)))\n");
    EXPECT_EQ(in_dir({"parse", "Kim blorp"}).code, 0);
    EXPECT_EQ(in_dir({"lex", "put", "(blorp (subcat ((cat zz))))"}).code, 1);
    EXPECT_EQ(cli({"lex", "put", "(blorp (subcat ((cat v))))"}).code, 1);  // a file lexicon is read-only
    EXPECT_EQ(cli({"lex", "teleport"}).code, 1);
    fs::remove_all(dir);
}

TEST(Cli, CompileErrorExitsOne) {
    auto dir = fs::temp_directory_path() / "principar_cli_bad";
    fs::create_directories(dir);
    {
        std::ofstream bad(dir / "bad.lex");
        bad << "(ok (subcat ((cat n))))\n(broken (nonsense))\n";
    }
    auto r = cli({"lex", "compile", (dir / "bad.lex").string(), (dir / "out.plex").string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("entry 2"), std::string::npos) << r.err;
    fs::remove_all(dir);
}

TEST(Cli, AlternativeGrammar) {
    std::ostringstream out, err;
    std::istringstream in;
    int code = principar::run_cli({"--grammar", test_data_path("subjacency.gn"), "--lexicon",
                                   test_data_path("subjacency.lex"), "parse", "what kim saw",
                                   "what kim saw stories about"},
                                  in, out, err);
    EXPECT_EQ(code, 2);
    EXPECT_EQ(lines(out.str()).size(), 1u);
}

TEST(Cli, OracleBench) {
    auto r = cli({"bench", "oracle", "--grammars", "5", "--sentences", "5", "--maxlen", "6"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("mismatches"), std::string::npos) << r.out;
}

}  // namespace
