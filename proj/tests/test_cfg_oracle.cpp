#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "laws.hpp"
#include "principar/bench.hpp"
#include "principar/oracle.hpp"

namespace {

using namespace principar;

std::vector<std::string> as(int n) { return std::vector<std::string>(static_cast<std::size_t>(n), "a"); }

Cfg arithmetic() {
    Cfg g;
    g.nonterminals = {"E", "T"};
    g.terminals = {"x", "+"};
    g.productions = {{"E", {"E", "+", "E"}}, {"E", {"T"}}, {"T", {"x"}}};
    return g;
}

TEST(Cfg, CatalanCounts) {
    auto g = ambiguous_cfg();
    auto compiled = compile_cfg(g);
    const std::uint64_t catalan[] = {1, 1, 2, 5, 14, 42, 132};
    for (int n = 1; n <= 7; ++n) {
        EXPECT_EQ(cky_count(g, as(n)), catalan[n - 1]) << n;
        auto result = parse_tokens(*compiled.net, *compiled.lexicon, as(n));
        EXPECT_EQ(count_trees(build_forest(*compiled.net, result.chart)), catalan[n - 1]) << n;
    }
}

TEST(Cfg, EngineTreesMatchTheEnumerator) {
    auto g = arithmetic();
    auto c = compile_cfg(g);
    std::vector<std::string> s = {"x", "+", "x", "+", "x"};
    auto expected = cky_trees(g, s);
    ASSERT_EQ(expected.size(), 2u);
    EXPECT_EQ(engine_cfg_trees(c, s, 100), expected);
    EXPECT_EQ(expected[0], "(E (E (E (T x)) + (E (T x))) + (E (T x)))");
    EXPECT_TRUE(engine_cfg_trees(c, {"x", "+"}, 100).empty());
    EXPECT_EQ(cky_count(g, {"x", "+"}), 0u);
    EXPECT_EQ(engine_cfg_trees(c, s, 1).size(), 1u);
}

TEST(Cfg, NetworkTextLoadsAndValidates) {
    auto text = cfg_network_text(arithmetic());
    auto net = load_network(text);
    EXPECT_TRUE(validate(net).empty());
    ASSERT_TRUE(net.find_node("E/0").has_value());
    ASSERT_TRUE(net.find_node("T_x").has_value());
    auto e1 = *net.find_node("E/0");
    EXPECT_EQ(net.node(e1).children.size(), 3u);
    EXPECT_EQ(net.node(e1).kind, NodeKind::BarLevel);
    EXPECT_EQ(net.node(net.require_node("E")).specifics.size(), 2u);
}

TEST(Oracle, RandomGrammarsAreWellFormed) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        auto g = random_cfg(rng);
        ASSERT_FALSE(g.nonterminals.empty());
        EXPECT_LE(g.nonterminals.size(), 8u);
        EXPECT_LE(g.productions.size(), 20u);
        std::set<std::pair<std::string, std::vector<std::string>>> seen;
        for (const auto& p : g.productions) {
            EXPECT_FALSE(p.rhs.empty());
            EXPECT_TRUE(seen.insert({p.lhs, p.rhs}).second);
            if (p.rhs.size() == 1 && !g.is_terminal(p.rhs[0])) {
                auto pos = [&](const std::string& s) {
                    return std::find(g.nonterminals.begin(), g.nonterminals.end(), s) - g.nonterminals.begin();
                };
                EXPECT_LT(pos(p.lhs), pos(p.rhs[0]));
            }
        }
        auto s = random_sentence(g, rng, 6);
        EXPECT_FALSE(s.empty());
        for (const auto& w : s) EXPECT_TRUE(g.is_terminal(w));
    }
}

TEST(Oracle, SmallSuiteAgrees) {
    auto report = run_oracle_suite(15, 10, 7, 99);
    EXPECT_EQ(report.grammars, 15);
    EXPECT_EQ(report.sentences, 150);
    EXPECT_GT(report.sentences_with_trees, 0);
    EXPECT_EQ(report.mismatches, 0) << (report.failures.empty() ? "" : report.failures.front());
}

TEST(Bench, LoglogSlope) {
    std::vector<double> x = {1, 2, 4, 8}, y;
    for (double v : x) y.push_back(3 * v * v * v);
    EXPECT_NEAR(loglog_slope(x, y), 3.0, 1e-9);
}

TEST(Bench, SyntheticLexiconIsDeterministic) {
    auto net = laws::english_network();
    auto a = synthetic_lexicon(net.registry, 50, 3);
    EXPECT_EQ(a, synthetic_lexicon(net.registry, 50, 3));
    EXPECT_NE(a, synthetic_lexicon(net.registry, 50, 4));
    auto entries = parse_sexprs(a);
    ASSERT_EQ(entries.size(), 50u);
    auto keys = synthetic_keys(50, 3);
    EXPECT_EQ(std::set<std::string>(keys.begin(), keys.end()).size(), 50u);
    for (std::size_t i = 0; i < keys.size(); ++i) EXPECT_EQ(entry_from_sexpr(net.registry, entries[i]).key, keys[i]);
}

TEST(Bench, SmallLatencyRun) {
    auto net = laws::english_network();
    auto dir = std::filesystem::temp_directory_path() / "principar_bench_small";
    auto r = bench_lexicon(net.registry, dir.string(), 500, 2000, 1);
    std::filesystem::remove_all(dir);
    EXPECT_EQ(r.entries, 500u);
    EXPECT_EQ(r.table.entries, 500u);
    EXPECT_GE(r.cold_lookups + r.warm_lookups, 2000u);
    EXPECT_GT(r.cold_mean_us, 0);
    EXPECT_GT(r.warm_mean_us, 0);
}

TEST(Bench, SmallScalingRun) {
    auto r = bench_scaling({4, 8, 12}, 0.01);
    ASSERT_EQ(r.seconds.size(), 3u);
    EXPECT_LT(r.items[0], r.items[2]);
    EXPECT_TRUE(std::isfinite(r.slope));
}

}  // namespace
