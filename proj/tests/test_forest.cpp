#include <gtest/gtest.h>

#include "laws.hpp"
#include "principar/forest.hpp"

namespace {

using namespace principar;
using principar::laws::data_path;
using principar::laws::english_network;
using principar::laws::load_text_lexicon;

struct English {
    GrammarNetwork net = english_network();
    std::unique_ptr<LexiconStore> store = load_text_lexicon(net.registry, data_path("toy.lex"));
    ParseForest forest(const std::string& s) { return build_forest(net, parse(net, *store, s).chart); }
    std::vector<ParseTree> all(const std::string& s) {
        auto f = forest(s);
        TreeEnumerator en(f);
        std::vector<ParseTree> out;
        while (auto t = en.next()) out.push_back(std::move(*t));
        return out;
    }
};

TEST(SenseWeight, RareSensesCostBigWeight) {
    auto net = english_network();
    const auto& reg = net.registry;
    EXPECT_EQ(sense_weight(net, parse_vector(reg, "((cat v))")), Weight{});
    EXPECT_EQ(sense_weight(net, parse_vector(reg, "((cat v) (rare very))")), Weight::tenths(200));
    EXPECT_EQ(sense_weight(net, parse_vector(reg, "((cat v) (rare very-very))")), Weight::tenths(400));
}

TEST(Forest, SimpleSentenceGolden) {
    English e;
    auto trees = e.all("Kim left");
    ASSERT_EQ(trees.size(), 1u);
    EXPECT_EQ(render(e.net, trees[0]), "(IP (NP (Nbar (N Kim))) (Ibar (I) (VP (Vbar (V left)))))");
    EXPECT_EQ(trees[0].weight, Weight::tenths(70));
    EXPECT_EQ(audit_weight(e.net, trees[0]), trees[0].weight);
    EXPECT_EQ(trees[0].span, (Span{1, 2}));
    EXPECT_EQ(e.net.node(trees[0].node).name, "IP");
}

TEST(Forest, AttachmentAmbiguityIsPacked) {
    English e;
    auto f = e.forest("John read the story about Kim");
    EXPECT_EQ(count_trees(f), 2u);
    auto trees = e.all("John read the story about Kim");
    ASSERT_EQ(trees.size(), 2u);
    EXPECT_EQ(render(e.net, trees[0]),
              "(IP (NP (Nbar (N John))) (Ibar (I) (VP (Vbar (V:NP read (NP (D the) (Nbar (N story) "
              "(PP (Pbar (P:NP about (NP (Nbar (N Kim)))))))))))))");
    EXPECT_NE(render(e.net, trees[1]).find("(Vbar (V:NP read (NP (D the) (Nbar (N story)))) (PP"),
              std::string::npos)
        << render(e.net, trees[1]);
    EXPECT_EQ(trees[0].weight, Weight::tenths(170));
    EXPECT_EQ(trees[1].weight - trees[0].weight, Weight::tenths(190));
    EXPECT_EQ(prune_and_output(f).size(), 1u);

    // The PP over "about Kim" is one forest node used by both attachments.
    int pp = -1;
    auto pp_id = e.net.require_node("PP");
    for (std::size_t i = 0; i < f.nodes.size(); ++i)
        if (f.nodes[i].node == pp_id && f.nodes[i].span == Span{5, 6}) {
            EXPECT_EQ(pp, -1) << "PP[5,6] packed into more than one node";
            pp = static_cast<int>(i);
        }
    ASSERT_GE(pp, 0);
    int uses = 0;
    for (const auto& n : f.nodes)
        for (const auto& edge : n.alternatives)
            for (const auto& c : edge.children) uses += c.node == pp;
    EXPECT_GE(uses, 2);

    auto stats = forest_stats(f);
    EXPECT_EQ(stats.trees, 2u);
    EXPECT_EQ(stats.min_weight, Weight::tenths(170));
    EXPECT_EQ(stats.nodes, f.nodes.size() - 1);  // without the synthetic root
    EXPECT_GT(stats.alternatives, stats.nodes - 1);
}

TEST(Forest, WhQuestionPrefersTheAuxiliary) {
    English e;
    auto trees = e.all("Who did Kim love?");
    ASSERT_EQ(trees.size(), 2u);
    EXPECT_EQ(render(e.net, trees[0]),
              "(CP (NP (Nbar (N Who))) (Cbar (AUX did) (IP (NP (Nbar (N Kim))) (Ibar (I) (VP (Vbar (V:NP love "
              "(NP *t*))))))))");
    EXPECT_EQ(trees[0].weight, Weight::tenths(140));
    EXPECT_GE(trees[1].weight - trees[0].weight, Weight::tenths(100));
    for (const auto& t : trees) EXPECT_EQ(audit_weight(e.net, t), t.weight);
    EXPECT_EQ(prune_and_output(e.forest("Who did Kim love?")).size(), 1u);
}

TEST(Forest, TraceLeaves) {
    English e;
    auto trees = e.all("who left");
    ASSERT_EQ(trees.size(), 1u);
    std::function<const ParseTree*(const ParseTree&)> find_trace = [&](const ParseTree& t) -> const ParseTree* {
        if (t.trace) return &t;
        for (const auto& c : t.children)
            if (auto* p = find_trace(c)) return p;
        return nullptr;
    };
    const ParseTree* trace = find_trace(trees[0]);
    ASSERT_NE(trace, nullptr);
    EXPECT_TRUE(trace->word);
    EXPECT_EQ(trace->text, "*t*");
    EXPECT_TRUE(trace->span.empty());
    EXPECT_NE(render(e.net, trees[0]).find("(NP *t*)"), std::string::npos);
}

TEST(Forest, EmptyWhenThereIsNoParse) {
    English e;
    auto f = e.forest("the the");
    EXPECT_TRUE(f.empty());
    EXPECT_EQ(count_trees(f), 0u);
    EXPECT_FALSE(TreeEnumerator(f).next().has_value());
    EXPECT_TRUE(prune_and_output(f).empty());
    EXPECT_EQ(forest_stats(f).trees, 0u);
}

TEST(Forest, PruneHonoursTheCap) {
    English e;
    auto f = e.forest("kim did love mary");
    ASSERT_GE(count_trees(f), 2u);
    EXPECT_EQ(prune_and_output(f, 1).size(), 1u);
    EXPECT_TRUE(prune_and_output(f, 0).empty());
}

TEST(Render, GraphIsDeterministicDot) {
    English e;
    auto a = e.all("John read the story about Kim");
    auto b = e.all("John read the story about Kim");
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto dot = render(e.net, a[i], TreeFormat::Graph);
        EXPECT_EQ(dot, render(e.net, b[i], TreeFormat::Graph));
        EXPECT_EQ(dot.rfind("digraph parse {", 0), 0u);
        EXPECT_EQ(dot.back(), '\n');
        EXPECT_NE(dot.find("[label=\"story\", shape=plaintext]"), std::string::npos);
    }
}

}  // namespace
