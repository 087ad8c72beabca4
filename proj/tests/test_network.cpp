#include <gtest/gtest.h>

#include "laws.hpp"
#include "principar/network.hpp"

namespace {

using namespace principar;
using principar::laws::english_network;
using principar::laws::test_data_path;

const char* kMini = R"(
feature valued cat {v, n}
feature flag wh carry
feature flag cm carry
feature flag whbarrier carry
feature flag govern
feature valued tense {past}
node VP kind=maximal
node V kind=lexical
node V:NP kind=subcategory
node NP kind=maximal
node N kind=lexical
subsume V -> V:NP
dom VP -> V id=1 obligatory role=head
dom VP -> NP id=3 optional role=adjunct keep={tense}
dom V:NP -> NP id=1 obligatory role=complement barrier
dom NP -> N id=1 obligatory role=head
anchor V:NP when {(cat v)} comps {n}
anchor V when {(cat v)}
anchor N when {(cat n)}
top VP
)";

std::string with(const std::string& extra) { return std::string(kMini) + extra; }

TEST(Network, LoadsBundledGrammar) {
    auto net = english_network();
    EXPECT_TRUE(validate(net).empty());
    EXPECT_EQ(net.big_weight, Weight::tenths(200));
    EXPECT_EQ(net.nodes.size(), 22u);
    ASSERT_EQ(net.top_nodes.size(), 2u);
    EXPECT_EQ(net.node(net.top_nodes[0]).name, "CP");
    auto v = net.require_node("V");
    EXPECT_EQ(net.node(v).specifics.size(), 4u);
    auto aux = net.require_node("AUX");
    EXPECT_EQ(net.node(aux).generals.size(), 2u);
    ASSERT_TRUE(net.trace.has_value());
    EXPECT_EQ(net.node(net.trace->node).name, "NP");
    ASSERT_TRUE(net.node(net.require_node("Ibar")).completion.has_value());
}

TEST(Network, AdjunctLinksWeighBigWeight) {
    auto net = english_network();
    for (const auto& l : net.dominance)
        EXPECT_EQ(l.weight, l.role == Role::Adjunct ? net.big_weight : kUnitWeight) << net.node(l.parent).name;
    auto mini = load_network(with("bigweight 7.5\n"));
    auto adj = *mini.find_link(mini.require_node("VP"), 3);
    EXPECT_EQ(mini.link(adj).weight, Weight::tenths(75));
}

TEST(Network, RenderIsAFixpoint) {
    for (auto net : {english_network(), load_network_file(test_data_path("subjacency.gn")), load_network(kMini)}) {
        auto once = render_network(net);
        auto twice = render_network(load_network(once));
        EXPECT_EQ(once, twice);
    }
}

TEST(Network, ReportsSyntaxErrorsWithPositions) {
    try {
        load_network(with("local VP: assign {+wh\n"));
        FAIL() << "expected a grammar error";
    } catch (const GrammarError& e) {
        EXPECT_GT(e.line(), 0);
        EXPECT_NE(std::string(e.what()).find("unbalanced"), std::string::npos);
    }
    EXPECT_THROW(load_network(with("dom VP -> Q id=2 role=complement\n")), GrammarError);
    EXPECT_THROW(load_network(with("node VP kind=bar\n")), GrammarError);
    EXPECT_THROW(load_network(with("frobnicate VP\n")), GrammarError);
    EXPECT_THROW(load_network_file("/nonexistent/grammar.gn"), GrammarError);
}

TEST(Network, ValidationCatchesStructuralProblems) {
    auto net = load_network(kMini);
    auto np = net.require_node("NP");
    DominanceLink extra;
    extra.parent = np;
    extra.child = net.require_node("N");
    extra.id = 1;
    extra.role = Role::Head;
    net.add_dominance(extra);
    auto diags = validate(net);
    bool duplicate = false, heads = false;
    for (const auto& d : diags) {
        duplicate |= d.reason.find("duplicate dominance id") != std::string::npos;
        heads |= d.reason.find("exactly one head") != std::string::npos;
    }
    EXPECT_TRUE(duplicate);
    EXPECT_TRUE(heads);

    EXPECT_THROW(load_network(with("node X kind=subcategory\n")), GrammarError);
    EXPECT_THROW(load_network(with("subsume V:NP -> V\n")), GrammarError);
    EXPECT_THROW(load_network(with("complete VP {9}\n")), GrammarError);
}

TEST(Network, LocalConstraints) {
    auto net = english_network();
    const auto& reg = net.registry;
    auto n = net.require_node("N");
    auto out = apply_local(net, n, parse_vector(reg, "((cat n))"));
    ASSERT_TRUE(out.accepted());
    EXPECT_TRUE(out.att->has(reg.literal("+govern")));

    auto np = net.require_node("NP");
    out = apply_local(net, np, parse_vector(reg, "((cat n))"));
    ASSERT_TRUE(out.accepted());
    EXPECT_TRUE(out.att->has(reg.literal("-cm")));

    // Governed without case assignment: rejected.
    auto v = net.require_node("V");
    out = apply_local(net, v, parse_vector(reg, "((cat v) +passive -cm)"));
    EXPECT_FALSE(out.accepted());
    EXPECT_NE(out.violated, nullptr);

    // Governed and case-marked: cm is discharged.
    out = apply_local(net, v, parse_vector(reg, "((cat v) -passive -cm)"));
    ASSERT_TRUE(out.accepted());
    EXPECT_FALSE(out.att->binds(reg.require("cm")));

    auto cp = net.require_node("CP");
    out = apply_local(net, cp, parse_vector(reg, "(+wh +whbarrier)"));
    ASSERT_TRUE(out.accepted());
    EXPECT_FALSE(out.att->binds(reg.require("whbarrier")));
}

TEST(Network, BarrierPercolation) {
    auto net = load_network(kMini);
    const auto& reg = net.registry;
    auto barrier = *net.find_link(net.require_node("V:NP"), 1);
    EXPECT_FALSE(apply_percolation(net, barrier, parse_vector(reg, "(+whbarrier)")).passed());
    EXPECT_FALSE(apply_percolation(net, barrier, parse_vector(reg, "(-cm)")).passed());
    auto flipped = apply_percolation(net, barrier, parse_vector(reg, "(-whbarrier +wh)"));
    ASSERT_TRUE(flipped.passed());
    EXPECT_EQ(*flipped.att, parse_vector(reg, "(+wh +whbarrier)"));
    auto plain = apply_percolation(net, barrier, parse_vector(reg, "((cat n))"));
    ASSERT_TRUE(plain.passed());

    auto head = *net.find_link(net.require_node("NP"), 1);
    EXPECT_TRUE(apply_percolation(net, head, parse_vector(reg, "(+whbarrier)")).passed());
}

TEST(Network, ProjectionKeepsCarryFeaturesOffTheHead) {
    auto net = load_network(kMini);
    const auto& reg = net.registry;
    auto att = parse_vector(reg, "((cat n) +wh +govern (tense past))");
    auto head = *net.find_link(net.require_node("NP"), 1);
    EXPECT_EQ(project(net, head, att), att);
    auto comp = *net.find_link(net.require_node("V:NP"), 1);
    EXPECT_EQ(project(net, comp, att), parse_vector(reg, "(+wh)"));
    auto adj = *net.find_link(net.require_node("VP"), 3);
    EXPECT_EQ(project(net, adj, att), parse_vector(reg, "(+wh (tense past))"));
}

TEST(Weight, ArithmeticAndFormatting) {
    EXPECT_EQ(Weight::from_double(2.5).tenths(), 25);
    EXPECT_EQ((Weight::tenths(25) + kUnitWeight).str(), "3.5");
    EXPECT_EQ(Weight::tenths(200).str(), "20");
    EXPECT_EQ((kUnitWeight * 3).value(), 3.0);
    EXPECT_LT(Weight::tenths(1), Weight::tenths(2));
}

}  // namespace
