#pragma once

// Packed parse forest read off a finished chart, with weights, best-first
// tree enumeration, pruning and rendering.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "principar/engine.hpp"

namespace principar {

struct ForestChild {
    int node = -1;                 // forest node, or -1 for a word
    int leaf = -1;                 // chart leaf for a word or trace
    std::optional<LinkIndex> link; // dominance link; absent for subsumption
    bool is_word() const { return node < 0; }
    friend bool operator==(const ForestChild&, const ForestChild&) = default;
};

enum class EdgeKind { Leaf, Branch, Forward, Root };

struct ForestEdge {
    EdgeKind kind = EdgeKind::Branch;
    std::vector<ForestChild> children;
    Weight weight;  // links and leaf senses of this edge only
};

struct ForestNode {
    NodeId node = kNoNode;  // kNoNode for the synthetic root
    Span span;
    AttributeVector att;
    std::vector<ForestEdge> alternatives;
    Weight min_weight;
};

struct ForestStats {
    std::size_t nodes = 0;
    std::size_t alternatives = 0;
    Weight min_weight;
    std::uint64_t trees = 0;  // saturates at UINT64_MAX
};

class ParseForest {
public:
    std::vector<std::string> tokens;
    std::vector<Leaf> leaves;
    std::vector<ForestNode> nodes;
    int root = -1;
    Weight big_weight = Weight::tenths(200);

    bool empty() const { return root < 0; }
    Weight min_weight() const { return empty() ? Weight{} : nodes[static_cast<std::size_t>(root)].min_weight; }
};

/// BIGWEIGHT for `(rare very)`, twice that for `(rare very-very)`, else 0.
Weight sense_weight(const GrammarNetwork& net, const AttributeVector& sense);

/// Packs the derivations reachable from the chart's root items. Nodes are
/// keyed by (category, span, attributes); derivation cycles are cut.
ParseForest build_forest(const GrammarNetwork& net, const Chart& chart);

std::uint64_t count_trees(const ParseForest& forest);
ForestStats forest_stats(const ParseForest& forest);

struct ParseTree {
    NodeId node = kNoNode;
    Span span;
    std::optional<LinkIndex> link;  // link from the parent, if a dominance link
    bool word = false;              // word or trace leaf
    bool trace = false;
    std::string text;
    AttributeVector sense;          // the leaf's lexical attributes
    std::vector<ParseTree> children;
    Weight weight;                  // total weight of this subtree
};

/// Lazy best-first enumeration. Trees come out in nondecreasing weight; ties
/// are broken by alternative index, then by child ranks left to right.
class TreeEnumerator {
public:
    explicit TreeEnumerator(const ParseForest& forest);
    std::optional<ParseTree> next();

private:
    struct Candidate {
        Weight weight;
        int edge = 0;
        std::vector<int> ranks;
        auto key() const { return std::tie(weight, edge, ranks); }
        bool operator<(const Candidate& o) const { return key() < o.key(); }
    };
    struct NodeState {
        bool initialized = false;
        std::size_t expanded = 0;
        std::vector<Candidate> best;
        std::set<Candidate> frontier;
        std::set<std::pair<int, std::vector<int>>> seen;
    };

    const Candidate* kth(int node, std::size_t k);
    void push(int node, int edge, std::vector<int> ranks);
    ParseTree build(int node, std::size_t k, std::optional<LinkIndex> link);

    const ParseForest& forest_;
    std::vector<NodeState> state_;
    std::size_t emitted_ = 0;
};

/// Trees with weight < min + BIGWEIGHT/2, in enumeration order, at most
/// `max_trees` of them.
std::vector<ParseTree> prune_and_output(const ParseForest& forest, std::size_t max_trees = 64);

/// Weight recomputed from link weights and leaf senses.
Weight audit_weight(const GrammarNetwork& net, const ParseTree& tree);

enum class TreeFormat { Bracketed, Graph };

/// Bracketed: `(IP (NP (Nbar (N Kim))) ...)`, traces as `(NP *t*)`, an
/// omitted optional head as an empty node such as `(I)`. Graph: DOT.
std::string render(const GrammarNetwork& net, const ParseTree& tree, TreeFormat format = TreeFormat::Bracketed);

}  // namespace principar
