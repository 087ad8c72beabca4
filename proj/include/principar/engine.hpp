#pragma once

// Message-passing parser over a grammar network. Items are messages that
// reached a node: a category, a span of the sentence and an attribute vector.
// Items with equal identity are packed; every way of building one is kept as
// a derivation so the forest can be read off the chart afterwards.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "principar/lexicon.hpp"
#include "principar/network.hpp"

namespace principar {

/// 1-based inclusive word positions. An empty span at position p is [p, p-1].
struct Span {
    int start = 1;
    int end = 0;
    bool empty() const { return end < start; }
    int length() const { return end - start + 1; }
    friend bool operator==(const Span&, const Span&) = default;
};

std::string to_string(const Span& s);

/// Splits on whitespace and detaches `.,?!;:` into tokens of their own;
/// trailing punctuation is dropped. Case is preserved.
std::vector<std::string> tokenize(std::string_view sentence);

enum class ItemKind { Whole, Partial, Forwarded };

/// A word sense or a hypothesized trace, anchored at a node.
struct Leaf {
    NodeId node = kNoNode;
    Span span;
    LexicalSense sense;
    bool trace = false;
};

enum class DerivationKind { Leaf, Anchor, Arrival, Combine, Forward };

struct Derivation {
    DerivationKind kind = DerivationKind::Leaf;
    int leaf = -1;      // Leaf, Anchor
    int child = -1;     // Arrival, Forward: the item that was sent
    LinkIndex link = 0; // Arrival
    int left = -1;      // Combine
    int right = -1;     // Combine; always a single-link item
};

struct ChartItem {
    NodeId node = kNoNode;
    Span span;
    AttributeVector att;
    ItemKind kind = ItemKind::Whole;
    std::uint64_t links = 0;  // bit i set when dominance link id i is covered
    bool complete = false;
    std::vector<Derivation> derivations;
};

struct ParseStats {
    std::uint64_t items = 0;
    std::uint64_t derivations = 0;
    std::uint64_t messages_sent = 0;
    std::uint64_t messages_blocked = 0;
    std::uint64_t combinations_tried = 0;
    std::uint64_t rounds = 0;
};

struct Chart {
    std::vector<std::string> tokens;
    std::vector<Leaf> leaves;
    std::vector<ChartItem> items;
    std::vector<int> roots;  // accepted items covering the sentence
};

struct ParserConfig {
    std::size_t max_trees = 64;
    bool guess_unknown = false;
    std::vector<std::string> guess_categories{"n", "v"};  // `cat` atoms tried for unknown words
};

struct ParseResult {
    bool ok = false;  // false when lexical analysis failed
    std::vector<std::string> diagnostics;
    Chart chart;
    ParseStats stats;
};

/// The first anchor (in grammar order) whose condition the sense satisfies.
std::optional<NodeId> anchor_for(const GrammarNetwork& net, const LexicalSense& sense);

/// Anchored leaves for every sense of every token. Tokens that no sense
/// covers are reported; with `guess_unknown` they receive one sense per
/// guess category instead. Returns no leaves when a token stays uncovered.
std::vector<Leaf> lexical_analysis(const GrammarNetwork& net, LexiconStore& store,
                                   const std::vector<std::string>& tokens, const ParserConfig& config,
                                   std::vector<std::string>& diagnostics);

/// Empty-span trace leaves at every position right of the leftmost +wh word.
std::vector<Leaf> hypothesize_gaps(const GrammarNetwork& net, const std::vector<Leaf>& leaves,
                                   int sentence_length);

/// Whether a node is satisfied by the given set of covered link ids.
bool is_complete(const GrammarNetwork& net, NodeId node, std::uint64_t links, ItemKind kind);

enum class CombineFailure {
    None,
    NotPartial,
    NotAdjacent,
    BothEmpty,
    AttributeClash,
    LinkOverlap,
    OrderViolation,
    LocalConstraint,
};

std::string_view to_string(CombineFailure f);

struct CombineOutcome {
    std::optional<ChartItem> item;  // no derivations attached
    CombineFailure failure = CombineFailure::None;
};

/// Joins a partial item with an adjacent single-link partial item on its right
/// at the same node.
CombineOutcome combine(const GrammarNetwork& net, const ChartItem& left, const ChartItem& right);

/// Whether an item spanning the whole sentence is acceptable as a parse.
bool is_acceptable_root(const GrammarNetwork& net, const ChartItem& item, int sentence_length);

ParseResult parse(const GrammarNetwork& net, LexiconStore& store, std::string_view sentence,
                  const ParserConfig& config = {});
ParseResult parse_tokens(const GrammarNetwork& net, LexiconStore& store, std::vector<std::string> tokens,
                         const ParserConfig& config = {});

}  // namespace principar
