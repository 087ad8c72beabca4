#pragma once

// Attribute-free context-free grammars compiled into grammar networks, so the
// engine can be run (and checked) as a plain CFG parser.
//
// Each production `A -> X1 .. Xk` becomes a bar-level node `A/p` whose
// dominance links 1..k point at the symbols in order; `A` subsumes `A/p`.
// Each terminal `x` becomes a lexical node `T_x` anchored by `(cat x)`.

#include <memory>
#include <string>
#include <vector>

#include "principar/forest.hpp"

namespace principar {

struct Production {
    std::string lhs;
    std::vector<std::string> rhs;
    friend bool operator==(const Production&, const Production&) = default;
};

struct Cfg {
    std::vector<std::string> nonterminals;  // the first one is the start symbol
    std::vector<std::string> terminals;
    std::vector<Production> productions;

    bool is_terminal(const std::string& s) const;
};

/// Grammar-file text for the network encoding of `g`.
std::string cfg_network_text(const Cfg& g);

struct CfgGrammar {
    std::unique_ptr<GrammarNetwork> net;
    std::unique_ptr<LexiconStore> lexicon;  // one entry per terminal
};

CfgGrammar compile_cfg(const Cfg& g);

/// Bracketed CFG tree: `(S (A a) b)`, terminals as bare words.
std::string cfg_bracket(const GrammarNetwork& net, const ParseTree& tree);

/// All trees the engine finds for a sentence, as CFG bracket strings, sorted.
/// Stops after `limit` trees.
std::vector<std::string> engine_cfg_trees(const CfgGrammar& g, const std::vector<std::string>& sentence,
                                          std::size_t limit);

}  // namespace principar
