#pragma once

// Random CFGs, random sentences and an exhaustive CKY-style tree enumerator
// used to check the engine in CFG mode.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "principar/cfg.hpp"

namespace principar {

struct RandomCfgOptions {
    int max_nonterminals = 8;
    int max_productions = 20;
    int terminals = 4;
    int max_rhs = 3;
};

/// No epsilon rules, no duplicate productions, and unary rules only point to
/// later nonterminals, so every sentence has finitely many trees.
Cfg random_cfg(std::mt19937_64& rng, const RandomCfgOptions& opts = {});

/// A sentence derived from the start symbol when one of length <= max_len is
/// found within a few attempts, otherwise a random terminal string.
std::vector<std::string> random_sentence(const Cfg& g, std::mt19937_64& rng, int max_len);

/// Number of trees for the sentence, saturating at UINT64_MAX.
std::uint64_t cky_count(const Cfg& g, const std::vector<std::string>& sentence);

/// Every tree as a bracket string (same format as cfg_bracket), sorted.
std::vector<std::string> cky_trees(const Cfg& g, const std::vector<std::string>& sentence);

struct OracleReport {
    int grammars = 0;
    int sentences = 0;            // compared sentences
    int sentences_with_trees = 0;
    std::uint64_t trees = 0;      // total trees compared
    int mismatches = 0;
    std::vector<std::string> failures;  // first few mismatches, described
};

/// Compares the engine's tree set with the exhaustive enumerator on random
/// grammars and sentences. Sentences with more than `tree_cap` trees are
/// resampled.
OracleReport run_oracle_suite(int grammars, int sentences_per_grammar, int max_len, std::uint64_t seed,
                              std::uint64_t tree_cap = 2000);

}  // namespace principar
