#pragma once

// Property laws shared by the unit tests and the acceptance runner. Each law
// draws `cases` random instances from a seeded generator and reports how many
// failed, with a description of the first failure.

#include <cstdint>
#include <string>

#include "principar/lexicon.hpp"
#include "principar/network.hpp"

namespace principar::laws {

struct LawResult {
    std::string name;
    std::uint64_t cases = 0;
    std::uint64_t failures = 0;
    std::string first_failure;
    bool ok() const { return failures == 0 && cases > 0; }
    void fail(std::string what) {
        if (failures++ == 0) first_failure = std::move(what);
    }
};

std::string data_path(const std::string& file);       // bundled grammar/lexicon
std::string test_data_path(const std::string& file);  // test fixtures

GrammarNetwork english_network();
/// Memory store filled from a text lexicon file.
std::unique_ptr<LexiconStore> load_text_lexicon(const FeatureRegistry& reg, const std::string& path);

/// Commutativity, associativity, idempotence, identity and monotonicity of
/// unification, on random vectors over a mixed registry.
LawResult unification_algebra(std::uint64_t cases, std::uint64_t seed);

/// combine() reports the first failing condition, in the documented order,
/// against an independent reimplementation of each condition.
LawResult combination_tagging(std::uint64_t cases, std::uint64_t seed);

/// Each enumerated tree's weight equals its recomputed link and sense sum.
LawResult weight_audit(std::uint64_t cases, std::uint64_t seed);

/// Enumeration weights never decrease, start at the forest minimum, and the
/// number of trees matches the counting recursion.
LawResult nondecreasing_enumeration(std::uint64_t cases, std::uint64_t seed);

/// The pruned output is exactly the set of trees below min + BIGWEIGHT/2,
/// checked against exhaustive enumeration.
LawResult pruning_bound(std::uint64_t cases, std::uint64_t seed);

/// Random put/get sequences over a two-tier store agree with a model map,
/// before and after reopening from disk.
LawResult lexicon_override_durability(std::uint64_t cases, std::uint64_t seed, const std::string& work_dir);

/// Parsing and rendering the same input twice gives identical output.
LawResult deterministic_output(std::uint64_t cases, std::uint64_t seed);

}  // namespace principar::laws
