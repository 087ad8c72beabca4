#include <gtest/gtest.h>

#include <filesystem>

#include "laws.hpp"

namespace {

using namespace principar::laws;

void expect_law(const LawResult& r) {
    EXPECT_GT(r.cases, 0u) << r.name;
    EXPECT_EQ(r.failures, 0u) << r.name << ": " << r.first_failure;
}

TEST(Laws, UnificationAlgebra) { expect_law(unification_algebra(2000, 11)); }
TEST(Laws, CombinationTagging) { expect_law(combination_tagging(2000, 12)); }
TEST(Laws, WeightAudit) { expect_law(weight_audit(500, 13)); }
TEST(Laws, NondecreasingEnumeration) { expect_law(nondecreasing_enumeration(300, 14)); }
TEST(Laws, PruningBound) { expect_law(pruning_bound(300, 15)); }
TEST(Laws, LexiconOverrideDurability) {
    auto dir = std::filesystem::temp_directory_path() / "principar_law_lexicon";
    expect_law(lexicon_override_durability(1000, 16, dir.string()));
    std::filesystem::remove_all(dir);
}
TEST(Laws, DeterministicOutput) { expect_law(deterministic_output(300, 17)); }

}  // namespace
