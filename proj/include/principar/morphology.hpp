#pragma once

// Suffix stripping for regular inflections. The rule table is data: each rule
// maps an ending to a replacement and lists the attribute vectors the
// inflection may imply (one per category reading).

#include <string>
#include <string_view>
#include <vector>

#include "principar/avm.hpp"

namespace principar {

struct SuffixRule {
    std::string suffix;
    std::string replacement;
    bool undouble = false;  // also try "stopp" -> "stop"
    std::vector<std::string> readings;
};

/// -s, -es, -ies>y, -ed, -ed>e, -d, -ing, -ing>e.
const std::vector<SuffixRule>& default_suffix_rules();

struct StripCandidate {
    std::string base;
    std::string rule;  // e.g. "-ies>y"
    std::vector<AttributeVector> readings;
};

class Morphology {
public:
    /// Readings that mention features missing from `reg` are dropped.
    explicit Morphology(const FeatureRegistry& reg,
                        const std::vector<SuffixRule>& rules = default_suffix_rules());

    /// Candidate base forms in rule order, without duplicates and never the
    /// word itself. Bases shorter than two letters are not proposed.
    std::vector<StripCandidate> strip(std::string_view word) const;

private:
    struct CompiledRule {
        SuffixRule rule;
        std::vector<AttributeVector> readings;
    };
    std::vector<CompiledRule> rules_;
};

}  // namespace principar
