#include "principar/morphology.hpp"

#include <algorithm>

namespace principar {

const std::vector<SuffixRule>& default_suffix_rules() {
    static const std::vector<std::string> plural_or_present = {
        "((cat v) (tense present) (vform s))",
        "((cat n) (num pl))",
    };
    static const std::vector<std::string> past_or_passive = {
        "((cat v) (tense past) (vform ed))",
        "((cat v) (vform en) +passive)",
    };
    static const std::vector<std::string> progressive = {"((cat v) (vform ing))"};
    static const std::vector<SuffixRule> rules = {
        {"s", "", false, plural_or_present},
        {"es", "", false, plural_or_present},
        {"ies", "y", false, plural_or_present},
        {"ed", "", true, past_or_passive},
        {"ed", "e", false, past_or_passive},
        {"d", "", false, past_or_passive},
        {"ing", "", true, progressive},
        {"ing", "e", false, progressive},
    };
    return rules;
}

Morphology::Morphology(const FeatureRegistry& reg, const std::vector<SuffixRule>& rules) {
    for (const auto& r : rules) {
        CompiledRule c{r, {}};
        for (const auto& text : r.readings) {
            try {
                c.readings.push_back(parse_vector(reg, text));
            } catch (const RegistryError&) {
            }
        }
        rules_.push_back(std::move(c));
    }
}

namespace {

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

}  // namespace

std::vector<StripCandidate> Morphology::strip(std::string_view word) const {
    std::vector<StripCandidate> out;
    auto add = [&](std::string base, const CompiledRule& r) {
        if (base.size() < 2 || base == word) return;
        for (const auto& c : out)
            if (c.base == base) return;
        std::string name = "-" + r.rule.suffix;
        if (!r.rule.replacement.empty()) name += ">" + r.rule.replacement;
        out.push_back({std::move(base), std::move(name), r.readings});
    };
    for (const auto& r : rules_) {
        const auto& suf = r.rule.suffix;
        if (word.size() <= suf.size() || word.substr(word.size() - suf.size()) != suf) continue;
        std::string stem(word.substr(0, word.size() - suf.size()));
        add(stem + r.rule.replacement, r);
        if (r.rule.undouble && stem.size() >= 3) {
            char last = stem.back();
            if (last == stem[stem.size() - 2] && !is_vowel(last))
                add(stem.substr(0, stem.size() - 1), r);
        }
    }
    return out;
}

}  // namespace principar
