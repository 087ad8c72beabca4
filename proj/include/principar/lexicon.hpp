#pragma once

// Two-tier lexicon: an in-memory primary table (loaded from, and appended to,
// a buffer file) shadowing a read-optimized secondary table on disk.

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "principar/avm.hpp"
#include "principar/morphology.hpp"
#include "principar/secondary_table.hpp"
#include "principar/sexpr.hpp"

namespace principar {

struct Subcat {
    AttributeVector self;
    std::vector<AttributeVector> comps;
};

struct Ref {
    AttributeVector self;
    std::string base;
    std::vector<FeatureId> names;  // attributes the base sense must agree on
};

/// A phrase is stored head-first: "payment, down" is the surface phrase
/// "down payment" with head word "payment".
struct Phrase {
    std::vector<std::string> from_head;
    std::vector<std::string> before;

    std::string surface() const;
    std::size_t width() const { return from_head.size() + before.size(); }
};

struct PhraseList {
    std::vector<Phrase> phrases;
    std::string function_name = "phrases";
};

using LexicalFunction = std::variant<Subcat, Ref, PhraseList>;

struct LexicalEntry {
    std::string key;
    std::vector<LexicalFunction> functions;
};

struct LexicalSense {
    std::string word;
    int span_width = 1;   // surface tokens covered
    int lead = 0;         // tokens before the head word (phrases only)
    AttributeVector self;
    std::vector<AttributeVector> comps;
};

/// Parses one entry `(<word-or-phrase> (<func> <arg> ...) ...)`.
/// Throws LexiconError (shape) or RegistryError (features).
LexicalEntry parse_entry(const FeatureRegistry& reg, std::string_view text);
LexicalEntry entry_from_sexpr(const FeatureRegistry& reg, const SExpr& e);

/// Canonical single-line rendering; parse_entry(render_entry(e)) == e.
std::string render_entry(const FeatureRegistry& reg, const LexicalEntry& e);

/// Structural check that needs no registry. Returns the lowercased key.
std::string check_entry_shape(const SExpr& e);

bool operator==(const LexicalEntry& a, const LexicalEntry& b);

struct LookupCounters {
    std::uint64_t primary_hits = 0;
    std::uint64_t secondary_hits = 0;
    std::uint64_t misses = 0;
};

class LexiconStore {
public:
    /// Memory-only store with no buffer file and no secondary table.
    explicit LexiconStore(const FeatureRegistry& reg);

    /// Loads `buffer_path` (created on first put if missing) and opens the
    /// secondary table when `secondary_path` is given.
    LexiconStore(const FeatureRegistry& reg, std::string buffer_path,
                 std::optional<std::string> secondary_path);

    /// `<dir>/primary.lex` and, when present, `<dir>/secondary.plex`.
    static std::unique_ptr<LexiconStore> open_dir(const FeatureRegistry& reg, const std::string& dir);

    LexiconStore(const LexiconStore&) = delete;
    LexiconStore& operator=(const LexiconStore&) = delete;

    /// Primary first; a secondary hit is cached in memory only.
    std::optional<LexicalEntry> get(std::string_view key);

    /// Updates the primary table and appends the entry to the buffer file.
    void put(const LexicalEntry& entry);

    /// Adds to the primary table without touching the buffer file.
    void put_memory(LexicalEntry entry);

    LookupCounters counters() const;
    void reset_counters();

    const FeatureRegistry& registry() const { return reg_; }
    const Morphology& morphology() const { return morph_; }
    const SecondaryTable* secondary() const { return secondary_.get(); }
    const std::string& buffer_path() const { return buffer_path_; }

private:
    const FeatureRegistry& reg_;
    Morphology morph_;
    std::string buffer_path_;
    std::unique_ptr<SecondaryTable> secondary_;

    mutable std::shared_mutex mu_;
    std::unordered_map<std::string, LexicalEntry> primary_;

    std::atomic<std::uint64_t> primary_hits_{0};
    std::atomic<std::uint64_t> secondary_hits_{0};
    std::atomic<std::uint64_t> misses_{0};
};

/// Builds the secondary table from a text lexicon. Throws LexiconError naming
/// the 1-based index of the offending entry.
TableStats compile_secondary(std::string_view lexicon_text, const std::string& out_path);
TableStats compile_secondary_file(const std::string& in_path, const std::string& out_path);

/// Subcat senses of an entry, with `ref` functions resolved.
std::vector<LexicalSense> entry_senses(const LexicalEntry& entry, LexiconStore& store);

/// Senses contributed by the entry's `ref` functions only. Throws
/// LexiconError when a base word is missing or references nest too deeply.
std::vector<LexicalSense> resolve_ref(const LexicalEntry& entry, LexiconStore& store);

inline constexpr int kMaxRefDepth = 4;

struct PhraseMatch {
    LexicalSense sense;
    std::size_t first = 0;  // 0-based token range, inclusive
    std::size_t last = 0;
};

/// Phrases of `entry` found around `head_pos` in the sentence.
std::vector<PhraseMatch> expand_phrases(const LexicalEntry& entry, const std::vector<std::string>& tokens,
                                        std::size_t head_pos, LexiconStore& store,
                                        std::vector<std::string>* diagnostics = nullptr);

/// Every sense available at `pos`: direct entry senses, phrase senses, and,
/// when the word has no entry, senses of stripped base forms unified with the
/// inflection's attributes.
std::vector<LexicalSense> lookup_senses(LexiconStore& store, const std::vector<std::string>& tokens,
                                        std::size_t pos, std::vector<std::string>* diagnostics = nullptr);

}  // namespace principar
