#pragma once

// Flat attribute-value vectors: signed flags and atom-valued features drawn
// from a registry declared by the grammar file.

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace principar {

class RegistryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using FeatureId = std::uint16_t;

enum class FeatureKind { Flag, Valued };

struct Feature {
    std::string name;
    FeatureKind kind = FeatureKind::Flag;
    std::vector<std::string> domain;  // empty for flags
    bool carry = false;               // crosses non-head dominance links
    bool annotation = false;          // stripped before unification (e.g. rare)
};

/// A single bound feature. For flags `value` is 1 for `+` and 0 for `-`; for
/// valued features it indexes the declared domain.
struct Binding {
    FeatureId feature = 0;
    std::uint16_t value = 0;

    friend bool operator==(const Binding&, const Binding&) = default;
    friend auto operator<=>(const Binding&, const Binding&) = default;
};

class FeatureRegistry {
public:
    FeatureId add_flag(std::string name, bool carry = false, bool annotation = false);
    FeatureId add_valued(std::string name, std::vector<std::string> domain,
                         bool carry = false, bool annotation = false);

    std::optional<FeatureId> find(std::string_view name) const;
    FeatureId require(std::string_view name) const;
    const Feature& at(FeatureId id) const { return features_.at(id); }
    std::size_t size() const { return features_.size(); }
    const std::vector<Feature>& features() const { return features_; }

    Binding flag(std::string_view name, bool positive) const;
    Binding valued(std::string_view name, std::string_view atom) const;

    /// Parses `+f`, `-f`, or the pair `(f v)` already split into name/value.
    Binding literal(std::string_view text) const;

    std::string render(const Binding& b) const;

private:
    FeatureId add(Feature f);

    std::vector<Feature> features_;
    std::unordered_map<std::string, FeatureId> index_;
};

class AttributeVector {
public:
    AttributeVector() = default;

    /// Builds a vector from bindings; throws RegistryError when a feature is
    /// bound twice with different values.
    static AttributeVector of(std::vector<Binding> bindings);

    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const std::vector<Binding>& entries() const { return entries_; }

    std::optional<std::uint16_t> get(FeatureId f) const;
    bool binds(FeatureId f) const { return get(f).has_value(); }

    /// True iff the vector binds `lit.feature` to exactly `lit.value`.
    bool has(const Binding& lit) const;

    /// Binds or rebinds one feature.
    void set(const Binding& b);

    /// Copy with `f` unbound. Removing an absent feature is a no-op.
    AttributeVector without(FeatureId f) const;

    /// Copy keeping only the listed features.
    AttributeVector restricted(const std::vector<bool>& keep) const;

    std::size_t hash() const;

    friend bool operator==(const AttributeVector&, const AttributeVector&) = default;
    friend auto operator<=>(const AttributeVector&, const AttributeVector&) = default;

private:
    std::vector<Binding> entries_;  // sorted by feature, unique
};

/// Union of two vectors, or nullopt when some shared feature disagrees.
std::optional<AttributeVector> unify(const AttributeVector& a, const AttributeVector& b);

inline bool has(const AttributeVector& a, const Binding& lit) { return a.has(lit); }
inline AttributeVector without(const AttributeVector& a, FeatureId f) { return a.without(f); }

/// Parses a feature list such as `((cat v) -passive)` or `{(cat v), -passive}`.
/// Outer brackets are optional; commas are treated as whitespace.
AttributeVector parse_vector(const FeatureRegistry& reg, std::string_view text);

/// Renders in lexicon syntax: `((cat v) -passive)`; the empty vector is `()`.
std::string render(const FeatureRegistry& reg, const AttributeVector& a);

/// Renders the bare literal list without the outer parentheses.
std::string render_literals(const FeatureRegistry& reg, const AttributeVector& a);

struct AttributeVectorHash {
    std::size_t operator()(const AttributeVector& a) const { return a.hash(); }
};

}  // namespace principar
