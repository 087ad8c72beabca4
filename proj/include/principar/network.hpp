#pragma once

// The grammar network: category nodes, dominance and subsumption links, and
// the declarative constraints attached to them.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "principar/avm.hpp"

namespace principar {

/// Weights are kept in tenths so that comparisons and the pruning threshold
/// are exact.
class Weight {
public:
    constexpr Weight() = default;
    static constexpr Weight tenths(std::int64_t t) { return Weight(t); }
    static Weight from_double(double w);

    constexpr std::int64_t tenths() const { return tenths_; }
    double value() const { return static_cast<double>(tenths_) / 10.0; }
    std::string str() const;

    constexpr Weight operator+(Weight o) const { return Weight(tenths_ + o.tenths_); }
    constexpr Weight operator-(Weight o) const { return Weight(tenths_ - o.tenths_); }
    constexpr Weight operator*(std::int64_t k) const { return Weight(tenths_ * k); }
    Weight& operator+=(Weight o) {
        tenths_ += o.tenths_;
        return *this;
    }
    friend constexpr auto operator<=>(Weight, Weight) = default;

private:
    constexpr explicit Weight(std::int64_t t) : tenths_(t) {}
    std::int64_t tenths_ = 0;
};

inline constexpr Weight kUnitWeight = Weight::tenths(10);

class GrammarError : public std::runtime_error {
public:
    GrammarError(const std::string& msg, int line = 0, int column = 0);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

using NodeId = std::uint32_t;
using LinkIndex = std::uint32_t;
inline constexpr NodeId kNoNode = 0xffffffffu;

enum class NodeKind { LexicalCategory, Subcategory, BarLevel, Maximal };
enum class Role { Head, Complement, Adjunct, Specifier };

std::string_view to_string(NodeKind k);
std::string_view to_string(Role r);

// Constraint primitives.
struct Assign {
    AttributeVector features;
    AttributeVector guard;  // all literals must be present; empty = always
};
struct RejectCooccurrence {
    AttributeVector literals;
};
struct ClearOn {
    AttributeVector trigger;
    std::vector<FeatureId> cleared;
};
struct BlockIf {
    Binding literal;
};
struct Flip {
    Binding from;
    Binding to;
};
using Constraint = std::variant<Assign, RejectCooccurrence, ClearOn, BlockIf, Flip>;

std::string render(const FeatureRegistry& reg, const Constraint& c);

/// Pseudo link id under which a lexical head (the word itself) is recorded
/// when a sense is anchored at a node that also has dominance links.
inline constexpr int kAnchorLinkId = 0;
inline constexpr int kMaxLinkId = 63;

struct GrammarNode {
    std::string name;
    NodeKind kind = NodeKind::Maximal;
    std::vector<Constraint> local;
    std::optional<std::vector<int>> completion;  // explicit required link ids

    std::vector<LinkIndex> children;      // dominance links with this node as parent
    std::vector<LinkIndex> parents;       // dominance links with this node as child
    std::vector<NodeId> generals;         // nodes subsuming this one
    std::vector<NodeId> specifics;        // nodes this one subsumes
};

struct DominanceLink {
    NodeId parent = kNoNode;
    NodeId child = kNoNode;
    int id = 1;
    bool obligatory = true;
    Role role = Role::Complement;
    bool barrier = false;
    std::vector<Constraint> percolation;
    std::vector<FeatureId> keep;  // extra features crossing a non-head link
    Weight weight = kUnitWeight;
};

struct SubsumptionLink {
    NodeId general = kNoNode;
    NodeId specific = kNoNode;
};

/// Maps a word sense onto the node that receives its initial message.
struct Anchor {
    NodeId node = kNoNode;
    AttributeVector when;
    std::vector<std::uint16_t> comp_cats;  // `cat` atoms of the complements, in order
};

struct TraceSpec {
    NodeId node = kNoNode;
    AttributeVector features;
};

struct Diagnostic {
    std::string subject;  // node or link identity
    std::string reason;
};

class GrammarNetwork {
public:
    FeatureRegistry registry;
    std::vector<GrammarNode> nodes;
    std::vector<DominanceLink> dominance;
    std::vector<SubsumptionLink> subsumption;
    std::vector<NodeId> top_nodes;
    std::vector<Constraint> global_local;  // `local *:` constraints
    std::vector<Anchor> anchors;
    std::optional<TraceSpec> trace;
    Weight big_weight = Weight::tenths(200);

    NodeId add_node(std::string name, NodeKind kind);
    LinkIndex add_dominance(DominanceLink link);
    void add_subsumption(NodeId general, NodeId specific);

    std::optional<NodeId> find_node(std::string_view name) const;
    NodeId require_node(std::string_view name) const;
    const GrammarNode& node(NodeId id) const { return nodes.at(id); }
    GrammarNode& node(NodeId id) { return nodes.at(id); }
    const DominanceLink& link(LinkIndex i) const { return dominance.at(i); }

    /// Link under `parent` with the given id, if any.
    std::optional<LinkIndex> find_link(NodeId parent, int id) const;

    std::string link_name(LinkIndex i) const;

    /// Features that cross non-head links (declared `carry`).
    const std::vector<bool>& carry_mask() const { return carry_mask_; }
    /// Recomputes cached lookups after the registry changes.
    void refresh();

private:
    std::vector<bool> carry_mask_;
};

GrammarNetwork load_network(std::string_view text);
GrammarNetwork load_network_file(const std::string& path);

/// Emits the network back in grammar-file syntax.
std::string render_network(const GrammarNetwork& net);

/// Empty iff every structural invariant holds.
std::vector<Diagnostic> validate(const GrammarNetwork& net);

struct LocalOutcome {
    std::optional<AttributeVector> att;      // set when accepted
    const Constraint* violated = nullptr;    // set when rejected
    bool accepted() const { return att.has_value(); }
};

/// Applies the node's (and the network-wide) local constraints: assignments
/// first, then clears, then co-occurrence rejections.
LocalOutcome apply_local(const GrammarNetwork& net, NodeId node, const AttributeVector& att);

struct PercolationOutcome {
    std::optional<AttributeVector> att;
    std::string blocked_by;  // rendered primitive when blocked
    bool passed() const { return att.has_value(); }
};

/// Applies a link's percolation constraints. Barrier links implicitly block
/// `+whbarrier`, flip `-whbarrier` to `+whbarrier`, then block `-cm`.
PercolationOutcome apply_percolation(const GrammarNetwork& net, LinkIndex link,
                                     const AttributeVector& att);

/// What a message keeps when it travels up a link: everything across head
/// links, only `carry` features (plus the link's `keep` list) otherwise.
AttributeVector project(const GrammarNetwork& net, LinkIndex link, const AttributeVector& att);

}  // namespace principar
