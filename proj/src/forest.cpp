#include "principar/forest.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

namespace principar {

Weight sense_weight(const GrammarNetwork& net, const AttributeVector& sense) {
    auto rare = net.registry.find("rare");
    if (!rare) return Weight{};
    auto v = sense.get(*rare);
    if (!v) return Weight{};
    const std::string& atom = net.registry.at(*rare).domain.at(*v);
    if (atom == "very") return net.big_weight;
    if (atom == "very-very") return net.big_weight * 2;
    return Weight{};
}

namespace {

struct NodeKey {
    NodeId node;
    int start;
    int end;
    AttributeVector att;
    bool operator==(const NodeKey&) const = default;
};

struct NodeKeyHash {
    std::size_t operator()(const NodeKey& k) const {
        std::size_t h = k.att.hash();
        h ^= (static_cast<std::size_t>(k.node) * 0x9e3779b97f4a7c15ull) + static_cast<std::size_t>(k.start) * 1000003u +
             static_cast<std::size_t>(k.end + 1);
        return h;
    }
};

NodeKey key_of(const ChartItem& it) { return {it.node, it.span.start, it.span.end, it.att}; }

using Sequence = std::vector<ForestChild>;

class ForestBuilder {
public:
    ForestBuilder(const GrammarNetwork& net, const Chart& chart, ParseForest& forest)
        : net_(net), chart_(chart), forest_(forest) {
        for (std::size_t i = 0; i < chart.items.size(); ++i)
            if (chart.items[i].complete) groups_[key_of(chart.items[i])].push_back(static_cast<int>(i));
    }

    void build() {
        if (chart_.roots.empty()) return;
        ForestNode root;
        forest_.nodes.push_back(root);
        forest_.root = 0;
        state_.push_back(0);
        std::vector<ForestEdge> alts;
        for (int r : chart_.roots) {
            ForestEdge e;
            e.kind = EdgeKind::Root;
            e.children.push_back(ForestChild{node_for(r), -1, std::nullopt});
            add_unique(alts, std::move(e));
        }
        forest_.nodes[0].alternatives = std::move(alts);
        visit(0);
        if (forest_.nodes[0].alternatives.empty()) {
            forest_.nodes.clear();
            forest_.root = -1;
        }
    }

private:
    int node_for(int item) {
        NodeKey k = key_of(chart_.items[static_cast<std::size_t>(item)]);
        auto [it, inserted] = index_.try_emplace(k, static_cast<int>(forest_.nodes.size()));
        if (inserted) {
            ForestNode n;
            n.node = k.node;
            n.span = Span{k.start, k.end};
            n.att = k.att;
            forest_.nodes.push_back(std::move(n));
            state_.push_back(0);
            expanded_.resize(forest_.nodes.size(), false);
        }
        return it->second;
    }

    static void add_unique(std::vector<ForestEdge>& alts, ForestEdge e) {
        for (const auto& a : alts)
            if (a.kind == e.kind && a.children == e.children) return;
        alts.push_back(std::move(e));
    }

    const std::vector<Sequence>& sequences(int item) {
        if (auto it = seqs_.find(item); it != seqs_.end()) return it->second;
        std::vector<Sequence> out;
        for (const Derivation& d : chart_.items[static_cast<std::size_t>(item)].derivations) {
            switch (d.kind) {
                case DerivationKind::Anchor:
                    out.push_back({ForestChild{-1, d.leaf, std::nullopt}});
                    break;
                case DerivationKind::Arrival:
                    out.push_back({ForestChild{node_for(d.child), -1, d.link}});
                    break;
                case DerivationKind::Combine: {
                    auto lefts = sequences(d.left);
                    const auto& rights = sequences(d.right);
                    for (const auto& l : lefts)
                        for (const auto& r : rights) {
                            Sequence s = l;
                            s.insert(s.end(), r.begin(), r.end());
                            out.push_back(std::move(s));
                        }
                    break;
                }
                default:
                    break;
            }
        }
        std::sort(out.begin(), out.end(), [](const Sequence& a, const Sequence& b) {
            auto proj = [](const Sequence& s) {
                std::vector<std::tuple<int, int, long>> v;
                for (const auto& c : s) v.emplace_back(c.node, c.leaf, c.link ? static_cast<long>(*c.link) : -1L);
                return v;
            };
            return proj(a) < proj(b);
        });
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return seqs_.emplace(item, std::move(out)).first->second;
    }

    Weight edge_weight(const ForestEdge& e) const {
        Weight w;
        for (const auto& c : e.children) {
            if (c.link) w += net_.link(*c.link).weight;
            if (c.is_word()) {
                const Leaf& leaf = chart_.leaves[static_cast<std::size_t>(c.leaf)];
                if (!leaf.trace) w += sense_weight(net_, leaf.sense.self);
            }
        }
        return w;
    }

    void expand(int f) {
        if (expanded_[static_cast<std::size_t>(f)]) return;
        expanded_[static_cast<std::size_t>(f)] = true;
        const ForestNode snapshot = forest_.nodes[static_cast<std::size_t>(f)];
        NodeKey k{snapshot.node, snapshot.span.start, snapshot.span.end, snapshot.att};
        std::vector<ForestEdge> alts;
        for (int item : groups_.at(k)) {
            const ChartItem& it = chart_.items[static_cast<std::size_t>(item)];
            if (it.kind == ItemKind::Partial) {
                for (const auto& s : sequences(item)) {
                    ForestEdge e;
                    e.kind = EdgeKind::Branch;
                    e.children = s;
                    add_unique(alts, std::move(e));
                }
                continue;
            }
            for (const Derivation& d : chart_.items[static_cast<std::size_t>(item)].derivations) {
                ForestEdge e;
                if (d.kind == DerivationKind::Leaf) {
                    e.kind = EdgeKind::Leaf;
                    e.children.push_back(ForestChild{-1, d.leaf, std::nullopt});
                } else if (d.kind == DerivationKind::Forward) {
                    e.kind = EdgeKind::Forward;
                    e.children.push_back(ForestChild{node_for(d.child), -1, std::nullopt});
                } else {
                    continue;
                }
                add_unique(alts, std::move(e));
            }
        }
        for (auto& e : alts) e.weight = edge_weight(e);
        forest_.nodes[static_cast<std::size_t>(f)].alternatives = std::move(alts);
    }

    // Depth-first: drops alternatives that close a cycle or lead to a node
    // without alternatives, and fixes min_weight bottom-up.
    void visit(int f) {
        state_[static_cast<std::size_t>(f)] = 1;
        if (f != forest_.root) expand(f);
        std::vector<ForestEdge> alts = forest_.nodes[static_cast<std::size_t>(f)].alternatives;
        std::vector<ForestEdge> kept;
        std::optional<Weight> best;
        for (auto& e : alts) {
            bool live = true;
            Weight w = e.weight;
            for (const auto& c : e.children) {
                if (c.is_word()) continue;
                int st = state_[static_cast<std::size_t>(c.node)];
                if (st == 1) {
                    live = false;
                    break;
                }
                if (st == 0) visit(c.node);
                const ForestNode& child = forest_.nodes[static_cast<std::size_t>(c.node)];
                if (child.alternatives.empty()) {
                    live = false;
                    break;
                }
                w += child.min_weight;
            }
            if (!live) continue;
            if (!best || w < *best) best = w;
            kept.push_back(std::move(e));
        }
        ForestNode& node = forest_.nodes[static_cast<std::size_t>(f)];
        node.alternatives = std::move(kept);
        node.min_weight = best.value_or(Weight{});
        state_[static_cast<std::size_t>(f)] = 2;
    }

    const GrammarNetwork& net_;
    const Chart& chart_;
    ParseForest& forest_;
    std::unordered_map<NodeKey, std::vector<int>, NodeKeyHash> groups_;
    std::unordered_map<NodeKey, int, NodeKeyHash> index_;
    std::unordered_map<int, std::vector<Sequence>> seqs_;
    std::vector<int> state_;
    std::vector<bool> expanded_ = std::vector<bool>(1, true);
};

}  // namespace

ParseForest build_forest(const GrammarNetwork& net, const Chart& chart) {
    ParseForest forest;
    forest.tokens = chart.tokens;
    forest.leaves = chart.leaves;
    forest.big_weight = net.big_weight;
    ForestBuilder(net, chart, forest).build();
    return forest;
}

std::uint64_t count_trees(const ParseForest& forest) {
    if (forest.empty()) return 0;
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    std::vector<std::optional<std::uint64_t>> memo(forest.nodes.size());
    std::function<std::uint64_t(int)> count = [&](int f) -> std::uint64_t {
        auto& m = memo[static_cast<std::size_t>(f)];
        if (m) return *m;
        std::uint64_t total = 0;
        for (const auto& e : forest.nodes[static_cast<std::size_t>(f)].alternatives) {
            std::uint64_t prod = 1;
            for (const auto& c : e.children) {
                if (c.is_word()) continue;
                std::uint64_t n = count(c.node);
                prod = (n != 0 && prod > kMax / n) ? kMax : prod * n;
            }
            total = (total > kMax - prod) ? kMax : total + prod;
        }
        m = total;
        return total;
    };
    return count(forest.root);
}

ForestStats forest_stats(const ParseForest& forest) {
    ForestStats s;
    if (forest.empty()) return s;
    s.nodes = forest.nodes.size() - 1;
    for (std::size_t i = 1; i < forest.nodes.size(); ++i) s.alternatives += forest.nodes[i].alternatives.size();
    s.min_weight = forest.min_weight();
    s.trees = count_trees(forest);
    return s;
}

// ---------------------------------------------------------------------------
// Enumeration

TreeEnumerator::TreeEnumerator(const ParseForest& forest) : forest_(forest), state_(forest.nodes.size()) {}

void TreeEnumerator::push(int node, int edge, std::vector<int> ranks) {
    NodeState& st = state_[static_cast<std::size_t>(node)];
    if (!st.seen.emplace(edge, ranks).second) return;
    const ForestEdge& e = forest_.nodes[static_cast<std::size_t>(node)].alternatives[static_cast<std::size_t>(edge)];
    Weight w = e.weight;
    std::size_t r = 0;
    for (const auto& c : e.children) {
        if (c.is_word()) continue;
        const Candidate* sub = kth(c.node, static_cast<std::size_t>(ranks[r++]));
        if (!sub) return;
        w += sub->weight;
    }
    state_[static_cast<std::size_t>(node)].frontier.insert(Candidate{w, edge, std::move(ranks)});
}

const TreeEnumerator::Candidate* TreeEnumerator::kth(int node, std::size_t k) {
    auto idx = static_cast<std::size_t>(node);
    if (!state_[idx].initialized) {
        state_[idx].initialized = true;
        const auto& alts = forest_.nodes[idx].alternatives;
        for (std::size_t e = 0; e < alts.size(); ++e) {
            std::size_t arity = 0;
            for (const auto& c : alts[e].children) arity += c.is_word() ? 0 : 1;
            push(node, static_cast<int>(e), std::vector<int>(arity, 0));
        }
    }
    while (state_[idx].best.size() <= k) {
        NodeState& st = state_[idx];
        if (st.expanded < st.best.size()) {
            Candidate last = st.best[st.expanded++];
            for (std::size_t i = 0; i < last.ranks.size(); ++i) {
                auto ranks = last.ranks;
                ++ranks[i];
                push(node, last.edge, std::move(ranks));
            }
            continue;
        }
        if (st.frontier.empty()) return nullptr;
        st.best.push_back(*st.frontier.begin());
        st.frontier.erase(st.frontier.begin());
    }
    return &state_[idx].best[k];
}

ParseTree TreeEnumerator::build(int node, std::size_t k, std::optional<LinkIndex> link) {
    const Candidate cand = *kth(node, k);
    const ForestNode& fn = forest_.nodes[static_cast<std::size_t>(node)];
    const ForestEdge& e = fn.alternatives[static_cast<std::size_t>(cand.edge)];
    ParseTree t;
    t.node = fn.node;
    t.span = fn.span;
    t.link = link;
    t.weight = cand.weight;
    std::size_t r = 0;
    for (const auto& c : e.children) {
        if (c.is_word()) {
            const Leaf& leaf = forest_.leaves[static_cast<std::size_t>(c.leaf)];
            ParseTree w;
            w.node = leaf.node;
            w.span = leaf.span;
            w.word = true;
            w.trace = leaf.trace;
            w.sense = leaf.sense.self;
            if (leaf.trace) {
                w.text = "*t*";
            } else {
                for (int p = leaf.span.start; p <= leaf.span.end; ++p) {
                    if (!w.text.empty()) w.text += ' ';
                    w.text += forest_.tokens[static_cast<std::size_t>(p - 1)];
                }
            }
            t.children.push_back(std::move(w));
        } else {
            t.children.push_back(build(c.node, static_cast<std::size_t>(cand.ranks[r++]), c.link));
        }
    }
    return t;
}

std::optional<ParseTree> TreeEnumerator::next() {
    if (forest_.empty()) return std::nullopt;
    if (!kth(forest_.root, emitted_)) return std::nullopt;
    ParseTree wrapper = build(forest_.root, emitted_++, std::nullopt);
    ParseTree t = std::move(wrapper.children.front());
    t.weight = wrapper.weight;
    return t;
}

std::vector<ParseTree> prune_and_output(const ParseForest& forest, std::size_t max_trees) {
    std::vector<ParseTree> out;
    if (forest.empty()) return out;
    Weight bound = forest.min_weight() + Weight::tenths(forest.big_weight.tenths() / 2);
    TreeEnumerator en(forest);
    while (out.size() < max_trees) {
        auto t = en.next();
        if (!t || !(t->weight < bound)) break;
        out.push_back(std::move(*t));
    }
    return out;
}

Weight audit_weight(const GrammarNetwork& net, const ParseTree& tree) {
    Weight w;
    if (tree.link) w += net.link(*tree.link).weight;
    if (tree.word && !tree.trace) w += sense_weight(net, tree.sense);
    for (const auto& c : tree.children) w += audit_weight(net, c);
    return w;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

struct RenderNode {
    std::string label;
    bool word = false;
    std::vector<RenderNode> children;
};

RenderNode shape(const GrammarNetwork& net, const ParseTree& t) {
    if (t.word) return RenderNode{t.text, true, {}};
    // A category reached through subsumption shows as its specific child.
    if (t.children.size() == 1 && !t.children[0].word && !t.children[0].link) return shape(net, t.children[0]);
    RenderNode r{net.node(t.node).name, false, {}};
    const GrammarNode& gn = net.node(t.node);
    std::optional<LinkIndex> missing_head;
    bool has_word = std::any_of(t.children.begin(), t.children.end(), [](const ParseTree& c) { return c.word; });
    if (!has_word && (gn.kind == NodeKind::BarLevel || gn.kind == NodeKind::Maximal)) {
        for (LinkIndex li : gn.children) {
            if (net.link(li).role != Role::Head) continue;
            bool present = std::any_of(t.children.begin(), t.children.end(),
                                       [&](const ParseTree& c) { return c.link && *c.link == li; });
            if (!present) missing_head = li;
        }
    }
    bool placed = !missing_head;
    for (const auto& c : t.children) {
        if (!placed && c.link && net.link(*c.link).id > net.link(*missing_head).id) {
            r.children.push_back(RenderNode{net.node(net.link(*missing_head).child).name, false, {}});
            placed = true;
        }
        r.children.push_back(shape(net, c));
    }
    if (!placed) r.children.push_back(RenderNode{net.node(net.link(*missing_head).child).name, false, {}});
    return r;
}

void bracketed(const RenderNode& n, std::string& out) {
    if (n.word) {
        out += n.label;
        return;
    }
    out += '(';
    out += n.label;
    for (const auto& c : n.children) {
        out += ' ';
        bracketed(c, out);
    }
    out += ')';
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

int graph(const RenderNode& n, int& next, std::ostringstream& os) {
    int id = next++;
    os << "  n" << id << " [label=\"" << dot_escape(n.label) << "\"" << (n.word ? ", shape=plaintext" : "") << "];\n";
    for (const auto& c : n.children) {
        int cid = graph(c, next, os);
        os << "  n" << id << " -> n" << cid << ";\n";
    }
    return id;
}

}  // namespace

std::string render(const GrammarNetwork& net, const ParseTree& tree, TreeFormat format) {
    RenderNode r = shape(net, tree);
    if (format == TreeFormat::Bracketed) {
        std::string out;
        bracketed(r, out);
        return out;
    }
    std::ostringstream os;
    os << "digraph parse {\n  node [shape=ellipse];\n";
    int next = 0;
    graph(r, next, os);
    os << "}\n";
    return os.str();
}

}  // namespace principar
