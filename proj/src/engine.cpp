#include "principar/engine.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <deque>
#include <unordered_map>

namespace principar {

std::string to_string(const Span& s) {
    return "[" + std::to_string(s.start) + "," + std::to_string(s.end) + "]";
}

std::vector<std::string> tokenize(std::string_view sentence) {
    static constexpr std::string_view kPunct = ".,?!;:";
    std::vector<std::string> out;
    std::string word;
    auto flush = [&] {
        if (!word.empty()) out.push_back(std::move(word));
        word.clear();
    };
    for (char c : sentence) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else if (kPunct.find(c) != std::string_view::npos) {
            flush();
            out.emplace_back(1, c);
        } else {
            word += c;
        }
    }
    flush();
    while (!out.empty() && out.back().size() == 1 && kPunct.find(out.back()[0]) != std::string_view::npos)
        out.pop_back();
    return out;
}

std::string_view to_string(CombineFailure f) {
    switch (f) {
        case CombineFailure::None: return "none";
        case CombineFailure::NotPartial: return "not-partial";
        case CombineFailure::NotAdjacent: return "not-adjacent";
        case CombineFailure::BothEmpty: return "both-empty";
        case CombineFailure::AttributeClash: return "attribute-clash";
        case CombineFailure::LinkOverlap: return "link-overlap";
        case CombineFailure::OrderViolation: return "order-violation";
        case CombineFailure::LocalConstraint: return "local-constraint";
    }
    return "?";
}

namespace {

std::uint64_t bit(int id) { return std::uint64_t{1} << id; }

AttributeVector strip_annotations(const FeatureRegistry& reg, const AttributeVector& att) {
    AttributeVector out = att;
    for (const auto& b : att.entries())
        if (reg.at(b.feature).annotation) out = out.without(b.feature);
    return out;
}

}  // namespace

std::optional<NodeId> anchor_for(const GrammarNetwork& net, const LexicalSense& sense) {
    auto cat = net.registry.find("cat");
    for (const auto& a : net.anchors) {
        bool ok = std::all_of(a.when.entries().begin(), a.when.entries().end(),
                              [&](const Binding& b) { return sense.self.has(b); });
        if (!ok || a.comp_cats.size() != sense.comps.size()) continue;
        for (std::size_t i = 0; i < a.comp_cats.size() && ok; ++i) {
            auto c = cat ? sense.comps[i].get(*cat) : std::nullopt;
            ok = c && *c == a.comp_cats[i];
        }
        if (ok) return a.node;
    }
    return std::nullopt;
}

std::vector<Leaf> lexical_analysis(const GrammarNetwork& net, LexiconStore& store,
                                   const std::vector<std::string>& tokens, const ParserConfig& config,
                                   std::vector<std::string>& diagnostics) {
    std::vector<Leaf> leaves;
    std::vector<bool> covered(tokens.size(), false);
    auto add = [&](const LexicalSense& s, std::size_t pos) {
        auto node = anchor_for(net, s);
        if (!node) {
            diagnostics.push_back("no anchor for sense " + render(net.registry, s.self) + " of '" + s.word + "'");
            return;
        }
        Leaf leaf;
        leaf.node = *node;
        leaf.sense = s;
        leaf.span.start = static_cast<int>(pos) + 1 - s.lead;
        leaf.span.end = leaf.span.start + s.span_width - 1;
        for (int k = leaf.span.start; k <= leaf.span.end; ++k) covered[static_cast<std::size_t>(k - 1)] = true;
        leaves.push_back(std::move(leaf));
    };
    for (std::size_t pos = 0; pos < tokens.size(); ++pos)
        for (const auto& s : lookup_senses(store, tokens, pos, &diagnostics)) add(s, pos);

    std::vector<AttributeVector> guesses;
    if (config.guess_unknown) {
        auto cat = net.registry.find("cat");
        for (const auto& a : net.anchors) {
            if (!a.comp_cats.empty() || !cat) continue;
            auto c = a.when.get(*cat);
            if (!c) continue;
            const auto& atom = net.registry.at(*cat).domain.at(*c);
            if (std::find(config.guess_categories.begin(), config.guess_categories.end(), atom) !=
                config.guess_categories.end())
                guesses.push_back(a.when);
        }
    }
    bool failed = false;
    for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
        if (covered[pos]) continue;
        if (guesses.empty()) {
            diagnostics.push_back("unknown word '" + tokens[pos] + "' at position " + std::to_string(pos + 1));
            failed = true;
            continue;
        }
        diagnostics.push_back("guessing senses for unknown word '" + tokens[pos] + "'");
        for (const auto& g : guesses) {
            LexicalSense s;
            s.word = tokens[pos];
            s.self = g;
            add(s, pos);
        }
    }
    if (failed) leaves.clear();
    return leaves;
}

std::vector<Leaf> hypothesize_gaps(const GrammarNetwork& net, const std::vector<Leaf>& leaves,
                                   int sentence_length) {
    std::vector<Leaf> out;
    if (!net.trace) return out;
    auto wh = net.registry.find("wh");
    if (!wh) return out;
    int leftmost = sentence_length + 1;
    for (const auto& l : leaves)
        if (l.sense.self.has(Binding{*wh, 1})) leftmost = std::min(leftmost, l.span.end);
    for (int p = leftmost + 1; p <= sentence_length + 1; ++p) {
        Leaf t;
        t.node = net.trace->node;
        t.span = Span{p, p - 1};
        t.trace = true;
        t.sense.word = "*t*";
        t.sense.span_width = 0;
        t.sense.self = net.trace->features;
        out.push_back(std::move(t));
    }
    return out;
}

bool is_complete(const GrammarNetwork& net, NodeId node, std::uint64_t links, ItemKind kind) {
    if (kind != ItemKind::Partial) return true;
    const GrammarNode& n = net.node(node);
    if (n.children.empty()) return true;
    if (n.completion) {
        for (int id : *n.completion)
            if (!(links & bit(id))) return false;
        return true;
    }
    bool lexical = n.kind == NodeKind::LexicalCategory || n.kind == NodeKind::Subcategory;
    if (lexical && !(links & bit(kAnchorLinkId))) return false;
    for (LinkIndex li : n.children) {
        const DominanceLink& l = net.link(li);
        if ((l.obligatory || (!lexical && l.role == Role::Head)) && !(links & bit(l.id))) return false;
    }
    return true;
}

CombineOutcome combine(const GrammarNetwork& net, const ChartItem& a, const ChartItem& b) {
    CombineOutcome out;
    if (a.node != b.node || a.kind != ItemKind::Partial || b.kind != ItemKind::Partial ||
        std::popcount(b.links) != 1) {
        out.failure = CombineFailure::NotPartial;
        return out;
    }
    if (a.span.end + 1 != b.span.start) {
        out.failure = CombineFailure::NotAdjacent;
        return out;
    }
    if (a.span.empty() && b.span.empty()) {
        out.failure = CombineFailure::BothEmpty;
        return out;
    }
    auto att = unify(a.att, b.att);
    if (!att) {
        out.failure = CombineFailure::AttributeClash;
        return out;
    }
    if (a.links & b.links) {
        out.failure = CombineFailure::LinkOverlap;
        return out;
    }
    if (a.links && 63 - std::countl_zero(a.links) >= std::countr_zero(b.links)) {
        out.failure = CombineFailure::OrderViolation;
        return out;
    }
    auto local = apply_local(net, a.node, *att);
    if (!local.accepted()) {
        out.failure = CombineFailure::LocalConstraint;
        return out;
    }
    ChartItem item;
    item.node = a.node;
    item.span = Span{a.span.start, b.span.end};
    item.att = std::move(*local.att);
    item.kind = ItemKind::Partial;
    item.links = a.links | b.links;
    item.complete = is_complete(net, item.node, item.links, item.kind);
    out.item = std::move(item);
    return out;
}

bool is_acceptable_root(const GrammarNetwork& net, const ChartItem& item, int n) {
    if (!item.complete || item.span.start != 1 || item.span.end != n) return false;
    if (auto cm = net.registry.find("cm"); cm && item.att.has(Binding{*cm, 0})) return false;
    if (auto wb = net.registry.find("whbarrier"); wb && item.att.binds(*wb)) return false;
    return true;
}

namespace {

struct ItemKey {
    NodeId node;
    int start;
    int end;
    ItemKind kind;
    std::uint64_t links;
    AttributeVector att;
    bool operator==(const ItemKey&) const = default;
};

struct ItemKeyHash {
    std::size_t operator()(const ItemKey& k) const {
        std::size_t h = k.att.hash();
        auto mix = [&](std::uint64_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
        mix(k.node);
        mix(static_cast<std::uint64_t>(k.start + 1));
        mix(static_cast<std::uint64_t>(k.end + 1));
        mix(static_cast<std::uint64_t>(k.kind));
        mix(k.links);
        return h;
    }
};

std::uint64_t pos_key(NodeId node, int pos) {
    return (static_cast<std::uint64_t>(node) << 32) | static_cast<std::uint32_t>(pos + 1);
}

class Engine {
public:
    Engine(const GrammarNetwork& net, Chart& chart, ParseStats& stats) : net_(net), chart_(chart), stats_(stats) {}

    void feed(int leaf_index) {
        const Leaf& leaf = chart_.leaves[static_cast<std::size_t>(leaf_index)];
        AttributeVector att = leaf.trace ? leaf.sense.self : strip_annotations(net_.registry, leaf.sense.self);
        ++stats_.messages_sent;
        auto local = apply_local(net_, leaf.node, att);
        if (!local.accepted()) {
            ++stats_.messages_blocked;
            return;
        }
        ChartItem item;
        item.node = leaf.node;
        item.span = leaf.span;
        item.att = std::move(*local.att);
        Derivation d;
        d.leaf = leaf_index;
        if (leaf.trace || net_.node(leaf.node).children.empty()) {
            item.kind = ItemKind::Whole;
            d.kind = DerivationKind::Leaf;
        } else {
            item.kind = ItemKind::Partial;
            item.links = bit(kAnchorLinkId);
            d.kind = DerivationKind::Anchor;
        }
        item.complete = is_complete(net_, item.node, item.links, item.kind);
        add(std::move(item), d);
        run();
        ++stats_.rounds;
    }

private:
    void add(ChartItem item, const Derivation& d) {
        ++stats_.derivations;
        ItemKey key{item.node, item.span.start, item.span.end, item.kind, item.links, item.att};
        auto [it, inserted] = index_.try_emplace(std::move(key), static_cast<int>(chart_.items.size()));
        if (!inserted) {
            chart_.items[static_cast<std::size_t>(it->second)].derivations.push_back(d);
            return;
        }
        item.derivations.push_back(d);
        chart_.items.push_back(std::move(item));
        ++stats_.items;
        agenda_.push_back(it->second);
    }

    void run() {
        while (!agenda_.empty()) {
            int id = agenda_.front();
            agenda_.pop_front();
            process(id);
        }
    }

    void process(int id) {
        const ChartItem& x = chart_.items[static_cast<std::size_t>(id)];
        NodeId node = x.node;
        Span span = x.span;
        bool single = std::popcount(x.links) == 1;
        if (x.kind == ItemKind::Partial) {
            by_end_[pos_key(node, span.end)].push_back(id);
            if (single) by_start_[pos_key(node, span.start)].push_back(id);
            if (auto it = by_start_.find(pos_key(node, span.end + 1)); it != by_start_.end()) {
                auto rights = it->second;
                for (int b : rights) try_combine(id, b);
            }
            if (single) {
                if (auto it = by_end_.find(pos_key(node, span.start - 1)); it != by_end_.end()) {
                    auto lefts = it->second;
                    for (int a : lefts)
                        if (a != id) try_combine(a, id);
                }
            }
        }
        if (chart_.items[static_cast<std::size_t>(id)].complete) send_up(id);
    }

    void try_combine(int a, int b) {
        ++stats_.combinations_tried;
        auto out = combine(net_, chart_.items[static_cast<std::size_t>(a)], chart_.items[static_cast<std::size_t>(b)]);
        if (!out.item) {
            if (out.failure == CombineFailure::LocalConstraint) ++stats_.messages_blocked;
            return;
        }
        Derivation d;
        d.kind = DerivationKind::Combine;
        d.left = a;
        d.right = b;
        add(std::move(*out.item), d);
    }

    void send_up(int id) {
        const ChartItem x = chart_.items[static_cast<std::size_t>(id)];
        const GrammarNode& n = net_.node(x.node);
        for (NodeId g : n.generals) {
            ++stats_.messages_sent;
            auto local = apply_local(net_, g, x.att);
            if (!local.accepted()) {
                ++stats_.messages_blocked;
                continue;
            }
            ChartItem item;
            item.node = g;
            item.span = x.span;
            item.att = std::move(*local.att);
            item.kind = ItemKind::Forwarded;
            item.complete = true;
            Derivation d;
            d.kind = DerivationKind::Forward;
            d.child = id;
            add(std::move(item), d);
        }
        for (LinkIndex li : n.parents) {
            ++stats_.messages_sent;
            const DominanceLink& link = net_.link(li);
            auto perc = apply_percolation(net_, li, project(net_, li, x.att));
            if (!perc.passed()) {
                ++stats_.messages_blocked;
                continue;
            }
            auto local = apply_local(net_, link.parent, *perc.att);
            if (!local.accepted()) {
                ++stats_.messages_blocked;
                continue;
            }
            ChartItem item;
            item.node = link.parent;
            item.span = x.span;
            item.att = std::move(*local.att);
            item.kind = ItemKind::Partial;
            item.links = bit(link.id);
            item.complete = is_complete(net_, item.node, item.links, item.kind);
            Derivation d;
            d.kind = DerivationKind::Arrival;
            d.child = id;
            d.link = li;
            add(std::move(item), d);
        }
    }

    const GrammarNetwork& net_;
    Chart& chart_;
    ParseStats& stats_;
    std::unordered_map<ItemKey, int, ItemKeyHash> index_;
    std::unordered_map<std::uint64_t, std::vector<int>> by_end_;
    std::unordered_map<std::uint64_t, std::vector<int>> by_start_;
    std::deque<int> agenda_;
};

}  // namespace

ParseResult parse_tokens(const GrammarNetwork& net, LexiconStore& store, std::vector<std::string> tokens,
                         const ParserConfig& config) {
    ParseResult result;
    Chart& chart = result.chart;
    chart.tokens = std::move(tokens);
    const int n = static_cast<int>(chart.tokens.size());
    if (n == 0) {
        result.diagnostics.push_back("empty sentence");
        return result;
    }
    try {
        chart.leaves = lexical_analysis(net, store, chart.tokens, config, result.diagnostics);
    } catch (const LexiconError& e) {
        result.diagnostics.push_back(std::string("lexicon: ") + e.what());
        return result;
    }
    if (chart.leaves.empty()) return result;
    auto gaps = hypothesize_gaps(net, chart.leaves, n);
    chart.leaves.insert(chart.leaves.end(), gaps.begin(), gaps.end());
    result.ok = true;

    std::vector<int> order(chart.leaves.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const Span& x = chart.leaves[static_cast<std::size_t>(a)].span;
        const Span& y = chart.leaves[static_cast<std::size_t>(b)].span;
        return std::pair(x.end, x.start) < std::pair(y.end, y.start);
    });
    Engine engine(net, chart, result.stats);
    for (int leaf : order) engine.feed(leaf);

    for (NodeId top : net.top_nodes) {
        for (std::size_t i = 0; i < chart.items.size(); ++i)
            if (chart.items[i].node == top && is_acceptable_root(net, chart.items[i], n))
                chart.roots.push_back(static_cast<int>(i));
        if (!chart.roots.empty()) break;
    }
    if (chart.roots.empty()) {
        int longest = 0;
        for (const auto& it : chart.items)
            if (it.complete) longest = std::max(longest, it.span.length());
        std::string found;
        for (const auto& it : chart.items) {
            if (!it.complete || it.span.length() != longest || it.kind == ItemKind::Forwarded) continue;
            std::string entry = net.node(it.node).name + to_string(it.span);
            if (found.find(entry) != std::string::npos) continue;
            found += (found.empty() ? "" : " ") + entry;
        }
        result.diagnostics.push_back("no parse: longest complete analyses " + (found.empty() ? "none" : found) + "; " +
                                     std::to_string(result.stats.messages_blocked) + " messages blocked");
    }
    return result;
}

ParseResult parse(const GrammarNetwork& net, LexiconStore& store, std::string_view sentence,
                  const ParserConfig& config) {
    return parse_tokens(net, store, tokenize(sentence), config);
}

}  // namespace principar
