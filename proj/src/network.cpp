#include "principar/network.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace principar {

Weight Weight::from_double(double w) {
    return Weight::tenths(static_cast<std::int64_t>(std::llround(w * 10.0)));
}

std::string Weight::str() const {
    std::int64_t whole = tenths_ / 10;
    std::int64_t frac = tenths_ % 10;
    if (frac < 0) frac = -frac;
    std::string s = (tenths_ < 0 && whole == 0 ? "-" : "") + std::to_string(whole);
    if (frac) s += "." + std::to_string(frac);
    return s;
}

GrammarError::GrammarError(const std::string& msg, int line, int column)
    : std::runtime_error(line ? "line " + std::to_string(line) + ":" + std::to_string(column) +
                                    ": " + msg
                              : msg),
      line_(line),
      column_(column) {}

std::string_view to_string(NodeKind k) {
    switch (k) {
        case NodeKind::LexicalCategory: return "lexical";
        case NodeKind::Subcategory: return "subcategory";
        case NodeKind::BarLevel: return "bar";
        case NodeKind::Maximal: return "maximal";
    }
    return "?";
}

std::string_view to_string(Role r) {
    switch (r) {
        case Role::Head: return "head";
        case Role::Complement: return "complement";
        case Role::Adjunct: return "adjunct";
        case Role::Specifier: return "specifier";
    }
    return "?";
}

namespace {

std::string render_names(const FeatureRegistry& reg, const std::vector<FeatureId>& ids) {
    std::string out = "{";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ", ";
        out += reg.at(ids[i]).name;
    }
    return out + "}";
}

std::string render_braced(const FeatureRegistry& reg, const AttributeVector& v) {
    std::string out = "{";
    bool first = true;
    for (const auto& b : v.entries()) {
        if (!first) out += ", ";
        first = false;
        out += reg.render(b);
    }
    return out + "}";
}

}  // namespace

std::string render(const FeatureRegistry& reg, const Constraint& c) {
    return std::visit(
        [&](const auto& p) -> std::string {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Assign>) {
                std::string s = "assign " + render_braced(reg, p.features);
                if (!p.guard.empty()) s += " when " + render_braced(reg, p.guard);
                return s;
            } else if constexpr (std::is_same_v<T, RejectCooccurrence>) {
                return "reject " + render_braced(reg, p.literals);
            } else if constexpr (std::is_same_v<T, ClearOn>) {
                std::string s = "clear " + render_names(reg, p.cleared);
                if (!p.trigger.empty()) s += " when " + render_braced(reg, p.trigger);
                return s;
            } else if constexpr (std::is_same_v<T, BlockIf>) {
                return "block " + reg.render(p.literal);
            } else {
                return "flip " + reg.render(p.from) + " -> " + reg.render(p.to);
            }
        },
        c);
}

// ---------------------------------------------------------------------------
// GrammarNetwork

NodeId GrammarNetwork::add_node(std::string name, NodeKind kind) {
    if (find_node(name)) throw GrammarError("node declared twice: " + name);
    GrammarNode n;
    n.name = std::move(name);
    n.kind = kind;
    nodes.push_back(std::move(n));
    return static_cast<NodeId>(nodes.size() - 1);
}

LinkIndex GrammarNetwork::add_dominance(DominanceLink link) {
    auto idx = static_cast<LinkIndex>(dominance.size());
    nodes.at(link.parent).children.push_back(idx);
    nodes.at(link.child).parents.push_back(idx);
    dominance.push_back(std::move(link));
    return idx;
}

void GrammarNetwork::add_subsumption(NodeId general, NodeId specific) {
    subsumption.push_back({general, specific});
    nodes.at(general).specifics.push_back(specific);
    nodes.at(specific).generals.push_back(general);
}

std::optional<NodeId> GrammarNetwork::find_node(std::string_view name) const {
    for (NodeId i = 0; i < nodes.size(); ++i)
        if (nodes[i].name == name) return i;
    return std::nullopt;
}

NodeId GrammarNetwork::require_node(std::string_view name) const {
    auto id = find_node(name);
    if (!id) throw GrammarError("undeclared node: " + std::string(name));
    return *id;
}

std::optional<LinkIndex> GrammarNetwork::find_link(NodeId parent, int id) const {
    for (LinkIndex li : nodes.at(parent).children)
        if (dominance[li].id == id) return li;
    return std::nullopt;
}

std::string GrammarNetwork::link_name(LinkIndex i) const {
    const auto& l = dominance.at(i);
    return nodes.at(l.parent).name + " -> " + nodes.at(l.child).name + " id=" + std::to_string(l.id);
}

void GrammarNetwork::refresh() {
    carry_mask_.assign(registry.size(), false);
    for (FeatureId f = 0; f < registry.size(); ++f) carry_mask_[f] = registry.at(f).carry;
}

// ---------------------------------------------------------------------------
// Loader

namespace {

struct Token {
    std::string text;
    int column = 0;
};

std::vector<Token> tokenize_line(std::string_view line, int lineno) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        if (line[i] == '#') break;
        std::size_t start = i;
        int depth = 0;
        while (i < line.size()) {
            char c = line[i];
            if (c == '{' || c == '(') ++depth;
            if (c == '}' || c == ')') {
                if (--depth < 0) throw GrammarError("unbalanced bracket", lineno, static_cast<int>(i + 1));
            }
            if (depth == 0 && std::isspace(static_cast<unsigned char>(c))) break;
            ++i;
        }
        if (depth != 0) throw GrammarError("unbalanced bracket", lineno, static_cast<int>(start + 1));
        out.push_back({std::string(line.substr(start, i - start)), static_cast<int>(start + 1)});
    }
    return out;
}

class LineParser {
public:
    LineParser(GrammarNetwork& net, std::vector<Token> toks, int lineno)
        : net_(net), toks_(std::move(toks)), line_(lineno) {}

    void run();

private:
    [[noreturn]] void fail(const std::string& msg) const {
        int col = pos_ < toks_.size() ? toks_[pos_].column : (toks_.empty() ? 1 : toks_.back().column);
        throw GrammarError(msg, line_, col);
    }
    bool done() const { return pos_ >= toks_.size(); }
    const std::string& peek() const {
        static const std::string empty;
        return done() ? empty : toks_[pos_].text;
    }
    std::string next(const char* what) {
        if (done()) fail(std::string("expected ") + what);
        return toks_[pos_++].text;
    }
    void expect(const char* word) {
        if (peek() != word) fail(std::string("expected '") + word + "'");
        ++pos_;
    }
    void finish() {
        if (!done()) fail("unexpected '" + peek() + "'");
    }

    template <class F>
    auto guarded(F&& f) -> decltype(f()) {
        try {
            return f();
        } catch (const RegistryError& e) {
            fail(e.what());
        } catch (const GrammarError& e) {
            if (e.line()) throw;
            fail(e.what());
        }
    }

    NodeId node_ref(std::string name) {
        if (!name.empty() && name.back() == ':') name.pop_back();
        return guarded([&] { return net_.require_node(name); });
    }
    AttributeVector vec(const std::string& text) {
        return guarded([&] { return parse_vector(net_.registry, text); });
    }
    Binding lit(const std::string& text) {
        return guarded([&] { return net_.registry.literal(text); });
    }
    std::vector<std::string> braced_words(const std::string& text) {
        if (text.size() < 2 || text.front() != '{' || text.back() != '}') fail("expected {...}");
        std::vector<std::string> out;
        std::string cur;
        for (char c : text.substr(1, text.size() - 2)) {
            if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
                if (!cur.empty()) out.push_back(std::move(cur));
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!cur.empty()) out.push_back(std::move(cur));
        return out;
    }
    std::vector<FeatureId> names(const std::string& text) {
        std::vector<FeatureId> out;
        for (const auto& w : braced_words(text)) out.push_back(guarded([&] { return net_.registry.require(w); }));
        return out;
    }
    int int_value(const std::string& tok, std::string_view prefix) {
        std::string_view s(tok);
        if (s.substr(0, prefix.size()) != prefix) fail("expected " + std::string(prefix) + "<n>");
        s.remove_prefix(prefix.size());
        if (!s.empty() && s.back() == ':') s.remove_suffix(1);
        int v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size()) fail("bad integer in '" + tok + "'");
        return v;
    }

    Constraint primitive();
    void feature();
    void dom();
    void local();
    void perc();

    GrammarNetwork& net_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int line_;
};

void LineParser::run() {
    std::string kw = next("keyword");
    if (kw == "feature") {
        feature();
    } else if (kw == "bigweight") {
        std::string v = next("number");
        try {
            std::size_t used = 0;
            double d = std::stod(v, &used);
            if (used != v.size() || d < 0) fail("bad bigweight");
            net_.big_weight = Weight::from_double(d);
        } catch (const std::logic_error&) {
            fail("bad bigweight");
        }
        finish();
    } else if (kw == "node") {
        std::string name = next("node name");
        NodeKind kind = NodeKind::Maximal;
        if (!done()) {
            std::string k = next("kind");
            if (k.rfind("kind=", 0) != 0) fail("expected kind=<kind>");
            k = k.substr(5);
            if (k == "lexical" || k == "lexical-category") kind = NodeKind::LexicalCategory;
            else if (k == "subcategory") kind = NodeKind::Subcategory;
            else if (k == "bar" || k == "bar-level") kind = NodeKind::BarLevel;
            else if (k == "maximal") kind = NodeKind::Maximal;
            else fail("unknown node kind '" + k + "'");
        }
        finish();
        guarded([&] { return net_.add_node(name, kind); });
    } else if (kw == "subsume") {
        NodeId g = node_ref(next("node"));
        expect("->");
        NodeId s = node_ref(next("node"));
        finish();
        net_.add_subsumption(g, s);
    } else if (kw == "dom") {
        dom();
    } else if (kw == "local") {
        local();
    } else if (kw == "perc") {
        perc();
    } else if (kw == "top") {
        if (done()) fail("top needs at least one node");
        while (!done()) net_.top_nodes.push_back(node_ref(next("node")));
    } else if (kw == "complete") {
        NodeId n = node_ref(next("node"));
        std::vector<int> ids;
        for (const auto& w : braced_words(next("{ids}"))) ids.push_back(int_value(w, ""));
        finish();
        net_.node(n).completion = std::move(ids);
    } else if (kw == "anchor") {
        Anchor a;
        a.node = node_ref(next("node"));
        expect("when");
        a.when = vec(next("{literals}"));
        if (!done()) {
            expect("comps");
            for (const auto& w : braced_words(next("{cats}")))
                a.comp_cats.push_back(guarded([&] { return net_.registry.valued("cat", w); }).value);
        }
        finish();
        net_.anchors.push_back(std::move(a));
    } else if (kw == "trace") {
        TraceSpec t;
        t.node = node_ref(next("node"));
        t.features = vec(next("{features}"));
        finish();
        net_.trace = std::move(t);
    } else {
        pos_ = 0;
        fail("unknown directive '" + kw + "'");
    }
}

void LineParser::feature() {
    std::string kind = next("flag|valued");
    std::string name = next("feature name");
    std::vector<std::string> domain;
    if (kind == "valued") {
        domain = braced_words(next("{atoms}"));
    } else if (kind != "flag") {
        fail("expected 'flag' or 'valued'");
    }
    bool carry = false, annotation = false;
    while (!done()) {
        std::string opt = next("option");
        if (opt == "carry") carry = true;
        else if (opt == "annotation") annotation = true;
        else fail("unknown feature option '" + opt + "'");
    }
    guarded([&] {
        return kind == "flag" ? net_.registry.add_flag(name, carry, annotation)
                              : net_.registry.add_valued(name, domain, carry, annotation);
    });
}

void LineParser::dom() {
    DominanceLink l;
    l.parent = node_ref(next("parent"));
    expect("->");
    l.child = node_ref(next("child"));
    l.id = int_value(next("id=<n>"), "id=");
    bool have_role = false;
    while (!done()) {
        std::string opt = next("option");
        if (opt == "obligatory") l.obligatory = true;
        else if (opt == "optional") l.obligatory = false;
        else if (opt == "barrier") l.barrier = true;
        else if (opt.rfind("role=", 0) == 0) {
            std::string r = opt.substr(5);
            if (r == "head") l.role = Role::Head;
            else if (r == "complement") l.role = Role::Complement;
            else if (r == "adjunct") l.role = Role::Adjunct;
            else if (r == "specifier") l.role = Role::Specifier;
            else fail("unknown role '" + r + "'");
            have_role = true;
        } else if (opt.rfind("keep=", 0) == 0) {
            l.keep = names(opt.substr(5));
        } else {
            fail("unknown link option '" + opt + "'");
        }
    }
    if (!have_role) fail("dominance link needs role=<role>");
    if (l.id < 1 || l.id > kMaxLinkId) fail("link id must be in 1.." + std::to_string(kMaxLinkId));
    if (net_.find_link(l.parent, l.id))
        fail("duplicate dominance id " + std::to_string(l.id) + " under " + net_.node(l.parent).name);
    net_.add_dominance(std::move(l));
}

Constraint LineParser::primitive() {
    std::string op = next("primitive");
    if (op == "assign") {
        Assign a;
        a.features = vec(next("{features}"));
        if (!done()) {
            expect("when");
            a.guard = vec(next("{literals}"));
        }
        return a;
    }
    if (op == "reject") return RejectCooccurrence{vec(next("{literals}"))};
    if (op == "clear") {
        ClearOn c;
        c.cleared = names(next("{names}"));
        if (!done()) {
            expect("when");
            c.trigger = vec(next("{literals}"));
        }
        return c;
    }
    if (op == "block") return BlockIf{lit(next("literal"))};
    if (op == "flip") {
        Flip f;
        f.from = lit(next("literal"));
        expect("->");
        f.to = lit(next("literal"));
        if (f.from.feature != f.to.feature) fail("flip must keep the same feature");
        return f;
    }
    --pos_;
    fail("unknown primitive '" + op + "'");
}

void LineParser::local() {
    std::string target = next("node");
    if (target.empty() || target.back() != ':') fail("expected '<node>:'");
    std::vector<Constraint>* dest = nullptr;
    if (target == "*:") dest = &net_.global_local;
    else dest = &net_.node(node_ref(target)).local;
    Constraint c = primitive();
    finish();
    dest->push_back(std::move(c));
}

void LineParser::perc() {
    NodeId parent = node_ref(next("parent"));
    expect("->");
    NodeId child = node_ref(next("child"));
    std::string idtok = next("id=<n>:");
    if (idtok.back() != ':') fail("expected ':' after link id");
    int id = int_value(idtok, "id=");
    auto li = net_.find_link(parent, id);
    if (!li || net_.dominance[*li].child != child)
        fail("no dominance link " + net_.node(parent).name + " -> " + net_.node(child).name +
             " id=" + std::to_string(id));
    Constraint c = primitive();
    finish();
    net_.dominance[*li].percolation.push_back(std::move(c));
}

}  // namespace

GrammarNetwork load_network(std::string_view text) {
    GrammarNetwork net;
    int lineno = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++lineno;
        auto toks = tokenize_line(text.substr(start, end - start), lineno);
        if (!toks.empty()) LineParser(net, std::move(toks), lineno).run();
        start = end + 1;
    }
    for (auto& l : net.dominance) l.weight = l.role == Role::Adjunct ? net.big_weight : kUnitWeight;
    net.refresh();
    auto diags = validate(net);
    if (!diags.empty()) {
        std::string msg = "invalid grammar network:";
        for (const auto& d : diags) msg += "\n  " + d.subject + ": " + d.reason;
        throw GrammarError(msg);
    }
    return net;
}

GrammarNetwork load_network_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GrammarError("cannot open grammar file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return load_network(ss.str());
    } catch (const GrammarError& e) {
        throw GrammarError(path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Validation

std::vector<Diagnostic> validate(const GrammarNetwork& net) {
    std::vector<Diagnostic> out;
    if (net.top_nodes.empty()) out.push_back({"network", "no top nodes declared"});

    std::set<std::string> names;
    for (const auto& n : net.nodes)
        if (!names.insert(n.name).second) out.push_back({n.name, "duplicate node name"});

    for (NodeId i = 0; i < net.nodes.size(); ++i) {
        const auto& n = net.nodes[i];
        if (n.kind == NodeKind::Subcategory && n.generals.empty())
            out.push_back({n.name, "subcategory is not the target of any subsumption link"});

        std::set<int> ids;
        int heads = 0;
        for (LinkIndex li : n.children) {
            const auto& l = net.dominance[li];
            if (!ids.insert(l.id).second)
                out.push_back({net.link_name(li), "duplicate dominance id under " + n.name});
            if (l.id < 1 || l.id > kMaxLinkId) out.push_back({net.link_name(li), "link id out of range"});
            if (l.role == Role::Head) ++heads;
        }
        if ((n.kind == NodeKind::BarLevel || n.kind == NodeKind::Maximal) && !n.children.empty() &&
            heads != 1)
            out.push_back({n.name, "expected exactly one head link, found " + std::to_string(heads)});
        if (n.completion) {
            for (int id : *n.completion)
                if (id != kAnchorLinkId && !ids.count(id))
                    out.push_back({n.name, "completion refers to unknown link id " + std::to_string(id)});
        }
    }

    for (LinkIndex li = 0; li < net.dominance.size(); ++li) {
        const auto& l = net.dominance[li];
        Weight expected = l.role == Role::Adjunct ? net.big_weight : kUnitWeight;
        if (l.weight != expected)
            out.push_back({net.link_name(li), "weight " + l.weight.str() + " should be " + expected.str()});
    }

    // Subsumption must be acyclic.
    std::vector<int> state(net.nodes.size(), 0);
    std::function<bool(NodeId)> cyclic = [&](NodeId v) {
        state[v] = 1;
        for (NodeId s : net.nodes[v].specifics) {
            if (state[s] == 1) return true;
            if (state[s] == 0 && cyclic(s)) return true;
        }
        state[v] = 2;
        return false;
    };
    for (NodeId v = 0; v < net.nodes.size(); ++v) {
        if (state[v] == 0 && cyclic(v)) {
            out.push_back({net.nodes[v].name, "subsumption cycle"});
            break;
        }
    }

    for (const auto& a : net.anchors)
        if (a.node >= net.nodes.size()) out.push_back({"anchor", "unknown node"});
    for (NodeId t : net.top_nodes)
        if (t >= net.nodes.size()) out.push_back({"top", "unknown node"});
    return out;
}

// ---------------------------------------------------------------------------
// Rendering

std::string render_network(const GrammarNetwork& net) {
    const auto& reg = net.registry;
    std::ostringstream os;
    for (const auto& f : reg.features()) {
        os << "feature " << (f.kind == FeatureKind::Flag ? "flag " : "valued ") << f.name;
        if (f.kind == FeatureKind::Valued) {
            os << " {";
            for (std::size_t i = 0; i < f.domain.size(); ++i) os << (i ? ", " : "") << f.domain[i];
            os << "}";
        }
        if (f.carry) os << " carry";
        if (f.annotation) os << " annotation";
        os << "\n";
    }
    os << "bigweight " << net.big_weight.str() << "\n";
    for (const auto& n : net.nodes) os << "node " << n.name << " kind=" << to_string(n.kind) << "\n";
    for (const auto& s : net.subsumption)
        os << "subsume " << net.nodes[s.general].name << " -> " << net.nodes[s.specific].name << "\n";
    for (LinkIndex li = 0; li < net.dominance.size(); ++li) {
        const auto& l = net.dominance[li];
        os << "dom " << net.nodes[l.parent].name << " -> " << net.nodes[l.child].name << " id=" << l.id
           << (l.obligatory ? " obligatory" : " optional") << " role=" << to_string(l.role);
        if (l.barrier) os << " barrier";
        if (!l.keep.empty()) os << " keep=" << render_names(reg, l.keep);
        os << "\n";
    }
    for (LinkIndex li = 0; li < net.dominance.size(); ++li) {
        const auto& l = net.dominance[li];
        for (const auto& c : l.percolation)
            os << "perc " << net.nodes[l.parent].name << " -> " << net.nodes[l.child].name << " id=" << l.id
               << ": " << render(reg, c) << "\n";
    }
    for (const auto& c : net.global_local) os << "local *: " << render(reg, c) << "\n";
    for (const auto& n : net.nodes)
        for (const auto& c : n.local) os << "local " << n.name << ": " << render(reg, c) << "\n";
    for (const auto& n : net.nodes) {
        if (!n.completion) continue;
        os << "complete " << n.name << " {";
        for (std::size_t i = 0; i < n.completion->size(); ++i) os << (i ? ", " : "") << (*n.completion)[i];
        os << "}\n";
    }
    for (const auto& a : net.anchors) {
        os << "anchor " << net.nodes[a.node].name << " when " << render_braced(reg, a.when);
        if (!a.comp_cats.empty()) {
            const auto& cat = reg.at(reg.require("cat"));
            os << " comps {";
            for (std::size_t i = 0; i < a.comp_cats.size(); ++i)
                os << (i ? ", " : "") << cat.domain.at(a.comp_cats[i]);
            os << "}";
        }
        os << "\n";
    }
    if (net.trace)
        os << "trace " << net.nodes[net.trace->node].name << " " << render_braced(reg, net.trace->features)
           << "\n";
    os << "top";
    for (NodeId t : net.top_nodes) os << " " << net.nodes[t].name;
    os << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Constraint application

namespace {

bool has_all(const AttributeVector& att, const AttributeVector& lits) {
    for (const auto& b : lits.entries())
        if (!att.has(b)) return false;
    return true;
}

// Applies one primitive in place. Returns false when the primitive rejects.
bool apply_primitive(const Constraint& c, AttributeVector& att) {
    return std::visit(
        [&](const auto& p) -> bool {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Assign>) {
                if (!has_all(att, p.guard)) return true;
                auto u = unify(att, p.features);
                if (!u) return false;
                att = std::move(*u);
                return true;
            } else if constexpr (std::is_same_v<T, RejectCooccurrence>) {
                return p.literals.empty() || !has_all(att, p.literals);
            } else if constexpr (std::is_same_v<T, ClearOn>) {
                if (!has_all(att, p.trigger)) return true;
                for (FeatureId f : p.cleared) att = att.without(f);
                return true;
            } else if constexpr (std::is_same_v<T, BlockIf>) {
                return !att.has(p.literal);
            } else {
                if (att.has(p.from)) att.set(p.to);
                return true;
            }
        },
        c);
}

int phase(const Constraint& c) {
    if (std::holds_alternative<Assign>(c) || std::holds_alternative<Flip>(c)) return 0;
    if (std::holds_alternative<ClearOn>(c)) return 1;
    return 2;
}

}  // namespace

LocalOutcome apply_local(const GrammarNetwork& net, NodeId node, const AttributeVector& att) {
    LocalOutcome out;
    AttributeVector cur = att;
    const auto& own = net.node(node).local;
    for (int ph = 0; ph < 3; ++ph) {
        for (const auto* list : {&own, &net.global_local}) {
            for (const auto& c : *list) {
                if (phase(c) != ph) continue;
                if (!apply_primitive(c, cur)) {
                    out.violated = &c;
                    return out;
                }
            }
        }
    }
    out.att = std::move(cur);
    return out;
}

PercolationOutcome apply_percolation(const GrammarNetwork& net, LinkIndex li, const AttributeVector& att) {
    PercolationOutcome out;
    const auto& l = net.link(li);
    AttributeVector cur = att;
    if (l.barrier) {
        const auto& reg = net.registry;
        if (auto wb = reg.find("whbarrier")) {
            Binding plus{*wb, 1}, minus{*wb, 0};
            if (cur.has(plus)) {
                out.blocked_by = "barrier: block +whbarrier";
                return out;
            }
            if (cur.has(minus)) cur.set(plus);
        }
        if (auto cm = reg.find("cm")) {
            if (cur.has(Binding{*cm, 0})) {
                out.blocked_by = "barrier: block -cm";
                return out;
            }
        }
    }
    for (const auto& c : l.percolation) {
        if (!apply_primitive(c, cur)) {
            out.blocked_by = render(net.registry, c);
            return out;
        }
    }
    out.att = std::move(cur);
    return out;
}

AttributeVector project(const GrammarNetwork& net, LinkIndex li, const AttributeVector& att) {
    const auto& l = net.link(li);
    if (l.role == Role::Head) return att;
    std::vector<bool> mask = net.carry_mask();
    if (mask.size() != net.registry.size()) {
        mask.assign(net.registry.size(), false);
        for (FeatureId f = 0; f < net.registry.size(); ++f) mask[f] = net.registry.at(f).carry;
    }
    if (l.keep.empty()) return att.restricted(mask);
    for (FeatureId f : l.keep) mask.at(f) = true;
    return att.restricted(mask);
}

}  // namespace principar
