#include "principar/cfg.hpp"

#include <algorithm>
#include <sstream>

namespace principar {

bool Cfg::is_terminal(const std::string& s) const {
    return std::find(terminals.begin(), terminals.end(), s) != terminals.end();
}

namespace {

std::string terminal_node(const std::string& t) { return "T_" + t; }

std::string symbol_node(const Cfg& g, const std::string& s) { return g.is_terminal(s) ? terminal_node(s) : s; }

}  // namespace

std::string cfg_network_text(const Cfg& g) {
    std::ostringstream os;
    os << "feature valued cat {";
    for (std::size_t i = 0; i < g.terminals.size(); ++i) os << (i ? ", " : "") << g.terminals[i];
    os << "}\n";
    for (const auto& a : g.nonterminals) os << "node " << a << " kind=maximal\n";
    for (const auto& t : g.terminals) os << "node " << terminal_node(t) << " kind=lexical\n";
    for (std::size_t p = 0; p < g.productions.size(); ++p) {
        const auto& prod = g.productions[p];
        std::string name = prod.lhs + "/" + std::to_string(p);
        os << "node " << name << " kind=bar\n";
        os << "subsume " << prod.lhs << " -> " << name << "\n";
        for (std::size_t i = 0; i < prod.rhs.size(); ++i) {
            os << "dom " << name << " -> " << symbol_node(g, prod.rhs[i]) << " id=" << (i + 1)
               << " obligatory role=" << (i == 0 ? "head" : "complement") << "\n";
        }
    }
    for (const auto& t : g.terminals) os << "anchor " << terminal_node(t) << " when {(cat " << t << ")}\n";
    os << "top " << g.nonterminals.at(0) << "\n";
    return os.str();
}

CfgGrammar compile_cfg(const Cfg& g) {
    CfgGrammar out;
    out.net = std::make_unique<GrammarNetwork>(load_network(cfg_network_text(g)));
    out.lexicon = std::make_unique<LexiconStore>(out.net->registry);
    for (const auto& t : g.terminals) {
        LexicalEntry e;
        e.key = t;
        e.functions.emplace_back(Subcat{AttributeVector::of({out.net->registry.valued("cat", t)}), {}});
        out.lexicon->put_memory(std::move(e));
    }
    return out;
}

std::string cfg_bracket(const GrammarNetwork& net, const ParseTree& tree) {
    if (tree.word) return tree.text;
    const std::string& name = net.node(tree.node).name;
    if (name.rfind("T_", 0) == 0 && tree.children.size() == 1) return cfg_bracket(net, tree.children[0]);
    // A nonterminal shows through its production node.
    if (tree.children.size() == 1 && !tree.children[0].word && !tree.children[0].link) {
        std::string out = "(" + name;
        for (const auto& c : tree.children[0].children) out += " " + cfg_bracket(net, c);
        return out + ")";
    }
    std::string out = "(" + name;
    for (const auto& c : tree.children) out += " " + cfg_bracket(net, c);
    return out + ")";
}

std::vector<std::string> engine_cfg_trees(const CfgGrammar& g, const std::vector<std::string>& sentence,
                                          std::size_t limit) {
    auto result = parse_tokens(*g.net, *g.lexicon, sentence);
    auto forest = build_forest(*g.net, result.chart);
    std::vector<std::string> out;
    TreeEnumerator en(forest);
    while (out.size() < limit) {
        auto t = en.next();
        if (!t) break;
        out.push_back(cfg_bracket(*g.net, *t));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace principar
