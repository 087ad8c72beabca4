#include "principar/oracle.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <tuple>

namespace principar {

Cfg random_cfg(std::mt19937_64& rng, const RandomCfgOptions& opts) {
    auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    Cfg g;
    int n = uniform(2, std::max(2, opts.max_nonterminals));
    static const char* kNames[] = {"S", "A", "B", "C", "D", "E", "F", "G", "H", "J", "K", "L"};
    for (int i = 0; i < n; ++i) g.nonterminals.push_back(i < 12 ? kNames[i] : "N" + std::to_string(i));
    for (int i = 0; i < opts.terminals; ++i) g.terminals.push_back(std::string(1, static_cast<char>('a' + i)));

    int target = uniform(std::min(n, opts.max_productions), opts.max_productions);
    auto any_symbol = [&] {
        int k = uniform(0, n + opts.terminals - 1);
        return k < n ? g.nonterminals[static_cast<std::size_t>(k)] : g.terminals[static_cast<std::size_t>(k - n)];
    };
    for (int attempt = 0; static_cast<int>(g.productions.size()) < target && attempt < target * 20; ++attempt) {
        // The first productions give every nonterminal a chance to be defined.
        int lhs = static_cast<int>(g.productions.size()) < n ? static_cast<int>(g.productions.size()) : uniform(0, n - 1);
        Production p;
        p.lhs = g.nonterminals[static_cast<std::size_t>(lhs)];
        int len = uniform(1, opts.max_rhs);
        if (len == 1) {
            if (lhs == n - 1 || uniform(0, 1) == 0) {
                p.rhs.push_back(g.terminals[static_cast<std::size_t>(uniform(0, opts.terminals - 1))]);
            } else {
                p.rhs.push_back(g.nonterminals[static_cast<std::size_t>(uniform(lhs + 1, n - 1))]);
            }
        } else {
            for (int i = 0; i < len; ++i) p.rhs.push_back(any_symbol());
        }
        if (std::find(g.productions.begin(), g.productions.end(), p) == g.productions.end())
            g.productions.push_back(std::move(p));
    }
    return g;
}

std::vector<std::string> random_sentence(const Cfg& g, std::mt19937_64& rng, int max_len) {
    std::map<std::string, std::vector<const Production*>> by_lhs;
    for (const auto& p : g.productions) by_lhs[p.lhs].push_back(&p);
    for (int attempt = 0; attempt < 20; ++attempt) {
        std::vector<std::string> out;
        std::function<bool(const std::string&, int)> expand = [&](const std::string& sym, int depth) {
            if (g.is_terminal(sym)) {
                out.push_back(sym);
                return static_cast<int>(out.size()) <= max_len;
            }
            auto it = by_lhs.find(sym);
            if (depth > 12 || it == by_lhs.end()) return false;
            const auto& options = it->second;
            const Production* p =
                options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
            for (const auto& s : p->rhs)
                if (!expand(s, depth + 1)) return false;
            return true;
        };
        if (expand(g.nonterminals.at(0), 0) && !out.empty()) return out;
    }
    int len = std::uniform_int_distribution<int>(1, max_len)(rng);
    std::vector<std::string> out;
    for (int i = 0; i < len; ++i)
        out.push_back(g.terminals[std::uniform_int_distribution<std::size_t>(0, g.terminals.size() - 1)(rng)]);
    return out;
}

namespace {

// Shared recursion over (symbol, span) and (production suffix, span).
template <typename Value, typename Ops>
class Cky {
public:
    Cky(const Cfg& g, const std::vector<std::string>& words, Ops ops) : g_(g), words_(words), ops_(ops) {}

    Value symbol(const std::string& sym, int i, int j) {
        if (g_.is_terminal(sym)) return ops_.terminal(j == i + 1 && words_[static_cast<std::size_t>(i)] == sym, sym);
        auto key = std::make_tuple(sym, i, j);
        if (auto it = sym_memo_.find(key); it != sym_memo_.end()) return it->second;
        Value total = ops_.zero();
        for (std::size_t p = 0; p < g_.productions.size(); ++p)
            if (g_.productions[p].lhs == sym) total = ops_.add(total, ops_.wrap(sym, sequence(p, 0, i, j)));
        sym_memo_.emplace(key, total);
        return total;
    }

private:
    // Ways for rhs[pos..] of production p to cover words [i, j).
    Value sequence(std::size_t p, std::size_t pos, int i, int j) {
        const auto& rhs = g_.productions[p].rhs;
        auto remaining = static_cast<int>(rhs.size() - pos);
        if (j - i < remaining) return ops_.zero();
        if (remaining == 1) return ops_.first(symbol(rhs[pos], i, j));
        auto key = std::make_tuple(p, pos, i, j);
        if (auto it = seq_memo_.find(key); it != seq_memo_.end()) return it->second;
        Value total = ops_.zero();
        for (int k = i + 1; k <= j - (remaining - 1); ++k)
            total = ops_.add(total, ops_.concat(symbol(rhs[pos], i, k), sequence(p, pos + 1, k, j)));
        seq_memo_.emplace(key, total);
        return total;
    }

    const Cfg& g_;
    const std::vector<std::string>& words_;
    Ops ops_;
    std::map<std::tuple<std::string, int, int>, Value> sym_memo_;
    std::map<std::tuple<std::size_t, std::size_t, int, int>, Value> seq_memo_;
};

struct CountOps {
    using V = std::uint64_t;
    static constexpr V kMax = std::numeric_limits<V>::max();
    V zero() const { return 0; }
    V terminal(bool match, const std::string&) const { return match ? 1 : 0; }
    V add(V a, V b) const { return a > kMax - b ? kMax : a + b; }
    V concat(V a, V b) const { return (a != 0 && b > kMax / a) ? kMax : a * b; }
    V first(V a) const { return a; }
    V wrap(const std::string&, V a) const { return a; }
};

// Trees are strings; a sequence value holds " child child ..." fragments.
struct TreeOps {
    using V = std::vector<std::string>;
    V zero() const { return {}; }
    V terminal(bool match, const std::string& sym) const { return match ? V{sym} : V{}; }
    V add(V a, const V& b) const {
        a.insert(a.end(), b.begin(), b.end());
        return a;
    }
    V concat(const V& a, const V& b) const {
        V out;
        for (const auto& x : a)
            for (const auto& y : b) out.push_back(" " + x + y);
        return out;
    }
    V first(const V& a) const {
        V out;
        for (const auto& x : a) out.push_back(" " + x);
        return out;
    }
    V wrap(const std::string& sym, const V& seqs) const {
        V out;
        for (const auto& s : seqs) out.push_back("(" + sym + s + ")");
        return out;
    }
};

}  // namespace

std::uint64_t cky_count(const Cfg& g, const std::vector<std::string>& sentence) {
    if (sentence.empty()) return 0;
    Cky<std::uint64_t, CountOps> cky(g, sentence, CountOps{});
    return cky.symbol(g.nonterminals.at(0), 0, static_cast<int>(sentence.size()));
}

std::vector<std::string> cky_trees(const Cfg& g, const std::vector<std::string>& sentence) {
    if (sentence.empty()) return {};
    Cky<std::vector<std::string>, TreeOps> cky(g, sentence, TreeOps{});
    auto out = cky.symbol(g.nonterminals.at(0), 0, static_cast<int>(sentence.size()));
    std::sort(out.begin(), out.end());
    return out;
}

OracleReport run_oracle_suite(int grammars, int sentences_per_grammar, int max_len, std::uint64_t seed,
                              std::uint64_t tree_cap) {
    OracleReport r;
    std::mt19937_64 rng(seed);
    for (int gi = 0; gi < grammars; ++gi) {
        Cfg g = random_cfg(rng);
        CfgGrammar compiled = compile_cfg(g);
        ++r.grammars;
        for (int si = 0; si < sentences_per_grammar; ++si) {
            std::vector<std::string> sentence;
            std::uint64_t count = 0;
            for (int attempt = 0; attempt < 50; ++attempt) {
                sentence = random_sentence(g, rng, max_len);
                count = cky_count(g, sentence);
                if (count <= tree_cap) break;
            }
            if (count > tree_cap) continue;
            auto expected = cky_trees(g, sentence);
            auto actual = engine_cfg_trees(compiled, sentence, static_cast<std::size_t>(tree_cap) + 1);
            ++r.sentences;
            r.trees += expected.size();
            if (!expected.empty()) ++r.sentences_with_trees;
            if (expected != actual) {
                ++r.mismatches;
                if (r.failures.size() < 5) {
                    std::string words;
                    for (const auto& w : sentence) words += (words.empty() ? "" : " ") + w;
                    r.failures.push_back("grammar " + std::to_string(gi) + ", \"" + words + "\": expected " +
                                         std::to_string(expected.size()) + " trees, engine found " +
                                         std::to_string(actual.size()));
                }
            }
        }
    }
    return r;
}

}  // namespace principar
