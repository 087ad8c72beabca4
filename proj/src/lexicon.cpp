#include "principar/lexicon.hpp"

#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

namespace principar {

namespace {

bool is_function_name(const std::string& n) {
    return n == "subcat" || n == "ref" || n == "phrase" || n == "phrases";
}

AttributeVector vector_from(const FeatureRegistry& reg, const SExpr& e) {
    if (!e.is_list()) throw LexiconError("expected an attribute list, got '" + e.atom + "'");
    std::vector<Binding> out;
    for (const auto& item : e.items) {
        if (item.is_atom()) {
            const auto& a = item.atom;
            if (a.size() < 2 || (a[0] != '+' && a[0] != '-'))
                throw LexiconError("malformed attribute '" + a + "'");
            out.push_back(reg.flag(a.substr(1), a[0] == '+'));
        } else {
            if (item.items.size() != 2 || !item.items[0].is_atom() || !item.items[1].is_atom())
                throw LexiconError("malformed attribute pair " + render_sexpr(item));
            out.push_back(reg.valued(item.items[0].atom, item.items[1].atom));
        }
    }
    try {
        return AttributeVector::of(std::move(out));
    } catch (const RegistryError& e2) {
        throw LexiconError(std::string(e2.what()) + " in " + render_sexpr(e));
    }
}

SExpr vector_sexpr(const FeatureRegistry& reg, const AttributeVector& v) {
    SExpr list = SExpr::make_list();
    for (const auto& b : v.entries()) {
        const Feature& f = reg.at(b.feature);
        if (f.kind == FeatureKind::Flag) {
            list.items.push_back(SExpr::make_atom((b.value ? "+" : "-") + f.name));
        } else {
            list.items.push_back(
                SExpr::make_list({SExpr::make_atom(f.name), SExpr::make_atom(f.domain.at(b.value))}));
        }
    }
    return list;
}

Phrase phrase_from(const SExpr& e) {
    if (!e.is_list() || e.items.empty()) throw LexiconError("malformed phrase " + render_sexpr(e));
    Phrase p;
    bool after_comma = false;
    for (const auto& w : e.items) {
        if (!w.is_atom()) throw LexiconError("malformed phrase " + render_sexpr(e));
        if (w.atom == ",") {
            if (after_comma) throw LexiconError("phrase has two commas: " + render_sexpr(e));
            after_comma = true;
            continue;
        }
        (after_comma ? p.before : p.from_head).push_back(to_lower(w.atom));
    }
    if (p.from_head.empty()) throw LexiconError("phrase without head word: " + render_sexpr(e));
    return p;
}

}  // namespace

std::string Phrase::surface() const {
    std::string out;
    for (const auto* part : {&before, &from_head}) {
        for (const auto& w : *part) {
            if (!out.empty()) out += ' ';
            out += w;
        }
    }
    return out;
}

std::string check_entry_shape(const SExpr& e) {
    if (!e.is_list() || e.items.empty()) throw LexiconError("entry must be a non-empty list");
    if (!e.items[0].is_atom() || e.items[0].atom.empty() || e.items[0].atom == ",")
        throw LexiconError("entry must start with a word or phrase");
    if (e.items.size() < 2) throw LexiconError("entry '" + e.items[0].atom + "' has no functions");
    for (std::size_t i = 1; i < e.items.size(); ++i) {
        const auto& f = e.items[i];
        if (!f.is_list() || f.items.empty() || !f.items[0].is_atom())
            throw LexiconError("malformed function in entry '" + e.items[0].atom + "'");
        if (!is_function_name(f.items[0].atom))
            throw LexiconError("unknown function '" + f.items[0].atom + "' in entry '" + e.items[0].atom + "'");
    }
    return to_lower(e.items[0].atom);
}

LexicalEntry entry_from_sexpr(const FeatureRegistry& reg, const SExpr& e) {
    LexicalEntry entry;
    entry.key = check_entry_shape(e);
    for (std::size_t i = 1; i < e.items.size(); ++i) {
        const auto& f = e.items[i];
        const std::string& name = f.items[0].atom;
        const auto args = std::vector<SExpr>(f.items.begin() + 1, f.items.end());
        if (name == "subcat") {
            if (args.empty() || args.size() > 2)
                throw LexiconError("subcat takes 1 or 2 arguments in '" + entry.key + "'");
            Subcat s;
            s.self = vector_from(reg, args[0]);
            if (args.size() == 2) {
                if (!args[1].is_list()) throw LexiconError("subcat complements must be a list");
                for (const auto& c : args[1].items) s.comps.push_back(vector_from(reg, c));
            }
            entry.functions.emplace_back(std::move(s));
        } else if (name == "ref") {
            if (args.size() != 2) throw LexiconError("ref takes 2 arguments in '" + entry.key + "'");
            Ref r;
            r.self = vector_from(reg, args[0]);
            const auto& target = args[1];
            if (!target.is_list() || target.items.empty() || !target.items[0].is_atom())
                throw LexiconError("ref target must be (<base> (<attr> ...))");
            r.base = to_lower(target.items[0].atom);
            for (std::size_t k = 1; k < target.items.size(); ++k) {
                const auto& t = target.items[k];
                if (t.is_atom()) {
                    r.names.push_back(reg.require(t.atom));
                } else {
                    for (const auto& n : t.items) {
                        if (!n.is_atom()) throw LexiconError("ref attribute names must be atoms");
                        r.names.push_back(reg.require(n.atom));
                    }
                }
            }
            entry.functions.emplace_back(std::move(r));
        } else {
            PhraseList pl;
            pl.function_name = name;
            for (const auto& a : args) pl.phrases.push_back(phrase_from(a));
            entry.functions.emplace_back(std::move(pl));
        }
    }
    return entry;
}

LexicalEntry parse_entry(const FeatureRegistry& reg, std::string_view text) {
    SExpr e;
    try {
        e = parse_sexpr(text);
    } catch (const SExprError& err) {
        throw LexiconError(std::string("malformed entry: ") + err.what());
    }
    return entry_from_sexpr(reg, e);
}

std::string render_entry(const FeatureRegistry& reg, const LexicalEntry& entry) {
    SExpr root = SExpr::make_list();
    bool spaced = entry.key.find(' ') != std::string::npos;
    root.items.push_back(SExpr::make_atom(entry.key, spaced));
    for (const auto& fn : entry.functions) {
        SExpr f = SExpr::make_list();
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, Subcat>) {
                    f.items.push_back(SExpr::make_atom("subcat"));
                    f.items.push_back(vector_sexpr(reg, x.self));
                    if (!x.comps.empty()) {
                        SExpr comps = SExpr::make_list();
                        for (const auto& c : x.comps) comps.items.push_back(vector_sexpr(reg, c));
                        f.items.push_back(std::move(comps));
                    }
                } else if constexpr (std::is_same_v<T, Ref>) {
                    f.items.push_back(SExpr::make_atom("ref"));
                    f.items.push_back(vector_sexpr(reg, x.self));
                    SExpr names = SExpr::make_list();
                    for (FeatureId n : x.names) names.items.push_back(SExpr::make_atom(reg.at(n).name));
                    f.items.push_back(SExpr::make_list({SExpr::make_atom(x.base), std::move(names)}));
                } else {
                    f.items.push_back(SExpr::make_atom(x.function_name));
                    for (const auto& p : x.phrases) {
                        SExpr ph = SExpr::make_list();
                        for (const auto& w : p.from_head) ph.items.push_back(SExpr::make_atom(w));
                        if (!p.before.empty()) {
                            ph.items.push_back(SExpr::make_atom(","));
                            for (const auto& w : p.before) ph.items.push_back(SExpr::make_atom(w));
                        }
                        f.items.push_back(std::move(ph));
                    }
                }
            },
            fn);
        root.items.push_back(std::move(f));
    }
    return render_sexpr(root);
}

bool operator==(const LexicalEntry& a, const LexicalEntry& b) {
    if (a.key != b.key || a.functions.size() != b.functions.size()) return false;
    for (std::size_t i = 0; i < a.functions.size(); ++i) {
        const auto& x = a.functions[i];
        const auto& y = b.functions[i];
        if (x.index() != y.index()) return false;
        if (auto* s = std::get_if<Subcat>(&x)) {
            const auto& t = std::get<Subcat>(y);
            if (s->self != t.self || s->comps != t.comps) return false;
        } else if (auto* r = std::get_if<Ref>(&x)) {
            const auto& t = std::get<Ref>(y);
            if (r->self != t.self || r->base != t.base || r->names != t.names) return false;
        } else {
            const auto& p = std::get<PhraseList>(x);
            const auto& q = std::get<PhraseList>(y);
            if (p.phrases.size() != q.phrases.size()) return false;
            for (std::size_t k = 0; k < p.phrases.size(); ++k)
                if (p.phrases[k].from_head != q.phrases[k].from_head || p.phrases[k].before != q.phrases[k].before)
                    return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// LexiconStore

LexiconStore::LexiconStore(const FeatureRegistry& reg) : reg_(reg), morph_(reg) {}

LexiconStore::LexiconStore(const FeatureRegistry& reg, std::string buffer_path,
                           std::optional<std::string> secondary_path)
    : reg_(reg), morph_(reg), buffer_path_(std::move(buffer_path)) {
    if (secondary_path) secondary_ = std::make_unique<SecondaryTable>(*secondary_path);
    if (!buffer_path_.empty() && std::filesystem::exists(buffer_path_)) {
        std::ifstream in(buffer_path_);
        if (!in) throw LexiconError("cannot read buffer file " + buffer_path_);
        std::stringstream ss;
        ss << in.rdbuf();
        std::size_t parsed = 0;
        std::vector<SExpr> exprs;
        try {
            exprs = parse_sexprs(ss.str(), &parsed);
        } catch (const SExprError& e) {
            throw LexiconError(buffer_path_ + ": entry " + std::to_string(parsed + 1) + ": " + e.what());
        }
        for (std::size_t i = 0; i < exprs.size(); ++i) {
            try {
                LexicalEntry entry = entry_from_sexpr(reg_, exprs[i]);
                std::string key = entry.key;
                primary_[key] = std::move(entry);
            } catch (const std::exception& e) {
                throw LexiconError(buffer_path_ + ": entry " + std::to_string(i + 1) + ": " + e.what());
            }
        }
    }
}

std::unique_ptr<LexiconStore> LexiconStore::open_dir(const FeatureRegistry& reg, const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw LexiconError("lexicon directory not found: " + dir);
    fs::path secondary = fs::path(dir) / "secondary.plex";
    std::optional<std::string> sec;
    if (fs::exists(secondary)) sec = secondary.string();
    return std::make_unique<LexiconStore>(reg, (fs::path(dir) / "primary.lex").string(), sec);
}

std::optional<LexicalEntry> LexiconStore::get(std::string_view key) {
    std::string k = to_lower(key);
    {
        std::shared_lock lock(mu_);
        auto it = primary_.find(k);
        if (it != primary_.end()) {
            ++primary_hits_;
            return it->second;
        }
    }
    if (secondary_) {
        if (auto text = secondary_->find(k)) {
            LexicalEntry entry;
            try {
                entry = parse_entry(reg_, *text);
            } catch (const RegistryError& e) {
                throw LexiconError("secondary entry '" + k + "': " + e.what());
            }
            ++secondary_hits_;
            std::unique_lock lock(mu_);
            auto [it, inserted] = primary_.emplace(k, std::move(entry));
            return it->second;
        }
    }
    ++misses_;
    return std::nullopt;
}

void LexiconStore::put(const LexicalEntry& entry) {
    std::unique_lock lock(mu_);
    if (!buffer_path_.empty()) {
        std::ofstream out(buffer_path_, std::ios::app);
        if (!out) throw LexiconError("cannot open buffer file " + buffer_path_);
        out << render_entry(reg_, entry) << '\n';
        out.flush();
        if (!out) throw LexiconError("write failed on buffer file " + buffer_path_);
    }
    primary_[entry.key] = entry;
}

void LexiconStore::put_memory(LexicalEntry entry) {
    std::unique_lock lock(mu_);
    std::string key = entry.key;
    primary_[key] = std::move(entry);
}

LookupCounters LexiconStore::counters() const {
    return {primary_hits_.load(), secondary_hits_.load(), misses_.load()};
}

void LexiconStore::reset_counters() {
    primary_hits_ = 0;
    secondary_hits_ = 0;
    misses_ = 0;
}

// ---------------------------------------------------------------------------
// Compilation

TableStats compile_secondary(std::string_view text, const std::string& out_path) {
    std::size_t parsed = 0;
    std::vector<SExpr> exprs;
    try {
        exprs = parse_sexprs(text, &parsed);
    } catch (const SExprError& e) {
        throw LexiconError("entry " + std::to_string(parsed + 1) + ": " + e.what());
    }
    std::vector<std::pair<std::string, std::string>> records;
    records.reserve(exprs.size());
    for (std::size_t i = 0; i < exprs.size(); ++i) {
        try {
            records.emplace_back(check_entry_shape(exprs[i]), render_sexpr(exprs[i]));
        } catch (const LexiconError& e) {
            throw LexiconError("entry " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return write_secondary_table(out_path, records);
}

TableStats compile_secondary_file(const std::string& in_path, const std::string& out_path) {
    std::ifstream in(in_path);
    if (!in) throw LexiconError("cannot read " + in_path);
    std::stringstream ss;
    ss << in.rdbuf();
    return compile_secondary(ss.str(), out_path);
}

// ---------------------------------------------------------------------------
// Senses

namespace {

std::vector<LexicalSense> senses_at_depth(const LexicalEntry& entry, LexiconStore& store, int depth);

std::vector<LexicalSense> refs_at_depth(const LexicalEntry& entry, LexiconStore& store, int depth) {
    std::vector<LexicalSense> out;
    for (const auto& fn : entry.functions) {
        const auto* ref = std::get_if<Ref>(&fn);
        if (!ref) continue;
        if (depth >= kMaxRefDepth)
            throw LexiconError("ref chain from '" + entry.key + "' exceeds depth " + std::to_string(kMaxRefDepth));
        auto base = store.get(ref->base);
        if (!base) throw LexiconError("'" + entry.key + "' refers to missing entry '" + ref->base + "'");
        for (auto& s : senses_at_depth(*base, store, depth + 1)) {
            bool agree = true;
            for (FeatureId n : ref->names) {
                auto mine = ref->self.get(n);
                if (!mine) continue;
                auto theirs = s.self.get(n);
                if (!theirs || *theirs != *mine) {
                    agree = false;
                    break;
                }
            }
            if (!agree) continue;
            auto u = unify(ref->self, s.self);
            if (!u) continue;
            LexicalSense sense;
            sense.word = entry.key;
            sense.self = std::move(*u);
            sense.comps = std::move(s.comps);
            out.push_back(std::move(sense));
        }
    }
    return out;
}

std::vector<LexicalSense> senses_at_depth(const LexicalEntry& entry, LexiconStore& store, int depth) {
    std::vector<LexicalSense> out;
    for (const auto& fn : entry.functions) {
        if (const auto* sc = std::get_if<Subcat>(&fn)) {
            LexicalSense s;
            s.word = entry.key;
            s.self = sc->self;
            s.comps = sc->comps;
            out.push_back(std::move(s));
        }
    }
    auto refs = refs_at_depth(entry, store, depth);
    out.insert(out.end(), std::make_move_iterator(refs.begin()), std::make_move_iterator(refs.end()));
    return out;
}

}  // namespace

std::vector<LexicalSense> entry_senses(const LexicalEntry& entry, LexiconStore& store) {
    return senses_at_depth(entry, store, 0);
}

std::vector<LexicalSense> resolve_ref(const LexicalEntry& entry, LexiconStore& store) {
    return refs_at_depth(entry, store, 0);
}

std::vector<PhraseMatch> expand_phrases(const LexicalEntry& entry, const std::vector<std::string>& tokens,
                                        std::size_t head_pos, LexiconStore& store,
                                        std::vector<std::string>* diagnostics) {
    std::vector<PhraseMatch> out;
    for (const auto& fn : entry.functions) {
        const auto* pl = std::get_if<PhraseList>(&fn);
        if (!pl) continue;
        for (const auto& ph : pl->phrases) {
            if (ph.before.size() > head_pos) continue;
            if (head_pos + ph.from_head.size() > tokens.size()) continue;
            bool match = true;
            // The head word itself is the entry being expanded (possibly inflected).
            for (std::size_t k = 1; k < ph.from_head.size() && match; ++k)
                match = to_lower(tokens[head_pos + k]) == ph.from_head[k];
            std::size_t first = head_pos - ph.before.size();
            for (std::size_t k = 0; k < ph.before.size() && match; ++k)
                match = to_lower(tokens[first + k]) == ph.before[k];
            if (!match) continue;
            auto phrase_entry = store.get(ph.surface());
            if (!phrase_entry) {
                if (diagnostics) diagnostics->push_back("phrase '" + ph.surface() + "' has no lexicon entry");
                continue;
            }
            for (auto& s : entry_senses(*phrase_entry, store)) {
                s.span_width = static_cast<int>(ph.width());
                s.lead = static_cast<int>(ph.before.size());
                out.push_back({std::move(s), first, head_pos + ph.from_head.size() - 1});
            }
        }
    }
    return out;
}

std::vector<LexicalSense> lookup_senses(LexiconStore& store, const std::vector<std::string>& tokens,
                                        std::size_t pos, std::vector<std::string>* diagnostics) {
    if (pos >= tokens.size()) throw std::out_of_range("lookup_senses: position out of range");
    std::vector<LexicalSense> out;
    auto add_phrases = [&](const LexicalEntry& e) {
        for (auto& m : expand_phrases(e, tokens, pos, store, diagnostics)) out.push_back(std::move(m.sense));
    };
    if (auto direct = store.get(tokens[pos])) {
        out = entry_senses(*direct, store);
        add_phrases(*direct);
        return out;
    }
    std::string word = to_lower(tokens[pos]);
    for (const auto& cand : store.morphology().strip(word)) {
        auto base = store.get(cand.base);
        if (!base) continue;
        for (const auto& s : entry_senses(*base, store)) {
            for (const auto& reading : cand.readings) {
                auto u = unify(s.self, reading);
                if (!u) continue;
                LexicalSense sense = s;
                sense.word = word;
                sense.self = std::move(*u);
                out.push_back(std::move(sense));
            }
        }
        add_phrases(*base);
    }
    return out;
}

}  // namespace principar
