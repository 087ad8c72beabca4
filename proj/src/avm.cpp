#include "principar/avm.hpp"

#include <algorithm>
#include <cctype>

namespace principar {

FeatureId FeatureRegistry::add(Feature f) {
    if (f.name.empty()) throw RegistryError("empty feature name");
    if (index_.count(f.name)) throw RegistryError("feature declared twice: " + f.name);
    if (features_.size() >= 0xffff) throw RegistryError("too many features");
    auto id = static_cast<FeatureId>(features_.size());
    index_.emplace(f.name, id);
    features_.push_back(std::move(f));
    return id;
}

FeatureId FeatureRegistry::add_flag(std::string name, bool carry, bool annotation) {
    return add(Feature{std::move(name), FeatureKind::Flag, {}, carry, annotation});
}

FeatureId FeatureRegistry::add_valued(std::string name, std::vector<std::string> domain,
                                      bool carry, bool annotation) {
    if (domain.empty()) throw RegistryError("valued feature '" + name + "' has an empty domain");
    auto sorted = domain;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw RegistryError("duplicate atom in domain of '" + name + "'");
    return add(Feature{std::move(name), FeatureKind::Valued, std::move(domain), carry, annotation});
}

std::optional<FeatureId> FeatureRegistry::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

FeatureId FeatureRegistry::require(std::string_view name) const {
    auto id = find(name);
    if (!id) throw RegistryError("unknown feature: " + std::string(name));
    return *id;
}

Binding FeatureRegistry::flag(std::string_view name, bool positive) const {
    FeatureId id = require(name);
    if (at(id).kind != FeatureKind::Flag)
        throw RegistryError("feature '" + std::string(name) + "' is valued, not a flag");
    return Binding{id, static_cast<std::uint16_t>(positive ? 1 : 0)};
}

Binding FeatureRegistry::valued(std::string_view name, std::string_view atom) const {
    FeatureId id = require(name);
    const Feature& f = at(id);
    if (f.kind != FeatureKind::Valued)
        throw RegistryError("feature '" + std::string(name) + "' is a flag, not valued");
    auto it = std::find(f.domain.begin(), f.domain.end(), atom);
    if (it == f.domain.end())
        throw RegistryError("atom '" + std::string(atom) + "' not in domain of '" + f.name + "'");
    return Binding{id, static_cast<std::uint16_t>(it - f.domain.begin())};
}

Binding FeatureRegistry::literal(std::string_view text) const {
    if (text.size() >= 2 && (text[0] == '+' || text[0] == '-'))
        return flag(text.substr(1), text[0] == '+');
    AttributeVector v = parse_vector(*this, text);
    if (v.size() != 1) throw RegistryError("expected a single literal: " + std::string(text));
    return v.entries().front();
}

std::string FeatureRegistry::render(const Binding& b) const {
    const Feature& f = at(b.feature);
    if (f.kind == FeatureKind::Flag) return (b.value ? "+" : "-") + f.name;
    return "(" + f.name + " " + f.domain.at(b.value) + ")";
}

AttributeVector AttributeVector::of(std::vector<Binding> bindings) {
    std::sort(bindings.begin(), bindings.end());
    bindings.erase(std::unique(bindings.begin(), bindings.end()), bindings.end());
    for (std::size_t i = 1; i < bindings.size(); ++i) {
        if (bindings[i].feature == bindings[i - 1].feature)
            throw RegistryError("feature bound twice with different values");
    }
    AttributeVector v;
    v.entries_ = std::move(bindings);
    return v;
}

std::optional<std::uint16_t> AttributeVector::get(FeatureId f) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), f,
                               [](const Binding& b, FeatureId id) { return b.feature < id; });
    if (it == entries_.end() || it->feature != f) return std::nullopt;
    return it->value;
}

bool AttributeVector::has(const Binding& lit) const {
    auto v = get(lit.feature);
    return v && *v == lit.value;
}

void AttributeVector::set(const Binding& b) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), b.feature,
                               [](const Binding& x, FeatureId id) { return x.feature < id; });
    if (it != entries_.end() && it->feature == b.feature)
        it->value = b.value;
    else
        entries_.insert(it, b);
}

AttributeVector AttributeVector::without(FeatureId f) const {
    AttributeVector out;
    out.entries_.reserve(entries_.size());
    for (const auto& b : entries_)
        if (b.feature != f) out.entries_.push_back(b);
    return out;
}

AttributeVector AttributeVector::restricted(const std::vector<bool>& keep) const {
    AttributeVector out;
    for (const auto& b : entries_)
        if (b.feature < keep.size() && keep[b.feature]) out.entries_.push_back(b);
    return out;
}

std::size_t AttributeVector::hash() const {
    std::size_t h = 1469598103934665603ull;
    for (const auto& b : entries_) {
        h ^= (static_cast<std::size_t>(b.feature) << 16) | b.value;
        h *= 1099511628211ull;
    }
    return h;
}

std::optional<AttributeVector> unify(const AttributeVector& a, const AttributeVector& b) {
    const auto& x = a.entries();
    const auto& y = b.entries();
    std::vector<Binding> out;
    out.reserve(x.size() + y.size());
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
        if (x[i].feature < y[j].feature) {
            out.push_back(x[i++]);
        } else if (y[j].feature < x[i].feature) {
            out.push_back(y[j++]);
        } else {
            if (x[i].value != y[j].value) return std::nullopt;
            out.push_back(x[i]);
            ++i;
            ++j;
        }
    }
    out.insert(out.end(), x.begin() + static_cast<std::ptrdiff_t>(i), x.end());
    out.insert(out.end(), y.begin() + static_cast<std::ptrdiff_t>(j), y.end());
    return AttributeVector::of(std::move(out));
}

namespace {

struct VectorLexer {
    std::string_view s;
    std::size_t pos = 0;

    void skip() {
        while (pos < s.size() && (std::isspace(static_cast<unsigned char>(s[pos])) || s[pos] == ','))
            ++pos;
    }
    bool at_end() {
        skip();
        return pos >= s.size();
    }
    char peek() {
        skip();
        return pos < s.size() ? s[pos] : '\0';
    }
    std::string_view word() {
        skip();
        std::size_t start = pos;
        while (pos < s.size()) {
            char c = s[pos];
            if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '(' || c == ')' ||
                c == '{' || c == '}')
                break;
            ++pos;
        }
        if (start == pos) throw RegistryError("malformed feature list: " + std::string(s));
        return s.substr(start, pos - start);
    }
    void expect(char c) {
        if (peek() != c)
            throw RegistryError(std::string("malformed feature list (expected '") + c +
                                "'): " + std::string(s));
        ++pos;
    }
};

}  // namespace

AttributeVector parse_vector(const FeatureRegistry& reg, std::string_view text) {
    VectorLexer lx{text};
    char close = '\0';
    if (lx.peek() == '{') {
        close = '}';
        ++lx.pos;
    } else if (lx.peek() == '(') {
        // Outer list unless this is a single `(name value)` pair.
        std::size_t save = lx.pos;
        ++lx.pos;
        char next = lx.peek();
        if (next == '(' || next == '+' || next == '-' || next == ')') {
            close = ')';
        } else {
            lx.pos = save;
        }
    }
    std::vector<Binding> out;
    while (true) {
        if (lx.at_end()) {
            if (close) throw RegistryError("unterminated feature list: " + std::string(text));
            break;
        }
        char c = lx.peek();
        if (close && c == close) {
            ++lx.pos;
            if (!lx.at_end()) throw RegistryError("trailing text in feature list: " + std::string(text));
            break;
        }
        if (c == '(') {
            ++lx.pos;
            auto name = lx.word();
            auto atom = lx.word();
            lx.expect(')');
            out.push_back(reg.valued(name, atom));
        } else if (c == '+' || c == '-') {
            auto w = lx.word();
            out.push_back(reg.flag(w.substr(1), w[0] == '+'));
        } else {
            throw RegistryError("malformed literal '" + std::string(lx.word()) + "' in: " +
                                std::string(text));
        }
    }
    return AttributeVector::of(std::move(out));
}

std::string render_literals(const FeatureRegistry& reg, const AttributeVector& a) {
    std::string out;
    for (const auto& b : a.entries()) {
        if (!out.empty()) out += ' ';
        out += reg.render(b);
    }
    return out;
}

std::string render(const FeatureRegistry& reg, const AttributeVector& a) {
    return "(" + render_literals(reg, a) + ")";
}

}  // namespace principar
