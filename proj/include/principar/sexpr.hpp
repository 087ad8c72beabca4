#pragma once

// Minimal s-expression reader/writer for lexicon entries.
// Atoms are bare words; `"..."` denotes a quoted atom that may contain spaces;
// `,` is an atom of its own; `;` starts a comment that runs to end of line.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace principar {

class SExprError : public std::runtime_error {
public:
    SExprError(const std::string& msg, int line, int column);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

struct SExpr {
    enum class Kind { Atom, List };

    Kind kind = Kind::List;
    std::string atom;            // Kind::Atom
    bool quoted = false;         // atom was written as a string literal
    std::vector<SExpr> items;    // Kind::List
    int line = 0;

    static SExpr make_atom(std::string text, bool quoted = false);
    static SExpr make_list(std::vector<SExpr> items = {});

    bool is_atom() const { return kind == Kind::Atom; }
    bool is_list() const { return kind == Kind::List; }

    friend bool operator==(const SExpr& a, const SExpr& b) {
        return a.kind == b.kind && a.atom == b.atom && a.items == b.items;
    }
};

/// Reads every top-level expression in `text`. On error, `*parsed` (when
/// given) holds the number of expressions read successfully.
std::vector<SExpr> parse_sexprs(std::string_view text, std::size_t* parsed = nullptr);

/// Reads exactly one expression.
SExpr parse_sexpr(std::string_view text);

/// Single-line canonical rendering.
std::string render_sexpr(const SExpr& e);

}  // namespace principar
