#include "principar/sexpr.hpp"

#include <cctype>

namespace principar {

SExprError::SExprError(const std::string& msg, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

SExpr SExpr::make_atom(std::string text, bool quoted) {
    SExpr e;
    e.kind = Kind::Atom;
    e.atom = std::move(text);
    e.quoted = quoted;
    return e;
}

SExpr SExpr::make_list(std::vector<SExpr> items) {
    SExpr e;
    e.kind = Kind::List;
    e.items = std::move(items);
    return e;
}

namespace {

class Reader {
public:
    explicit Reader(std::string_view s) : s_(s) {}

    bool at_end() {
        skip();
        return pos_ >= s_.size();
    }

    SExpr read() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        int line = line_;
        if (c == '(') {
            advance();
            SExpr list = SExpr::make_list();
            list.line = line;
            while (true) {
                skip();
                if (pos_ >= s_.size()) throw SExprError("unterminated list", line, 0);
                if (s_[pos_] == ')') {
                    advance();
                    return list;
                }
                list.items.push_back(read());
            }
        }
        if (c == ')') fail("unexpected ')'");
        if (c == ',') {
            advance();
            SExpr a = SExpr::make_atom(",");
            a.line = line;
            return a;
        }
        if (c == '"') {
            advance();
            std::string text;
            while (pos_ < s_.size() && s_[pos_] != '"') {
                if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) advance();
                text += s_[pos_];
                advance();
            }
            if (pos_ >= s_.size()) fail("unterminated string");
            advance();
            SExpr a = SExpr::make_atom(std::move(text), true);
            a.line = line;
            return a;
        }
        std::size_t start = pos_;
        while (pos_ < s_.size()) {
            char d = s_[pos_];
            if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';' ||
                d == ',' || d == '"')
                break;
            advance();
        }
        SExpr a = SExpr::make_atom(std::string(s_.substr(start, pos_ - start)));
        a.line = line;
        return a;
    }

private:
    void advance() {
        if (s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    void skip() {
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == ';') {
                while (pos_ < s_.size() && s_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }
    [[noreturn]] void fail(const std::string& msg) const { throw SExprError(msg, line_, col_); }

    std::string_view s_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

bool needs_quotes(const std::string& s) {
    if (s.empty()) return true;
    for (char c : s)
        if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';' || c == ',' ||
            c == '"')
            return true;
    return false;
}

void render_into(const SExpr& e, std::string& out) {
    if (e.is_atom()) {
        if (e.atom == ",") {
            out += ",";
        } else if (e.quoted || needs_quotes(e.atom)) {
            out += '"';
            for (char c : e.atom) {
                if (c == '"' || c == '\\') out += '\\';
                out += c;
            }
            out += '"';
        } else {
            out += e.atom;
        }
        return;
    }
    out += '(';
    for (std::size_t i = 0; i < e.items.size(); ++i) {
        const auto& item = e.items[i];
        if (i && !(item.is_atom() && item.atom == ",")) out += ' ';
        render_into(item, out);
    }
    out += ')';
}

}  // namespace

std::vector<SExpr> parse_sexprs(std::string_view text, std::size_t* parsed) {
    Reader r(text);
    std::vector<SExpr> out;
    while (!r.at_end()) {
        out.push_back(r.read());
        if (parsed) *parsed = out.size();
    }
    return out;
}

SExpr parse_sexpr(std::string_view text) {
    Reader r(text);
    SExpr e = r.read();
    if (!r.at_end()) throw SExprError("trailing input after expression", e.line, 0);
    return e;
}

std::string render_sexpr(const SExpr& e) {
    std::string out;
    render_into(e, out);
    return out;
}

}  // namespace principar
