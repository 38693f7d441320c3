#pragma once

#include "nmt.hpp"
#include "smt.hpp"

#include <cctype>
#include <sstream>

namespace nomdiag {

// Grammar, loosest first (both calculi):
//   term  := par (';' par)*            right-nested
//   par   := unary (OP unary)*         OP is '|' for nominal, '+' for ordered
// nominal:
//   unary := cycle+ unary | '()' unary | atom
//   cycle := '(' name name+ ')'
//   atom  := 'nil' | 'id(' name ')' | 'd(' name '>' name ')' | '[' name '>' name ']'
//          | label '(' names? '>' names? ')' | '(' term ')'
// ordered:
//   unary := 'nil' | 'id' | 'sym' | label | '(' term ')'
namespace detail {
class Lexer {
public:
    explicit Lexer(std::string_view s) : s_(s) {}

    void skip() {
        while (i_ < s_.size()) {
            if (std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
            else if (s_[i_] == '#') {
                while (i_ < s_.size() && s_[i_] != '\n') ++i_;
            } else break;
        }
    }
    bool at_end() {
        skip();
        return i_ >= s_.size();
    }
    char peek() {
        skip();
        return i_ < s_.size() ? s_[i_] : '\0';
    }
    bool eat(char c) {
        if (peek() != c) return false;
        ++i_;
        return true;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }
    // identifier: [a-z_][a-z0-9_]*
    std::string word() {
        skip();
        std::size_t j = i_;
        while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) ++j;
        if (j == i_) fail("expected a name or label");
        std::string w(s_.substr(i_, j - i_));
        i_ = j;
        return w;
    }
    bool word_ahead() {
        char c = peek();
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    std::size_t pos() const { return i_; }
    void reset(std::size_t p) { i_ = p; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg + " at offset " + std::to_string(i_));
    }

private:
    std::string_view s_;
    std::size_t i_ = 0;
};

struct NmtParser {
    Lexer lx;
    bool allow_machine;

    Name name() {
        std::size_t p = lx.pos();
        std::string w = lx.word();
        try {
            return Name::parse(w, allow_machine);
        } catch (const ParseError& e) {
            lx.reset(p);
            lx.fail(std::string(e.what()).substr(e.kind().size() + 2));
        }
    }

    NameList names_until(char stop) {
        NameList out;
        if (lx.peek() == stop) return out;
        out.push_back(name());
        while (lx.eat(',')) out.push_back(name());
        return out;
    }

    Term term() {
        Term l = par();
        if (lx.eat(';')) return nomdiag::seq(l, term());
        return l;
    }

    Term par() {
        Term l = unary();
        if (lx.eat('|')) return nomdiag::par(l, par());
        return l;
    }

    // '(' name name+ ')' without consuming anything otherwise.
    std::optional<NameList> cycle() {
        std::size_t p = lx.pos();
        if (!lx.eat('(')) return std::nullopt;
        if (lx.eat(')')) return NameList{};
        NameList xs;
        while (lx.word_ahead()) {
            std::size_t q = lx.pos();
            std::string w = lx.word();
            if (lx.peek() == '(' || lx.peek() == '>') { // a label or name list, not a cycle
                lx.reset(q);
                break;
            }
            xs.push_back(Name::parse(w, allow_machine));
        }
        if (xs.size() >= 2 && lx.eat(')')) return xs;
        lx.reset(p);
        return std::nullopt;
    }

    Term unary() {
        FinPerm p;
        bool any = false;
        while (auto c = cycle()) {
            any = true;
            std::map<Name, Name> m;
            if (!duplicate_free(*c)) lx.fail("repeated name in cycle");
            for (std::size_t k = 0; k < c->size(); ++k) m[(*c)[k]] = (*c)[(k + 1) % c->size()];
            p = perm_compose(p, FinPerm::from_map(m));
        }
        Term body = atom();
        return any ? nomdiag::perm_app(p, body) : body;
    }

    Term atom() {
        if (lx.eat('(')) {
            Term t = term();
            lx.expect(')');
            return t;
        }
        if (lx.eat('[')) {
            Name a = name();
            lx.expect('>');
            Name b = name();
            lx.expect(']');
            return nomdiag::delta(a, b);
        }
        std::string w = lx.word();
        if (w == "nil") return nomdiag::nil();
        lx.expect('(');
        if (w == "id") {
            Name a = name();
            lx.expect(')');
            return nomdiag::idn(a);
        }
        if (w == "d") {
            Name a = name();
            lx.expect('>');
            Name b = name();
            lx.expect(')');
            return nomdiag::delta(a, b);
        }
        if (w[0] == '_' || !std::islower(static_cast<unsigned char>(w[0]))) lx.fail("bad generator label '" + w + "'");
        NameList d = names_until('>');
        lx.expect('>');
        NameList c = names_until(')');
        lx.expect(')');
        return nomdiag::inst(w, d, c);
    }
};

struct SmtParser {
    Lexer lx;

    Term term() {
        Term l = par();
        if (lx.eat(';')) return nomdiag::seq(l, term());
        return l;
    }
    Term par() {
        Term l = unary();
        if (lx.eat('+')) return nomdiag::par(l, par());
        return l;
    }
    Term unary() {
        if (lx.eat('(')) {
            Term t = term();
            lx.expect(')');
            return t;
        }
        std::string w = lx.word();
        if (w == "nil") return nomdiag::nil();
        if (w == "id") return nomdiag::id();
        if (w == "sym") return nomdiag::sym();
        if (w[0] == '_' || !std::islower(static_cast<unsigned char>(w[0]))) lx.fail("bad generator label '" + w + "'");
        return nomdiag::gen(w);
    }
};
} // namespace detail

/// Nominal term text. Names starting with '_' are rejected unless `allow_machine`.
inline Term parse_nmt(std::string_view text, bool allow_machine = false) {
    detail::NmtParser p{detail::Lexer(text), allow_machine};
    Term t = p.term();
    if (!p.lx.at_end()) p.lx.fail("trailing input");
    return t;
}

inline Term parse_smt(std::string_view text) {
    detail::SmtParser p{detail::Lexer(text)};
    Term t = p.term();
    if (!p.lx.at_end()) p.lx.fail("trailing input");
    return t;
}

/// Comma-separated names, e.g. for `--in a,b`; empty text is the empty list.
inline NameList parse_name_list(std::string_view text, bool allow_machine = false) {
    NameList out;
    std::size_t start = 0;
    if (text.find_first_not_of(" \t") == std::string_view::npos) return out;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view item = text.substr(start, end - start);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        out.push_back(Name::parse(item, allow_machine));
        start = end + 1;
    }
    return out;
}

/// One `label : m -> n` per line; '#' starts a comment.
inline Signature parse_signature(std::string_view text, Theory theory) {
    Signature sig;
    sig.theory = theory;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        std::string label, colon, arrow;
        long m = -1, n = -1;
        if (!(ls >> label >> colon >> m >> arrow >> n) || colon != ":" || arrow != "->" || m < 0 || n < 0)
            throw ParseError("signature line " + std::to_string(lineno) + ": expected 'label : m -> n'");
        std::string rest;
        if (ls >> rest) throw ParseError("signature line " + std::to_string(lineno) + ": trailing text");
        if (label == "id" || label == "d" || label == "nil" || label == "sym" || !std::islower(static_cast<unsigned char>(label[0])))
            throw ParseError("signature line " + std::to_string(lineno) + ": bad label '" + label + "'");
        sig.gens[label] = {static_cast<std::size_t>(m), static_cast<std::size_t>(n)};
    }
    return sig;
}

namespace detail {
inline void print_nmt(const Term& t, std::string& s) {
    auto child = [&](const Term& c, bool wrap) {
        if (wrap) s += "(";
        print_nmt(c, s);
        if (wrap) s += ")";
    };
    switch (t->op) {
    case Op::Nil: s += "nil"; return;
    case Op::IdName: s += "id(" + t->a.str() + ")"; return;
    case Op::Delta: s += "d(" + t->a.str() + ">" + t->b.str() + ")"; return;
    case Op::Inst: s += t->label + "(" + list_str(t->dom) + ">" + list_str(t->cod) + ")"; return;
    case Op::Par:
        child(t->l, is_binary(t->l));
        s += " | ";
        child(t->r, t->r->op == Op::Seq);
        return;
    case Op::Seq:
        child(t->l, t->l->op == Op::Seq);
        s += " ; ";
        child(t->r, false);
        return;
    case Op::Perm:
        s += t->perm.str() + " ";
        child(t->l, is_binary(t->l) || t->l->op == Op::Perm);
        return;
    default: throw TypeMismatch("ordered constructor in a nominal term");
    }
}

inline void print_smt(const Term& t, std::string& s) {
    auto child = [&](const Term& c, bool wrap) {
        if (wrap) s += "(";
        print_smt(c, s);
        if (wrap) s += ")";
    };
    switch (t->op) {
    case Op::Nil: s += "nil"; return;
    case Op::Id: s += "id"; return;
    case Op::Sym: s += "sym"; return;
    case Op::Gen: s += t->label; return;
    case Op::Par:
        child(t->l, is_binary(t->l));
        s += " + ";
        child(t->r, t->r->op == Op::Seq);
        return;
    case Op::Seq:
        child(t->l, t->l->op == Op::Seq);
        s += " ; ";
        child(t->r, false);
        return;
    default: throw TypeMismatch("nominal constructor in an ordered term");
    }
}
} // namespace detail

/// Inverse of parse_nmt up to whitespace: parse_nmt(print_nmt(t), true) == t.
inline std::string print_nmt(const Term& t) {
    std::string s;
    detail::print_nmt(t, s);
    return s;
}

inline std::string print_smt(const Term& t) {
    std::string s;
    detail::print_smt(t, s);
    return s;
}

inline std::string print_term(const Term& t) {
    return is_nominal_term(t) ? print_nmt(t) : print_smt(t);
}

} // namespace nomdiag
