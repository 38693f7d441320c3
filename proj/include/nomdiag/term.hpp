#pragma once

#include "names.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace nomdiag {

/// One AST serves both calculi. Ordered terms use Nil/Id/Sym/Gen/Par/Seq;
/// nominal terms use Nil/IdName/Delta/Inst/Par/Seq/Perm.
enum class Op : std::uint8_t { Nil, Id, Sym, Gen, IdName, Delta, Inst, Par, Seq, Perm };

struct TermNode;

class Term {
public:
    Term() = default;
    explicit Term(std::shared_ptr<const TermNode> n) : node_(std::move(n)) {}

    const TermNode* operator->() const { return node_.get(); }
    const TermNode& operator*() const { return *node_; }
    explicit operator bool() const { return node_ != nullptr; }
    bool same_node(const Term& o) const { return node_ == o.node_; }

    bool operator==(const Term& o) const;

private:
    std::shared_ptr<const TermNode> node_;
};

struct TermNode {
    Op op = Op::Nil;
    std::string label;      // Gen, Inst
    NameList dom, cod;      // Inst name lists
    Name a, b;              // IdName (a), Delta (a -> b)
    FinPerm perm;           // Perm
    Term l, r;              // Par/Seq children; Perm body in l
    std::size_t size = 1;   // node count
    std::size_t deltas = 0; // Delta leaves
    std::uint8_t canon_mark = 0; // set by canonicalization: 1 ordered, 2 nominal
};

inline bool term_equal(const Term& x, const Term& y) {
    if (x.same_node(y)) return true;
    if (x->op != y->op || x->size != y->size) return false;
    switch (x->op) {
    case Op::Nil:
    case Op::Id:
    case Op::Sym: return true;
    case Op::Gen: return x->label == y->label;
    case Op::IdName: return x->a == y->a;
    case Op::Delta: return x->a == y->a && x->b == y->b;
    case Op::Inst: return x->label == y->label && x->dom == y->dom && x->cod == y->cod;
    case Op::Par:
    case Op::Seq: return term_equal(x->l, y->l) && term_equal(x->r, y->r);
    case Op::Perm: return x->perm == y->perm && term_equal(x->l, y->l);
    }
    return false;
}

inline bool Term::operator==(const Term& o) const { return term_equal(*this, o); }

namespace detail {
inline Term make(TermNode n) { return Term(std::make_shared<const TermNode>(std::move(n))); }
} // namespace detail

inline Term nil() {
    static const Term t = detail::make(TermNode{Op::Nil});
    return t;
}
inline Term id() {
    static const Term t = detail::make(TermNode{Op::Id});
    return t;
}
inline Term sym() {
    static const Term t = detail::make(TermNode{Op::Sym});
    return t;
}
inline Term gen(std::string label) {
    TermNode n{Op::Gen};
    n.label = std::move(label);
    return detail::make(std::move(n));
}
inline Term idn(Name a) {
    TermNode n{Op::IdName};
    n.a = std::move(a);
    return detail::make(std::move(n));
}
inline Term delta(Name a, Name b) {
    TermNode n{Op::Delta};
    n.a = std::move(a);
    n.b = std::move(b);
    n.deltas = 1;
    return detail::make(std::move(n));
}
inline Term inst(std::string label, NameList dom, NameList cod) {
    TermNode n{Op::Inst};
    n.label = std::move(label);
    n.dom = std::move(dom);
    n.cod = std::move(cod);
    return detail::make(std::move(n));
}
inline Term par(Term l, Term r) {
    TermNode n{Op::Par};
    n.size = 1 + l->size + r->size;
    n.deltas = l->deltas + r->deltas;
    n.l = std::move(l);
    n.r = std::move(r);
    return detail::make(std::move(n));
}
inline Term seq(Term l, Term r) {
    TermNode n{Op::Seq};
    n.size = 1 + l->size + r->size;
    n.deltas = l->deltas + r->deltas;
    n.l = std::move(l);
    n.r = std::move(r);
    return detail::make(std::move(n));
}
inline Term perm_app(FinPerm p, Term body) {
    TermNode n{Op::Perm};
    n.size = 1 + body->size;
    n.deltas = body->deltas;
    n.perm = std::move(p);
    n.l = std::move(body);
    return detail::make(std::move(n));
}

inline bool is_binary(const Term& t) { return t->op == Op::Par || t->op == Op::Seq; }

/// Right-nested n-ary tensor / composite; empty lists give `nil`.
inline Term par_list(const std::vector<Term>& xs) {
    if (xs.empty()) return nil();
    Term acc = xs.back();
    for (std::size_t i = xs.size() - 1; i-- > 0;) acc = par(xs[i], acc);
    return acc;
}
inline Term seq_list(const std::vector<Term>& xs) {
    if (xs.empty()) return nil();
    Term acc = xs.back();
    for (std::size_t i = xs.size() - 1; i-- > 0;) acc = seq(xs[i], acc);
    return acc;
}

/// Leaves of the maximal Par (or Seq) tree rooted at t, left to right.
inline void flatten(const Term& t, Op op, std::vector<Term>& out) {
    if (t->op == op) {
        flatten(t->l, op, out);
        flatten(t->r, op, out);
    } else {
        out.push_back(t);
    }
}
inline std::vector<Term> flatten(const Term& t, Op op) {
    std::vector<Term> out;
    flatten(t, op, out);
    return out;
}

using Path = std::vector<std::uint8_t>;

inline std::string path_str(const Path& p) {
    if (p.empty()) return "root";
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ".";
        s += std::to_string(p[i]);
    }
    return s;
}

inline Path parse_path(const std::string& s) {
    Path p;
    if (s == "root") return p;
    for (char c : s) {
        if (c == '.') continue;
        if (c != '0' && c != '1') throw ParseError("bad path '" + s + "'");
        p.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return p;
}

inline const Term* subterm_ptr(const Term& t, const Path& p) {
    const Term* cur = &t;
    for (auto step : p) {
        if (is_binary(*cur)) cur = step == 0 ? &(*cur)->l : &(*cur)->r;
        else if ((*cur)->op == Op::Perm && step == 0) cur = &(*cur)->l;
        else return nullptr;
    }
    return cur;
}

inline Term subterm(const Term& t, const Path& p) {
    const Term* s = subterm_ptr(t, p);
    if (!s) throw NoMatch("position " + path_str(p) + " does not exist");
    return *s;
}

inline Term rebuild(const Term& t, Term l, Term r) {
    switch (t->op) {
    case Op::Par: return par(std::move(l), std::move(r));
    case Op::Seq: return seq(std::move(l), std::move(r));
    case Op::Perm: return perm_app(t->perm, std::move(l));
    default: return t;
    }
}

inline Term replace_at(const Term& t, const Path& p, std::size_t depth, const Term& u) {
    if (depth == p.size()) return u;
    if (p[depth] == 0) return rebuild(t, replace_at(t->l, p, depth + 1, u), t->r);
    return rebuild(t, t->l, replace_at(t->r, p, depth + 1, u));
}
inline Term replace_at(const Term& t, const Path& p, const Term& u) {
    if (!subterm_ptr(t, p)) throw NoMatch("position " + path_str(p) + " does not exist");
    return replace_at(t, p, 0, u);
}

/// Preorder positions.
inline void positions(const Term& t, Path& cur, std::vector<Path>& out) {
    out.push_back(cur);
    if (is_binary(t) || t->op == Op::Perm) {
        cur.push_back(0);
        positions(t->l, cur, out);
        cur.pop_back();
    }
    if (is_binary(t)) {
        cur.push_back(1);
        positions(t->r, cur, out);
        cur.pop_back();
    }
}
inline std::vector<Path> positions(const Term& t) {
    std::vector<Path> out;
    Path cur;
    positions(t, cur, out);
    return out;
}

/// Total structural order, cheaper than comparing keys.
inline int term_compare(const Term& x, const Term& y) {
    if (x.same_node(y)) return 0;
    if (x->op != y->op) return x->op < y->op ? -1 : 1;
    auto cmp = [](const auto& a, const auto& b) { return a < b ? -1 : (b < a ? 1 : 0); };
    switch (x->op) {
    case Op::Nil:
    case Op::Id:
    case Op::Sym: return 0;
    case Op::Gen: return x->label.compare(y->label);
    case Op::IdName: return cmp(x->a, y->a);
    case Op::Delta: {
        int c = cmp(x->a, y->a);
        return c ? c : cmp(x->b, y->b);
    }
    case Op::Inst: {
        if (int c = x->label.compare(y->label)) return c;
        if (int c = cmp(x->dom, y->dom)) return c;
        return cmp(x->cod, y->cod);
    }
    case Op::Par:
    case Op::Seq: {
        int c = term_compare(x->l, y->l);
        return c ? c : term_compare(x->r, y->r);
    }
    case Op::Perm: {
        if (int c = cmp(x->perm.moved(), y->perm.moved())) return c;
        return term_compare(x->l, y->l);
    }
    }
    return 0;
}

/// Unambiguous prefix serialization; the basis of all hashing keys.
inline void key_into(const Term& t, std::string& s) {
    switch (t->op) {
    case Op::Nil: s += 'N'; return;
    case Op::Id: s += 'I'; return;
    case Op::Sym: s += 'S'; return;
    case Op::Gen: s += "g(" + t->label + ")"; return;
    case Op::IdName: s += "i(" + t->a.str() + ")"; return;
    case Op::Delta: s += "d(" + t->a.str() + "," + t->b.str() + ")"; return;
    case Op::Inst: s += "G(" + t->label + "|" + list_str(t->dom) + "|" + list_str(t->cod) + ")"; return;
    case Op::Par:
    case Op::Seq:
        s += t->op == Op::Par ? "P(" : "Q(";
        key_into(t->l, s);
        s += ',';
        key_into(t->r, s);
        s += ')';
        return;
    case Op::Perm:
        s += "p" + t->perm.str() + "[";
        key_into(t->l, s);
        s += ']';
        return;
    }
}
inline std::string key(const Term& t) {
    std::string s;
    key_into(t, s);
    return s;
}

/// Every name occurring anywhere in t (leaves and permutation supports).
inline void all_names(const Term& t, NameSet& out) {
    switch (t->op) {
    case Op::IdName: out.insert(t->a); break;
    case Op::Delta: out.insert(t->a); out.insert(t->b); break;
    case Op::Inst:
        out.insert(t->dom.begin(), t->dom.end());
        out.insert(t->cod.begin(), t->cod.end());
        break;
    case Op::Perm:
        for (auto& [k, _] : t->perm.moved()) out.insert(k);
        all_names(t->l, out);
        break;
    case Op::Par:
    case Op::Seq:
        all_names(t->l, out);
        all_names(t->r, out);
        break;
    default: break;
    }
}
inline NameSet all_names(const Term& t) {
    NameSet s;
    all_names(t, s);
    return s;
}

inline bool is_nominal_term(const Term& t) {
    switch (t->op) {
    case Op::IdName:
    case Op::Delta:
    case Op::Inst:
    case Op::Perm: return true;
    case Op::Par:
    case Op::Seq: return is_nominal_term(t->l) || is_nominal_term(t->r);
    default: return false;
    }
}

/// True for nil, id(a) and tensors of those.
inline bool is_id_bundle(const Term& t) {
    if (t->op == Op::Nil || t->op == Op::IdName) return true;
    return t->op == Op::Par && is_id_bundle(t->l) && is_id_bundle(t->r);
}

/// True for nil, id and tensors of those (ordered identities id_n up to bracketing).
inline bool is_id_block(const Term& t) {
    if (t->op == Op::Nil || t->op == Op::Id) return true;
    return t->op == Op::Par && is_id_block(t->l) && is_id_block(t->r);
}

inline NameSet id_bundle_set(const Term& t) {
    NameSet s;
    all_names(t, s);
    return s;
}

/// id_A as a right-nested tensor in name order.
inline Term id_bundle(const NameSet& a) {
    std::vector<Term> xs;
    for (auto& n : a) xs.push_back(idn(n));
    return par_list(xs);
}

} // namespace nomdiag
