#pragma once

#include "term.hpp"
#include "theory.hpp"

#include <numeric>
#include <optional>
#include <vector>

namespace nomdiag {

inline Arity smt_typecheck(const Term& t, const Signature& sig) {
    switch (t->op) {
    case Op::Nil: return {0, 0};
    case Op::Id: return {1, 1};
    case Op::Sym: return {2, 2};
    case Op::Gen: return sig.arity(t->label);
    case Op::Par: {
        Arity l = smt_typecheck(t->l, sig), r = smt_typecheck(t->r, sig);
        return {l.dom + r.dom, l.cod + r.cod};
    }
    case Op::Seq: {
        Arity l = smt_typecheck(t->l, sig), r = smt_typecheck(t->r, sig);
        if (l.cod != r.dom)
            throw SeqMismatch("middle arities differ: " + std::to_string(l.cod) + " vs " +
                              std::to_string(r.dom));
        return {l.dom, r.cod};
    }
    default: throw TypeMismatch("nominal constructor in an ordered term");
    }
}

inline std::optional<Arity> smt_type_of(const Term& t, const Signature& sig) {
    switch (t->op) {
    case Op::Nil: return Arity{0, 0};
    case Op::Id: return Arity{1, 1};
    case Op::Sym: return Arity{2, 2};
    case Op::Gen:
        if (!sig.has(t->label)) return std::nullopt;
        return sig.arity(t->label);
    case Op::Par:
    case Op::Seq: {
        auto l = smt_type_of(t->l, sig);
        if (!l) return l;
        auto r = smt_type_of(t->r, sig);
        if (!r) return r;
        if (t->op == Op::Par) return Arity{l->dom + r->dom, l->cod + r->cod};
        if (l->cod != r->dom) return std::nullopt;
        return Arity{l->dom, r->cod};
    }
    default: return std::nullopt;
    }
}

inline Term smt_id(std::size_t n) {
    if (n == 0) return nil();
    Term acc = id();
    for (std::size_t i = 1; i < n; ++i) acc = par(id(), acc);
    return acc;
}

/// Block symmetry m+n -> n+m: position i <= m goes to i+n, m+j goes to j.
/// The last wire of the m-block is moved across first, then the rest recursively.
inline Term smt_sym(std::size_t m, std::size_t n) {
    if (m == 0 || n == 0) return smt_id(m + n);
    if (m == 1 && n == 1) return sym();
    if (m == 1) return seq(par(sym(), smt_id(n - 1)), par(id(), smt_sym(1, n - 1)));
    return seq(par(smt_id(m - 1), smt_sym(1, n)), par(smt_sym(m - 1, n), id()));
}

using Wiring = std::vector<std::size_t>; // 0-based: input i goes to output w[i]

namespace detail {
inline Wiring wiring(const Term& t) {
    switch (t->op) {
    case Op::Nil: return {};
    case Op::Id: return {0};
    case Op::Sym: return {1, 0};
    case Op::Par: {
        Wiring l = wiring(t->l), r = wiring(t->r);
        const std::size_t lw = l.size();
        for (auto x : r) l.push_back(x + lw);
        return l;
    }
    case Op::Seq: {
        Wiring l = wiring(t->l), r = wiring(t->r);
        if (l.size() != r.size()) throw SeqMismatch("wiring widths differ");
        Wiring out(l.size());
        for (std::size_t i = 0; i < l.size(); ++i) out[i] = r[l[i]];
        return out;
    }
    case Op::Gen: throw NotAPermutationTerm("term contains generator '" + t->label + "'");
    default: throw NotAPermutationTerm("term is not an ordered wiring");
    }
}
} // namespace detail

/// The position bijection computed by a generator-free ordered term.
inline Wiring sym_as_permutation(const Term& t) { return detail::wiring(t); }

inline bool is_wiring(const Term& t) {
    switch (t->op) {
    case Op::Nil:
    case Op::Id:
    case Op::Sym: return true;
    case Op::Par:
    case Op::Seq: return is_wiring(t->l) && is_wiring(t->r);
    default: return false;
    }
}

/// Adjacent-transposition (bubble sort) term for a position bijection; identity gives id_n.
inline Term perm_term(const Wiring& w) {
    const std::size_t n = w.size();
    std::vector<std::size_t> cur(w); // cur[k] = final destination of the wire now at k
    std::vector<Term> layers;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            if (cur[k] > cur[k + 1]) {
                std::swap(cur[k], cur[k + 1]);
                std::vector<Term> parts;
                if (k > 0) parts.push_back(smt_id(k));
                parts.push_back(sym());
                if (k + 2 < n) parts.push_back(smt_id(n - k - 2));
                layers.push_back(par_list(parts));
                changed = true;
            }
        }
    }
    if (layers.empty()) return smt_id(n);
    return seq_list(layers);
}

inline bool is_identity_wiring(const Wiring& w) {
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] != i) return false;
    return true;
}

/// Homomorphic replacement of generators.
inline Term map_generators(const Term& t, const std::function<Term(const Term&)>& f) {
    switch (t->op) {
    case Op::Gen:
    case Op::Inst: return f(t);
    case Op::Par:
    case Op::Seq: return rebuild(t, map_generators(t->l, f), map_generators(t->r, f));
    case Op::Perm: return perm_app(t->perm, map_generators(t->l, f));
    default: return t;
    }
}

} // namespace nomdiag
