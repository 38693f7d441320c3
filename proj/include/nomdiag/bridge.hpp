#pragma once

#include "nmt.hpp"
#include "smt.hpp"

#include <functional>

namespace nomdiag {

/// Deterministic list for each finite name set; must list every element exactly once.
using Enumeration = std::function<NameList(const NameSet&)>;

inline NameList default_enumeration(const NameSet& a) { return enumerate(a); }

/// `_p0 .. _p<n-1>`, the nominal stand-ins for ordered positions.
inline NameList ordinal_names(std::size_t n) {
    NameList out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(Name::ordinal(i));
    return out;
}

namespace detail {
struct NomBuilder {
    const Signature& sig;
    NameSet avoid;
    std::uint64_t next = 0;

    NameList fresh(std::size_t k) {
        NameList out;
        while (out.size() < k) {
            Name n = Name::machine(next++);
            if (!avoid.count(n)) out.push_back(n);
        }
        return out;
    }

    Term run(const Term& t, const NameList& a, const NameList& b) {
        switch (t->op) {
        case Op::Nil: return nomdiag::nil();
        case Op::Id: return nomdiag::delta(a[0], b[0]);
        case Op::Sym: return par(nomdiag::delta(a[0], b[1]), nomdiag::delta(a[1], b[0]));
        case Op::Gen: return nomdiag::inst(t->label, a, b);
        case Op::Par: {
            Arity l = smt_typecheck(t->l, sig);
            NameList al(a.begin(), a.begin() + long(l.dom)), ar(a.begin() + long(l.dom), a.end());
            NameList bl(b.begin(), b.begin() + long(l.cod)), br(b.begin() + long(l.cod), b.end());
            Term x = run(t->l, al, bl);
            return par(x, run(t->r, ar, br));
        }
        case Op::Seq: {
            NameList m = fresh(smt_typecheck(t->l, sig).cod);
            Term x = run(t->l, a, m);
            return seq(x, run(t->r, m, b));
        }
        default: throw TypeMismatch("nominal constructor in an ordered term");
        }
    }
};

inline std::size_t index_of(const NameList& l, const Name& x) {
    return static_cast<std::size_t>(std::find(l.begin(), l.end(), x) - l.begin());
}

// Ordered wiring carrying the wire at position i of `from` to the position of the same name in `to`.
inline Wiring alignment(const NameList& from, const NameList& to) {
    Wiring w(from.size());
    for (std::size_t i = 0; i < from.size(); ++i) w[i] = index_of(to, from[i]);
    return w;
}

inline Term seq_aligned(const Wiring& pre, const Term& mid, const Wiring& post) {
    Term t = mid;
    if (!is_identity_wiring(pre)) t = seq(perm_term(pre), t);
    if (!is_identity_wiring(post)) t = seq(t, perm_term(post));
    return t;
}

struct OrdBuilder {
    const Enumeration& e;

    // The ordered term between e(dom t) and e(cod t).
    Term run(const Term& t) {
        switch (t->op) {
        case Op::Nil: return nomdiag::nil();
        case Op::IdName:
        case Op::Delta: return nomdiag::id();
        case Op::Inst: {
            Iface i = nmt_typecheck(t);
            return seq_aligned(alignment(e(i.dom), t->dom), nomdiag::gen(t->label), alignment(t->cod, e(i.cod)));
        }
        case Op::Par: {
            Iface i = nmt_typecheck(t), l = nmt_typecheck(t->l), r = nmt_typecheck(t->r);
            NameList in = e(l.dom), out = e(l.cod);
            NameList rin = e(r.dom), rout = e(r.cod);
            in.insert(in.end(), rin.begin(), rin.end());
            out.insert(out.end(), rout.begin(), rout.end());
            Term x = run(t->l);
            Term body = par(x, run(t->r));
            return seq_aligned(alignment(e(i.dom), in), body, alignment(out, e(i.cod)));
        }
        case Op::Seq: {
            Term x = run(t->l);
            return seq(x, run(t->r));
        }
        case Op::Perm: return run(conjugation_form(t->perm, t->l));
        default: throw TypeMismatch("ordered constructor in a nominal term");
        }
    }
};
} // namespace detail

/// [a> t <b]: the nominal image of an ordered term along explicit interface lists.
/// Composites get machine-fresh middle names `_0, _1, ...` avoiding a and b.
inline Term nom_term(const Term& t, const NameList& a, const NameList& b, const Signature& sig) {
    Arity ar = smt_typecheck(t, sig);
    if (ar.dom != a.size() || ar.cod != b.size())
        throw ArityMismatch("term has arity " + std::to_string(ar.dom) + " -> " + std::to_string(ar.cod) +
                            " but lists have " + std::to_string(a.size()) + " and " + std::to_string(b.size()) +
                            " names");
    if (!duplicate_free(a) || !duplicate_free(b)) throw DuplicateName("interface list repeats a name");
    detail::NomBuilder nb{sig, {}};
    nb.avoid.insert(a.begin(), a.end());
    nb.avoid.insert(b.begin(), b.end());
    return nb.run(t, a, b);
}

/// <e(A)] t [e(B)>: the ordered image of a nominal term t : A -> B.
inline Term ord_term(const Term& t, const Enumeration& e = default_enumeration) {
    nmt_typecheck(t);
    detail::OrdBuilder ob{e};
    return ob.run(t);
}

/// ORD(NOM(t)) along the ordinal names; equal to t in the ordered theory.
inline Term delta_round(const Term& t, const Signature& sig) {
    Arity ar = smt_typecheck(t, sig);
    return ord_term(nom_term(t, ordinal_names(ar.dom), ordinal_names(ar.cod), sig));
}

/// NOM(ORD(t)) along e(dom t), e(cod t); equal to t in the nominal theory.
inline Term gamma_round(const Term& t, const Signature& sig, const Enumeration& e = default_enumeration) {
    Iface i = nmt_typecheck(t);
    Signature osig = sig;
    osig.theory = ordered_of(sig.theory);
    return nom_term(ord_term(t, e), e(i.dom), e(i.cod), osig);
}

/// Generator-wise translation between ordered signatures.
struct SigMorphism {
    Signature source, target;
    std::map<std::string, Term> image;

    /// Throws TypeViolation unless every source generator has an image of the same arity.
    void validate() const {
        for (auto& [label, ar] : source.gens) {
            auto it = image.find(label);
            if (it == image.end()) throw TypeViolation("no image for generator '" + label + "'");
            auto got = smt_type_of(it->second, target);
            if (!got || !(*got == ar))
                throw TypeViolation("image of '" + label + "' does not have arity " + std::to_string(ar.dom) +
                                    " -> " + std::to_string(ar.cod));
        }
    }

    const Term& at(const std::string& label) const {
        auto it = image.find(label);
        if (it == image.end()) throw TypeViolation("no image for generator '" + label + "'");
        return it->second;
    }

    static SigMorphism identity(const Signature& s) {
        SigMorphism f{s, s, {}};
        for (auto& [label, _] : s.gens) f.image[label] = gen(label);
        return f;
    }
};

/// G after F.
inline SigMorphism compose_morphisms(const SigMorphism& f, const SigMorphism& g) {
    SigMorphism h{f.source, g.target, {}};
    for (auto& [label, t] : f.image)
        h.image[label] = map_generators(t, [&](const Term& x) { return g.at(x->label); });
    return h;
}

inline Term transport_morphism(const SigMorphism& f, const Term& t) {
    f.validate();
    smt_typecheck(t, f.source);
    return map_generators(t, [&](const Term& x) { return f.at(x->label); });
}

/// NOM(F) on a nominal term: every instance g(a>b) becomes [a> F(g) <b], with middle
/// names fresh for the whole term.
inline Term transport_nominal(const SigMorphism& f, const Term& t) {
    f.validate();
    detail::NomBuilder nb{f.target, all_names(t)};
    return map_generators(t, [&](const Term& x) {
        const Term& img = f.at(x->label);
        return nb.run(img, x->dom, x->cod);
    });
}

} // namespace nomdiag
