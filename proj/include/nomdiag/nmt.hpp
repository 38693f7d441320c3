#pragma once

#include "term.hpp"
#include "theory.hpp"

#include <map>
#include <optional>

namespace nomdiag {

struct Iface {
    NameSet dom, cod;
    bool operator==(const Iface&) const = default;
    std::string str() const { return set_str(dom) + " -> " + set_str(cod); }
};

/// Interfaces of a nominal term. With `sig == nullptr` generator labels are not checked.
inline Iface nmt_typecheck(const Term& t, const Signature* sig = nullptr) {
    switch (t->op) {
    case Op::Nil: return {};
    case Op::IdName: return {{t->a}, {t->a}};
    case Op::Delta: return {{t->a}, {t->b}};
    case Op::Inst: {
        if (!duplicate_free(t->dom) || !duplicate_free(t->cod))
            throw DuplicateName("repeated name in generator instance " + t->label);
        if (sig) {
            const Arity& ar = sig->arity(t->label);
            if (ar.dom != t->dom.size() || ar.cod != t->cod.size())
                throw ArityMismatch("generator " + t->label + " expects " + std::to_string(ar.dom) +
                                    " -> " + std::to_string(ar.cod) + " names");
        }
        return {NameSet(t->dom.begin(), t->dom.end()), NameSet(t->cod.begin(), t->cod.end())};
    }
    case Op::Par: {
        Iface l = nmt_typecheck(t->l, sig), r = nmt_typecheck(t->r, sig);
        if (!separated(l.dom, r.dom))
            throw OverlapError("tensor domains overlap: " + set_str(l.dom) + " and " + set_str(r.dom));
        if (!separated(l.cod, r.cod))
            throw OverlapError("tensor codomains overlap: " + set_str(l.cod) + " and " + set_str(r.cod));
        return {set_union(l.dom, r.dom), set_union(l.cod, r.cod)};
    }
    case Op::Seq: {
        Iface l = nmt_typecheck(t->l, sig), r = nmt_typecheck(t->r, sig);
        if (l.cod != r.dom)
            throw SeqMismatch("middle interfaces differ: " + set_str(l.cod) + " vs " + set_str(r.dom));
        return {l.dom, r.cod};
    }
    case Op::Perm: {
        Iface b = nmt_typecheck(t->l, sig);
        return {perm_apply_set(t->perm, b.dom), perm_apply_set(t->perm, b.cod)};
    }
    default: throw TypeMismatch("ordered constructor in a nominal term");
    }
}

/// Non-throwing typing for hot loops; nullopt wherever nmt_typecheck would throw.
inline std::optional<Iface> nmt_type_of(const Term& t, const Signature* sig = nullptr) {
    switch (t->op) {
    case Op::Nil: return Iface{};
    case Op::IdName: return Iface{{t->a}, {t->a}};
    case Op::Delta: return Iface{{t->a}, {t->b}};
    case Op::Inst: {
        if (!duplicate_free(t->dom) || !duplicate_free(t->cod)) return std::nullopt;
        if (sig) {
            if (!sig->has(t->label)) return std::nullopt;
            const Arity& ar = sig->arity(t->label);
            if (ar.dom != t->dom.size() || ar.cod != t->cod.size()) return std::nullopt;
        }
        return Iface{NameSet(t->dom.begin(), t->dom.end()), NameSet(t->cod.begin(), t->cod.end())};
    }
    case Op::Par: {
        auto l = nmt_type_of(t->l, sig);
        if (!l) return l;
        auto r = nmt_type_of(t->r, sig);
        if (!r || !separated(l->dom, r->dom) || !separated(l->cod, r->cod)) return std::nullopt;
        l->dom.insert(r->dom.begin(), r->dom.end());
        l->cod.insert(r->cod.begin(), r->cod.end());
        return l;
    }
    case Op::Seq: {
        auto l = nmt_type_of(t->l, sig);
        if (!l) return l;
        auto r = nmt_type_of(t->r, sig);
        if (!r || l->cod != r->dom) return std::nullopt;
        return Iface{std::move(l->dom), std::move(r->cod)};
    }
    case Op::Perm: {
        auto b = nmt_type_of(t->l, sig);
        if (!b) return b;
        return Iface{perm_apply_set(t->perm, b->dom), perm_apply_set(t->perm, b->cod)};
    }
    default: return std::nullopt;
    }
}

inline bool nmt_well_typed(const Term& t, const Signature* sig = nullptr) { return nmt_type_of(t, sig).has_value(); }

/// Pushes the action to the leaves; the result has no Perm nodes.
inline Term perm_act_term(const FinPerm& p, const Term& t) {
    switch (t->op) {
    case Op::Nil: return t;
    case Op::IdName: return idn(p(t->a));
    case Op::Delta: return delta(p(t->a), p(t->b));
    case Op::Inst: return inst(t->label, perm_apply_list(p, t->dom), perm_apply_list(p, t->cod));
    case Op::Par: return par(perm_act_term(p, t->l), perm_act_term(p, t->r));
    case Op::Seq: return seq(perm_act_term(p, t->l), perm_act_term(p, t->r));
    case Op::Perm: return perm_act_term(perm_compose(p, t->perm), t->l);
    default: throw TypeMismatch("ordered constructor in a nominal term");
    }
}

/// Removes Perm nodes without renaming anything else.
inline Term push_perms(const Term& t) {
    switch (t->op) {
    case Op::Perm: return perm_act_term(t->perm, t->l);
    case Op::Par:
    case Op::Seq: return rebuild(t, push_perms(t->l), push_perms(t->r));
    default: return t;
    }
}

/// ⊎ over A (in name order) of δ(a, p(a)); type A -> p·A.
inline Term renaming_bundle(const FinPerm& p, const NameSet& a) {
    std::vector<Term> xs;
    for (auto& x : a) xs.push_back(delta(x, p(x)));
    return par_list(xs);
}

/// (p_A)^-1 ; t ; p_B for t : A -> B.
inline Term conjugation_form(const FinPerm& p, const Term& t) {
    Iface i = nmt_typecheck(t);
    return seq(renaming_bundle(perm_inverse(p), perm_apply_set(p, i.dom)),
               seq(t, renaming_bundle(p, i.cod)));
}

inline NameSet term_support(const Term& t) {
    Iface i = nmt_typecheck(t);
    return set_union(i.dom, i.cod);
}

namespace detail {
struct Freshener {
    NameSet avoid;
    std::uint64_t next = 0;

    Name fresh() {
        for (;; ++next) {
            Name n = Name::machine(next);
            if (!avoid.count(n)) {
                ++next;
                return n;
            }
        }
    }

    static Name look(const std::map<Name, Name>& rho, const Name& x) {
        auto it = rho.find(x);
        return it == rho.end() ? x : it->second;
    }

    // rho maps names bound by enclosing composites to their fresh replacements.
    Term run(const Term& t, const std::map<Name, Name>& rho) {
        switch (t->op) {
        case Op::IdName: return idn(look(rho, t->a));
        case Op::Delta: return delta(look(rho, t->a), look(rho, t->b));
        case Op::Inst: {
            NameList d, c;
            for (auto& x : t->dom) d.push_back(look(rho, x));
            for (auto& x : t->cod) c.push_back(look(rho, x));
            return inst(t->label, d, c);
        }
        case Op::Par: {
            Term l = run(t->l, rho);
            return par(l, run(t->r, rho));
        }
        case Op::Seq: {
            Iface outer = nmt_typecheck(t);
            Iface mid = nmt_typecheck(t->l);
            std::map<Name, Name> inner = rho;
            for (auto& m : mid.cod)
                if (!outer.dom.count(m) && !outer.cod.count(m)) inner[m] = fresh();
            Term l = run(t->l, inner);
            return seq(l, run(t->r, inner));
        }
        default: return t;
        }
    }
};
} // namespace detail

/// Renames every internal (composition-bound) name to `_0, _1, ...` in
/// outermost-first, left-to-right order, avoiding the free names. Perm nodes are pushed first.
inline Term freshen_internals(const Term& t) {
    Term u = push_perms(t);
    detail::Freshener f;
    f.avoid = term_support(u);
    return f.run(u, {});
}

/// Names that occur in t but not in its interfaces.
inline NameSet internal_names(const Term& t) {
    return set_minus(all_names(push_perms(t)), term_support(t));
}

} // namespace nomdiag
