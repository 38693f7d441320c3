#pragma once

#include "pattern.hpp"

namespace nomdiag {

enum class Dir : std::uint8_t { LR, RL };

inline const char* dir_str(Dir d) { return d == Dir::LR ? "L->R" : "R->L"; }
inline Dir flip(Dir d) { return d == Dir::LR ? Dir::RL : Dir::LR; }

struct SideCond {
    enum class K : std::uint8_t { In, NotIn } k;
    std::string name; // name variable
    SetExpr set;
};

/// How to sample a term variable when testing a rule: its dom and cod are the named set
/// variables (nominal) or int variables (ordered).
struct TermDecl {
    std::string var, dom, cod;
};

struct Rule {
    std::string name;
    PatPtr lhs, rhs;
    std::vector<SideCond> conds;
    std::vector<TermDecl> decls;
    /// Associativity, commutativity and tensor units: recorded in derivations, baked into search keys.
    bool structural = false;
    bool usable_lr = true, usable_rl = true;

    const Pat& from(Dir d) const { return d == Dir::LR ? *lhs : *rhs; }
    const Pat& to(Dir d) const { return d == Dir::LR ? *rhs : *lhs; }
    bool usable(Dir d) const { return d == Dir::LR ? usable_lr : usable_rl; }
};

struct RuleSet {
    Theory theory = Theory::nB;
    PatCtx ctx;
    std::vector<Rule> rules;

    const Rule& get(const std::string& name) const {
        for (auto& r : rules)
            if (r.name == name) return r;
        throw NoMatch("no rule named '" + name + "'");
    }
    bool has(const std::string& name) const {
        for (auto& r : rules)
            if (r.name == name) return true;
        return false;
    }
};

namespace detail {
// Gives every computed node a distinct hidden variable so matched blocks can be replayed exactly.
inline PatPtr with_hidden(const PatPtr& p, const std::string& prefix, int& counter) {
    Pat q = *p;
    switch (q.kind) {
    case PK::IdSet:
    case PK::IdBlock:
    case PK::SymBlock: q.var = prefix + std::to_string(counter++); break;
    case PK::Par:
    case PK::Seq:
        q.l = with_hidden(q.l, prefix, counter);
        q.r = with_hidden(q.r, prefix, counter);
        break;
    case PK::Perm: q.l = with_hidden(q.l, prefix, counter); break;
    default: break;
    }
    return pat::mk(std::move(q));
}

inline bool direction_usable(const Pat& from, const Pat& to) {
    if (!matchable(from)) return false;
    std::set<std::string> ft, fn, fp, fi, tt, tn, tp, ti;
    pattern_vars(from, ft, fn, fp, fi);
    pattern_vars(to, tt, tn, tp, ti);
    for (auto& v : tt)
        if (!ft.count(v)) return false;
    for (auto& v : tp)
        if (!fp.count(v)) return false;
    for (auto& v : ti)
        if (!fi.count(v)) return false;
    return true;
}

struct RuleBuilder {
    std::vector<Rule> rules;

    Rule& add(std::string name, PatPtr lhs, PatPtr rhs) {
        Rule r;
        r.name = std::move(name);
        int c = 0;
        r.lhs = with_hidden(lhs, "#l", c);
        c = 0;
        r.rhs = with_hidden(rhs, "#r", c);
        r.usable_lr = direction_usable(*r.lhs, *r.rhs);
        r.usable_rl = direction_usable(*r.rhs, *r.lhs);
        rules.push_back(std::move(r));
        return rules.back();
    }
};

inline Rule& decl(Rule& r, std::string v, std::string d, std::string c) {
    r.decls.push_back({std::move(v), std::move(d), std::move(c)});
    return r;
}
inline Rule& in(Rule& r, std::string x, SetExpr s) {
    r.conds.push_back({SideCond::K::In, std::move(x), std::move(s)});
    return r;
}
inline Rule& not_in(Rule& r, std::string x, SetExpr s) {
    r.conds.push_back({SideCond::K::NotIn, std::move(x), std::move(s)});
    return r;
}
} // namespace detail

inline bool conds_hold(const Rule& r, const Binding& b, const PatCtx& ctx) {
    try {
        for (auto& c : r.conds) {
            bool member = eval_set(c.set, b, ctx).count(detail::bound_name(b, c.name)) != 0;
            if (member != (c.k == SideCond::K::In)) return false;
        }
        return true;
    } catch (const Error&) {
        return false;
    }
}

namespace detail {
using namespace pat;

inline void nominal_monoidal_rules(RuleBuilder& rb) {
    auto T = var("T"), S = var("S"), R = var("R"), U = var("U"), V = var("V");
    decl(rb.add("seq-unit-left", seq(idset(dom_of("T")), T), T), "T", "A", "B");
    decl(rb.add("seq-unit-right", seq(T, idset(cod_of("T"))), T), "T", "A", "B");
    {
        auto& r = rb.add("par-unit-left", par(pat::nil(), T), T);
        r.structural = true;
        decl(r, "T", "A", "B");
    }
    {
        auto& r = rb.add("par-unit-right", par(T, pat::nil()), T);
        r.structural = true;
        decl(r, "T", "A", "B");
    }
    {
        auto& r = rb.add("seq-assoc", seq(seq(T, S), R), seq(T, seq(S, R)));
        r.structural = true;
        decl(decl(decl(r, "T", "A", "B"), "S", "B", "C"), "R", "C", "D");
    }
    {
        auto& r = rb.add("par-assoc", par(par(T, S), R), par(T, par(S, R)));
        r.structural = true;
        decl(decl(decl(r, "T", "A", "B"), "S", "C", "D"), "R", "E", "F");
    }
    {
        auto& r = rb.add("par-comm", par(T, S), par(S, T));
        r.structural = true;
        decl(decl(r, "T", "A", "B"), "S", "C", "D");
    }
    auto& ic = rb.add("interchange", par(seq(S, T), seq(U, V)), seq(par(S, U), par(T, V)));
    decl(decl(decl(decl(ic, "S", "A", "B"), "T", "B", "C"), "U", "D", "E"), "V", "E", "F");
}

inline void nominal_set_rules(RuleBuilder& rb) {
    auto T = var("T"), S = var("S"), G = var("G", Sort::Gen);
    auto P = pv("P");
    rb.add("act-nil", perm(P, pat::nil()), pat::nil());
    rb.add("act-id", perm(P, idn(n("X"))), idn(applied("P", "X")));
    rb.add("act-delta", perm(P, delta(n("X"), n("Y"))), delta(applied("P", "X"), applied("P", "Y")));
    rb.add("act-gen", perm(P, G), act(P, "G"));
    decl(decl(rb.add("act-par", perm(P, par(T, S)), par(perm(P, T), perm(P, S))), "T", "A", "B"), "S", "C", "D");
    decl(decl(rb.add("act-seq", perm(P, seq(T, S)), seq(perm(P, T), perm(P, S))), "T", "A", "B"), "S", "B", "C");
    rb.add("delta-chain", seq(delta(n("X"), n("Y")), delta(n("Y"), n("Z"))), delta(n("X"), n("Z")));
    rb.add("delta-refl", delta(n("X"), n("X")), idn(n("X"))).structural = true;

    // g ; (id_B | d(b>x)) = (b x) g      for g : A -> B + {b}, b,x not in A
    auto& out = rb.add("striped-out", seq(G, par(idset(cod_of("G", {"B"})), delta(n("B"), n("X")))),
                       perm(transp("B", "X"), G));
    in(out, "B", cod_of("G"));
    not_in(out, "B", dom_of("G"));
    not_in(out, "X", dom_of("G"));
    not_in(out, "X", cod_of("G"));

    // (d(x>a) | id_A) ; g = (x a) g      for g : {a} + A -> B, a,x not in B
    auto& inn = rb.add("striped-in", seq(par(delta(n("X"), n("A")), idset(dom_of("G", {"A"}))), G),
                       perm(transp("X", "A"), G));
    in(inn, "A", dom_of("G"));
    not_in(inn, "A", cod_of("G"));
    not_in(inn, "X", cod_of("G"));
    not_in(inn, "X", dom_of("G"));

    // g ; (id_B | d(c>x)) = (id_A | d(c>x)) ; (c x) g      for g : A + {c} -> B + {c}
    auto& thr = rb.add("striped-through", seq(G, par(idset(cod_of("G", {"C"})), delta(n("C"), n("X")))),
                       seq(par(idset(dom_of("G", {"C"})), delta(n("C"), n("X"))), perm(transp("C", "X"), G)));
    in(thr, "C", dom_of("G"));
    in(thr, "C", cod_of("G"));
    not_in(thr, "X", dom_of("G"));
    not_in(thr, "X", cod_of("G"));
}

inline PatPtr m_(std::string a, std::string b, std::string c) { return inst(label::merge, {n(a), n(b)}, {n(c)}); }
inline PatPtr u_(std::string a) { return inst(label::unit, {}, {n(a)}); }
inline PatPtr k_(std::string a) { return inst(label::discard, {n(a)}, {}); }
inline PatPtr c_(std::string a, std::string b, std::string c) { return inst(label::copy, {n(a)}, {n(b), n(c)}); }
inline PatPtr i_(std::string a) { return idn(n(a)); }

inline void nominal_theory_rules(RuleBuilder& rb, Theory t) {
    Theory o = ordered_of(t);
    const bool S = o == Theory::S || o == Theory::F || o == Theory::P || o == Theory::R;
    const bool F = o == Theory::F || o == Theory::P || o == Theory::R;
    const bool P = o == Theory::P || o == Theory::R;
    const bool R = o == Theory::R;
    if (S) {
        rb.add("merge-assoc", seq(par(m_("A", "B", "X"), i_("C")), m_("X", "C", "Y")),
               seq(par(i_("A"), m_("B", "C", "Z")), m_("A", "Z", "Y")));
        rb.add("merge-comm", m_("A", "B", "X"), m_("B", "A", "X"));
    }
    if (F) rb.add("merge-unit", seq(par(i_("A"), u_("B")), m_("A", "B", "C")), delta(n("A"), n("C")));
    if (P) {
        rb.add("unit-discard", seq(u_("X"), k_("X")), pat::nil());
        rb.add("merge-discard", seq(m_("A", "B", "X"), k_("X")), par(k_("A"), k_("B")));
    }
    if (R) {
        rb.add("copy-coassoc", seq(c_("A", "X", "D"), par(c_("X", "B", "C"), i_("D"))),
               seq(c_("A", "B", "Y"), par(i_("B"), c_("Y", "C", "D"))));
        rb.add("copy-cocomm", c_("A", "B", "C"), c_("A", "C", "B"));
        rb.add("copy-counit", seq(c_("A", "B", "C"), par(i_("B"), k_("C"))), delta(n("A"), n("B")));
        rb.add("bimonoid", seq(m_("A", "B", "X"), c_("X", "C", "D")),
               seq(par(c_("A", "A1", "A2"), c_("B", "B1", "B2")), par(m_("A1", "B1", "C"), m_("A2", "B2", "D"))));
        rb.add("unit-copy", seq(u_("X"), c_("X", "B", "C")), par(u_("B"), u_("C")));
        rb.add("special", seq(c_("A", "X", "Y"), m_("X", "Y", "B")), delta(n("A"), n("B")));
    }
}

inline void ordered_rules(RuleBuilder& rb) {
    auto T = var("T"), S = var("S"), R = var("R"), U = var("U"), V = var("V");
    decl(rb.add("seq-unit-left", seq(idblock(adom("T")), T), T), "T", "M", "N");
    decl(rb.add("seq-unit-right", seq(T, idblock(acod("T"))), T), "T", "M", "N");
    {
        auto& r = rb.add("par-unit-left", par(pat::nil(), T), T);
        r.structural = true;
        decl(r, "T", "M", "N");
    }
    {
        auto& r = rb.add("par-unit-right", par(T, pat::nil()), T);
        r.structural = true;
        decl(r, "T", "M", "N");
    }
    {
        auto& r = rb.add("seq-assoc", seq(seq(T, S), R), seq(T, seq(S, R)));
        r.structural = true;
        decl(decl(decl(r, "T", "M", "N"), "S", "N", "O"), "R", "O", "Q");
    }
    {
        auto& r = rb.add("par-assoc", par(par(T, S), R), par(T, par(S, R)));
        r.structural = true;
        decl(decl(decl(r, "T", "M", "N"), "S", "O", "Q"), "R", "W", "Y");
    }
    rb.add("sym-involution", seq(pat::sym(), pat::sym()), par(pat::id(), pat::id()));
    auto& ic = rb.add("interchange", par(seq(S, T), seq(U, V)), seq(par(S, U), par(T, V)));
    decl(decl(decl(decl(ic, "S", "M", "N"), "T", "N", "O"), "U", "Q", "W"), "V", "W", "Y");
    // (t + id_z) ; sigma_{n,z} = sigma_{m,z} ; (id_z + t)
    auto& nat = rb.add("sym-naturality", seq(par(T, idblock(ivar("Z"))), symblock(acod("T"), ivar("Z"))),
                       seq(symblock(adom("T"), ivar("Z")), par(idblock(ivar("Z")), T)));
    decl(nat, "T", "M", "N");
}

inline void ordered_theory_rules(RuleBuilder& rb, Theory t) {
    Theory o = ordered_of(t);
    const bool S = o == Theory::S || o == Theory::F || o == Theory::P || o == Theory::R;
    const bool F = o == Theory::F || o == Theory::P || o == Theory::R;
    const bool P = o == Theory::P || o == Theory::R;
    const bool R = o == Theory::R;
    auto m = pat::gen(label::merge), u = pat::gen(label::unit), k = pat::gen(label::discard), c = pat::gen(label::copy);
    auto I = pat::id(), X = pat::sym();
    if (S) {
        rb.add("merge-assoc", seq(par(m, I), m), seq(par(I, m), m));
        rb.add("merge-comm", seq(X, m), m);
    }
    if (F) rb.add("merge-unit", seq(par(I, u), m), I);
    if (P) {
        rb.add("unit-discard", seq(u, k), pat::nil());
        rb.add("merge-discard", seq(m, k), par(k, k));
    }
    if (R) {
        rb.add("copy-coassoc", seq(c, par(c, I)), seq(c, par(I, c)));
        rb.add("copy-cocomm", seq(c, X), c);
        rb.add("copy-counit", seq(c, par(I, k)), I);
        rb.add("bimonoid", seq(m, c), seq(par(c, c), seq(par(I, par(X, I)), par(m, m))));
        rb.add("unit-copy", seq(u, c), par(u, u));
        rb.add("special", seq(c, m), I);
    }
}
} // namespace detail

/// Monoidal-category schemas, nominal-set schemas (with d(x>x) = id(x)) and the theory's equations.
/// `sig` overrides the theory's generator set, e.g. for free signatures.
inline RuleSet nmt_rules(Theory t, std::optional<Signature> sig = std::nullopt) {
    detail::RuleBuilder rb;
    detail::nominal_monoidal_rules(rb);
    detail::nominal_set_rules(rb);
    if (!is_free(t)) detail::nominal_theory_rules(rb, t);
    RuleSet rs;
    rs.theory = nominal_of(t);
    rs.ctx.nominal = true;
    rs.ctx.sig = sig ? *sig : nmt_theory_signature(t);
    rs.rules = std::move(rb.rules);
    return rs;
}

inline RuleSet smt_rules(Theory t, std::optional<Signature> sig = std::nullopt) {
    detail::RuleBuilder rb;
    detail::ordered_rules(rb);
    if (!is_free(t)) detail::ordered_theory_rules(rb, t);
    RuleSet rs;
    rs.theory = ordered_of(t);
    rs.ctx.nominal = false;
    rs.ctx.sig = sig ? *sig : smt_theory_signature(t);
    rs.rules = std::move(rb.rules);
    return rs;
}

/// Only the schemas that generate alpha-equivalence: monoidal structure plus the nominal-set equations.
inline RuleSet alpha_rules(const Signature& sig) { return nmt_rules(Theory::nFree, sig); }

} // namespace nomdiag
