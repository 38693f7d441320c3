#pragma once

#include "nmt.hpp"
#include "smt.hpp"

#include <optional>

namespace nomdiag {

/// A name position in a pattern: a name variable, optionally acted on by a permutation variable.
/// The acted form is only instantiated, never matched.
struct NPat {
    std::string var;
    std::string perm; // empty: plain variable
};

/// Permutation position: a permutation variable, or the transposition of two name variables.
struct PPat {
    std::string var;
    std::string a, b; // transposition when var is empty
    bool is_transp() const { return var.empty(); }
};

/// Dom or cod of a bound term variable, minus some bound names.
struct SetExpr {
    bool cod = false;
    std::string of;
    std::vector<std::string> minus;
};

/// Ordered arity: an int variable, or dom/cod of a bound term variable.
struct ArityExpr {
    std::string ivar;
    bool cod = false;
    std::string of;
};

enum class PK : std::uint8_t {
    Var,      // term variable
    Nil, Id, Sym, Gen, IdName, Delta, Inst, Par, Seq, Perm,
    IdSet,    // id bundle over a SetExpr (nominal)
    IdBlock,  // id_n over an ArityExpr (ordered)
    SymBlock, // block symmetry sigma_{m,n} (ordered)
    Act,      // perm_act_term(P, X), only instantiated
};

enum class Sort : std::uint8_t { Any, Gen };

struct Pat;
using PatPtr = std::shared_ptr<const Pat>;

struct Pat {
    PK kind = PK::Nil;
    std::string var;   // Var, Act (term var); hidden binding for IdSet/IdBlock/SymBlock
    Sort sort = Sort::Any;
    std::string label; // Gen, Inst
    std::vector<NPat> dom, cod;
    NPat a, b;
    PPat perm;
    SetExpr set;
    ArityExpr m, n;
    PatPtr l, r;
};

/// Pattern builders; names follow the term builders.
namespace pat {
inline PatPtr mk(Pat p) { return std::make_shared<const Pat>(std::move(p)); }
inline PatPtr var(std::string v, Sort s = Sort::Any) {
    Pat p{PK::Var};
    p.var = std::move(v);
    p.sort = s;
    return mk(std::move(p));
}
inline PatPtr nil() { return mk(Pat{PK::Nil}); }
inline PatPtr id() { return mk(Pat{PK::Id}); }
inline PatPtr sym() { return mk(Pat{PK::Sym}); }
inline PatPtr gen(std::string l) {
    Pat p{PK::Gen};
    p.label = std::move(l);
    return mk(std::move(p));
}
inline PatPtr idn(NPat a) {
    Pat p{PK::IdName};
    p.a = std::move(a);
    return mk(std::move(p));
}
inline PatPtr delta(NPat a, NPat b) {
    Pat p{PK::Delta};
    p.a = std::move(a);
    p.b = std::move(b);
    return mk(std::move(p));
}
inline PatPtr inst(std::string l, std::vector<NPat> d, std::vector<NPat> c) {
    Pat p{PK::Inst};
    p.label = std::move(l);
    p.dom = std::move(d);
    p.cod = std::move(c);
    return mk(std::move(p));
}
inline PatPtr par(PatPtr l, PatPtr r) {
    Pat p{PK::Par};
    p.l = std::move(l);
    p.r = std::move(r);
    return mk(std::move(p));
}
inline PatPtr seq(PatPtr l, PatPtr r) {
    Pat p{PK::Seq};
    p.l = std::move(l);
    p.r = std::move(r);
    return mk(std::move(p));
}
inline PatPtr perm(PPat q, PatPtr body) {
    Pat p{PK::Perm};
    p.perm = std::move(q);
    p.l = std::move(body);
    return mk(std::move(p));
}
inline PatPtr idset(SetExpr s) {
    Pat p{PK::IdSet};
    p.set = std::move(s);
    return mk(std::move(p));
}
inline PatPtr idblock(ArityExpr n) {
    Pat p{PK::IdBlock};
    p.n = std::move(n);
    return mk(std::move(p));
}
inline PatPtr symblock(ArityExpr m, ArityExpr n) {
    Pat p{PK::SymBlock};
    p.m = std::move(m);
    p.n = std::move(n);
    return mk(std::move(p));
}
inline PatPtr act(PPat q, std::string v) {
    Pat p{PK::Act};
    p.perm = std::move(q);
    p.var = std::move(v);
    return mk(std::move(p));
}
inline NPat n(std::string v) { return NPat{std::move(v), {}}; }
inline NPat applied(std::string perm, std::string v) { return NPat{std::move(v), std::move(perm)}; }
inline PPat pv(std::string v) { return PPat{std::move(v), {}, {}}; }
inline PPat transp(std::string a, std::string b) { return PPat{{}, std::move(a), std::move(b)}; }
inline SetExpr dom_of(std::string v, std::vector<std::string> minus = {}) { return {false, std::move(v), std::move(minus)}; }
inline SetExpr cod_of(std::string v, std::vector<std::string> minus = {}) { return {true, std::move(v), std::move(minus)}; }
inline ArityExpr ivar(std::string v) { return {std::move(v), false, {}}; }
inline ArityExpr adom(std::string v) { return {{}, false, std::move(v)}; }
inline ArityExpr acod(std::string v) { return {{}, true, std::move(v)}; }
} // namespace pat

/// Values of pattern variables.
struct Binding {
    std::map<std::string, Term> terms;
    std::map<std::string, Name> names;
    std::map<std::string, FinPerm> perms;
    std::map<std::string, std::size_t> ints;

    bool operator==(const Binding&) const = default;
};

/// Typing context for computed patterns.
struct PatCtx {
    bool nominal = true;
    Signature sig;

    Iface iface(const Term& t) const {
        if (nominal) return nmt_typecheck(t);
        Arity a = smt_typecheck(t, sig);
        Iface i;
        for (std::size_t k = 0; k < a.dom; ++k) i.dom.insert(Name::ordinal(k));
        for (std::size_t k = 0; k < a.cod; ++k) i.cod.insert(Name::ordinal(k));
        return i;
    }
    Arity arity(const Term& t) const { return smt_typecheck(t, sig); }
};

namespace detail {
inline Term bound_term(const Binding& b, const std::string& v) {
    auto it = b.terms.find(v);
    if (it == b.terms.end()) throw NoMatch("term variable " + v + " is unbound");
    return it->second;
}
inline Name bound_name(const Binding& b, const std::string& v) {
    auto it = b.names.find(v);
    if (it == b.names.end()) throw NoMatch("name variable " + v + " is unbound");
    return it->second;
}
} // namespace detail

inline NameSet eval_set(const SetExpr& e, const Binding& b, const PatCtx& ctx) {
    Iface i = ctx.iface(detail::bound_term(b, e.of));
    NameSet s = e.cod ? i.cod : i.dom;
    for (auto& v : e.minus) s.erase(detail::bound_name(b, v));
    return s;
}

inline std::size_t eval_arity(const ArityExpr& e, const Binding& b, const PatCtx& ctx) {
    if (!e.ivar.empty()) {
        auto it = b.ints.find(e.ivar);
        if (it == b.ints.end()) throw NoMatch("int variable " + e.ivar + " is unbound");
        return it->second;
    }
    Arity a = ctx.arity(detail::bound_term(b, e.of));
    return e.cod ? a.cod : a.dom;
}

inline FinPerm eval_perm(const PPat& p, const Binding& b) {
    if (p.is_transp()) return transposition(detail::bound_name(b, p.a), detail::bound_name(b, p.b));
    auto it = b.perms.find(p.var);
    if (it == b.perms.end()) throw NoMatch("permutation variable " + p.var + " is unbound");
    return it->second;
}

inline Name eval_npat(const NPat& n, const Binding& b) {
    Name x = detail::bound_name(b, n.var);
    if (n.perm.empty()) return x;
    auto it = b.perms.find(n.perm);
    if (it == b.perms.end()) throw NoMatch("permutation variable " + n.perm + " is unbound");
    return it->second(x);
}

/// Builds the term a pattern denotes under b. Computed nodes reuse their recorded
/// subterm when `replay` is set, so the from-side of a step reproduces the matched term exactly.
inline Term instantiate(const Pat& p, const Binding& b, const PatCtx& ctx, bool replay = false) {
    auto recorded = [&]() -> std::optional<Term> {
        if (!replay) return std::nullopt;
        auto it = b.terms.find(p.var);
        if (it == b.terms.end()) return std::nullopt;
        return it->second;
    };
    switch (p.kind) {
    case PK::Var: return detail::bound_term(b, p.var);
    case PK::Nil: return nil();
    case PK::Id: return id();
    case PK::Sym: return sym();
    case PK::Gen: return gen(p.label);
    case PK::IdName: return idn(eval_npat(p.a, b));
    case PK::Delta: return delta(eval_npat(p.a, b), eval_npat(p.b, b));
    case PK::Inst: {
        NameList d, c;
        for (auto& x : p.dom) d.push_back(eval_npat(x, b));
        for (auto& x : p.cod) c.push_back(eval_npat(x, b));
        return inst(p.label, d, c);
    }
    case PK::Par: return par(instantiate(*p.l, b, ctx, replay), instantiate(*p.r, b, ctx, replay));
    case PK::Seq: return seq(instantiate(*p.l, b, ctx, replay), instantiate(*p.r, b, ctx, replay));
    case PK::Perm: return perm_app(eval_perm(p.perm, b), instantiate(*p.l, b, ctx, replay));
    case PK::IdSet:
        if (auto t = recorded()) return *t;
        return id_bundle(eval_set(p.set, b, ctx));
    case PK::IdBlock:
        if (auto t = recorded()) return *t;
        return smt_id(eval_arity(p.n, b, ctx));
    case PK::SymBlock:
        if (auto t = recorded()) return *t;
        return smt_sym(eval_arity(p.m, b, ctx), eval_arity(p.n, b, ctx));
    case PK::Act: return perm_act_term(eval_perm(p.perm, b), detail::bound_term(b, p.var));
    }
    return nil();
}

/// Variables a pattern can bind by matching (computed nodes contribute their hidden variable).
inline void pattern_vars(const Pat& p, std::set<std::string>& terms, std::set<std::string>& names,
                         std::set<std::string>& perms, std::set<std::string>& ints) {
    auto npat = [&](const NPat& n) {
        names.insert(n.var);
        if (!n.perm.empty()) perms.insert(n.perm);
    };
    auto ppat = [&](const PPat& q) {
        if (q.is_transp()) {
            names.insert(q.a);
            names.insert(q.b);
        } else {
            perms.insert(q.var);
        }
    };
    switch (p.kind) {
    case PK::Var: terms.insert(p.var); break;
    case PK::IdName: npat(p.a); break;
    case PK::Delta: npat(p.a); npat(p.b); break;
    case PK::Inst:
        for (auto& x : p.dom) npat(x);
        for (auto& x : p.cod) npat(x);
        break;
    case PK::Par:
    case PK::Seq:
        pattern_vars(*p.l, terms, names, perms, ints);
        pattern_vars(*p.r, terms, names, perms, ints);
        break;
    case PK::Perm: ppat(p.perm); pattern_vars(*p.l, terms, names, perms, ints); break;
    case PK::IdBlock:
        if (!p.n.ivar.empty()) ints.insert(p.n.ivar);
        break;
    case PK::Act: ppat(p.perm); terms.insert(p.var); break;
    default: break;
    }
}

/// False for patterns containing nodes that can only be built, not recognised.
inline bool matchable(const Pat& p) {
    switch (p.kind) {
    case PK::Act: return false;
    case PK::IdName: return p.a.perm.empty();
    case PK::Delta: return p.a.perm.empty() && p.b.perm.empty();
    case PK::Inst:
        for (auto& x : p.dom)
            if (!x.perm.empty()) return false;
        for (auto& x : p.cod)
            if (!x.perm.empty()) return false;
        return true;
    case PK::Par:
    case PK::Seq: return matchable(*p.l) && matchable(*p.r);
    case PK::Perm: return matchable(*p.l);
    default: return true;
    }
}

/// A successful match: the bindings and the arrangement of the target that the pattern covers
/// exactly. In exact mode the arrangement is the target itself.
struct Match {
    Binding b;
    Term arranged;
};

/// First-order matcher. In AC mode a Par pattern matches any split of a flattened tensor
/// (any subset when `commutative`, contiguous splits otherwise) and a Seq pattern matches
/// any split point of a flattened composite; id patterns may also match an absent (nil) side.
class Matcher {
public:
    Matcher(const PatCtx& ctx, bool ac) : ctx_(ctx), ac_(ac) {}

    std::vector<Match> run(const Pat& p, const Term& t, const Binding& b = {}) const {
        std::vector<Match> out;
        go(p, t, b, out);
        std::vector<Match> ok;
        for (auto& m : out)
            if (deferred_ok(p, m.b)) ok.push_back(std::move(m));
        return ok;
    }

private:
    const PatCtx& ctx_;
    bool ac_;

    static bool bind_name(Binding& b, const std::string& v, const Name& x) {
        auto [it, fresh] = b.names.emplace(v, x);
        return fresh || it->second == x;
    }

    static bool may_be_nil(const Pat& p) {
        return p.kind == PK::IdSet || p.kind == PK::IdBlock || p.kind == PK::Nil;
    }

    // Patterns that can only match a single non-tensor term.
    bool single(const Pat& p) const {
        switch (p.kind) {
        case PK::Var: return p.sort == Sort::Gen;
        case PK::Id:
        case PK::Sym:
        case PK::Gen:
        case PK::IdName:
        case PK::Delta:
        case PK::Inst:
        case PK::Seq:
        case PK::Perm: return true;
        default: return false;
        }
    }

    void go(const Pat& p, const Term& t, const Binding& b, std::vector<Match>& out) const {
        switch (p.kind) {
        case PK::Var: {
            if (p.sort == Sort::Gen && t->op != Op::Inst && t->op != Op::Gen) return;
            auto it = b.terms.find(p.var);
            if (it != b.terms.end()) {
                if (it->second == t) out.push_back({b, t});
                return;
            }
            Binding nb = b;
            nb.terms.emplace(p.var, t);
            out.push_back({std::move(nb), t});
            return;
        }
        case PK::Nil:
            if (t->op == Op::Nil) out.push_back({b, t});
            return;
        case PK::Id:
            if (t->op == Op::Id) out.push_back({b, t});
            return;
        case PK::Sym:
            if (t->op == Op::Sym) out.push_back({b, t});
            return;
        case PK::Gen:
            if (t->op == Op::Gen && t->label == p.label) out.push_back({b, t});
            return;
        case PK::IdName: {
            if (t->op != Op::IdName) return;
            Binding nb = b;
            if (bind_name(nb, p.a.var, t->a)) out.push_back({std::move(nb), t});
            return;
        }
        case PK::Delta: {
            if (t->op != Op::Delta) return;
            Binding nb = b;
            if (bind_name(nb, p.a.var, t->a) && bind_name(nb, p.b.var, t->b)) out.push_back({std::move(nb), t});
            return;
        }
        case PK::Inst: {
            if (t->op != Op::Inst || t->label != p.label) return;
            if (t->dom.size() != p.dom.size() || t->cod.size() != p.cod.size()) return;
            Binding nb = b;
            for (std::size_t i = 0; i < p.dom.size(); ++i)
                if (!bind_name(nb, p.dom[i].var, t->dom[i])) return;
            for (std::size_t i = 0; i < p.cod.size(); ++i)
                if (!bind_name(nb, p.cod[i].var, t->cod[i])) return;
            out.push_back({std::move(nb), t});
            return;
        }
        case PK::Perm: {
            if (t->op != Op::Perm) return;
            std::vector<Binding> starts;
            if (p.perm.is_transp()) {
                auto& mv = t->perm.moved();
                if (mv.size() != 2) return;
                Name x = mv.begin()->first, y = std::next(mv.begin())->first;
                for (auto [u, v] : {std::pair{x, y}, std::pair{y, x}}) {
                    Binding nb = b;
                    if (bind_name(nb, p.perm.a, u) && bind_name(nb, p.perm.b, v)) starts.push_back(nb);
                }
            } else {
                Binding nb = b;
                auto [it, fresh] = nb.perms.emplace(p.perm.var, t->perm);
                if (fresh || it->second == t->perm) starts.push_back(nb);
            }
            for (auto& s : starts) {
                std::vector<Match> inner;
                go(*p.l, t->l, s, inner);
                for (auto& m : inner) out.push_back({std::move(m.b), perm_app(t->perm, m.arranged)});
            }
            return;
        }
        case PK::Par: match_par(p, t, b, out); return;
        case PK::Seq: match_seq(p, t, b, out); return;
        case PK::IdSet: {
            if (!is_id_bundle(t)) return;
            Binding nb = b;
            nb.terms[p.var] = t;
            out.push_back({std::move(nb), t});
            return;
        }
        case PK::IdBlock: {
            if (!is_id_block(t)) return;
            Binding nb = b;
            if (!p.n.ivar.empty()) {
                std::size_t w = ctx_.arity(t).dom;
                auto [it, fresh] = nb.ints.emplace(p.n.ivar, w);
                if (!fresh && it->second != w) return;
            }
            nb.terms[p.var] = t;
            out.push_back({std::move(nb), t});
            return;
        }
        case PK::SymBlock: {
            if (!is_wiring(t)) return;
            Binding nb = b;
            nb.terms[p.var] = t;
            out.push_back({std::move(nb), t});
            return;
        }
        case PK::Act: return;
        }
    }

    void both(const Pat& p, Op op, const Term& lt, const Term& rt, const Binding& b, std::vector<Match>& out) const {
        std::vector<Match> ls;
        go(*p.l, lt, b, ls);
        for (auto& ml : ls) {
            std::vector<Match> rs;
            go(*p.r, rt, ml.b, rs);
            for (auto& mr : rs)
                out.push_back({std::move(mr.b), op == Op::Par ? par(ml.arranged, mr.arranged)
                                                              : seq(ml.arranged, mr.arranged)});
        }
    }

    void match_par(const Pat& p, const Term& t, const Binding& b, std::vector<Match>& out) const {
        if (!ac_) {
            if (t->op == Op::Par) both(p, Op::Par, t->l, t->r, b, out);
            return;
        }
        if (may_be_nil(*p.l)) both(p, Op::Par, nil(), t, b, out);
        if (may_be_nil(*p.r)) both(p, Op::Par, t, nil(), b, out);
        if (t->op != Op::Par) return;
        std::vector<Term> xs = flatten(t, Op::Par);
        const std::size_t n = xs.size();
        if (ctx_.nominal && n <= 16) {
            for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
                std::vector<Term> left, right;
                for (std::size_t i = 0; i < n; ++i) (mask >> i & 1 ? left : right).push_back(xs[i]);
                if (single(*p.l) && left.size() != 1) continue;
                if (single(*p.r) && right.size() != 1) continue;
                both(p, Op::Par, par_list(left), par_list(right), b, out);
            }
        } else {
            for (std::size_t k = 1; k < n; ++k) {
                if (single(*p.l) && k != 1) continue;
                if (single(*p.r) && k + 1 != n) continue;
                std::vector<Term> left(xs.begin(), xs.begin() + long(k)), right(xs.begin() + long(k), xs.end());
                both(p, Op::Par, par_list(left), par_list(right), b, out);
            }
        }
    }

    void match_seq(const Pat& p, const Term& t, const Binding& b, std::vector<Match>& out) const {
        if (t->op != Op::Seq) return;
        if (!ac_) {
            both(p, Op::Seq, t->l, t->r, b, out);
            return;
        }
        std::vector<Term> xs = flatten(t, Op::Seq);
        for (std::size_t k = 1; k < xs.size(); ++k) {
            std::vector<Term> left(xs.begin(), xs.begin() + long(k)), right(xs.begin() + long(k), xs.end());
            both(p, Op::Seq, seq_list(left), seq_list(right), b, out);
        }
    }

    // Checks of computed nodes, run once every variable is bound.
    bool deferred_ok(const Pat& p, const Binding& b) const {
        try {
            switch (p.kind) {
            case PK::Par:
            case PK::Seq: return deferred_ok(*p.l, b) && deferred_ok(*p.r, b);
            case PK::Perm: return deferred_ok(*p.l, b);
            case PK::IdSet: return id_bundle_set(b.terms.at(p.var)) == eval_set(p.set, b, ctx_);
            case PK::IdBlock: return ctx_.arity(b.terms.at(p.var)).dom == eval_arity(p.n, b, ctx_);
            case PK::SymBlock: {
                Term got = b.terms.at(p.var);
                std::size_t m = eval_arity(p.m, b, ctx_), n = eval_arity(p.n, b, ctx_);
                return sym_as_permutation(got) == sym_as_permutation(smt_sym(m, n));
            }
            default: return true;
            }
        } catch (const Error&) {
            return false;
        }
    }
};

} // namespace nomdiag
