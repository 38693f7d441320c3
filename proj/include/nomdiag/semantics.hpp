#pragma once

#include "nmt.hpp"
#include "smt.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <utility>

namespace nomdiag {

using NamePair = std::pair<Name, Name>;

namespace detail {
// Degree checks shared by the nominal and ordered maps.
template <class T>
bool kind_holds(Kind k, const std::set<T>& dom, const std::set<T>& cod, const std::set<std::pair<T, T>>& pairs) {
    std::map<T, int> out, in;
    for (auto& [x, y] : pairs) {
        if (!dom.count(x) || !cod.count(y)) return false;
        ++out[x];
        ++in[y];
    }
    auto total = [&] {
        for (auto& x : dom)
            if (out[x] != 1) return false;
        return true;
    };
    auto partial = [&] {
        for (auto& [_, c] : out)
            if (c > 1) return false;
        return true;
    };
    auto injective = [&] {
        for (auto& [_, c] : in)
            if (c > 1) return false;
        return true;
    };
    auto surjective = [&] {
        for (auto& y : cod)
            if (in[y] == 0) return false;
        return true;
    };
    switch (k) {
    case Kind::bij: return total() && injective() && surjective();
    case Kind::inj: return total() && injective();
    case Kind::surj: return total() && surjective();
    case Kind::fun: return total();
    case Kind::pfun: return partial();
    case Kind::rel: return true;
    }
    return false;
}
} // namespace detail

/// A map between finite name sets, as a set of pairs plus the class it is read in.
struct SemMap {
    NameSet dom, cod;
    Kind kind = Kind::rel;
    std::set<NamePair> pairs;

    bool operator==(const SemMap&) const = default;

    bool valid() const { return detail::kind_holds(kind, dom, cod, pairs); }

    static SemMap make(Kind k, NameSet dom, NameSet cod, std::set<NamePair> pairs) {
        SemMap s{std::move(dom), std::move(cod), k, std::move(pairs)};
        if (!s.valid())
            throw KindMismatch(std::string("pairs do not form a ") + kind_name(k) + " map");
        return s;
    }

    static SemMap identity(const NameSet& a) {
        std::set<NamePair> p;
        for (auto& x : a) p.insert({x, x});
        return SemMap{a, a, Kind::bij, p};
    }

    /// Same dom, cod and pairs; the class label is ignored.
    bool same_graph(const SemMap& o) const { return dom == o.dom && cod == o.cod && pairs == o.pairs; }

    /// The smallest class this graph belongs to.
    Kind tightest() const {
        for (Kind k : {Kind::bij, Kind::inj, Kind::surj, Kind::fun, Kind::pfun})
            if (detail::kind_holds(k, dom, cod, pairs)) return k;
        return Kind::rel;
    }
};

inline SemMap compose_sem(const SemMap& f, const SemMap& g) {
    if (f.cod != g.dom)
        throw InterfaceMismatch("cannot compose " + set_str(f.dom) + "->" + set_str(f.cod) + " with " +
                                set_str(g.dom) + "->" + set_str(g.cod));
    std::set<NamePair> out;
    for (auto& [x, y] : f.pairs) {
        auto it = g.pairs.lower_bound({y, Name{}});
        for (; it != g.pairs.end() && it->first == y; ++it) out.insert({x, it->second});
    }
    return SemMap{f.dom, g.cod, kind_join(f.kind, g.kind), std::move(out)};
}

inline SemMap tensor_sem(const SemMap& f, const SemMap& g) {
    if (!separated(f.dom, g.dom))
        throw OverlapError("tensor domains overlap: " + set_str(f.dom) + " and " + set_str(g.dom));
    if (!separated(f.cod, g.cod))
        throw OverlapError("tensor codomains overlap: " + set_str(f.cod) + " and " + set_str(g.cod));
    SemMap s{set_union(f.dom, g.dom), set_union(f.cod, g.cod), kind_join(f.kind, g.kind), f.pairs};
    s.pairs.insert(g.pairs.begin(), g.pairs.end());
    return s;
}

/// Disjointness of full supports dom ∪ cod. Not closed under composition.
inline bool separated_arrows(const SemMap& f, const SemMap& g) {
    return separated(set_union(f.dom, f.cod), set_union(g.dom, g.cod));
}

inline SemMap perm_act_sem(const FinPerm& p, const SemMap& s) {
    std::set<NamePair> q;
    for (auto& [x, y] : s.pairs) q.insert({p(x), p(y)});
    return SemMap{perm_apply_set(p, s.dom), perm_apply_set(p, s.cod), s.kind, std::move(q)};
}

/// δ_ab as a map.
inline SemMap renaming_sem(const Name& a, const Name& b) { return SemMap{{a}, {b}, Kind::bij, {{a, b}}}; }

inline SemMap generator_sem(const std::string& label, const NameList& dom, const NameList& cod) {
    SemMap s{NameSet(dom.begin(), dom.end()), NameSet(cod.begin(), cod.end()), generator_kind(label), {}};
    if (label == label::unit && dom.empty() && cod.size() == 1) return s;
    if (label == label::discard && dom.size() == 1 && cod.empty()) return s;
    if (label == label::merge && dom.size() == 2 && cod.size() == 1) {
        s.pairs = {{dom[0], cod[0]}, {dom[1], cod[0]}};
        return s;
    }
    if (label == label::copy && dom.size() == 1 && cod.size() == 2) {
        s.pairs = {{dom[0], cod[0]}, {dom[0], cod[1]}};
        return s;
    }
    throw UnsupportedGenerator("no interpretation for generator '" + label + "' at this arity");
}

namespace detail {
inline SemMap eval_nmt_raw(const Term& t, const Signature& sig) {
    switch (t->op) {
    case Op::Nil: return SemMap{{}, {}, Kind::bij, {}};
    case Op::IdName: return SemMap::identity({t->a});
    case Op::Delta: return renaming_sem(t->a, t->b);
    case Op::Inst:
        if (!sig.has(t->label))
            throw UnsupportedGenerator("generator '" + t->label + "' is not in theory " +
                                       theory_name(sig.theory));
        if (!duplicate_free(t->dom) || !duplicate_free(t->cod))
            throw DuplicateName("repeated name in generator instance " + t->label);
        return generator_sem(t->label, t->dom, t->cod);
    case Op::Par: return tensor_sem(eval_nmt_raw(t->l, sig), eval_nmt_raw(t->r, sig));
    case Op::Seq: return compose_sem(eval_nmt_raw(t->l, sig), eval_nmt_raw(t->r, sig));
    case Op::Perm: return perm_act_sem(t->perm, eval_nmt_raw(t->l, sig));
    default: throw TypeMismatch("ordered constructor in a nominal term");
    }
}
} // namespace detail

/// Homomorphic evaluation; the result is labelled with the theory's class.
inline SemMap eval_nmt(const Term& t, Theory theory) {
    Signature sig = nmt_theory_signature(theory);
    SemMap s = detail::eval_nmt_raw(t, sig);
    Kind k = kind_of(theory);
    if (!kind_leq(s.kind, k) || !detail::kind_holds(k, s.dom, s.cod, s.pairs))
        throw KindMismatch(std::string("value is not a ") + kind_name(k) + " map");
    s.kind = k;
    return s;
}

/// Map between ordinals 1..m and 1..n; positions are stored 0-based.
struct OrdSem {
    std::size_t m = 0, n = 0;
    Kind kind = Kind::rel;
    std::set<std::pair<std::size_t, std::size_t>> pairs;

    bool operator==(const OrdSem&) const = default;

    std::set<std::size_t> left() const {
        std::set<std::size_t> s;
        for (std::size_t i = 0; i < m; ++i) s.insert(i);
        return s;
    }
    std::set<std::size_t> right() const {
        std::set<std::size_t> s;
        for (std::size_t i = 0; i < n; ++i) s.insert(i);
        return s;
    }
    bool valid() const { return detail::kind_holds(kind, left(), right(), pairs); }
};

inline OrdSem compose_ord(const OrdSem& f, const OrdSem& g) {
    if (f.n != g.m) throw InterfaceMismatch("ordinal composite with differing middle arity");
    OrdSem s{f.m, g.n, kind_join(f.kind, g.kind), {}};
    for (auto& [x, y] : f.pairs)
        for (auto& [y2, z] : g.pairs)
            if (y == y2) s.pairs.insert({x, z});
    return s;
}

inline OrdSem tensor_ord(const OrdSem& f, const OrdSem& g) {
    OrdSem s{f.m + g.m, f.n + g.n, kind_join(f.kind, g.kind), f.pairs};
    for (auto& [x, y] : g.pairs) s.pairs.insert({x + f.m, y + f.n});
    return s;
}

namespace detail {
inline OrdSem eval_smt_raw(const Term& t, const Signature& sig) {
    switch (t->op) {
    case Op::Nil: return OrdSem{0, 0, Kind::bij, {}};
    case Op::Id: return OrdSem{1, 1, Kind::bij, {{0, 0}}};
    case Op::Sym: return OrdSem{2, 2, Kind::bij, {{0, 1}, {1, 0}}};
    case Op::Gen: {
        if (!sig.has(t->label))
            throw UnsupportedGenerator("generator '" + t->label + "' is not in theory " +
                                       theory_name(sig.theory));
        const Arity& a = sig.arity(t->label);
        NameList d, c;
        for (std::size_t i = 0; i < a.dom; ++i) d.push_back(Name::ordinal(i));
        for (std::size_t i = 0; i < a.cod; ++i) c.push_back(Name::ordinal(100 + i));
        SemMap s = generator_sem(t->label, d, c);
        OrdSem o{a.dom, a.cod, s.kind, {}};
        for (auto& [x, y] : s.pairs) o.pairs.insert({*x.index, *y.index - 100});
        return o;
    }
    case Op::Par: return tensor_ord(eval_smt_raw(t->l, sig), eval_smt_raw(t->r, sig));
    case Op::Seq: return compose_ord(eval_smt_raw(t->l, sig), eval_smt_raw(t->r, sig));
    default: throw TypeMismatch("nominal constructor in an ordered term");
    }
}
} // namespace detail

inline OrdSem eval_smt(const Term& t, Theory theory) {
    Signature sig = smt_theory_signature(theory);
    smt_typecheck(t, sig);
    OrdSem s = detail::eval_smt_raw(t, sig);
    Kind k = kind_of(theory);
    if (!kind_leq(s.kind, k)) throw KindMismatch(std::string("value is not a ") + kind_name(k) + " map");
    s.kind = k;
    return s;
}

/// Reads a nominal map positionally along the lists a (domain) and b (codomain).
inline OrdSem position_image(const SemMap& s, const NameList& a, const NameList& b) {
    auto pos = [](const NameList& l, const Name& x) {
        return static_cast<std::size_t>(std::find(l.begin(), l.end(), x) - l.begin());
    };
    OrdSem o{a.size(), b.size(), s.kind, {}};
    for (auto& [x, y] : s.pairs) o.pairs.insert({pos(a, x), pos(b, y)});
    return o;
}

namespace detail {
// Wire bookkeeping for readback; see readback_nmt.
struct Edge {
    Name src, dst;
    Name m1, m2; // names before and after the renaming layer
};

inline Term layer(std::vector<Term> parts) {
    std::vector<Term> keep;
    for (auto& p : parts)
        if (p->op != Op::Nil) keep.push_back(p);
    return par_list(keep);
}

// Left-nested merge of `ins` into `out`: ((i1·i2)·i3)... ; intermediates drawn from `fresh`.
inline Term merge_tree(const NameList& ins, const Name& out, const std::function<Name()>& fresh) {
    std::vector<Term> stages;
    Name acc = ins[0];
    for (std::size_t k = 1; k < ins.size(); ++k) {
        Name next = k + 1 == ins.size() ? out : fresh();
        std::vector<Term> parts{inst(label::merge, {acc, ins[k]}, {next})};
        for (std::size_t j = k + 1; j < ins.size(); ++j) parts.push_back(idn(ins[j]));
        stages.push_back(par_list(parts));
        acc = next;
    }
    return seq_list(stages);
}

// Mirror image of merge_tree: a -> ((o1,o2),o3)...
inline Term copy_tree(const Name& in, const NameList& outs, const std::function<Name()>& fresh) {
    const std::size_t k = outs.size();
    NameList inner(k - 1);
    for (std::size_t j = k - 1; j-- > 1;) inner[j] = fresh();
    inner[0] = outs[0];
    // inner[j] carries outputs o0..oj; stage j splits inner[j] into inner[j-1] and o_j.
    std::vector<Term> stages;
    Name cur = in;
    for (std::size_t j = k - 1; j >= 1; --j) {
        Name left = j == 1 ? outs[0] : inner[j - 1];
        std::vector<Term> parts{inst(label::copy, {cur}, {left, outs[j]})};
        for (std::size_t q = j + 1; q < k; ++q) parts.push_back(idn(outs[q]));
        stages.push_back(par_list(parts));
        cur = left;
    }
    return seq_list(stages);
}
} // namespace detail

/// Canonical term denoting `s`: copy layer ; renaming layer ; merge layer, trivial layers dropped.
/// Edges are visited codomain-major in name order; fresh intermediates are numbered in that order.
inline Term readback_nmt(const SemMap& s, Theory theory) {
    Kind k = kind_of(theory);
    if (!detail::kind_holds(k, s.dom, s.cod, s.pairs))
        throw KindMismatch(std::string("map is not a ") + kind_name(k) + " map");

    std::map<Name, int> out, in;
    for (auto& [x, y] : s.pairs) {
        ++out[x];
        ++in[y];
    }
    std::vector<detail::Edge> edges;
    for (auto& y : s.cod)
        for (auto& x : s.dom)
            if (s.pairs.count({x, y})) edges.push_back({x, y, {}, {}});

    NameSet pass_through; // domain names with exactly one edge keep their name into the middle
    for (auto& x : s.dom)
        if (out[x] == 1) pass_through.insert(x);
    NameSet single_in;
    for (auto& y : s.cod)
        if (in[y] == 1) single_in.insert(y);

    NameSet avoid = set_union(s.dom, s.cod);
    std::uint64_t counter = 0;
    auto fresh = [&]() {
        for (;; ++counter) {
            Name n = Name::machine(counter);
            if (!avoid.count(n)) {
                ++counter;
                return n;
            }
        }
    };

    for (auto& e : edges) {
        const bool fan_out = out[e.src] >= 2, fan_in = in[e.dst] >= 2;
        if (!fan_out && !fan_in) {
            e.m1 = e.src;
            e.m2 = e.dst;
        } else if (fan_out && fan_in) {
            e.m1 = e.m2 = fresh();
        } else if (fan_out) {
            e.m2 = e.dst;
            e.m1 = pass_through.count(e.dst) ? fresh() : e.dst;
        } else {
            e.m1 = e.src;
            e.m2 = single_in.count(e.src) ? fresh() : e.src;
        }
    }

    // copy layer, by domain name
    std::vector<Term> copy_parts;
    for (auto& x : s.dom) {
        if (out[x] == 0) {
            copy_parts.push_back(inst(label::discard, {x}, {}));
        } else if (out[x] == 1) {
            copy_parts.push_back(idn(x));
        } else {
            NameList outs;
            for (auto& e : edges)
                if (e.src == x) outs.push_back(e.m1);
            copy_parts.push_back(detail::copy_tree(x, outs, fresh));
        }
    }

    // renaming layer, by middle name
    std::map<Name, Term> ren;
    bool renames = false;
    for (auto& e : edges) {
        if (e.m1 == e.m2) ren.emplace(e.m1, idn(e.m1));
        else {
            ren.emplace(e.m1, delta(e.m1, e.m2));
            renames = true;
        }
    }
    std::vector<Term> ren_parts;
    for (auto& [_, t] : ren) ren_parts.push_back(t);

    // merge layer, by codomain name
    std::vector<Term> merge_parts;
    bool merges = false;
    for (auto& y : s.cod) {
        if (in[y] == 0) {
            merge_parts.push_back(inst(label::unit, {}, {y}));
            merges = true;
        } else if (in[y] == 1) {
            merge_parts.push_back(idn(y));
        } else {
            NameList ins;
            for (auto& e : edges)
                if (e.dst == y) ins.push_back(e.m2);
            merge_parts.push_back(detail::merge_tree(ins, y, fresh));
            merges = true;
        }
    }

    bool copies = false;
    for (auto& x : s.dom)
        if (out[x] != 1) copies = true;

    std::vector<Term> layers;
    if (copies) layers.push_back(par_list(copy_parts));
    if (renames || (!copies && !merges)) layers.push_back(par_list(ren_parts));
    if (merges) layers.push_back(par_list(merge_parts));
    return seq_list(layers);
}

inline bool nmt_eq(const Term& t, const Term& u, Theory theory) {
    if (!(nmt_typecheck(t) == nmt_typecheck(u))) return false;
    return eval_nmt(t, theory) == eval_nmt(u, theory);
}

inline NameList apply_subst(const SemMap& s, const NameList& targets) {
    if (!detail::kind_holds(Kind::fun, s.dom, s.cod, s.pairs))
        throw KindMismatch("substitution is not a function");
    NameList out;
    for (auto& x : targets) {
        if (!s.dom.count(x)) throw NameNotInDomain("'" + x.str() + "' is not in " + set_str(s.dom));
        auto it = s.pairs.lower_bound({x, Name{}});
        out.push_back(it->second);
    }
    return out;
}

inline std::string sem_to_json(const SemMap& s) {
    nlohmann::ordered_json j;
    j["kind"] = kind_name(s.kind);
    j["dom"] = nlohmann::json::array();
    for (auto& x : s.dom) j["dom"].push_back(x.str());
    j["cod"] = nlohmann::json::array();
    for (auto& x : s.cod) j["cod"].push_back(x.str());
    j["pairs"] = nlohmann::json::array();
    for (auto& [x, y] : s.pairs) j["pairs"].push_back({x.str(), y.str()});
    return j.dump();
}

inline SemMap sem_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(e.what());
    }
    SemMap s;
    s.kind = parse_kind(j.at("kind").get<std::string>());
    for (auto& x : j.at("dom")) s.dom.insert(Name::parse(x.get<std::string>(), true));
    for (auto& x : j.at("cod")) s.cod.insert(Name::parse(x.get<std::string>(), true));
    for (auto& p : j.at("pairs"))
        s.pairs.insert({Name::parse(p.at(0).get<std::string>(), true), Name::parse(p.at(1).get<std::string>(), true)});
    if (!s.valid()) throw KindMismatch("pairs do not match the declared kind");
    return s;
}

} // namespace nomdiag
