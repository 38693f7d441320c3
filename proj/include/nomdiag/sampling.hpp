#pragma once

#include "semantics.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>

namespace nomdiag {

/// Seeded source for property tests and the soundness checker. `below` uses plain modulo
/// so the streams are the same on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : g_(seed) {}

    std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(g_() % n); }
    bool chance(unsigned num, unsigned den) { return below(den) < num; }

    template <class T>
    const T& pick(const std::vector<T>& xs) { return xs[below(xs.size())]; }

    template <class T>
    void shuffle(std::vector<T>& xs) {
        for (std::size_t i = xs.size(); i > 1; --i) std::swap(xs[i - 1], xs[below(i)]);
    }

private:
    std::mt19937_64 g_;
};

inline NameList default_universe(std::size_t n = 6) {
    NameList u;
    for (std::size_t i = 0; i < n; ++i) u.push_back(Name{std::string(1, char('a' + i)), std::nullopt});
    return u;
}

inline NameSet random_subset(Rng& rng, const NameList& universe, std::size_t max_size) {
    NameList xs = universe;
    rng.shuffle(xs);
    std::size_t k = rng.below(std::min(max_size, xs.size()) + 1);
    return NameSet(xs.begin(), xs.begin() + long(k));
}

/// Product of one to three random transpositions of universe names (possibly the identity).
inline FinPerm random_perm(Rng& rng, const NameList& universe) {
    FinPerm p;
    std::size_t k = 1 + rng.below(3);
    for (std::size_t i = 0; i < k; ++i) p = perm_compose(transposition(rng.pick(universe), rng.pick(universe)), p);
    return p;
}

/// Random map of kind `k` from `dom` to `cod`, or nullopt if none exists with these sizes.
inline std::optional<SemMap> random_semmap_between(Rng& rng, Kind k, const NameSet& dom, const NameSet& cod) {
    NameList d(dom.begin(), dom.end()), c(cod.begin(), cod.end());
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::set<NamePair> pairs;
        if (k == Kind::rel) {
            for (auto& x : d)
                for (auto& y : c)
                    if (rng.chance(1, 3)) pairs.insert({x, y});
        } else if (k == Kind::bij || k == Kind::inj) {
            if (c.size() < d.size() || (k == Kind::bij && c.size() != d.size())) return std::nullopt;
            NameList img = c;
            rng.shuffle(img);
            for (std::size_t i = 0; i < d.size(); ++i) pairs.insert({d[i], img[i]});
        } else {
            if (c.empty() && !d.empty() && k != Kind::pfun) return std::nullopt;
            if (k == Kind::surj && c.size() > d.size()) return std::nullopt;
            for (auto& x : d) {
                if (k == Kind::pfun && (c.empty() || rng.chance(1, 4))) continue;
                pairs.insert({x, rng.pick(c)});
            }
            if (k == Kind::surj) {
                // cover the codomain first, then fill arbitrarily
                NameList src = d;
                rng.shuffle(src);
                pairs.clear();
                for (std::size_t i = 0; i < src.size(); ++i)
                    pairs.insert({src[i], i < c.size() ? c[i] : rng.pick(c)});
            }
        }
        if (detail::kind_holds(k, dom, cod, pairs)) return SemMap{dom, cod, k, pairs};
    }
    return std::nullopt;
}

/// Random map of kind `k` between random subsets of the universe.
inline SemMap random_semmap(Rng& rng, Kind k, const NameList& universe, std::size_t max_size = 3) {
    for (;;) {
        NameSet a = random_subset(rng, universe, max_size), b = random_subset(rng, universe, max_size);
        if (auto s = random_semmap_between(rng, k, a, b)) return *s;
    }
}

struct SampleOptions {
    NameList universe = default_universe(8);
    std::size_t max_layers = 3;
    std::size_t max_width = 4;
    unsigned perm_percent = 15; // chance of wrapping a piece as π(π⁻¹·piece)
};

namespace detail {
// One tensor layer over `cur`; returns the layer and its output names.
inline std::optional<std::pair<Term, NameList>> nmt_layer(Rng& rng, const Signature& sig, const NameList& cur,
                                                          const SampleOptions& o) {
    std::vector<std::pair<std::string, Arity>> gens(sig.gens.begin(), sig.gens.end());
    NameList todo = cur;
    rng.shuffle(todo);
    NameSet used;
    NameList outs;
    std::vector<Term> pieces;
    auto fresh_out = [&]() -> std::optional<Name> {
        NameList free;
        for (auto& x : o.universe)
            if (!used.count(x)) free.push_back(x);
        if (free.empty()) return std::nullopt;
        Name x = rng.pick(free);
        used.insert(x);
        outs.push_back(x);
        return x;
    };
    std::size_t i = 0;
    while (i < todo.size() || (!gens.empty() && rng.chance(1, 6) && outs.size() < o.max_width)) {
        Term piece;
        bool done = false;
        if (!gens.empty() && rng.chance(2, 5)) {
            auto& [label, ar] = rng.pick(gens);
            if (ar.dom <= todo.size() - i) {
                NameList d(todo.begin() + long(i), todo.begin() + long(i + ar.dom)), c;
                for (std::size_t j = 0; j < ar.cod; ++j) {
                    auto x = fresh_out();
                    if (!x) return std::nullopt;
                    c.push_back(*x);
                }
                i += ar.dom;
                piece = nomdiag::inst(label, d, c);
                done = true;
            }
        }
        if (!done) {
            if (i >= todo.size()) continue;
            const Name a = todo[i++];
            if (!used.count(a) && rng.chance(1, 2)) {
                used.insert(a);
                outs.push_back(a);
                piece = nomdiag::idn(a);
            } else {
                auto b = fresh_out();
                if (!b) return std::nullopt;
                piece = nomdiag::delta(a, *b);
            }
        }
        if (rng.chance(o.perm_percent, 100)) {
            FinPerm p = random_perm(rng, o.universe);
            piece = perm_app(p, perm_act_term(perm_inverse(p), piece));
        }
        pieces.push_back(piece);
    }
    if (outs.size() > o.max_width) return std::nullopt;
    rng.shuffle(pieces);
    return std::make_pair(par_list(pieces), outs);
}
} // namespace detail

/// Random well-typed nominal term with domain `dom`, `1..max_layers` layers, over the
/// signature's generators. Layers mix identities, renamings, generator instances and
/// conjugated permutation actions.
inline Term random_nmt_from(Rng& rng, const Signature& sig, const NameSet& dom, const SampleOptions& o = {}) {
    for (;;) {
        NameList cur(dom.begin(), dom.end());
        std::vector<Term> layers;
        std::size_t n = 1 + rng.below(o.max_layers);
        bool ok = true;
        for (std::size_t k = 0; k < n && ok; ++k) {
            auto l = detail::nmt_layer(rng, sig, cur, o);
            if (!l) {
                ok = false;
                break;
            }
            layers.push_back(l->first);
            cur = l->second;
        }
        if (ok) return seq_list(layers);
    }
}

inline Term random_nmt_term(Rng& rng, const Signature& sig, const SampleOptions& o = {}) {
    NameSet dom = random_subset(rng, o.universe, o.max_width);
    if (dom.empty() && sig.gens.empty()) dom = random_subset(rng, o.universe, o.max_width); // nil is dull
    return random_nmt_from(rng, sig, dom, o);
}

/// Random term A -> B: a layered term whose output count is |B|, then a renaming onto B.
inline std::optional<Term> random_nmt_between(Rng& rng, const Signature& sig, const NameSet& dom, const NameSet& cod,
                                              const SampleOptions& o = {}, int tries = 200) {
    for (int t = 0; t < tries; ++t) {
        Term body = random_nmt_from(rng, sig, dom, o);
        Iface i = nmt_typecheck(body);
        if (i.cod.size() != cod.size()) continue;
        if (i.cod == cod && rng.chance(1, 2)) return body;
        NameList from(i.cod.begin(), i.cod.end()), to(cod.begin(), cod.end());
        rng.shuffle(to);
        std::vector<Term> ren;
        for (std::size_t k = 0; k < from.size(); ++k)
            ren.push_back(from[k] == to[k] ? idn(from[k]) : delta(from[k], to[k]));
        return seq(body, par_list(ren));
    }
    return std::nullopt;
}

namespace detail {
inline std::optional<std::pair<Term, std::size_t>> smt_layer(Rng& rng, const Signature& sig, std::size_t width,
                                                             const SampleOptions& o) {
    std::vector<std::pair<std::string, Arity>> gens(sig.gens.begin(), sig.gens.end());
    std::vector<Term> pieces;
    std::size_t i = 0, out = 0;
    while (i < width || (!gens.empty() && rng.chance(1, 6) && out < o.max_width)) {
        if (!gens.empty() && rng.chance(2, 5)) {
            auto& [label, ar] = rng.pick(gens);
            if (ar.dom <= width - i) {
                pieces.push_back(nomdiag::gen(label));
                i += ar.dom;
                out += ar.cod;
                continue;
            }
        }
        if (i >= width) continue;
        if (width - i >= 2 && rng.chance(1, 3)) {
            pieces.push_back(nomdiag::sym());
            i += 2;
            out += 2;
        } else {
            pieces.push_back(nomdiag::id());
            ++i;
            ++out;
        }
    }
    if (out > o.max_width) return std::nullopt;
    return std::make_pair(par_list(pieces), out);
}
} // namespace detail

/// Random well-typed ordered term of arity `m`.
inline Term random_smt_from(Rng& rng, const Signature& sig, std::size_t m, const SampleOptions& o = {}) {
    for (;;) {
        std::size_t w = m;
        std::vector<Term> layers;
        std::size_t n = 1 + rng.below(o.max_layers);
        bool ok = true;
        for (std::size_t k = 0; k < n && ok; ++k) {
            auto l = detail::smt_layer(rng, sig, w, o);
            if (!l) {
                ok = false;
                break;
            }
            layers.push_back(l->first);
            w = l->second;
        }
        if (ok) return seq_list(layers);
    }
}

inline Term random_smt_term(Rng& rng, const Signature& sig, const SampleOptions& o = {}) {
    return random_smt_from(rng, sig, rng.below(o.max_width + 1), o);
}

inline std::optional<Term> random_smt_between(Rng& rng, const Signature& sig, std::size_t m, std::size_t n,
                                              const SampleOptions& o = {}, int tries = 200) {
    for (int t = 0; t < tries; ++t) {
        Term body = random_smt_from(rng, sig, m, o);
        if (smt_typecheck(body, sig).cod == n) return body;
    }
    return std::nullopt;
}

} // namespace nomdiag
