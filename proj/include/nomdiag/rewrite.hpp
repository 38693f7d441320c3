#pragma once

#include "rules.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <sstream>
#include <unordered_map>

namespace nomdiag {

struct Step {
    std::string rule;
    Path path;
    Dir dir = Dir::LR;
    Binding b;
};

inline Step reversed(const Step& s) { return Step{s.rule, s.path, flip(s.dir), s.b}; }

struct Derivation {
    Term start, end;
    std::vector<Step> steps;

    /// Steps that are not associativity, commutativity or unit bookkeeping.
    std::size_t rule_steps(const RuleSet& rs) const {
        std::size_t n = 0;
        for (auto& s : steps)
            if (!rs.get(s.rule).structural) ++n;
        return n;
    }

    std::string text() const {
        std::string s;
        for (std::size_t i = 0; i < steps.size(); ++i)
            s += "step " + std::to_string(i + 1) + ": " + steps[i].rule + " at " + path_str(steps[i].path) + " " +
                 dir_str(steps[i].dir) + "\n";
        return s;
    }
};

/// Whole-term typing used after every rewrite.
inline bool well_typed_in(const Term& t, const RuleSet& rs) {
    if (rs.ctx.nominal) return nmt_type_of(t, rs.ctx.sig.gens.empty() ? nullptr : &rs.ctx.sig).has_value();
    return smt_type_of(t, rs.ctx.sig).has_value();
}

inline bool same_type(const Term& a, const Term& b, const PatCtx& ctx) {
    if (ctx.nominal) {
        auto x = nmt_type_of(a), y = nmt_type_of(b);
        return x && y && *x == *y;
    }
    auto x = smt_type_of(a, ctx.sig), y = smt_type_of(b, ctx.sig);
    return x && y && *x == *y;
}

// ---------------------------------------------------------------------------
// canonical forms

namespace detail {
inline Term marked(TermNode n, std::uint8_t mark) {
    n.canon_mark = mark;
    return make(std::move(n));
}

inline Term marked_list(const std::vector<Term>& xs, Op op, std::uint8_t mark) {
    if (xs.empty()) return nomdiag::nil();
    Term acc = xs.back();
    for (std::size_t i = xs.size() - 1; i-- > 0;) {
        TermNode n{op};
        n.size = 1 + xs[i]->size + acc->size;
        n.deltas = xs[i]->deltas + acc->deltas;
        n.l = xs[i];
        n.r = acc;
        acc = marked(std::move(n), mark);
    }
    return acc;
}
} // namespace detail

/// Flattened, right-nested composites and tensors; tensor units removed; d(a>a) read as id(a);
/// nominal tensors sorted structurally (the ordered tensor is not commutative).
inline Term canon(const Term& t, bool nominal) {
    const std::uint8_t mark = nominal ? 2 : 1;
    if (t->canon_mark & mark) return t;
    switch (t->op) {
    case Op::Delta: return t->a == t->b ? idn(t->a) : t;
    case Op::Perm: {
        TermNode n{Op::Perm};
        n.perm = t->perm;
        n.l = canon(t->l, nominal);
        n.size = 1 + n.l->size;
        n.deltas = n.l->deltas;
        return detail::marked(std::move(n), mark);
    }
    case Op::Seq: {
        std::vector<Term> xs;
        for (auto& x : flatten(t, Op::Seq)) flatten(canon(x, nominal), Op::Seq, xs);
        return detail::marked_list(xs, Op::Seq, mark);
    }
    case Op::Par: {
        std::vector<Term> xs;
        for (auto& x : flatten(t, Op::Par)) {
            Term c = canon(x, nominal);
            if (c->op == Op::Nil) continue;
            flatten(c, Op::Par, xs);
        }
        if (nominal)
            std::stable_sort(xs.begin(), xs.end(),
                             [](const Term& p, const Term& q) { return term_compare(p, q) < 0; });
        return detail::marked_list(xs, Op::Par, mark);
    }
    default: return t;
    }
}

inline std::string canon_key(const Term& t, bool nominal) { return key(canon(t, nominal)); }

namespace detail {
// Rewrites a term into canon() form by explicit structural steps.
class Tracer {
public:
    Tracer(bool nominal, std::vector<Step>& out) : nominal_(nominal), out_(out) {}

    Term run(const Term& t, Path& p) {
        switch (t->op) {
        case Op::Perm: {
            p.push_back(0);
            Term body = run(t->l, p);
            p.pop_back();
            return perm_app(t->perm, body);
        }
        case Op::Seq: {
            p.push_back(0);
            Term l = run(t->l, p);
            p.back() = 1;
            Term r = run(t->r, p);
            p.pop_back();
            return seq_join(l, r, p);
        }
        case Op::Par: {
            p.push_back(0);
            Term l = run(t->l, p);
            p.back() = 1;
            Term r = run(t->r, p);
            p.pop_back();
            return par_join(l, r, p);
        }
        case Op::Delta:
            if (t->a != t->b) return t;
            {
                Step s{"delta-refl", p, Dir::LR, {}};
                s.b.names.emplace("X", t->a);
                out_.push_back(std::move(s));
            }
            return idn(t->a);
        default: return t;
        }
    }

private:
    bool nominal_;
    std::vector<Step>& out_;

    void emit(const char* rule, const Path& p, Dir d, std::initializer_list<std::pair<const char*, Term>> ts) {
        Step s{rule, p, d, {}};
        for (auto& [k, v] : ts) s.b.terms.emplace(k, v);
        out_.push_back(std::move(s));
    }

    // term at p is Seq(l, r) with both canonical
    Term seq_join(const Term& l, const Term& r, Path& p) {
        if (l->op != Op::Seq) return seq(l, r);
        emit("seq-assoc", p, Dir::LR, {{"T", l->l}, {"S", l->r}, {"R", r}});
        p.push_back(1);
        Term inner = seq_join(l->r, r, p);
        p.pop_back();
        return seq(l->l, inner);
    }

    // term at p is Par(l, r) with both canonical
    Term par_join(const Term& l, const Term& r, Path& p) {
        if (l->op == Op::Nil) {
            emit("par-unit-left", p, Dir::LR, {{"T", r}});
            return r;
        }
        if (r->op == Op::Nil) {
            emit("par-unit-right", p, Dir::LR, {{"T", l}});
            return l;
        }
        if (l->op == Op::Par) {
            emit("par-assoc", p, Dir::LR, {{"T", l->l}, {"S", l->r}, {"R", r}});
            p.push_back(1);
            Term inner = par_join(l->r, r, p);
            p.pop_back();
            return nominal_ ? insert(l->l, inner, p) : par(l->l, inner);
        }
        return nominal_ ? insert(l, r, p) : par(l, r);
    }

    // term at p is Par(a, s), s sorted; moves a to its place
    Term insert(const Term& a, const Term& s, Path& p) {
        if (s->op != Op::Par) {
            if (term_compare(a, s) <= 0) return par(a, s);
            emit("par-comm", p, Dir::LR, {{"T", a}, {"S", s}});
            return par(s, a);
        }
        const Term& e = s->l;
        const Term& rest = s->r;
        if (term_compare(a, e) <= 0) return par(a, s);
        emit("par-assoc", p, Dir::RL, {{"T", a}, {"S", e}, {"R", rest}});
        p.push_back(0);
        emit("par-comm", p, Dir::LR, {{"T", a}, {"S", e}});
        p.pop_back();
        emit("par-assoc", p, Dir::LR, {{"T", e}, {"S", a}, {"R", rest}});
        p.push_back(1);
        Term inner = insert(a, rest, p);
        p.pop_back();
        return par(e, inner);
    }
};
} // namespace detail

/// Explicit structural steps taking t to canon(t).
inline std::vector<Step> canon_trace(const Term& t, bool nominal, Term* result = nullptr) {
    std::vector<Step> steps;
    detail::Tracer tr(nominal, steps);
    Path p;
    Term c = tr.run(t, p);
    if (result) *result = c;
    return steps;
}

// ---------------------------------------------------------------------------
// single steps

namespace detail {
// Completes b with fresh names for the to-side's unbound name variables.
inline void bind_fresh(const Pat& to, Binding& b, const Term& whole) {
    std::set<std::string> tt, tn, tp, ti;
    pattern_vars(to, tt, tn, tp, ti);
    std::vector<std::string> missing;
    for (auto& v : tn)
        if (!b.names.count(v)) missing.push_back(v);
    if (missing.empty()) return;
    NameSet avoid = all_names(whole);
    for (auto& [_, x] : b.names) avoid.insert(x);
    NameList fresh = fresh_names(avoid, missing.size());
    for (std::size_t i = 0; i < missing.size(); ++i) b.names.emplace(missing[i], fresh[i]);
}

inline std::size_t count_nil(const Term& t) {
    if (t->op == Op::Nil) return 1;
    if (t->op == Op::Perm) return count_nil(t->l);
    return is_binary(t) ? count_nil(t->l) + count_nil(t->r) : 0;
}

// The replacement for a match, or nullopt if conditions or typing fail locally, or if
// the rewritten whole (of size `whole_size` before) must exceed `size_cap` after canon.
inline std::optional<Term> replacement(const Rule& r, Dir d, const Term& matched, Binding& b, const Term& whole,
                                       const PatCtx& ctx, std::size_t size_cap = 0) {
    if (!conds_hold(r, b, ctx)) return std::nullopt;
    bind_fresh(r.to(d), b, whole);
    Term to;
    try {
        to = instantiate(r.to(d), b, ctx, true);
    } catch (const Error&) {
        return std::nullopt;
    }
    // canon only shrinks a term by dropping nil tensor units (two nodes each)
    if (size_cap && whole->size - matched->size + to->size > size_cap + 2 * count_nil(to)) return std::nullopt;
    if (!same_type(matched, to, ctx)) return std::nullopt;
    return to;
}
} // namespace detail

/// Syntactic match of the rule's from-side at pos (side conditions included).
inline std::optional<Binding> match_at(const Term& t, const Path& pos, const Rule& r, Dir d, const RuleSet& rs) {
    if (!r.usable(d)) return std::nullopt;
    const Term* sub = subterm_ptr(t, pos);
    if (!sub) return std::nullopt;
    Matcher m(rs.ctx, false);
    for (auto& mt : m.run(r.from(d), *sub))
        if (conds_hold(r, mt.b, rs.ctx)) return mt.b;
    return std::nullopt;
}

inline Term apply_step(const Term& t, const Step& s, const RuleSet& rs) {
    const Rule& r = rs.get(s.rule);
    const Term* sub = subterm_ptr(t, s.path);
    if (!sub) throw NoMatch("position " + path_str(s.path) + " does not exist");
    Term from;
    try {
        from = instantiate(r.from(s.dir), s.b, rs.ctx, true);
    } catch (const Error& e) {
        throw NoMatch(std::string("step ") + s.rule + ": " + e.what());
    }
    if (!(from == *sub)) throw NoMatch("step " + s.rule + " does not match at " + path_str(s.path));
    Term to = instantiate(r.to(s.dir), s.b, rs.ctx, true);
    Term out = replace_at(t, s.path, to);
    if (!well_typed_in(out, rs)) throw IllTypedResult("rewriting with " + s.rule + " breaks typing in context");
    return out;
}

/// One positioned rewrite. Throws NoMatch or IllTypedResult.
inline Term rewrite_step(const Term& t, const Rule& r, const Path& pos, Dir d, const RuleSet& rs,
                         Step* record = nullptr) {
    auto b = match_at(t, pos, r, d, rs);
    if (!b) throw NoMatch("rule " + r.name + " " + dir_str(d) + " does not match at " + path_str(pos));
    const Term sub = subterm(t, pos);
    detail::bind_fresh(r.to(d), *b, t);
    Term to = instantiate(r.to(d), *b, rs.ctx, true);
    if (!same_type(sub, to, rs.ctx))
        throw IllTypedResult("rule " + r.name + " changes the interface at " + path_str(pos));
    Term out = replace_at(t, pos, to);
    if (!well_typed_in(out, rs)) throw IllTypedResult("rule " + r.name + " breaks typing in context");
    if (record) *record = Step{r.name, pos, d, *b};
    return out;
}

inline Term replay(const Derivation& d, const RuleSet& rs) {
    Term cur = d.start;
    for (auto& s : d.steps) cur = apply_step(cur, s, rs);
    return cur;
}

inline bool replays(const Derivation& d, const RuleSet& rs) {
    try {
        return replay(d, rs) == d.end;
    } catch (const Error&) {
        return false;
    }
}

// ---------------------------------------------------------------------------
// successors of canonical terms

/// One rewrite out of a canonical term: `arranged` is an AC-variant of it on which
/// `step` applies literally; the steps in `then` (act-* pushes, or the striped step after a
/// renaming) give `result`.
struct Successor {
    Term arranged, result, canonical;
    std::string key;
    Step step;
    std::vector<Step> then;
};

namespace detail {
inline bool has_perm(const Term& t) {
    if (t->op == Op::Perm) return true;
    return is_binary(t) && (has_perm(t->l) || has_perm(t->r));
}

// Deepest Perm node under p, left first.
inline bool deepest_perm(const Term& t, Path& p) {
    if (is_binary(t)) {
        for (std::uint8_t side : {0, 1}) {
            p.push_back(side);
            if (deepest_perm(side ? t->r : t->l, p)) return true;
            p.pop_back();
        }
        return false;
    }
    if (t->op != Op::Perm) return false;
    p.push_back(0);
    if (deepest_perm(t->l, p)) return true;
    p.pop_back();
    return true;
}

inline const char* act_rule(Op body) {
    switch (body) {
    case Op::Nil: return "act-nil";
    case Op::IdName: return "act-id";
    case Op::Delta: return "act-delta";
    case Op::Inst: return "act-gen";
    case Op::Par: return "act-par";
    case Op::Seq: return "act-seq";
    default: return nullptr;
    }
}

// Pushes the Perm nodes below `at` to the leaves by explicit act-* steps. A rule that leaves a
// permutation behind (the striped schemas) is followed by these steps at once: no rule can run
// backwards into a Perm node from a Perm-free term, so a search that kept such nodes would only
// meet them from one side.
inline std::optional<Term> push_acts(Term t, const Path& at, const RuleSet& rs, std::vector<Step>& out) {
    for (;;) {
        const Term* sub = subterm_ptr(t, at);
        if (!sub || !has_perm(*sub)) return t;
        Path p = at;
        deepest_perm(*sub, p);
        const char* name = act_rule(subterm(t, p)->l->op);
        if (!name || !rs.has(name)) return std::nullopt;
        Step st;
        try {
            t = rewrite_step(t, rs.get(name), p, Dir::LR, rs, &st);
        } catch (const Error&) {
            return std::nullopt;
        }
        out.push_back(std::move(st));
    }
}
struct Focus {
    Term context;
    Path path;
};

inline Path extend(Path p, std::initializer_list<std::uint8_t> xs) {
    for (auto x : xs) p.push_back(x);
    return p;
}

// Right-nested list whose element i is `group` (a tensor/composite of xs[i..j)).
inline Term regroup(const std::vector<Term>& xs, std::size_t i, std::size_t j, Op op, Path& group_at) {
    std::vector<Term> items(xs.begin(), xs.begin() + long(i));
    std::vector<Term> g(xs.begin() + long(i), xs.begin() + long(j));
    Term group = op == Op::Par ? par_list(g) : seq_list(g);
    items.push_back(group);
    items.insert(items.end(), xs.begin() + long(j), xs.end());
    group_at.clear();
    for (std::size_t k = 0; k < i; ++k) group_at.push_back(1);
    if (j < xs.size()) group_at.push_back(0);
    Term acc = items.back();
    for (std::size_t k = items.size() - 1; k-- > 0;) acc = op == Op::Par ? par(items[k], acc) : seq(items[k], acc);
    return acc;
}

inline std::vector<Focus> foci(const Term& c, bool nominal) {
    std::vector<Focus> out;
    std::vector<Path> ps = positions(c);
    for (auto& p : ps) {
        const Term& node = *subterm_ptr(c, p);
        if (!p.empty() && p.back() == 1) {
            Path up(p.begin(), p.end() - 1);
            if ((*subterm_ptr(c, up))->op == node->op && is_binary(node)) continue; // list suffix
        }
        out.push_back({c, p});
        if (!is_binary(node)) continue;
        std::vector<Term> xs = flatten(node, node->op);
        const std::size_t n = xs.size();
        if (n < 3) continue;
        if (node->op == Op::Par && nominal) {
            if (n > 12) continue;
            for (std::uint32_t mask = 1; mask < (1u << n) - 1; ++mask) {
                if (std::popcount(mask) < 2) continue;
                std::vector<Term> in, rest;
                for (std::size_t i = 0; i < n; ++i) (mask >> i & 1 ? in : rest).push_back(xs[i]);
                Term arranged = par(par_list(in), par_list(rest));
                out.push_back({replace_at(c, p, arranged), extend(p, {0})});
            }
        } else {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 2; j <= n; ++j) {
                    if (i == 0 && j == n) continue;
                    Path rel;
                    Term arranged = regroup(xs, i, j, node->op, rel);
                    Path at = p;
                    at.insert(at.end(), rel.begin(), rel.end());
                    out.push_back({replace_at(c, p, arranged), at});
                }
        }
    }
    return out;
}

// act-gen backwards needs a permutation that matching cannot supply, so from a Perm-free term
// the striped schemas never run backwards. For each generator port y this writes g as
// (y z)((y z) g) with z fresh, by act-gen R->L with an explicit binding, and follows with
// the striped rule R->L at the same place, which moves the renaming onto a wire.
inline void renamings(const Term& c, const RuleSet& rs, std::size_t size_cap, std::vector<Successor>& found) {
    if (!rs.has("act-gen")) return;
    const Rule& act = rs.get("act-gen");
    const NameSet avoid = all_names(c);
    const Name z = fresh_names(avoid, 1).front();
    for (auto& p : positions(c)) {
        const Term g = subterm(c, p);
        if (g->op != Op::Inst) continue;
        NameSet ports(g->dom.begin(), g->dom.end());
        ports.insert(g->cod.begin(), g->cod.end());
        for (auto& y : ports) {
            FinPerm t = transposition(y, z);
            Term wrapped = replace_at(c, p, perm_app(t, perm_act_term(t, g)));
            auto b = match_at(wrapped, p, act, Dir::LR, rs);
            if (!b) continue;
            Step intro{act.name, p, Dir::RL, *b};
            for (const char* name : {"striped-in", "striped-out", "striped-through"}) {
                if (!rs.has(name)) continue;
                std::vector<Step> then(1);
                Term result;
                try {
                    result = rewrite_step(wrapped, rs.get(name), p, Dir::RL, rs, &then[0]);
                } catch (const Error&) {
                    continue;
                }
                if (has_perm(result)) {
                    auto pushed = push_acts(result, p, rs, then);
                    if (!pushed) continue;
                    result = *pushed;
                }
                Term cr = canon(result, true);
                if (size_cap && cr->size > size_cap) continue;
                std::string k = key(cr);
                found.push_back({c, result, cr, std::move(k), intro, std::move(then)});
            }
        }
    }
}
} // namespace detail

/// All one-step rewrites of canon(t) by non-structural rules, deduplicated by canonical key
/// (the key of t itself excluded). Ordered by (rule name, position, direction).
inline std::vector<Successor> all_rewrites(const Term& t, const RuleSet& rs, std::size_t size_cap = 0) {
    const bool nominal = rs.ctx.nominal;
    Term c = canon(t, nominal);
    const std::string self = key(c);
    std::vector<Successor> found;
    Matcher matcher(rs.ctx, true);
    for (auto& f : detail::foci(c, nominal)) {
        const Term sub = *subterm_ptr(f.context, f.path);
        for (auto& r : rs.rules) {
            if (r.structural) continue;
            for (Dir d : {Dir::LR, Dir::RL}) {
                if (!r.usable(d)) continue;
                for (auto& m : matcher.run(r.from(d), sub)) {
                    Binding b = m.b;
                    Term arranged = replace_at(f.context, f.path, m.arranged);
                    auto to = detail::replacement(r, d, m.arranged, b, arranged, rs.ctx, size_cap);
                    if (!to) continue;
                    // the replacement has the matched interface, so the whole term stays well-typed
                    Term result = replace_at(arranged, f.path, *to);
                    std::vector<Step> then;
                    if (nominal && detail::has_perm(*to)) {
                        auto pushed = detail::push_acts(result, f.path, rs, then);
                        if (!pushed) continue;
                        result = *pushed;
                    }
                    Term cr = canon(result, nominal);
                    if (size_cap && cr->size > size_cap) continue;
                    std::string k = key(cr);
                    if (k == self) continue;
                    found.push_back({arranged, result, cr, std::move(k), Step{r.name, f.path, d, std::move(b)},
                                     std::move(then)});
                }
            }
        }
    }
    if (nominal) detail::renamings(c, rs, size_cap, found);
    std::stable_sort(found.begin(), found.end(), [](const Successor& x, const Successor& y) {
        if (x.step.rule != y.step.rule) return x.step.rule < y.step.rule;
        if (x.step.path != y.step.path) return x.step.path < y.step.path;
        return x.step.dir < y.step.dir;
    });
    std::vector<Successor> out;
    std::set<std::string> seen;
    for (auto& s : found)
        if (seen.insert(s.key).second) out.push_back(std::move(s));
    return out;
}

/// Explicit steps from canon(parent) through the successor to canon(result).
inline std::vector<Step> successor_steps(const Successor& s, bool nominal) {
    std::vector<Step> out;
    auto pre = canon_trace(s.arranged, nominal);
    for (auto it = pre.rbegin(); it != pre.rend(); ++it) out.push_back(reversed(*it));
    out.push_back(s.step);
    out.insert(out.end(), s.then.begin(), s.then.end());
    auto post = canon_trace(s.result, nominal);
    out.insert(out.end(), post.begin(), post.end());
    return out;
}

// ---------------------------------------------------------------------------
// search

struct SearchOptions {
    std::size_t max_depth = 12;   // total rule steps, both directions together
    std::size_t max_nodes = 200000;
    std::size_t size_cap = 0;     // 0: twice the larger canonical input
    bool monotone = false;        // each side only takes size-non-increasing steps
    double max_seconds = 0;       // 0: no time limit
};

struct SearchResult {
    bool found = false;
    Derivation derivation;
    std::size_t explored = 0;
    std::size_t depth = 0; // rule steps in the derivation
};

namespace detail {
struct SearchNode {
    Term canonical;
    std::size_t depth = 0;
    std::string parent; // empty for the root
    std::shared_ptr<Successor> via;
};

inline std::vector<Step> path_to_root(const std::unordered_map<std::string, SearchNode>& side, const std::string& k,
                                      bool nominal) {
    // steps from the root to k
    std::vector<std::vector<Step>> chunks;
    std::string cur = k;
    while (!side.at(cur).parent.empty()) {
        const SearchNode& n = side.at(cur);
        chunks.push_back(successor_steps(*n.via, nominal));
        cur = n.parent;
    }
    std::vector<Step> out;
    for (auto it = chunks.rbegin(); it != chunks.rend(); ++it) out.insert(out.end(), it->begin(), it->end());
    return out;
}
} // namespace detail

/// Bidirectional breadth-first search for a derivation t = ... = u over canonical keys.
inline SearchResult search_eq(const Term& t, const Term& u, const RuleSet& rs, SearchOptions opt = {}) {
    using detail::SearchNode;
    const bool nominal = rs.ctx.nominal;
    const auto t0 = std::chrono::steady_clock::now();
    SearchResult res;
    Term ct = canon(t, nominal), cu = canon(u, nominal);
    std::size_t cap = opt.size_cap ? opt.size_cap : 2 * std::max(ct->size, cu->size);

    std::unordered_map<std::string, SearchNode> side[2];
    std::vector<std::string> frontier[2];
    side[0][key(ct)] = SearchNode{ct, 0, {}, nullptr};
    side[1][key(cu)] = SearchNode{cu, 0, {}, nullptr};
    const std::string root[2] = {key(ct), key(cu)};
    frontier[0].push_back(key(ct));
    frontier[1].push_back(key(cu));
    std::size_t level[2] = {0, 0};

    auto finish = [&](const std::string& meet) {
        Derivation d;
        d.start = t;
        d.end = u;
        d.steps = canon_trace(t, nominal);
        auto fwd = detail::path_to_root(side[0], meet, nominal);
        d.steps.insert(d.steps.end(), fwd.begin(), fwd.end());
        auto bwd = detail::path_to_root(side[1], meet, nominal);
        for (auto it = bwd.rbegin(); it != bwd.rend(); ++it) d.steps.push_back(reversed(*it));
        auto tail = canon_trace(u, nominal);
        for (auto it = tail.rbegin(); it != tail.rend(); ++it) d.steps.push_back(reversed(*it));
        res.found = true;
        res.depth = side[0].at(meet).depth + side[1].at(meet).depth;
        res.derivation = std::move(d);
        res.explored = side[0].size() + side[1].size();
        return res;
    };

    if (side[1].count(key(ct))) return finish(key(ct));

    while (level[0] + level[1] < opt.max_depth) {
        int s = frontier[0].size() <= frontier[1].size() ? 0 : 1;
        // fresh names make the two sides asymmetric: a meet may need both halfway, so neither may lag
        if (level[s] > level[1 - s] + 1) s = 1 - s;
        if (frontier[s].empty()) s = 1 - s;
        if (frontier[s].empty()) break;
        std::vector<std::string> next;
        for (auto& k : frontier[s]) {
            const Term parent = side[s].at(k).canonical;
            const std::size_t c = opt.monotone ? std::min(cap, parent->size) : cap;
            for (auto& succ : all_rewrites(parent, rs, c)) {
                if (side[s].count(succ.key)) continue;
                // no rule changes the number of d(x>y) leaves by more than one
                const Term& goal = side[1 - s].at(root[1 - s]).canonical;
                std::size_t h = succ.canonical->deltas > goal->deltas ? succ.canonical->deltas - goal->deltas
                                                                      : goal->deltas - succ.canonical->deltas;
                if (level[s] + 1 + h > opt.max_depth) continue;
                auto via = std::make_shared<Successor>(succ);
                side[s][succ.key] = SearchNode{succ.canonical, level[s] + 1, k, via};
                if (side[1 - s].count(succ.key)) return finish(succ.key);
                next.push_back(succ.key);
                if (side[0].size() + side[1].size() >= opt.max_nodes) {
                    res.explored = side[0].size() + side[1].size();
                    return res;
                }
            }
            if (opt.max_seconds > 0 &&
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() > opt.max_seconds) {
                res.explored = side[0].size() + side[1].size();
                return res;
            }
        }
        frontier[s] = std::move(next);
        ++level[s];
    }
    res.explored = side[0].size() + side[1].size();
    return res;
}

} // namespace nomdiag
