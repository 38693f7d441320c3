#pragma once

#include "rules.hpp"
#include "sampling.hpp"

#include <sstream>

namespace nomdiag {

struct SoundnessFailure {
    std::string rule;
    Term lhs, rhs;
    std::string detail;
};

struct RuleReport {
    std::string rule;
    std::size_t checked = 0;
    std::size_t attempts = 0;
};

struct SoundnessReport {
    std::vector<RuleReport> rules;
    std::vector<SoundnessFailure> failures;

    bool ok() const { return failures.empty(); }
    std::size_t checked() const {
        std::size_t n = 0;
        for (auto& r : rules) n += r.checked;
        return n;
    }
};

namespace detail {
// Values for every free variable of a rule; nullopt when this draw cannot be typed.
inline std::optional<Binding> sample_binding(Rng& rng, const Rule& r, const RuleSet& rs, const SampleOptions& o) {
    std::set<std::string> terms, names, perms, ints;
    pattern_vars(*r.lhs, terms, names, perms, ints);
    pattern_vars(*r.rhs, terms, names, perms, ints);
    Binding b;
    // mostly distinct names, with occasional collisions so side conditions get exercised
    NameList pool = o.universe;
    rng.shuffle(pool);
    std::size_t next = 0;
    for (auto& v : names)
        b.names[v] = next < pool.size() && !rng.chance(1, 5) ? pool[next++] : rng.pick(o.universe);
    for (auto& v : perms) b.perms[v] = random_perm(rng, o.universe);
    for (auto& v : ints) b.ints[v] = rng.below(3);

    std::map<std::string, NameSet> sets;
    std::map<std::string, std::size_t> widths;
    // half of the draws give every interface the same size, which bijective theories need
    const std::size_t common = rng.chance(1, 2) ? rng.below(4) : 4;
    auto size = [&] { return common < 4 ? common : rng.below(4); };
    auto set_var = [&](const std::string& s) -> const NameSet& {
        auto it = sets.find(s);
        if (it == sets.end()) {
            NameList u = o.universe;
            rng.shuffle(u);
            it = sets.emplace(s, NameSet(u.begin(), u.begin() + long(std::min(size(), u.size())))).first;
        }
        return it->second;
    };
    auto width_var = [&](const std::string& s) {
        auto it = widths.find(s);
        if (it == widths.end()) it = widths.emplace(s, size()).first;
        return it->second;
    };
    SampleOptions small = o;
    small.max_layers = 2;
    for (auto& d : r.decls) {
        std::optional<Term> t;
        if (rs.ctx.nominal) t = random_nmt_between(rng, rs.ctx.sig, set_var(d.dom), set_var(d.cod), small, 20);
        else t = random_smt_between(rng, rs.ctx.sig, width_var(d.dom), width_var(d.cod), small, 20);
        if (!t) return std::nullopt;
        b.terms[d.var] = *t;
    }

    std::vector<std::pair<std::string, Arity>> gens(rs.ctx.sig.gens.begin(), rs.ctx.sig.gens.end());
    for (auto& v : terms) {
        if (b.terms.count(v) || v[0] == '#') continue;
        // undeclared term variables are generator-sorted
        if (gens.empty()) return std::nullopt;
        auto& [label, ar] = rng.pick(gens);
        if (!rs.ctx.nominal) {
            b.terms[v] = nomdiag::gen(label);
            continue;
        }
        NameList u = o.universe;
        rng.shuffle(u);
        NameList d(u.begin(), u.begin() + long(ar.dom));
        rng.shuffle(u);
        NameList c(u.begin(), u.begin() + long(ar.cod));
        b.terms[v] = nomdiag::inst(label, d, c);
    }
    return b;
}

inline bool typed(const Term& t, const RuleSet& rs) {
    if (rs.ctx.nominal) return nmt_well_typed(t, &rs.ctx.sig);
    return smt_type_of(t, rs.ctx.sig).has_value();
}
} // namespace detail

/// Evaluates both sides of `samples` random type-correct instances of every rule in `theory`.
/// A rule that cannot be instantiated (e.g. a generator schema over an empty signature) is
/// reported with zero checked instances.
inline SoundnessReport check_rule_soundness(const RuleSet& rs, Theory theory, std::size_t samples, std::uint64_t seed,
                                            const SampleOptions& o = {}) {
    SoundnessReport rep;
    Rng rng(seed);
    for (auto& r : rs.rules) {
        RuleReport rr{r.name, 0, 0};
        const std::size_t budget = samples * 400;
        while (rr.checked < samples && rr.attempts < budget) {
            if (rr.attempts == 2000 && rr.checked == 0) break; // no instance exists in this signature
            ++rr.attempts;
            auto b = detail::sample_binding(rng, r, rs, o);
            if (!b || !conds_hold(r, *b, rs.ctx)) continue;
            Term l, rt;
            try {
                l = instantiate(*r.lhs, *b, rs.ctx);
                rt = instantiate(*r.rhs, *b, rs.ctx);
            } catch (const Error&) {
                continue;
            }
            if (!detail::typed(l, rs) || !detail::typed(rt, rs)) continue;
            ++rr.checked;
            try {
                bool same;
                if (rs.ctx.nominal) {
                    same = nmt_typecheck(l) == nmt_typecheck(rt) && eval_nmt(l, theory) == eval_nmt(rt, theory);
                } else {
                    same = eval_smt(l, theory) == eval_smt(rt, theory);
                }
                if (!same) rep.failures.push_back({r.name, l, rt, "values differ"});
            } catch (const Error& e) {
                rep.failures.push_back({r.name, l, rt, e.what()});
            }
        }
        rep.rules.push_back(rr);
    }
    return rep;
}

} // namespace nomdiag
