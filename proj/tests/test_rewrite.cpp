#include <nomdiag/rewrite.hpp>
#include <nomdiag/sampling.hpp>
#include <nomdiag/soundness.hpp>

#include <catch_amalgamated.hpp>

using namespace nomdiag;

namespace {
Term d(const char* a, const char* b) { return delta(Name::parse(a, true), Name::parse(b, true)); }
Term mu(const char* a, const char* b, const char* c) { return inst("m", {Name::parse(a), Name::parse(b)}, {Name::parse(c)}); }

// d(X>Y) ; d(Y>Z) = d(X>Y): wrong on purpose
RuleSet corrupted() {
    detail::RuleBuilder rb;
    rb.add("bad-chain", pat::seq(pat::delta(pat::n("X"), pat::n("Y")), pat::delta(pat::n("Y"), pat::n("Z"))),
           pat::delta(pat::n("X"), pat::n("Y")));
    RuleSet rs;
    rs.theory = Theory::nB;
    rs.ctx.nominal = true;
    rs.ctx.sig = nmt_theory_signature(Theory::nB);
    rs.rules = std::move(rb.rules);
    return rs;
}
} // namespace

TEST_CASE("matching at a position") {
    RuleSet rs = nmt_rules(Theory::nB);
    const Rule& chain = rs.get("delta-chain");
    auto b = match_at(seq(d("a", "b"), d("b", "c")), {}, chain, Dir::LR, rs);
    REQUIRE(b);
    CHECK(b->names == std::map<std::string, Name>{{"X", "a"_n}, {"Y", "b"_n}, {"Z", "c"_n}});
    CHECK_FALSE(match_at(seq(d("a", "b"), d("c", "d")), {}, chain, Dir::LR, rs));
    CHECK_FALSE(match_at(d("a", "b"), {0}, chain, Dir::LR, rs));

    // unit then rename: g ; d(b>x) with g = u(>b), x fresh
    RuleSet ri = nmt_rules(Theory::nI);
    Term t = seq(inst("u", {}, {"b"_n}), par(nil(), d("b", "x")));
    auto s = match_at(t, {}, ri.get("striped-out"), Dir::LR, ri);
    REQUIRE(s);
    CHECK(s->names.at("B") == "b"_n);
    CHECK(s->names.at("X") == "x"_n);
    CHECK(s->terms.at("G") == inst("u", {}, {"b"_n}));
    CHECK(rewrite_step(t, ri.get("striped-out"), {}, Dir::LR, ri) ==
          perm_app(transposition("b"_n, "x"_n), inst("u", {}, {"b"_n})));
}

TEST_CASE("single rewrite steps") {
    RuleSet rs = nmt_rules(Theory::nB);
    CHECK(rewrite_step(seq(d("a", "x"), d("x", "c")), rs.get("delta-chain"), {}, Dir::LR, rs) == d("a", "c"));
    Term u = d("a", "b"), v = d("c", "e");
    CHECK(rewrite_step(par(u, v), rs.get("par-comm"), {}, Dir::LR, rs) == par(v, u));
    CHECK(rewrite_step(u, rs.get("par-unit-left"), {}, Dir::RL, rs) == par(nil(), u));
    Step st;
    Term deep = par(d("q", "r"), seq(d("a", "x"), d("x", "c")));
    CHECK(rewrite_step(deep, rs.get("delta-chain"), {1}, Dir::LR, rs, &st) == par(d("q", "r"), d("a", "c")));
    CHECK(st.rule == "delta-chain");
    CHECK(st.path == Path{1});
    CHECK_THROWS_AS(rewrite_step(u, rs.get("delta-chain"), {}, Dir::LR, rs), NoMatch);
    // the reverse chain invents a middle name that avoids everything in the term
    Term split = rewrite_step(u, rs.get("delta-chain"), {}, Dir::RL, rs);
    CHECK(split == seq(d("a", "_0"), d("_0", "b")));
    // act-delta does not run backwards: the permutation would be unconstrained
    CHECK_FALSE(rs.get("act-delta").usable(Dir::RL));
    CHECK_THROWS_AS(rewrite_step(par(u, v), rs.get("act-delta"), {0}, Dir::RL, rs), NoMatch);
}

TEST_CASE("successor enumeration") {
    RuleSet rs = nmt_rules(Theory::nB);
    auto succ = all_rewrites(d("a", "b"), rs, 10);
    CHECK_FALSE(succ.empty());
    bool chain_split = false;
    for (auto& s : succ) {
        CHECK(nmt_typecheck(s.canonical) == nmt_typecheck(d("a", "b")));
        CHECK(s.canonical->size <= 10);
        if (s.step.rule == "delta-chain") {
            CHECK(s.step.dir == Dir::RL);
            chain_split = true;
        }
    }
    CHECK(chain_split);
    CHECK(all_rewrites(d("a", "b"), rs, 10).size() == succ.size()); // deterministic

    for (auto& s : all_rewrites(nil(), rs, 6)) CHECK(nmt_typecheck(s.canonical) == Iface{});

    // renaming the names of a Perm-free term renames its successors one for one
    Rng rng(71);
    Signature sig = nmt_theory_signature(Theory::nB);
    SampleOptions o;
    o.universe = default_universe(4);
    o.max_layers = 2;
    o.max_width = 2;
    for (int i = 0; i < 30; ++i) {
        Term t = push_perms(random_nmt_term(rng, sig, o));
        FinPerm p = random_perm(rng, o.universe);
        std::size_t cap = t->size + 4;
        CHECK(all_rewrites(t, rs, cap).size() == all_rewrites(perm_act_term(p, t), rs, cap).size());
    }
}

TEST_CASE("derivation search") {
    RuleSet rs = nmt_rules(Theory::nB);
    Term t = seq(d("a", "x"), d("x", "b"));
    SearchResult r = search_eq(t, d("a", "b"), rs);
    REQUIRE(r.found);
    CHECK(r.depth == 1);
    CHECK(r.derivation.rule_steps(rs) == 1);
    CHECK(replays(r.derivation, rs));
    CHECK(r.derivation.text().find("delta-chain") != std::string::npos);

    RuleSet ns = nmt_rules(Theory::nS);
    Term l = par(mu("a", "b", "x"), d("c", "e")), rr = par(d("c", "e"), mu("b", "a", "x"));
    SearchResult s = search_eq(l, rr, ns);
    REQUIRE(s.found);
    CHECK(replays(s.derivation, ns));
    bool comm = false;
    for (auto& st : s.derivation.steps) comm = comm || st.rule == "merge-comm";
    CHECK(comm);

    // unequal values: no derivation, and semantic equality agrees
    SearchOptions small;
    small.max_depth = 4;
    small.max_nodes = 3000;
    Term swap = par(d("a", "b"), d("b", "a")), ident = par(idn("a"_n), idn("b"_n));
    CHECK_FALSE(search_eq(swap, ident, rs, small).found);
    CHECK_FALSE(nmt_eq(swap, ident, Theory::nB));
}

TEST_CASE("replay rejects a tampered derivation") {
    RuleSet rs = nmt_rules(Theory::nB);
    SearchResult r = search_eq(seq(d("a", "x"), d("x", "b")), d("a", "b"), rs);
    REQUIRE(r.found);
    Derivation bad = r.derivation;
    bad.end = d("a", "c");
    CHECK_FALSE(replays(bad, rs));
    bad = r.derivation;
    bad.steps.back().path = {0, 0, 0};
    CHECK_FALSE(replays(bad, rs));
}

TEST_CASE("rule soundness") {
    auto nf = check_rule_soundness(nmt_rules(Theory::nF), Theory::nF, 100, 1);
    CHECK(nf.ok());
    for (auto& r : nf.rules)
        if (r.rule == "interchange") CHECK(r.checked == 100);
    auto f = check_rule_soundness(smt_rules(Theory::F), Theory::F, 100, 2);
    CHECK(f.ok());
    for (auto& r : f.rules)
        if (r.rule == "sym-naturality") CHECK(r.checked == 100);

    auto bad = check_rule_soundness(corrupted(), Theory::nB, 20, 3);
    REQUIRE_FALSE(bad.ok());
    CHECK(bad.failures.front().rule == "bad-chain");
    CHECK_FALSE(eval_nmt(bad.failures.front().lhs, Theory::nB) == eval_nmt(bad.failures.front().rhs, Theory::nB));
}
