#include "alpha_family.hpp"
#include "oracle.hpp"

#include <nomdiag/sampling.hpp>

#include <catch_amalgamated.hpp>

using namespace nomdiag;

namespace {
Term d(const char* a, const char* b) { return delta(Name::parse(a, true), Name::parse(b, true)); }
Term g(const char* a, const char* b) { return inst("g", {Name::parse(a)}, {Name::parse(b)}); }
} // namespace

TEST_CASE("alpha equality examples") {
    // same diagram, internal wire called x in one and y in the other
    CHECK(alpha_eq(seq(g("a", "x"), g("x", "b")), seq(g("a", "y"), g("y", "b"))));
    CHECK_FALSE(alpha_eq(d("a", "b"), d("a", "c")));
    CHECK(alpha_eq(seq(d("a", "x"), d("x", "b")), d("a", "b")));
    CHECK(alpha_eq(d("a", "a"), idn("a"_n)));
    CHECK(alpha_eq(par(g("a", "b"), g("c", "e")), par(g("c", "e"), g("a", "b"))));
    CHECK(alpha_eq(perm_app(transposition("a"_n, "c"_n), g("a", "b")), g("c", "b")));
    // port order matters for a free generator
    Term h1 = inst("h", {"a"_n, "b"_n}, {"c"_n}), h2 = inst("h", {"b"_n, "a"_n}, {"c"_n});
    CHECK_FALSE(alpha_eq(h1, h2));
    CHECK(alpha_eq(seq(par(d("a", "x"), d("b", "y")), inst("h", {"x"_n, "y"_n}, {"c"_n})), h1));
    CHECK_FALSE(alpha_eq(seq(g("a", "x"), g("x", "b")), g("a", "b")));
    CHECK(alpha_eq(nil(), seq(nil(), nil())));
}

TEST_CASE("alpha equality is an equivalence and is invariant under freshening") {
    Rng rng(61);
    Signature sig = family::signature();
    SampleOptions o;
    o.universe = default_universe(5);
    std::vector<Term> ts;
    for (int i = 0; i < 120; ++i) ts.push_back(random_nmt_term(rng, sig, o));
    for (auto& t : ts) {
        CHECK(alpha_eq(t, t));
        CHECK(alpha_eq(t, freshen_internals(t)));
        CHECK(alpha_eq(t, push_perms(t)));
    }
    for (std::size_t i = 0; i < ts.size(); ++i)
        for (std::size_t j = 0; j < ts.size(); ++j) {
            CHECK(alpha_eq(ts[i], ts[j]) == alpha_eq(ts[j], ts[i]));
            if (alpha_eq(ts[i], ts[j]))
                for (std::size_t k = 0; k < ts.size(); k += 7)
                    CHECK(alpha_eq(ts[j], ts[k]) == alpha_eq(ts[i], ts[k]));
        }
}

TEST_CASE("alpha equality implies equal values") {
    // nR so that every generator has a value
    Rng rng(67);
    Signature sig = nmt_theory_signature(Theory::nR);
    for (int i = 0; i < 300; ++i) {
        Term t = random_nmt_term(rng, sig);
        Term u = rng.chance(1, 2) ? freshen_internals(t) : random_nmt_term(rng, sig);
        if (alpha_eq(t, u)) CHECK(eval_nmt(t, Theory::nR) == eval_nmt(u, Theory::nR));
    }
}

TEST_CASE("alpha equality agrees with search on a small family") {
    std::vector<Term> ts = family::chains(2);
    for (auto& t : family::merges())
        if (t->size <= 7) ts.push_back(t);
    SearchOptions eq;
    eq.max_depth = 18;
    SearchOptions apart;
    apart.max_depth = 6;
    apart.max_nodes = 5000;
    family::Agreement a = family::compare_with_search(ts, eq, apart);
    for (auto& p : a.problems) UNSCOPED_INFO(p);
    CHECK(a.ok());
    CHECK(a.classes > 4);
    CHECK(a.equal_found == a.equal_pairs);
}

TEST_CASE("DOT rendering") {
    std::string dot = to_dot(port_graph(seq(g("a", "x"), g("x", "b"))));
    CHECK(dot ==
          "digraph term {\n  rankdir=LR;\n"
          "  in_a [shape=point, xlabel=\"a\"];\n"
          "  g0 [shape=box, label=\"g(a>x)\"];\n"
          "  g1 [shape=box, label=\"g(x>b)\"];\n"
          "  out_b [shape=point, xlabel=\"b\"];\n"
          "  in_a -> g0 [label=\"a\"];\n"
          "  g0 -> g1 [label=\"x\"];\n"
          "  g1 -> out_b [label=\"b\"];\n"
          "}\n");
    CHECK(to_dot(port_graph(d("a", "b"))).find("in_a -> out_b") != std::string::npos);
}
