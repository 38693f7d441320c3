#include <nomdiag/graph.hpp>
#include <nomdiag/parse.hpp>
#include <nomdiag/sampling.hpp>

#include <catch_amalgamated.hpp>

using namespace nomdiag;

namespace {
Term d(const char* a, const char* b) { return delta(Name::parse(a, true), Name::parse(b, true)); }
} // namespace

TEST_CASE("nominal grammar") {
    CHECK(parse_nmt("d(a>b)") == d("a", "b"));
    CHECK(parse_nmt("[a>b]") == d("a", "b"));
    CHECK(parse_nmt("id(a)") == idn("a"_n));
    CHECK(parse_nmt("nil") == nil());
    CHECK(parse_nmt("m(a,b>c)") == inst("m", {"a"_n, "b"_n}, {"c"_n}));
    CHECK(parse_nmt("u(>c)") == inst("u", {}, {"c"_n}));
    CHECK(parse_nmt("k(a>)") == inst("k", {"a"_n}, {}));
    // '|' binds tighter than ';', both nest to the right
    CHECK(parse_nmt("d(a>b) | d(c>e) ; d(b>x) | id(e)") ==
          seq(par(d("a", "b"), d("c", "e")), par(d("b", "x"), idn("e"_n))));
    CHECK(parse_nmt("d(a>b) ; d(b>c) ; d(c>e)") == seq(d("a", "b"), seq(d("b", "c"), d("c", "e"))));
    CHECK(parse_nmt("(d(a>b) ; d(b>c)) ; d(c>e)") == seq(seq(d("a", "b"), d("b", "c")), d("c", "e")));
    // a permutation prefix applies to the next unary term only
    CHECK(parse_nmt("(a b) d(a>c) | id(x)") == par(perm_app(transposition("a"_n, "b"_n), d("a", "c")), idn("x"_n)));
    CHECK(parse_nmt("(a b c) id(a)")->perm("a"_n) == "b"_n);
    CHECK(parse_nmt("(a b)(b c) id(a)")->perm("a"_n) == perm_compose(transposition("a"_n, "b"_n),
                                                                      transposition("b"_n, "c"_n))("a"_n));
    CHECK(parse_nmt("() d(a>b)") == perm_app(FinPerm{}, d("a", "b")));
    CHECK(parse_nmt("  d( a > b )  # comment") == d("a", "b"));
}

TEST_CASE("nominal parse errors") {
    for (const char* bad : {"", "d(a>", "d(a b)", "id(a) |", "(a a) id(a)", "x", "D(a>b)", "d(a>b) extra", "m(a,>b)"})
        CHECK_THROWS_AS(parse_nmt(bad), ParseError);
    // machine names are reserved
    CHECK_THROWS_AS(parse_nmt("d(_0>b)"), ParseError);
    CHECK(parse_nmt("d(_0>b)", true) == d("_0", "b"));
    CHECK_THROWS_AS(parse_nmt("_g(a>b)", true), ParseError);
}

TEST_CASE("ordered grammar") {
    CHECK(parse_smt("id + id ; sym") == seq(par(id(), id()), sym()));
    CHECK(parse_smt("m") == gen("m"));
    CHECK(parse_smt("(sym ; sym) + nil") == par(seq(sym(), sym()), nil()));
    CHECK_THROWS_AS(parse_smt("id +"), ParseError);
    CHECK_THROWS_AS(parse_smt("(id"), ParseError);
    CHECK_THROWS_AS(parse_smt("Gen"), ParseError);
}

TEST_CASE("name lists and signatures") {
    CHECK(parse_name_list("a, b,c") == NameList{"a"_n, "b"_n, "c"_n});
    CHECK(parse_name_list("").empty());
    CHECK_THROWS_AS(parse_name_list("a,,b"), ParseError);
    CHECK_THROWS_AS(parse_name_list("_1"), ParseError);

    Signature s = parse_signature("# free\ng : 1 -> 1\nh : 2 -> 1   # merge-like\n\n", Theory::Free);
    CHECK(s.gens.size() == 2);
    CHECK(s.gens.at("h") == Arity{2, 1});
    CHECK_THROWS_AS(parse_signature("g : 1 => 1", Theory::Free), ParseError);
    CHECK_THROWS_AS(parse_signature("g : -1 -> 1", Theory::Free), ParseError);
    CHECK_THROWS_AS(parse_signature("sym : 2 -> 2", Theory::Free), ParseError);
    CHECK_THROWS_AS(parse_signature("g : 1 -> 1 x", Theory::Free), ParseError);
}

TEST_CASE("printing") {
    CHECK(print_nmt(par(d("a", "d"), d("b", "c"))) == "d(a>d) | d(b>c)");
    CHECK(print_smt(seq(par(id(), id()), sym())) == "id + id ; sym");
    CHECK(print_nmt(seq(seq(d("a", "b"), d("b", "c")), d("c", "e"))) == "(d(a>b) ; d(b>c)) ; d(c>e)");
    CHECK(print_nmt(perm_app(transposition("a"_n, "b"_n), seq(d("a", "x"), d("x", "c")))) ==
          "(a b) (d(a>x) ; d(x>c))");
    CHECK(print_term(sym()) == "sym");
}

TEST_CASE("print then parse is the identity") {
    Rng rng(107);
    Signature ns = nmt_theory_signature(Theory::nR);
    Signature os = smt_theory_signature(Theory::R);
    for (int i = 0; i < 300; ++i) {
        Term t = random_nmt_term(rng, ns);
        CHECK(parse_nmt(print_nmt(t), true) == t);
        Term f = freshen_internals(t);
        CHECK(parse_nmt(print_nmt(f), true) == f);
        Term u = random_smt_term(rng, os);
        CHECK(parse_smt(print_smt(u)) == u);
    }
}

TEST_CASE("DOT output is deterministic") {
    Term t = parse_nmt("(d(a>x) | g(b>y)) ; h(x,y>c)");
    std::string once = to_dot(port_graph(t));
    CHECK(once == to_dot(port_graph(parse_nmt("(d(a>x) | g(b>y)) ; h(x,y>c)"))));
    CHECK(once.rfind("digraph term {", 0) == 0);
    CHECK(once.find("h(x,y>c)") != std::string::npos);
}
