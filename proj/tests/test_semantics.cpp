#include "oracle.hpp"

#include <nomdiag/sampling.hpp>

#include <catch_amalgamated.hpp>

using namespace nomdiag;

namespace {
Term d(const char* a, const char* b) { return delta(Name::parse(a, true), Name::parse(b, true)); }
SemMap fn(std::set<NamePair> p, NameSet dom, NameSet cod, Kind k = Kind::fun) { return SemMap{dom, cod, k, p}; }

const std::vector<Theory> interpreted = {Theory::nB, Theory::nI, Theory::nS, Theory::nF, Theory::nP, Theory::nR};
} // namespace

TEST_CASE("composition and tensor of maps") {
    SemMap ab = renaming_sem("a"_n, "b"_n), bc = renaming_sem("b"_n, "c"_n);
    CHECK(compose_sem(ab, bc).pairs == std::set<NamePair>{{"a"_n, "c"_n}});
    CHECK(compose_sem(ab, SemMap::identity({"b"_n})) == ab);
    SemMap r1 = fn({{"a"_n, "b"_n}, {"a"_n, "c"_n}}, {"a"_n}, {"b"_n, "c"_n}, Kind::rel);
    SemMap r2 = fn({{"b"_n, "x"_n}, {"c"_n, "x"_n}}, {"b"_n, "c"_n}, {"x"_n}, Kind::rel);
    CHECK(compose_sem(r1, r2).pairs == std::set<NamePair>{{"a"_n, "x"_n}});
    CHECK_THROWS_AS(compose_sem(ab, ab), InterfaceMismatch);

    SemMap cd = renaming_sem("c"_n, "d"_n);
    CHECK(tensor_sem(ab, cd).pairs == std::set<NamePair>{{"a"_n, "b"_n}, {"c"_n, "d"_n}});
    CHECK_THROWS_AS(tensor_sem(ab, renaming_sem("a"_n, "c"_n)), OverlapError);
    SemMap empty{{}, {}, Kind::bij, {}};
    CHECK(tensor_sem(ab, empty) == ab);
}

TEST_CASE("separated arrows") {
    CHECK(separated_arrows(renaming_sem("a"_n, "c"_n), renaming_sem("b"_n, "d"_n)));
    CHECK_FALSE(separated_arrows(renaming_sem("a"_n, "b"_n), renaming_sem("b"_n, "a"_n)));
    CHECK(separated_arrows(renaming_sem("a"_n, "b"_n), SemMap{}));
}

TEST_CASE("evaluation of nominal terms") {
    SemMap swap = eval_nmt(par(d("a", "b"), d("b", "a")), Theory::nB);
    CHECK(swap.pairs == std::set<NamePair>{{"a"_n, "b"_n}, {"b"_n, "a"_n}});
    CHECK(swap.kind == Kind::bij);
    SemMap m = eval_nmt(inst("m", {"a"_n, "b"_n}, {"c"_n}), Theory::nS);
    CHECK(m.pairs == std::set<NamePair>{{"a"_n, "c"_n}, {"b"_n, "c"_n}});
    SemMap sp = eval_nmt(seq(inst("c", {"a"_n}, {"x"_n, "y"_n}), inst("m", {"x"_n, "y"_n}, {"b"_n})), Theory::nR);
    CHECK(sp.pairs == std::set<NamePair>{{"a"_n, "b"_n}});
    SemMap k = eval_nmt(inst("k", {"a"_n}, {}), Theory::nP);
    CHECK(k.pairs.empty());
    CHECK(k.dom == NameSet{"a"_n});
    CHECK_THROWS_AS(eval_nmt(inst("m", {"a"_n, "b"_n}, {"c"_n}), Theory::nB), UnsupportedGenerator);
    CHECK_THROWS_AS(eval_nmt(par(d("a", "b"), d("a", "c")), Theory::nB), OverlapError);
}

TEST_CASE("evaluation of ordered terms") {
    CHECK(eval_smt(sym(), Theory::B).pairs == std::set<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 0}});
    OrdSem u = eval_smt(gen("u"), Theory::F);
    CHECK(u.m == 0);
    CHECK(u.n == 1);
    CHECK(u.pairs.empty());
    OrdSem c = eval_smt(seq(par(gen("m"), id()), gen("m")), Theory::S);
    CHECK(c.m == 3);
    CHECK(c.pairs == std::set<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 0}, {2, 0}});
    CHECK_THROWS_AS(eval_smt(seq(sym(), id()), Theory::B), SeqMismatch);
}

TEST_CASE("readback examples") {
    SemMap swap = fn({{"a"_n, "b"_n}, {"b"_n, "a"_n}}, {"a"_n, "b"_n}, {"a"_n, "b"_n}, Kind::bij);
    CHECK(readback_nmt(swap, Theory::nB) == par(d("a", "b"), d("b", "a")));
    SemMap m = fn({{"a"_n, "c"_n}, {"b"_n, "c"_n}}, {"a"_n, "b"_n}, {"c"_n});
    CHECK(readback_nmt(m, Theory::nF) == inst("m", {"a"_n, "b"_n}, {"c"_n}));
    CHECK(readback_nmt(SemMap{}, Theory::nB) == nil());
    CHECK_THROWS_AS(readback_nmt(m, Theory::nB), KindMismatch);
}

TEST_CASE("readback round trip on random maps") {
    Rng rng(43);
    NameList u = default_universe(4);
    for (Theory th : interpreted) {
        Signature sig = nmt_theory_signature(th);
        for (int i = 0; i < 200; ++i) {
            SemMap s = random_semmap(rng, kind_of(th), u, 3);
            Term t = readback_nmt(s, th);
            CHECK(nmt_well_typed(t, &sig));
            CHECK(eval_nmt(t, th) == s);
            auto o = oracle::eval_nominal(t);
            REQUIRE(o);
            CHECK(*o == oracle::from_sem(s));
        }
    }
}

TEST_CASE("evaluation agrees with the relation oracle") {
    Rng rng(47);
    for (Theory th : interpreted) {
        Signature sig = nmt_theory_signature(th);
        for (int i = 0; i < 200; ++i) {
            Term t = random_nmt_term(rng, sig);
            SemMap s = eval_nmt(t, th);
            auto o = oracle::eval_nominal(t);
            REQUIRE(o);
            CHECK(oracle::from_sem(s) == *o);
            CHECK(oracle::in_class(*o, kind_of(th)));
            Iface ti = nmt_typecheck(t);
            CHECK(s.dom == ti.dom);
            CHECK(s.cod == ti.cod);
        }
    }
}

TEST_CASE("equality up to semantics") {
    CHECK(nmt_eq(seq(d("a", "x"), d("x", "c")), d("a", "c"), Theory::nB));
    CHECK(nmt_eq(inst("m", {"a"_n, "b"_n}, {"x"_n}), inst("m", {"b"_n, "a"_n}, {"x"_n}), Theory::nS));
    CHECK_FALSE(nmt_eq(d("a", "b"), par(d("a", "b"), inst("u", {}, {"c"_n})), Theory::nF));
}

TEST_CASE("substitutions") {
    SemMap s = fn({{"a"_n, "b"_n}, {"c"_n, "d"_n}}, {"a"_n, "c"_n}, {"b"_n, "d"_n});
    CHECK(apply_subst(s, {"a"_n, "c"_n}) == NameList{"b"_n, "d"_n});
    CHECK(apply_subst(SemMap::identity({"a"_n}), {"a"_n}) == NameList{"a"_n});
    CHECK_THROWS_AS(apply_subst(renaming_sem("a"_n, "b"_n), {"c"_n}), NameNotInDomain);
    SemMap rel = fn({{"a"_n, "b"_n}, {"a"_n, "c"_n}}, {"a"_n}, {"b"_n, "c"_n}, Kind::rel);
    CHECK_THROWS_AS(apply_subst(rel, {"a"_n}), KindMismatch);
}

TEST_CASE("JSON round trip") {
    SemMap s = fn({{"a"_n, "b"_n}, {"c"_n, "b"_n}}, {"a"_n, "c"_n}, {"b"_n}, Kind::surj);
    CHECK(sem_to_json(s) == R"({"kind":"surj","dom":["a","c"],"cod":["b"],"pairs":[["a","b"],["c","b"]]})");
    CHECK(sem_from_json(sem_to_json(s)) == s);
    CHECK_THROWS_AS(sem_from_json("{"), ParseError);
    CHECK_THROWS_AS(sem_from_json(R"({"kind":"bij","dom":["a"],"cod":["b"],"pairs":[]})"), KindMismatch);
    Rng rng(53);
    for (int i = 0; i < 100; ++i) {
        SemMap r = random_semmap(rng, Kind::rel, default_universe(5), 3);
        CHECK(sem_from_json(sem_to_json(r)) == r);
    }
}

TEST_CASE("class membership of the built-in generators") {
    CHECK(generator_kind("u") == Kind::inj);
    CHECK(generator_kind("m") == Kind::surj);
    CHECK(generator_kind("k") == Kind::pfun);
    CHECK(generator_kind("c") == Kind::rel);
    CHECK(kind_join(Kind::inj, Kind::surj) == Kind::fun);
    CHECK(kind_join(Kind::fun, Kind::pfun) == Kind::pfun);
    CHECK(kind_leq(Kind::bij, Kind::rel));
    CHECK_FALSE(kind_leq(Kind::pfun, Kind::fun));
}
