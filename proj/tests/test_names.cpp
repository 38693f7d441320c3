#include <nomdiag/names.hpp>
#include <nomdiag/sampling.hpp>

#include <catch_amalgamated.hpp>

using namespace nomdiag;

namespace {
FinPerm cyc(std::initializer_list<const char*> xs) {
    std::vector<Name> v;
    for (auto x : xs) v.push_back(Name::parse(x));
    std::map<Name, Name> m;
    for (std::size_t i = 0; i < v.size(); ++i) m[v[i]] = v[(i + 1) % v.size()];
    return FinPerm::from_map(m);
}

// pointwise composite over a fixed finite carrier, independent of perm_compose
std::map<Name, Name> pointwise(const FinPerm& p, const FinPerm& q, const NameList& carrier) {
    std::map<Name, Name> m;
    for (auto& x : carrier)
        if (p(q(x)) != x) m[x] = p(q(x));
    return m;
}
} // namespace

TEST_CASE("names order by base, then numerically by index") {
    CHECK("a"_n < "a1"_n);
    CHECK("a2"_n < "a10"_n);
    CHECK("a10"_n < "b"_n);
    CHECK(Name::parse("x07").str() == "x07"); // leading zero stays in the base
    CHECK_THROWS_AS(Name::parse("_0"), ParseError);
    CHECK_THROWS_AS(Name::parse("A"), ParseError);
    CHECK(Name::parse("_3", true) == Name::machine(3));
    CHECK(Name::parse("_p2", true) == Name::ordinal(2));
}

TEST_CASE("transposition") {
    FinPerm t = transposition("a"_n, "b"_n);
    CHECK(t("a"_n) == "b"_n);
    CHECK(t("b"_n) == "a"_n);
    CHECK(t("c"_n) == "c"_n);
    CHECK(transposition("a"_n, "a"_n).is_identity());
    CHECK(t.moved().size() == 2);
}

TEST_CASE("composition and inverse") {
    FinPerm ab = transposition("a"_n, "b"_n), bc = transposition("b"_n, "c"_n);
    CHECK(perm_compose(ab, ab).is_identity());
    NameList carrier = {"a"_n, "b"_n, "c"_n, "d"_n};
    std::map<Name, Name> expect = pointwise(ab, bc, carrier);
    CHECK(perm_compose(ab, bc).moved() == expect);
    CHECK(expect == std::map<Name, Name>{{"a"_n, "b"_n}, {"b"_n, "c"_n}, {"c"_n, "a"_n}});
    // the other order gives the inverse cycle
    CHECK(perm_compose(bc, ab).moved() == std::map<Name, Name>{{"a"_n, "c"_n}, {"b"_n, "a"_n}, {"c"_n, "b"_n}});
    CHECK(perm_compose(ab, FinPerm{}) == ab);

    CHECK(perm_inverse(ab) == ab);
    FinPerm abc = cyc({"a", "b", "c"});
    CHECK(perm_inverse(abc).moved() == std::map<Name, Name>{{"b"_n, "a"_n}, {"c"_n, "b"_n}, {"a"_n, "c"_n}});
    CHECK(perm_inverse(FinPerm{}).is_identity());
    CHECK_THROWS_AS(FinPerm::from_map({{"a"_n, "b"_n}}), TypeViolation);
}

TEST_CASE("set action, support, separation") {
    FinPerm ab = transposition("a"_n, "b"_n);
    CHECK(perm_apply_set(ab, {"a"_n, "c"_n}) == NameSet{"b"_n, "c"_n});
    CHECK(perm_apply_set(FinPerm{}, {"a"_n, "b"_n}) == NameSet{"a"_n, "b"_n});
    CHECK(perm_apply_set(ab, {"a"_n, "b"_n}) == NameSet{"a"_n, "b"_n});
    CHECK(perm_support(ab) == NameSet{"a"_n, "b"_n});
    CHECK(perm_support(FinPerm{}).empty());
    CHECK(perm_support(cyc({"a", "b", "c"})) == NameSet{"a"_n, "b"_n, "c"_n});
    CHECK(separated({"a"_n}, {"b"_n}));
    CHECK_FALSE(separated({"a"_n, "b"_n}, {"b"_n, "c"_n}));
    CHECK(separated({}, {"a"_n, "b"_n}));
}

TEST_CASE("fresh names and enumeration") {
    CHECK(fresh_names({"a"_n, "b"_n}, 2) == NameList{Name::machine(0), Name::machine(1)});
    CHECK(fresh_names({Name::machine(0)}, 1) == NameList{Name::machine(1)});
    CHECK(fresh_names({}, 0).empty());
    CHECK(enumerate({"b"_n, "a"_n}) == NameList{"a"_n, "b"_n});
    CHECK(enumerate({}).empty());
    CHECK(enumerate({"a1"_n, "a"_n}) == NameList{"a"_n, "a1"_n});
}

TEST_CASE("group and action laws on random permutations") {
    Rng rng(101);
    NameList u = default_universe(6);
    for (int i = 0; i < 300; ++i) {
        FinPerm p = random_perm(rng, u), q = random_perm(rng, u), r = random_perm(rng, u);
        CHECK(perm_compose(perm_compose(p, q), r) == perm_compose(p, perm_compose(q, r)));
        CHECK(perm_compose(p, perm_inverse(p)).is_identity());
        CHECK(perm_compose(FinPerm{}, p) == p);
        CHECK(perm_compose(p, q).moved() == pointwise(p, q, u));
        NameSet a = random_subset(rng, u, 4), b = random_subset(rng, u, 4);
        CHECK(perm_apply_set(FinPerm{}, a) == a);
        CHECK(perm_apply_set(perm_compose(p, q), a) == perm_apply_set(p, perm_apply_set(q, a)));
        CHECK(separated(a, b) == separated(perm_apply_set(p, a), perm_apply_set(p, b)));
        for (auto& [k, v] : p.moved()) CHECK(k != v);
    }
}

TEST_CASE("fresh names avoid and do not repeat") {
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        NameSet avoid;
        for (std::size_t k = rng.below(6); k > 0; --k) avoid.insert(Name::machine(rng.below(8)));
        std::size_t n = rng.below(5);
        NameList f = fresh_names(avoid, n);
        CHECK(f.size() == n);
        CHECK(duplicate_free(f));
        for (auto& x : f) {
            CHECK(!avoid.count(x));
            CHECK(x.is_machine());
        }
    }
}
