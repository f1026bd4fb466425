#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "qpg/conv.hpp"
#include "qpg/groupoid.hpp"

using namespace qpg;

namespace {

GroupoidMorphism make(std::vector<int> aux, std::vector<int> x, std::vector<Level> w) {
    GroupoidMorphism g;
    g.aux = std::move(aux);
    g.x = std::move(x);
    g.w.c = std::move(w);
    return g;
}

// independent brute-force enumeration of the one-dimensional truncated
// transformation groupoid: every (x, w) with a valid translate
std::vector<GroupoidMorphism> brute_toeplitz1(int K, int B) {
    std::vector<GroupoidMorphism> out;
    std::vector<Level> ws;
    for (int w = 0; w < K; ++w) ws.push_back(w);
    ws.push_back(kInfLevel);
    for (Level w : ws)
        for (int x = -B; x <= B; ++x) {
            if (!is_inf(w) && (w + x < 0 || w + x >= K)) continue;
            out.push_back(make({}, {x}, {w}));
        }
    return out;
}

} // namespace

TEST_CASE("source and range bookkeeping") {
    GroupoidSpec spec = GroupoidSpec::toeplitz(1, 8, 6);
    GroupoidMorphism g = make({}, {2}, {3});
    GroupoidMorphism h = make({}, {3}, {0});
    CHECK(range_point(h) == ExtendedPoint{{3}});
    auto gh = compose(spec, g, h);
    REQUIRE(gh.has_value());
    CHECK(*gh == make({}, {5}, {0}));
    CHECK_FALSE(compose(spec, h, g).has_value());

    // units and inverses
    GroupoidMorphism u = unit_at(spec, source_point(g));
    auto gu = compose(spec, g, u);
    REQUIRE(gu.has_value());
    CHECK(*gu == g);
    auto ig = compose(spec, inverse(spec, g), g);
    REQUIRE(ig.has_value());
    CHECK(*ig == unit_at(spec, source_point(g)));

    // infinity absorbs translations
    GroupoidMorphism inf_arrow = make({}, {4}, {kInfLevel});
    CHECK(range_point(inf_arrow) == ExtendedPoint{{kInfLevel}});
}

TEST_CASE("composition overflow raises") {
    GroupoidSpec spec = GroupoidSpec::toeplitz(1, 8, 2);
    GroupoidMorphism g = make({}, {2}, {2});
    GroupoidMorphism h = make({}, {2}, {0});
    CHECK_THROWS_AS(compose(spec, g, h), OverflowError);
}

TEST_CASE("membership of the subgroupoids") {
    GroupoidSpec t2 = GroupoidSpec::projective_sub(2, 6, 3);
    for (Level k2 : {Level(0), Level(3), kInfLevel}) {
        CHECK(member(t2, make({}, {0, 0}, {kInfLevel, k2})));
        CHECK_FALSE(member(t2, make({}, {1, 0}, {kInfLevel, k2})));
    }
    CHECK(member(t2, make({}, {2, -2}, {0, 3})));
    CHECK_FALSE(member(t2, make({}, {2, -1}, {0, kInfLevel}))); // needs x2 = -x1

    GroupoidSpec f2 = GroupoidSpec::sphere_sub(2, 6, 3);
    CHECK(member(f2, make({1}, {-1, 0}, {kInfLevel, 5})));
    CHECK_FALSE(member(f2, make({1}, {0, 0}, {kInfLevel, 5})));
    CHECK_FALSE(member(f2, make({1}, {-1, 1}, {kInfLevel, 5}))); // tail must vanish

    GroupoidSpec gp = GroupoidSpec::podles_sub(6, 3);
    CHECK(member(gp, make({}, {1, 1}, {kInfLevel, 3})));
    CHECK_FALSE(member(gp, make({}, {1, 1}, {2, 3})));
    CHECK_FALSE(member(gp, make({}, {1, 2}, {kInfLevel, 3})));
}

TEST_CASE("canonical forms") {
    GroupoidSpec t2 = GroupoidSpec::projective_sub(2, 6, 3);
    GroupoidMorphism a = make({}, {1, -1}, {3, kInfLevel});
    CHECK(canonicalize(t2, a) == a);

    GroupoidMorphism b = make({}, {0, 0}, {kInfLevel, 5});
    CHECK(canonicalize(t2, b) == make({}, {0, 0}, {kInfLevel, kInfLevel}));
    CHECK(canonicalize(t2, canonicalize(t2, b)) == canonicalize(t2, b));

    GroupoidSpec f3 = GroupoidSpec::sphere_sub(3, 6, 3);
    GroupoidMorphism c = make({1}, {2, -3, 0}, {0, kInfLevel, 4});
    GroupoidMorphism cc = canonicalize(f3, c);
    CHECK(cc == make({1}, {2, -3, 0}, {0, kInfLevel, kInfLevel}));

    CHECK_THROWS_AS(canonicalize(t2, make({}, {1, 0}, {kInfLevel, 0})), ConstraintError);
}

TEST_CASE("enumeration counts against brute oracles") {
    // one-dimensional truncation: frozen from the independent oracle
    auto brute = brute_toeplitz1(2, 1);
    CHECK(brute.size() == 7);
    auto lib = enumerate_morphisms(GroupoidSpec::toeplitz(1, 2, 1));
    CHECK(lib.size() == brute.size());
    std::set<GroupoidMorphism> bs(brute.begin(), brute.end());
    for (const auto& g : lib) CHECK(bs.count(g) == 1);

    // units only at the smallest truncation
    auto units = enumerate_morphisms(GroupoidSpec::toeplitz(1, 1, 0));
    CHECK(units.size() == 2);

    auto podles_units = enumerate_morphisms(GroupoidSpec::podles_sub(1, 0));
    CHECK(podles_units.size() == 3);

    CHECK_THROWS_AS(enumerate_morphisms(GroupoidSpec::toeplitz(2, 3, 2), 10), CapError);
}

TEST_CASE("enumerated subquotients are duplicate-free canonical members") {
    for (const GroupoidSpec& spec :
         {GroupoidSpec::sphere_sub(2, 3, 2), GroupoidSpec::projective_sub(3, 3, 2)}) {
        auto arrows = enumerate_morphisms(spec);
        std::set<GroupoidMorphism> seen;
        for (const auto& g : arrows) {
            CHECK(member(spec, g));
            CHECK(canonicalize(spec, g) == g);
            CHECK(seen.insert(g).second);
        }
    }
}

TEST_CASE("canonical form is constant on equivalence classes") {
    GroupoidSpec spec = GroupoidSpec::projective_sub(3, 3, 2);
    std::vector<Level> levels{0, 1, 2, kInfLevel};
    for (const auto& g : enumerate_morphisms(spec)) {
        int first_inf = -1;
        for (size_t i = 0; i < g.w.c.size(); ++i)
            if (is_inf(g.w.c[i])) {
                first_inf = static_cast<int>(i);
                break;
            }
        if (first_inf < 0 || first_inf == 2) continue;
        // vary the tail after the first infinite coordinate
        for (Level v : levels) {
            GroupoidMorphism r = g;
            r.w.c[first_inf + 1] = v;
            if (!member(spec, r)) continue;
            CHECK(canonicalize(spec, r) == g);
        }
    }
}

TEST_CASE("groupoid laws on the truncations") {
    for (const GroupoidSpec& spec :
         {GroupoidSpec::toeplitz(1, 3, 2), GroupoidSpec::toeplitz(2, 2, 1),
          GroupoidSpec::augmented(1, 1, 3, 2), GroupoidSpec::augmented(2, 2, 2, 1),
          GroupoidSpec::podles_sub(2, 1)}) {
        AxiomReport rep = verify_groupoid_axioms(spec, true);
        CHECK(rep.ok());
        CHECK(rep.arrows > 0);
        CHECK(rep.composable_pairs > 0);
    }
}

TEST_CASE("subgroupoid closure and quotient descent") {
    const int K = 3, B = 2;
    for (int n : {1, 2, 3}) {
        CHECK(verify_closure(GroupoidSpec::sphere_sub(n, K, B)));
        CHECK(verify_closure(GroupoidSpec::projective_sub(n, K, B)));
    }
    CHECK(verify_closure(GroupoidSpec::podles_sub(K, B)));
    CHECK(verify_quotient_descent(GroupoidSpec::sphere_sub(2, K, B)));
    CHECK(verify_quotient_descent(GroupoidSpec::projective_sub(2, K, B)));
}

TEST_CASE("validity guards") {
    GroupoidSpec spec = GroupoidSpec::toeplitz(2, 3, 1);
    CHECK_FALSE(valid_morphism(spec, make({}, {2, 0}, {0, 0})));     // beyond bound
    CHECK_FALSE(valid_morphism(spec, make({}, {1, 0}, {2, 0})));     // translate escapes
    CHECK_FALSE(valid_morphism(spec, make({}, {1}, {0, 0})));        // length mismatch
    CHECK_FALSE(valid_morphism(spec, make({1}, {1, 0}, {0, 0})));    // unexpected aux
    CHECK(valid_morphism(spec, make({}, {1, -1}, {0, kInfLevel})));
    CHECK_THROWS_AS(GroupoidSpec::toeplitz(0, 3, 1), ConstraintError);
}
