#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "qpg/conv.hpp"
#include "qpg/conv_io.hpp"

using namespace qpg;

namespace {

GroupoidMorphism make(std::vector<int> aux, std::vector<int> x, std::vector<Level> w) {
    GroupoidMorphism g;
    g.aux = std::move(aux);
    g.x = std::move(x);
    g.w.c = std::move(w);
    return g;
}

ConvElement random_element(std::mt19937& rng, const GroupoidSpec& spec,
                           const std::vector<GroupoidMorphism>& arrows, int support) {
    std::uniform_int_distribution<size_t> pick(0, arrows.size() - 1);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    ConvElement e = conv_zero(spec);
    for (int t = 0; t < support; ++t)
        e = conv_add(e, conv_delta(spec, arrows[pick(rng)], Complex(uni(rng), uni(rng))));
    return e;
}

} // namespace

TEST_CASE("unit deltas act as a local identity") {
    GroupoidSpec spec = GroupoidSpec::toeplitz(1, 3, 2);
    auto arrows = enumerate_morphisms(spec);
    ConvElement unit_sum = conv_zero(spec);
    for (const auto& pt : enumerate_units(spec))
        unit_sum = conv_add(unit_sum, conv_delta(spec, unit_at(spec, pt)));
    std::mt19937 rng(3);
    for (int rep = 0; rep < 6; ++rep) {
        ConvElement f = random_element(rng, spec, arrows, 5);
        CHECK(conv_equal(convolve(unit_sum, f), f, 0.0));
        CHECK(conv_equal(convolve(f, unit_sum), f, 0.0));
    }
}

TEST_CASE("involution is an involution") {
    GroupoidSpec spec = GroupoidSpec::sphere_sub(2, 3, 2);
    auto arrows = enumerate_morphisms(spec);
    std::mt19937 rng(5);
    for (int rep = 0; rep < 6; ++rep) {
        ConvElement f = random_element(rng, spec, arrows, 6);
        CHECK(conv_equal(involution(involution(f)), f, 0.0));
    }
}

TEST_CASE("involution reverses convolution") {
    GroupoidSpec spec = GroupoidSpec::toeplitz(1, 3, 2);
    // keep supports on short arrows so every product stays inside the box
    std::vector<GroupoidMorphism> arrows;
    for (const auto& g : enumerate_morphisms(spec))
        if (std::abs(g.x[0]) <= 1) arrows.push_back(g);
    std::mt19937 rng(29);
    for (int rep = 0; rep < 6; ++rep) {
        ConvElement f = random_element(rng, spec, arrows, 4);
        ConvElement g = random_element(rng, spec, arrows, 4);
        CHECK(conv_equal(involution(convolve(f, g)), convolve(involution(g), involution(f)),
                         1e-14));
    }
}

TEST_CASE("matrix units over the finite points") {
    GroupoidSpec spec = GroupoidSpec::toeplitz(1, 4, 3);
    auto unit = [&](int a, int b) { return conv_delta(spec, make({}, {a - b}, {b})); };
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c) {
                if (std::abs(a - c) > 3) continue;
                ConvElement prod = convolve(unit(a, b), unit(b, c));
                CHECK(conv_equal(prod, unit(a, c), 0.0));
            }
    // mismatched middle index annihilates
    CHECK(convolve(unit(0, 1), unit(2, 3)).terms.empty());
}

TEST_CASE("convolution overflow is reported") {
    GroupoidSpec spec = GroupoidSpec::toeplitz(1, 6, 2);
    ConvElement a = conv_delta(spec, make({}, {2}, {2}));
    ConvElement b = conv_delta(spec, make({}, {2}, {0}));
    CHECK_THROWS_AS(convolve(a, b), OverflowError);
}

TEST_CASE("restriction is a *-homomorphism with the complement span as kernel") {
    GroupoidSpec spec = GroupoidSpec::sphere_sub(2, 3, 2);
    StratumMask mask{false, true};
    ExactnessReport rep = verify_exact_sequence(spec, mask);
    CHECK(rep.ok());
    CHECK(rep.total_arrows == rep.stratum_arrows + rep.kernel_arrows); // rank-nullity at truncation
    CHECK(rep.kernel_arrows > 0);
    CHECK(rep.stratum_arrows > 0);

    auto basis = complement_ideal_basis(spec, mask);
    CHECK(static_cast<std::int64_t>(basis.size()) == rep.kernel_arrows);
    for (const auto& g : basis) CHECK_FALSE(point_in_stratum(source_point(g), mask));

    // restriction of something supported inside the stratum is itself
    auto arrows = enumerate_morphisms(spec);
    for (const auto& g : arrows) {
        if (!point_in_stratum(source_point(g), mask)) continue;
        ConvElement d = conv_delta(spec, g);
        CHECK(conv_equal(restrict_closed(d, mask), d, 0.0));
    }
    CHECK_THROWS_AS(restrict_closed(conv_zero(spec), StratumMask{true}), ConstraintError);
}

TEST_CASE("lower sphere subquotient sits inside the next one") {
    EmbeddingReport rep = verify_sphere_embedding(2, 3, 2);
    CHECK(rep.ok());
    CHECK(rep.mapped == rep.target);
    CHECK(rep.mapped > 0);
    EmbeddingReport rep3 = verify_projective_embedding(3, 3, 2);
    CHECK(rep3.ok());
}

TEST_CASE("open stratum of the sphere subquotient is the augmented pair groupoid") {
    for (int n : {1, 2}) CHECK(verify_open_stratum_structure(n, 3, 2));
}

TEST_CASE("projective strata dimensions") {
    auto strata = composition_series(GroupoidSpec::projective_sub(2, 3, 2));
    REQUIRE(strata.size() == 3);
    CHECK(strata[0].finite_coords == 0);
    CHECK(strata[0].arrows == 1);
    CHECK(strata[0].matrix_units_ok);
    CHECK(strata[1].arrows == 9);
    CHECK(strata[1].matrix_units_ok);
    CHECK(strata[2].arrows == 81);
    CHECK(strata[2].matrix_units_ok);
    CHECK_THROWS_AS(composition_series(GroupoidSpec::toeplitz(1, 3, 2)), ConstraintError);
}

TEST_CASE("podles strata: two compact blocks and a circle") {
    const int K = 3, B = 2;
    GroupoidSpec spec = GroupoidSpec::podles_sub(K, B);
    auto arrows = enumerate_morphisms(spec);
    std::int64_t block1 = 0, block2 = 0, circle = 0;
    for (const auto& g : arrows) {
        bool i1 = is_inf(g.w.c[0]);
        bool i2 = is_inf(g.w.c[1]);
        if (i1 && i2)
            ++circle;
        else if (i1)
            ++block1;
        else
            ++block2;
    }
    CHECK(block1 == K * K);
    CHECK(block2 == K * K);
    CHECK(circle == 2 * B + 1);

    // circle stratum composes like the group algebra of the integers
    auto d = [&](int j) { return conv_delta(spec, make({}, {j, j}, {kInfLevel, kInfLevel})); };
    CHECK(conv_equal(convolve(d(1), d(-2)), d(-1), 0.0));
    CHECK(conv_equal(convolve(d(1), d(1)), d(2), 0.0));
    CHECK(conv_equal(involution(d(2)), d(-2), 0.0));

    ExactnessReport rep = verify_exact_sequence(spec, StratumMask{true, true});
    CHECK(rep.ok());
    CHECK(rep.kernel_arrows == 2 * K * K);
    CHECK(rep.stratum_arrows == 2 * B + 1);
}

TEST_CASE("element serialization round trip") {
    GroupoidSpec spec = GroupoidSpec::sphere_sub(2, 3, 2);
    auto arrows = enumerate_morphisms(spec);
    std::mt19937 rng(17);
    for (int rep = 0; rep < 5; ++rep) {
        ConvElement f = random_element(rng, spec, arrows, 6);
        std::stringstream io;
        save_conv(f, io);
        ConvElement g = load_conv(io);
        CHECK(g.spec == f.spec);
        CHECK(conv_equal(f, g, 0.0));
    }

    std::string bad = R"({"format_version": 1,
        "spec": {"kind": "projective", "n": 2, "K": 3, "B": 2},
        "terms": [{"aux": [], "x": [1, 0], "w": ["inf", 0], "re": 1.0, "im": 0.0}]})";
    std::stringstream s(bad);
    CHECK_THROWS_AS(load_conv(s), ParseError); // non-member morphism
}
