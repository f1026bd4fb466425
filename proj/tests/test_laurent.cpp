#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "qpg/laurent.hpp"
#include "qpg/qgroup.hpp"
#include "test_oracles.hpp"

using namespace qpg;

namespace {

TruncationSpec two_slots(int d, int rank = 1) { return TruncationSpec({d, d}, rank); }

LaurentOperator monomial_times(const TruncationSpec& tr, const ExponentVec& e,
                               const SlotMatrix& m, int slot) {
    return LaurentOperator::torus_monomial(tr, e) * embed_slot(m, slot, tr);
}

} // namespace

TEST_CASE("truncation spec invariants") {
    CHECK_THROWS_AS(TruncationSpec({1, 4}, 0), ConstraintError);
    CHECK_THROWS_AS(TruncationSpec({4, 4}, -1), ConstraintError);
    CHECK_THROWS_AS(TruncationSpec({4, 4}, 0, 4), ConstraintError);
    TruncationSpec ok({4, 6}, 2, 3);
    CHECK(ok.grid_size() == 24);
    TruncationSpec scalar_only({}, 1);
    CHECK(scalar_only.grid_size() == 1);
}

TEST_CASE("additive inverse cancels structurally") {
    std::mt19937 rng(7);
    TruncationSpec tr = two_slots(5);
    SlotMatrix m = oracle::random_slot(rng, 5);
    LaurentOperator a = monomial_times(tr, {1}, m, 0);
    LaurentOperator sum = a + (-a);
    CHECK(sum.is_structurally_zero());
    CHECK(sum.terms().empty());
}

TEST_CASE("two-term sum keeps both exponents") {
    TruncationSpec tr = two_slots(4);
    LaurentOperator s = LaurentOperator::identity(tr) +
                        LaurentOperator::torus_monomial(tr, {1});
    CHECK(s.terms().size() == 2);
}

TEST_CASE("single-term product convolves exponents and composes matrices") {
    std::mt19937 rng(11);
    TruncationSpec tr = two_slots(5);
    SlotMatrix ma = oracle::random_slot(rng, 5);
    SlotMatrix mb = oracle::random_slot(rng, 5);
    LaurentOperator a = monomial_times(tr, {1}, ma, 0);
    LaurentOperator b = monomial_times(tr, {2}, mb, 1);
    LaurentOperator p = a * b;
    REQUIRE(p.terms().size() == 1);
    CHECK(p.terms().begin()->first == ExponentVec{3});
    std::map<ExponentVec, oracle::Dense> expect;
    expect.emplace(ExponentVec{3},
                   oracle::dense_of(a).begin()->second * oracle::dense_of(b).begin()->second);
    CHECK(oracle::dense_diff(oracle::dense_of(p), expect) <= 1e-14);
}

TEST_CASE("identity is neutral for random elements") {
    std::mt19937 rng(23);
    TruncationSpec tr = two_slots(4);
    LaurentOperator one = LaurentOperator::identity(tr);
    for (int rep = 0; rep < 10; ++rep) {
        LaurentOperator x = oracle::random_operator(rng, tr);
        CHECK(max_interior_diff(one * x, x, 0) == 0.0);
        CHECK(max_interior_diff(x * one, x, 0) == 0.0);
    }
}

TEST_CASE("gamma alpha equals q alpha gamma away from the top corner") {
    const double q = 2.0;
    const int dim = 8;
    TruncationSpec tr({dim}, 0);
    LaurentOperator a = embed_slot(alpha_matrix(q, dim), 0, tr);
    LaurentOperator g = embed_slot(gamma_matrix(q, dim), 0, tr);
    CHECK(max_interior_diff(g * a, Complex(q, 0.0) * (a * g), 1) <= 1e-12);
    // frozen from the weight formulas: entry (j-1, j) is q^{-(j-1)} sqrt(1-q^{-2j})
    for (const auto& e : entries_within(g * a, {dim - 1})) {
        int j = e.col[0];
        REQUIRE(e.row[0] == j - 1);
        CHECK(std::abs(e.value.real() -
                       std::pow(q, -(j - 1.0)) * std::sqrt(1.0 - std::pow(q, -2.0 * j))) <= 1e-15);
    }
}

TEST_CASE("adjoint is an involution and anti-multiplicative, exactly") {
    std::mt19937 rng(37);
    TruncationSpec tr = two_slots(4, 2);
    for (int rep = 0; rep < 12; ++rep) {
        LaurentOperator a = oracle::random_operator(rng, tr);
        LaurentOperator b = oracle::random_operator(rng, tr);
        CHECK(max_interior_diff(adjoint(adjoint(a)), a, 0) == 0.0);
        CHECK(max_interior_diff(adjoint(a * b), adjoint(b) * adjoint(a), 0) == 0.0);
    }
}

TEST_CASE("adjoint of a diagonal real monomial flips the exponent only") {
    const int dim = 6;
    TruncationSpec tr({dim}, 1);
    LaurentOperator tg = monomial_times(tr, {1}, gamma_matrix(2.0, dim), 0);
    LaurentOperator ag = adjoint(tg);
    REQUIRE(ag.terms().size() == 1);
    CHECK(ag.terms().begin()->first == ExponentVec{-1});
    std::map<ExponentVec, oracle::Dense> expect;
    expect.emplace(ExponentVec{-1}, oracle::gamma_dense(2.0, dim));
    CHECK(oracle::dense_diff(oracle::dense_of(ag), expect) == 0.0);
    LaurentOperator z = LaurentOperator::zero(tr);
    CHECK(adjoint(z).is_structurally_zero());
}

TEST_CASE("embed_slot places factors and reports errors") {
    const double q = 2.0;
    TruncationSpec tr({4, 4}, 0);
    SlotMatrix g = gamma_matrix(q, 4);
    std::map<ExponentVec, oracle::Dense> expect;
    expect.emplace(ExponentVec{},
                   oracle::kron(oracle::gamma_dense(q, 4), oracle::Dense::Identity(4, 4)));
    CHECK(oracle::dense_diff(oracle::dense_of(embed_slot(g, 0, tr)), expect) == 0.0);

    CHECK(max_interior_diff(embed_slot(SlotMatrix::identity(4), 1, tr),
                            LaurentOperator::identity(tr), 0) == 0.0);

    LaurentOperator ea = embed_slot(alpha_matrix(q, 4), 1, tr);
    bool found = false;
    for (const auto& ent : entries_within(ea, {3, 3})) {
        if (ent.row == std::vector<int>{0, 0} && ent.col == std::vector<int>{0, 1}) {
            found = true;
            CHECK(std::abs(ent.value.real() - std::sqrt(1.0 - std::pow(q, -2.0))) <= 1e-15);
        }
    }
    CHECK(found);

    CHECK_THROWS_AS(embed_slot(g, 2, tr), IndexError);
    CHECK_THROWS_AS(embed_slot(gamma_matrix(q, 5), 0, tr), ShapeError);
}

TEST_CASE("interior equality semantics at the truncation boundary") {
    const double q = 2.0;
    const int dim = 8;
    TruncationSpec tr({dim}, 0);
    LaurentOperator a = embed_slot(alpha_matrix(q, dim), 0, tr);
    LaurentOperator g = embed_slot(gamma_matrix(q, dim), 0, tr);
    LaurentOperator one = LaurentOperator::identity(tr);

    LaurentOperator uu_star = a * adjoint(a) + Complex(1.0 / (q * q), 0.0) * (g * adjoint(g));
    LaurentOperator u_star_u = adjoint(a) * a + adjoint(g) * g;

    CHECK(interior_equal(u_star_u, one, 0, 1e-12));      // column relation is exact
    CHECK_FALSE(interior_equal(uu_star, one, 0, 1e-12)); // boundary defect at the top level
    CHECK(interior_equal(uu_star, one, 2, 1e-12));
    CHECK(interior_equal(uu_star, uu_star, 3, 0.0));

    std::mt19937 rng(5);
    LaurentOperator x = oracle::random_operator(rng, TruncationSpec({5, 5}, 1));
    CHECK(interior_equal(x, x, 2, 0.0));
    CHECK_THROWS_AS(max_interior_diff(x, uu_star, 0), ShapeError);
}

TEST_CASE("norms") {
    TruncationSpec tr({4}, 1);
    CHECK(frobenius_norm(LaurentOperator::zero(tr)) == 0.0);
    CHECK(std::abs(frobenius_norm(LaurentOperator::identity(tr)) - 2.0) <= 1e-15);
    TruncationSpec tg({8}, 0);
    LaurentOperator g = embed_slot(gamma_matrix(2.0, 8), 0, tg);
    CHECK(std::abs(op_norm_estimate(g) - 1.0) <= 1e-9);
    CHECK(op_norm_estimate(LaurentOperator::zero(tg)) == 0.0);

    // factor-free operators reduce to plain scalars
    TruncationSpec ts({}, 1);
    LaurentOperator sc = LaurentOperator::scalar(ts, Complex(-2.5, 0.0));
    CHECK(std::abs(op_norm_estimate(sc) - 2.5) <= 1e-9);
    CHECK(std::abs(frobenius_norm(sc) - 2.5) <= 1e-15);
}

TEST_CASE("ring axioms on random small elements") {
    std::mt19937 rng(101);
    TruncationSpec tr = two_slots(4, 1);
    for (int rep = 0; rep < 8; ++rep) {
        LaurentOperator a = oracle::random_operator(rng, tr);
        LaurentOperator b = oracle::random_operator(rng, tr);
        LaurentOperator c = oracle::random_operator(rng, tr);
        CHECK(max_interior_diff((a * b) * c, a * (b * c), 0) <= 1e-12);
        CHECK(max_interior_diff(a * (b + c), a * b + a * c, 0) <= 1e-12);
        CHECK(max_interior_diff((a + b) * c, a * c + b * c, 0) <= 1e-12);
    }
}

TEST_CASE("product degree bound and exponent Minkowski containment") {
    std::mt19937 rng(55);
    TruncationSpec tr = two_slots(6, 1);
    for (int rep = 0; rep < 8; ++rep) {
        LaurentOperator a = oracle::random_operator(rng, tr);
        LaurentOperator b = oracle::random_operator(rng, tr);
        LaurentOperator p = a * b;
        for (int slot = 0; slot < 2; ++slot)
            CHECK(fock_degree(p, slot) <= fock_degree(a, slot) + fock_degree(b, slot));
        std::set<ExponentVec> sums;
        for (const auto& ea : a.exponents())
            for (const auto& eb : b.exponents()) {
                ExponentVec s(ea.size());
                for (size_t i = 0; i < s.size(); ++i) s[i] = ea[i] + eb[i];
                sums.insert(s);
            }
        for (const auto& e : p.exponents()) CHECK(sums.count(e) == 1);
    }
}

TEST_CASE("interior values are stable under enlarging the cutoff") {
    const double q = 2.0;
    const int d_small = 8;
    const int d_large = 12;
    auto small_gens = sphere_generators(2, q, d_small);
    auto large_gens = sphere_generators(2, q, d_large);
    const int margin = sphere_word(2).length();
    std::vector<int> hi(2, d_small - 1 - margin);
    for (size_t m = 0; m < small_gens.size(); ++m) {
        LaurentOperator prod_s = adjoint(small_gens[m]) * small_gens[m];
        LaurentOperator prod_l = adjoint(large_gens[m]) * large_gens[m];
        auto es = entries_within(prod_s, hi);
        auto el = entries_within(prod_l, hi);
        REQUIRE(es.size() == el.size());
        for (size_t i = 0; i < es.size(); ++i) {
            CHECK(es[i].row == el[i].row);
            CHECK(es[i].col == el[i].col);
            CHECK(es[i].value == el[i].value); // exact: the same weights enter
        }
    }
}

TEST_CASE("dense oracle confirms products of random elements") {
    std::mt19937 rng(77);
    TruncationSpec tr = two_slots(5, 1);
    for (int rep = 0; rep < 6; ++rep) {
        LaurentOperator a = oracle::random_operator(rng, tr);
        LaurentOperator b = oracle::random_operator(rng, tr);
        auto da = oracle::dense_of(a);
        auto db = oracle::dense_of(b);
        std::map<ExponentVec, oracle::Dense> prod;
        for (const auto& [ea, ma] : da)
            for (const auto& [eb, mb] : db) {
                ExponentVec e(ea.size());
                for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                auto [it, fresh] = prod.try_emplace(e, ma * mb);
                if (!fresh) it->second += ma * mb;
            }
        CHECK(oracle::dense_diff(oracle::dense_of(a * b), prod) <= 1e-13);
    }
}

TEST_CASE("shape errors on mixed truncations") {
    TruncationSpec t1({4}, 1);
    TruncationSpec t2({5}, 1);
    LaurentOperator a = LaurentOperator::identity(t1);
    LaurentOperator b = LaurentOperator::identity(t2);
    CHECK_THROWS_AS(a + b, ShapeError);
    CHECK_THROWS_AS(a * b, ShapeError);
    CHECK_THROWS_AS(LaurentOperator::torus_monomial(t1, {1, 2}), ShapeError);
}
