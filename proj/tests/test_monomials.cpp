#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>

#include "qpg/monomials.hpp"
#include "qpg/qgroup.hpp"
#include "test_oracles.hpp"

using namespace qpg;

namespace {

// Brute-force rank oracle: expand every operator densely per exponent,
// flatten, row-normalize and run one SVD over the whole family.
int brute_rank(const std::vector<LaurentOperator>& ops, double rel_tol) {
    std::set<ExponentVec> exps;
    for (const auto& op : ops)
        for (const auto& e : op.exponents()) exps.insert(e);
    Eigen::Index grid = 1;
    for (int d : ops.front().trunc().fock_dims) grid *= d;
    const Eigen::Index block = grid * grid;
    Eigen::MatrixXcd m(ops.size(), static_cast<Eigen::Index>(exps.size()) * block);
    m.setZero();
    for (size_t i = 0; i < ops.size(); ++i) {
        auto dense = oracle::dense_of(ops[i]);
        Eigen::Index off = 0;
        for (const auto& e : exps) {
            auto it = dense.find(e);
            if (it != dense.end())
                m.row(i).segment(off, block) =
                    Eigen::Map<const Eigen::VectorXcd>(it->second.data(), block).transpose();
            off += block;
        }
        double norm = m.row(i).norm();
        if (norm > 0) m.row(i) /= norm;
    }
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] == 0.0) return 0;
    int rank = 0;
    for (Eigen::Index s = 0; s < sv.size(); ++s)
        if (sv[s] >= rel_tol * sv[0]) ++rank;
    return rank;
}

// the 18-element family: i1, k1 <= 1 with i1 k1 = 0, j1 <= 1, |j2| <= 1
std::vector<LaurentOperator> small_family(double q, int dim) {
    auto gens = sphere_generators(1, q, dim);
    std::vector<LaurentOperator> fam;
    for (int i1 = 0; i1 <= 1; ++i1)
        for (int k1 = 0; k1 <= 1; ++k1) {
            if (i1 * k1 != 0) continue;
            for (int j1 = 0; j1 <= 1; ++j1)
                for (int j2 = -1; j2 <= 1; ++j2)
                    fam.push_back(monomial_p(1, {i1}, {j1, j2}, {k1}, gens));
        }
    return fam;
}

} // namespace

TEST_CASE("index constraint validation") {
    auto gens = sphere_generators(1, 2.0, 6);
    CHECK_THROWS_AS(monomial_p(1, {1}, {0, 0}, {1}, gens), ConstraintError); // i1 k1 != 0
    CHECK_THROWS_AS(monomial_p(1, {-1}, {0, 0}, {0}, gens), ConstraintError);
    CHECK_THROWS_AS(monomial_p(1, {0, 0}, {0, 0}, {0}, gens), ConstraintError);

    auto z = projective_generators(2, 2.0, 6);
    CHECK_THROWS_AS(monomial_P(2, {0, 0}, {1, 2}, {3, 3}, z), ConstraintError); // i not nonincreasing
    CHECK_THROWS_AS(monomial_P(2, {0, 0}, {2, 1}, {3, 2}, z), ConstraintError); // j not nondecreasing
    CHECK_THROWS_AS(monomial_P(2, {0, 0}, {2, 2}, {2, 3}, z), ConstraintError); // sets intersect
    CHECK_THROWS_AS(monomial_P(2, {0, 0}, {2}, {1, 3}, z), ConstraintError);    // length mismatch
    CHECK_THROWS_AS(monomial_P(2, {0, 0}, {4}, {1}, z), ConstraintError);       // out of range
}

TEST_CASE("edge monomials") {
    auto gens = sphere_generators(1, 2.0, 6);
    const TruncationSpec& tr = gens[0].trunc();
    CHECK(max_interior_diff(monomial_p(1, {0}, {0, 0}, {0}, gens),
                            LaurentOperator::identity(tr), 0) == 0.0);
    CHECK(max_interior_diff(monomial_p(1, {1}, {0, 0}, {0}, gens), adjoint(gens[0]), 0) == 0.0);
    CHECK(max_interior_diff(monomial_p(1, {0}, {0, -2}, {0}, gens),
                            adjoint(gens[1]) * adjoint(gens[1]), 0) == 0.0);

    auto z = projective_generators(1, 2.0, 6);
    const TruncationSpec& ztr = z[0][0].trunc();
    CHECK(max_interior_diff(monomial_P(1, {0}, {}, {}, z), LaurentOperator::identity(ztr), 0) ==
          0.0);
    CHECK(max_interior_diff(monomial_P(1, {1}, {}, {}, z), z[0][0], 0) == 0.0);
    CHECK(max_interior_diff(monomial_P(1, {0}, {2, 2}, {1, 1}, z), z[1][0] * z[1][0], 0) == 0.0);
}

TEST_CASE("rank of degenerate and trivial families") {
    TruncationSpec tr({8}, 0);
    LaurentOperator one = LaurentOperator::identity(tr);
    LaurentOperator g = embed_slot(gamma_matrix(2.0, 8), 0, tr);

    GramRank dup = gram_rank({g, g}, 0, 1e-12);
    CHECK(dup.rank == 1);
    CHECK(dup.count == 2);

    GramRank two = gram_rank({one, g}, 0, 1e-12);
    CHECK(two.rank == 2);
    CHECK(two.smallest_kept > 0.0);

    GramRank zero = gram_rank({LaurentOperator::zero(tr)}, 0, 1e-12);
    CHECK(zero.rank == 0);

    CHECK_THROWS_AS(gram_rank({one, LaurentOperator::identity(TruncationSpec({6}, 0))}, 0, 1e-12),
                    ShapeError);
}

TEST_CASE("the 18 small sphere monomials are linearly independent") {
    const int dim = 16;
    for (double q : {1.3, 2.0, 3.0}) {
        auto fam = small_family(q, dim);
        REQUIRE(fam.size() == 18);
        // oracle first: dense SVD over the flattened family
        CHECK(brute_rank(fam, 1e-10) == 18);
        GramRank r = gram_rank(fam, 2, 1e-12);
        CHECK(r.count == 18);
        CHECK(r.rank == 18);
        CHECK(r.smallest_rel > 1e-10);
    }
}

TEST_CASE("rank agrees with the dense oracle on a mixed family") {
    const double q = 2.0;
    const int dim = 8;
    auto gens = sphere_generators(1, q, dim);
    std::vector<LaurentOperator> fam;
    fam.push_back(monomial_p(1, {0}, {0, 0}, {0}, gens));
    fam.push_back(monomial_p(1, {0}, {1, 0}, {0}, gens));
    fam.push_back(monomial_p(1, {0}, {2, 0}, {0}, gens));
    // a dependent row: 1 - y1 expressed through the family
    fam.push_back(fam[0] + Complex(-1.0, 0.0) * fam[1]);
    int oracle_rank = brute_rank(fam, 1e-10);
    GramRank r = gram_rank(fam, 2, 1e-10);
    CHECK(oracle_rank == 3);
    CHECK(r.rank == 3);
}
