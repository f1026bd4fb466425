#pragma once

#include <vector>

#include "qpg/laurent.hpp"

namespace qpg {

// Ordered sphere monomial
//   (u*_{n+1,n})^{i_n} ... (u*_{n+1,1})^{i_1} y_1^{j_1} ... y_n^{j_n}
//   y_{n+1}^{j_{n+1}} (u_{n+1,1})^{k_1} ... (u_{n+1,n})^{k_n}
// with y_m = u_{n+1,m} u*_{n+1,m}; j.back() may be negative (adjoint power of
// the last generator).  Requires i_m k_m = 0 for every m <= n.
LaurentOperator monomial_p(int n, const std::vector<int>& i_pow, const std::vector<int>& j_pow,
                           const std::vector<int>& k_pow,
                           const std::vector<LaurentOperator>& sphere_gens);

// Ordered projective monomial z_11^{r_1} ... z_nn^{r_n} z_{i_1 j_1} ... z_{i_m j_m}:
// iseq nonincreasing, jseq nondecreasing, index sets disjoint.
LaurentOperator monomial_P(int n, const std::vector<int>& r_pow, const std::vector<int>& iseq,
                           const std::vector<int>& jseq,
                           const std::vector<std::vector<LaurentOperator>>& z);

struct GramRank {
    int rank = 0;
    int count = 0;
    double largest = 0.0;       // largest singular value overall
    double smallest_kept = 0.0; // smallest kept singular value overall
    double smallest_rel = 0.0;  // smallest kept value relative to its block scale
};

// Numerical rank of the family: operators are flattened over interior entries
// (one block per torus exponent), and the flattened matrix splits into
// orthogonal blocks of operators sharing coordinates.  Within each block,
// singular values below tol times the block's largest are dropped; blocks are
// judged at their own scale because honest blocks of high-degree monomials
// sit many orders of magnitude below the family's leading block.
GramRank gram_rank(const std::vector<LaurentOperator>& ops, int margin, double tol);

} // namespace qpg
