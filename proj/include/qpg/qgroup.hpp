#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qpg/laurent.hpp"

namespace qpg {

// Deformation data: q > 1, nonstandard parameter c >= 0 (c = 0 is the
// standard case), matrix size n+1.
struct DeformationParams {
    double q = 2.0;
    double c = 1.0;
    int n = 2;

    void validate() const {
        if (!(q > 1.0)) throw ConstraintError("q must exceed 1");
        if (c < 0.0) throw ConstraintError("c must be nonnegative");
        if (n < 1) throw ConstraintError("n must be positive");
    }
};

// Weighted-shift weights of the basic representation on one shift space:
// the lowering weight sqrt(1 - q^(-2j)) and the diagonal weight q^(-j).
double shift_weight(double q, int j);
double diag_weight(double q, int j);

SlotMatrix alpha_matrix(double q, int dim);      // e_j -> sqrt(1-q^(-2j)) e_{j-1}
SlotMatrix gamma_matrix(double q, int dim);      // e_j -> q^(-j) e_j
SlotMatrix alpha_star_matrix(double q, int dim); // adjoint of alpha (top entry truncated)

// The 2x2 generator block [[alpha, -q^{-1} gamma], [gamma, alpha*]].
std::array<std::array<SlotMatrix, 2>, 2> pi0_block(double q, int dim);

// One tensor-position factor of a representation word.
struct FactorSpec {
    enum class Kind { Fundamental, TorusChar, Counit };
    Kind kind = Kind::Counit;
    int index = 0;                  // Fundamental: 1..n
    int torus_vars = 0;             // TorusChar: fresh torus variables introduced
    std::vector<ExponentVec> diag;  // TorusChar: exponent per diagonal entry (size n+1)

    static FactorSpec fundamental(int i);
    static FactorSpec torus_char(int vars, std::vector<ExponentVec> diag);
    static FactorSpec counit();

    bool operator==(const FactorSpec& o) const;
};

// diag(t_1, ..., t_n, (t_1...t_n)^{-1}) on n fresh variables
FactorSpec tau_char(int n);
// diag(1, ..., 1, t) on one fresh variable
FactorSpec tau_prime_char(int n);
// diag(1, ..., 1, (t_1^2 t_2...t_n)^{-1}) on n fresh variables
FactorSpec tau_dprime_char(int n);

// Ordered factor list encoding a composite representation of the (n+1)x(n+1)
// generator matrix via iterated comultiplication.
struct RepWord {
    int n = 1;
    std::vector<FactorSpec> factors;

    void validate() const;
    int length() const { return static_cast<int>(factors.size()); }
    int torus_rank() const;
    int fock_slots() const;

    bool operator==(const RepWord& o) const { return n == o.n && factors == o.factors; }
};

RepWord standard_long_word(int n); // torus char + letters 1 21 321 ... n..21
RepWord sphere_word(int n);        // diagonal char + letters n..21
RepWord projective_word(int n);    // letters n..21, no torus slot
RepWord nonstandard_word(int n);   // torus char + letters n..212..n
// letters n..32 3..n with the (t_1^2 t_2..t_n)^{-1} character; symbol word of
// the quotient map onto the lower-dimensional sphere algebra
RepWord quotient_symbol_word(int n);

// Replace the two middle Fock letters of nonstandard_word(n) by counit slots
// (each scalarizes its factor: alpha -> 1, gamma -> 0); the resulting word has
// 2n-3 Fock slots.
RepWord rho_tilde_word(const RepWord& word, int n);

// (n+1)x(n+1) matrix of operators; indices are 1-based as in u_{ij}.
class OpMatrix {
public:
    OpMatrix(int size, const LaurentOperator& fill) : size_(size), ops_(size * size, fill) {}
    int size() const { return size_; }
    const LaurentOperator& at(int i, int j) const { return ops_[idx(i, j)]; }
    LaurentOperator& at(int i, int j) { return ops_[idx(i, j)]; }

private:
    int size_;
    std::vector<LaurentOperator> ops_;
    int idx(int i, int j) const {
        if (i < 1 || i > size_ || j < 1 || j > size_) throw IndexError("matrix index out of range");
        return (i - 1) * size_ + (j - 1);
    }
};

// Matrix of one factor of the word: entry (j,k) is the image of u_{jk} under
// that factor, embedded at its tensor slot.
OpMatrix factor_matrix(const FactorSpec& spec, int n, double q, const TruncationSpec& trunc,
                       int slot, int torus_offset);

// Image of the whole generator matrix under the composite representation,
// realized as the entrywise-tensor product of the factor matrices.
OpMatrix rep_matrix(const RepWord& word, double q, int dim);

LaurentOperator rep_generator(const RepWord& word, double q, int dim, int i, int j);

// Truncation on which rep_matrix(word, q, dim) lives.
TruncationSpec word_trunc(const RepWord& word, int dim);

// Generator families.
std::vector<LaurentOperator> sphere_generators(int n, double q, int dim);

// Z with Z[i][j] = image of u*_{n+1,i} u_{n+1,j} under the torus-free word.
std::vector<std::vector<LaurentOperator>> projective_generators(int n, double q, int dim);

struct NonstandardFamily {
    std::vector<LaurentOperator> x;               // x_i = sqrt(c) u_{1,i} + u_{n+1,i}
    std::vector<std::vector<LaurentOperator>> y;  // y[i][j] = x_i* x_j
};
NonstandardFamily nonstandard_generators(int n, double q, double c, int dim);
// Same combination applied to an already-built generator matrix (used for
// collapsed words).
NonstandardFamily nonstandard_family_from(const OpMatrix& m, int n, double c);

// Direct tensor constructions, no comultiplication; cross-checked against
// rep_generator.
LaurentOperator closed_form_sphere_image(int n, int i, double q, int dim);
LaurentOperator closed_form_nonstandard_image(int n, int i, double q, int dim);

// Decompose a torus exponent as t_1^l (t_2...t_n)^m; fails when the trailing
// exponents are not all equal.  For rank 1, m = 0.
std::optional<std::pair<int, int>> torus_lm(const ExponentVec& e);

} // namespace qpg
