#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "qpg/trunc.hpp"

namespace qpg {

using Complex = std::complex<double>;
using ExponentVec = std::vector<int>;

// One diagonal band of a single Fock factor: entry (col+band, col) = w[col].
// Weights outside the valid column window are kept at exactly zero.
struct BandedFactor {
    int band = 0;
    std::vector<Complex> w;

    static BandedFactor identity(int dim);
    static BandedFactor zero(int dim);
    bool is_structurally_zero() const;
};

// coeff * (factors[0] ⊗ factors[1] ⊗ ... ), each factor single-banded.
struct ProductTerm {
    Complex coeff{1.0, 0.0};
    std::vector<BandedFactor> factors;
};

// Finite sum of product terms on a fixed truncated tensor product.  Sums and
// compositions stay in this form; equal-structure terms are merged, so the
// stored list is canonical up to value-level cancellations.
struct FockOperator {
    std::vector<ProductTerm> terms;

    bool empty() const { return terms.empty(); }
};

// Compose two banded factors (second operand applied first) on dimension dim.
BandedFactor compose_factors(const BandedFactor& outer, const BandedFactor& inner, int dim);
BandedFactor adjoint_factor(const BandedFactor& f, int dim);

void merge_product_terms(std::vector<ProductTerm>& terms);

FockOperator fock_add(const FockOperator& a, const FockOperator& b);
FockOperator fock_mul(const FockOperator& a, const FockOperator& b, const std::vector<int>& dims);
FockOperator fock_adjoint(const FockOperator& a, const std::vector<int>& dims);
FockOperator fock_scale(Complex s, const FockOperator& a);

// Largest |entry| of a over the interior block: every row and column index of
// every factor at most dims[a]-1-margin.
double fock_max_interior_abs(const FockOperator& a, const std::vector<int>& dims, int margin);
double fock_frobenius_sq(const FockOperator& a, const std::vector<int>& dims);

// Single-factor sparse matrix, stored by diagonal bands.  Input type for
// embed_slot and the building block for the shift generators.
struct SlotMatrix {
    int dim = 0;
    std::map<int, std::vector<Complex>> bands;

    SlotMatrix() = default;
    explicit SlotMatrix(int d) : dim(d) {}

    static SlotMatrix identity(int dim);
    void set(int row, int col, Complex v);
    Complex at(int row, int col) const;
    SlotMatrix scaled(Complex s) const;
    SlotMatrix adjoint() const;
};

// A COO entry of the expanded operator (multi-index rows/columns).
struct OperatorEntry {
    ExponentVec exponent;
    std::vector<int> row;
    std::vector<int> col;
    Complex value;
};

// Element of C(T^p) ⊗ B(truncated Fock tensor product): a finite map from
// torus exponent vectors to Fock operators.  Immutable value type; all
// operations are pure.
class LaurentOperator {
public:
    LaurentOperator() = default;
    explicit LaurentOperator(TruncationSpec trunc) : trunc_(std::move(trunc)) {}

    static LaurentOperator zero(const TruncationSpec& trunc);
    static LaurentOperator identity(const TruncationSpec& trunc);
    static LaurentOperator scalar(const TruncationSpec& trunc, Complex value);
    // identity matrix part carrying the torus monomial t^e
    static LaurentOperator torus_monomial(const TruncationSpec& trunc, const ExponentVec& e);
    static LaurentOperator from_terms(TruncationSpec trunc,
                                      std::map<ExponentVec, FockOperator> terms);

    const TruncationSpec& trunc() const { return trunc_; }
    const std::map<ExponentVec, FockOperator>& terms() const { return terms_; }
    bool is_structurally_zero() const { return terms_.empty(); }

    std::vector<ExponentVec> exponents() const;
    const FockOperator* fock_term(const ExponentVec& e) const;

    friend LaurentOperator operator+(const LaurentOperator& a, const LaurentOperator& b);
    friend LaurentOperator operator-(const LaurentOperator& a, const LaurentOperator& b);
    friend LaurentOperator operator*(const LaurentOperator& a, const LaurentOperator& b);
    friend LaurentOperator operator*(Complex s, const LaurentOperator& a);
    LaurentOperator operator-() const { return Complex(-1.0, 0.0) * *this; }

private:
    TruncationSpec trunc_;
    std::map<ExponentVec, FockOperator> terms_;

    void insert_term(const ExponentVec& e, FockOperator f);
};

LaurentOperator adjoint(const LaurentOperator& a);

// Place a single-factor matrix in one tensor slot (identity elsewhere,
// torus exponent zero).
LaurentOperator embed_slot(const SlotMatrix& op, int slot, const TruncationSpec& trunc);

// Truncation-aware comparison: true iff for every exponent the interior
// entries of a and b differ by at most tol in absolute value.
bool interior_equal(const LaurentOperator& a, const LaurentOperator& b, int margin, double tol);
double max_interior_diff(const LaurentOperator& a, const LaurentOperator& b, int margin);

double frobenius_norm(const LaurentOperator& a);
// Largest singular value among the per-exponent matrices; a lower bound for
// the norm of the block-diagonal realization.
double op_norm_estimate(const LaurentOperator& a);

// Expand to COO entries with all row/column indices <= hi per factor
// (hi = fock dim - 1 gives the full matrix).  Sorted by (exponent, row, col).
std::vector<OperatorEntry> entries_within(const LaurentOperator& a, const std::vector<int>& hi);
std::vector<OperatorEntry> interior_entries(const LaurentOperator& a, int margin);

// Compare raw Fock parts that share dims but may come from operators with
// different torus ranks (used by quotient-side checks).
double fock_max_interior_diff(const FockOperator& a, const FockOperator& b,
                              const std::vector<int>& dims, int margin);

// Largest |band| over factor slot `slot` among stored terms (0 if none).
int fock_degree(const LaurentOperator& a, int slot);

} // namespace qpg
