#pragma once

#include <complex>
#include <map>

#include "qpg/groupoid.hpp"

namespace qpg {

using Complex = std::complex<double>;

// Finite-support element of the truncated groupoid convolution *-algebra.
// Keys are canonical morphisms of the spec.
struct ConvElement {
    GroupoidSpec spec;
    std::map<GroupoidMorphism, Complex> terms;
};

ConvElement conv_zero(const GroupoidSpec& spec);
ConvElement conv_delta(const GroupoidSpec& spec, const GroupoidMorphism& g, Complex v = 1.0);

ConvElement conv_add(const ConvElement& a, const ConvElement& b);
ConvElement conv_scale(Complex s, const ConvElement& a);

// (f * g)(c) = sum over c = c1 c2 of f(c1) g(c2); throws OverflowError when a
// product leaves the translation bound.
ConvElement convolve(const ConvElement& f, const ConvElement& g);

// f*(c) = conj(f(c^{-1}))
ConvElement involution(const ConvElement& f);

bool conv_equal(const ConvElement& a, const ConvElement& b, double tol);

// Unit-space stratum pattern: true entries mark coordinates that must be
// infinite (such sets are invariant and closed).
using StratumMask = std::vector<bool>;

bool point_in_stratum(const ExtendedPoint& w, const StratumMask& mask);

// Restriction to the closed invariant unit set: drops every term whose source
// lies outside the stratum.  A surjective *-homomorphism onto the stratum
// algebra at truncation scale.
ConvElement restrict_closed(const ConvElement& f, const StratumMask& mask);

// Deltas spanning the kernel of the restriction: all canonical arrows whose
// source misses the stratum.
std::vector<GroupoidMorphism> complement_ideal_basis(const GroupoidSpec& spec,
                                                     const StratumMask& mask,
                                                     std::int64_t cap = 1'000'000);

// ---- exhaustive verification at truncation scale ----

struct AxiomReport {
    std::int64_t arrows = 0;
    std::int64_t composable_pairs = 0;
    std::int64_t triples_checked = 0;
    bool source_range_ok = true;
    bool inverse_ok = true;
    bool associativity_ok = true;
    bool ok() const { return source_range_ok && inverse_ok && associativity_ok; }
};

// Source/range bookkeeping, inverse laws and associativity over every
// composable pair/triple of the enumerated truncation.
AxiomReport verify_groupoid_axioms(const GroupoidSpec& spec, bool check_triples,
                                   std::int64_t cap = 1'000'000);

// Closure of the enumerated member set under composition and inverse
// (ignoring pairs whose composition overflows the bound box).
bool verify_closure(const GroupoidSpec& spec, std::int64_t cap = 1'000'000);

// canonical(g h) = canonical(canonical(g) canonical(h)) over all composable
// pairs of representatives.
bool verify_quotient_descent(const GroupoidSpec& spec, std::int64_t cap = 1'000'000);

struct ExactnessReport {
    std::int64_t total_arrows = 0;
    std::int64_t stratum_arrows = 0;
    std::int64_t kernel_arrows = 0;
    bool dimensions_ok = false;  // kernel + image span the whole algebra
    bool ideal_ok = false;       // kernel closed under two-sided convolution and *
    bool hom_ok = false;         // restriction multiplicative on delta pairs
    bool ok() const { return dimensions_ok && ideal_ok && hom_ok; }
};

ExactnessReport verify_exact_sequence(const GroupoidSpec& spec, const StratumMask& mask,
                                      std::int64_t cap = 1'000'000);

struct StratumReport {
    int finite_coords = 0;
    std::int64_t points = 0;
    std::int64_t arrows = 0;
    bool matrix_units_ok = false; // for finite_coords = 0: one-dimensional
};

// Strata of the projective subquotient by number of finite coordinates; each
// positive stratum must be a full matrix-unit system over its point set.
std::vector<StratumReport> composition_series(const GroupoidSpec& spec,
                                              std::int64_t cap = 1'000'000);

struct EmbeddingReport {
    std::int64_t mapped = 0;
    std::int64_t target = 0;
    bool bijective = false;
    bool compose_preserving = false;
    bool ok() const { return bijective && compose_preserving; }
};

// Lower sphere subquotient onto the w_n-infinite restriction of the next one,
// via (z, x', w') -> (z, x', -z - x'_1 - ... - x'_{n-1}, w', inf).
EmbeddingReport verify_sphere_embedding(int n, int K, int B, std::int64_t cap = 1'000'000);

// Same for the projective tower (no augmentation component).
EmbeddingReport verify_projective_embedding(int n, int K, int B, std::int64_t cap = 1'000'000);

// The all-finite part of the sphere subquotient agrees arrow-for-arrow with
// the augmented pair groupoid over finite points.
bool verify_open_stratum_structure(int n, int K, int B, std::int64_t cap = 1'000'000);

} // namespace qpg
