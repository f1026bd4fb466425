#pragma once

// Test-side oracles, independent of the library's banded-term arithmetic:
// dense matrices built directly from the weight formulas, expanded via plain
// Kronecker products and multiplied with Eigen.

#include <Eigen/Dense>

#include <map>
#include <random>

#include "qpg/laurent.hpp"

namespace oracle {

using qpg::Complex;
using qpg::ExponentVec;
using qpg::LaurentOperator;
using Dense = Eigen::MatrixXcd;

inline Dense alpha_dense(double q, int dim) {
    Dense a = Dense::Zero(dim, dim);
    for (int j = 1; j < dim; ++j) a(j - 1, j) = std::sqrt(1.0 - std::pow(q, -2.0 * j));
    return a;
}

inline Dense gamma_dense(double q, int dim) {
    Dense g = Dense::Zero(dim, dim);
    for (int j = 0; j < dim; ++j) g(j, j) = std::pow(q, -static_cast<double>(j));
    return g;
}

inline Dense kron(const Dense& a, const Dense& b) {
    Dense r(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return r;
}

// Dense per-exponent expansion of a Laurent operator, walking its stored
// terms with plain Kronecker products (no banded composition, no profile
// grouping).
inline std::map<ExponentVec, Dense> dense_of(const LaurentOperator& op) {
    std::map<ExponentVec, Dense> out;
    const auto& dims = op.trunc().fock_dims;
    Eigen::Index total = 1;
    for (int d : dims) total *= d;
    for (const auto& [e, f] : op.terms()) {
        Dense acc = Dense::Zero(total, total);
        for (const auto& t : f.terms) {
            Dense m = Dense::Identity(1, 1);
            for (size_t s = 0; s < t.factors.size(); ++s) {
                Dense fs = Dense::Zero(dims[s], dims[s]);
                for (int c = 0; c < dims[s]; ++c) {
                    int r = c + t.factors[s].band;
                    if (r < 0 || r >= dims[s]) continue;
                    fs(r, c) = t.factors[s].w[c];
                }
                m = kron(m, fs);
            }
            acc += t.coeff * m;
        }
        out[e] = std::move(acc);
    }
    return out;
}

inline double dense_diff(const std::map<ExponentVec, Dense>& a,
                         const std::map<ExponentVec, Dense>& b) {
    double worst = 0.0;
    auto scan = [&](const std::map<ExponentVec, Dense>& x, const std::map<ExponentVec, Dense>& y) {
        for (const auto& [e, m] : x) {
            auto it = y.find(e);
            if (it == y.end())
                worst = std::max(worst, m.cwiseAbs().maxCoeff());
            else
                worst = std::max(worst, (m - it->second).cwiseAbs().maxCoeff());
        }
    };
    scan(a, b);
    scan(b, a);
    return worst;
}

// Random banded single-factor matrix with entries in [-1, 1]^2.
inline qpg::SlotMatrix random_slot(std::mt19937& rng, int dim, int max_band = 2) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::uniform_int_distribution<int> nb(1, 2);
    std::uniform_int_distribution<int> bd(-max_band, max_band);
    qpg::SlotMatrix m(dim);
    int bands = nb(rng);
    for (int b = 0; b < bands; ++b) {
        int band = bd(rng);
        for (int c = 0; c < dim; ++c) {
            int r = c + band;
            if (r < 0 || r >= dim) continue;
            m.set(r, c, Complex(uni(rng), uni(rng)));
        }
    }
    return m;
}

// Random element with a couple of torus exponents and slot products.
inline LaurentOperator random_operator(std::mt19937& rng, const qpg::TruncationSpec& trunc) {
    std::uniform_int_distribution<int> ne(1, 2);
    std::uniform_int_distribution<int> expo(-2, 2);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    LaurentOperator acc = LaurentOperator::zero(trunc);
    int terms = ne(rng);
    for (int t = 0; t < terms; ++t) {
        ExponentVec e(trunc.torus_rank);
        for (auto& v : e) v = expo(rng);
        LaurentOperator piece = LaurentOperator::torus_monomial(trunc, e);
        piece = Complex(uni(rng), uni(rng)) * piece;
        for (int s = 0; s < trunc.factors(); ++s)
            piece = piece * qpg::embed_slot(random_slot(rng, trunc.fock_dims[s]), s, trunc);
        acc = acc + piece;
    }
    return acc;
}

} // namespace oracle
