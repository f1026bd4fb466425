#include "qpg/laurent.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <random>

namespace qpg {

namespace {

constexpr std::int64_t kExpansionCap = 100'000'000;

bool is_zero(Complex c) { return c.real() == 0.0 && c.imag() == 0.0; }

// Collapse signed zeros so that value-equal terms produced along different
// routes (conjugation flips the sign of a zero imaginary part) stay
// bitwise-identical and merge structurally.
Complex canon(Complex c) {
    double r = c.real();
    double i = c.imag();
    if (r == 0.0) r = 0.0;
    if (i == 0.0) i = 0.0;
    return {r, i};
}

bool same_structure(const ProductTerm& a, const ProductTerm& b) {
    if (a.factors.size() != b.factors.size()) return false;
    for (size_t i = 0; i < a.factors.size(); ++i) {
        const auto& fa = a.factors[i];
        const auto& fb = b.factors[i];
        if (fa.band != fb.band || fa.w.size() != fb.w.size()) return false;
        for (size_t j = 0; j < fa.w.size(); ++j) {
            if (std::bit_cast<std::uint64_t>(fa.w[j].real()) !=
                std::bit_cast<std::uint64_t>(fb.w[j].real()))
                return false;
            if (std::bit_cast<std::uint64_t>(fa.w[j].imag()) !=
                std::bit_cast<std::uint64_t>(fb.w[j].imag()))
                return false;
        }
    }
    return true;
}

struct ColRange {
    int lo = 0;
    int hi = -1;
    int size() const { return hi - lo + 1; }
    bool empty() const { return hi < lo; }
};

// Columns whose row and column index both stay inside [0, dims-1-margin].
ColRange interior_cols(int dim, int band, int margin) {
    int top = dim - 1 - margin;
    ColRange r;
    r.lo = std::max(0, -band);
    r.hi = std::min(top, top - band);
    return r;
}

// Dense expansion of the selected factor slots (restricted columns), first
// slot slowest.  Used for the two-block interior evaluation.
Eigen::VectorXcd expand_block(const ProductTerm& t, const std::vector<ColRange>& ranges,
                              int begin, int end) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(1);
    for (int a = begin; a < end; ++a) {
        const auto& w = t.factors[a].w;
        int m = ranges[a].size();
        Eigen::VectorXcd next(v.size() * m);
        for (Eigen::Index i = 0; i < v.size(); ++i)
            for (int j = 0; j < m; ++j) next[i * m + j] = v[i] * w[ranges[a].lo + j];
        v.swap(next);
    }
    return v;
}

std::vector<std::uint64_t> block_signature(const ProductTerm& t,
                                           const std::vector<ColRange>& ranges, int begin,
                                           int end) {
    std::vector<std::uint64_t> sig;
    for (int a = begin; a < end; ++a) {
        sig.push_back(static_cast<std::uint64_t>(static_cast<std::int64_t>(t.factors[a].band)));
        for (int j = ranges[a].lo; j <= ranges[a].hi; ++j) {
            sig.push_back(std::bit_cast<std::uint64_t>(t.factors[a].w[j].real()));
            sig.push_back(std::bit_cast<std::uint64_t>(t.factors[a].w[j].imag()));
        }
    }
    return sig;
}

double profile_max_abs(const std::vector<const ProductTerm*>& terms,
                       const std::vector<int>& bands, const std::vector<int>& dims,
                       int margin) {
    const int nslots = static_cast<int>(bands.size());
    std::vector<ColRange> ranges(nslots);
    for (int a = 0; a < nslots; ++a) {
        ranges[a] = interior_cols(dims[a], bands[a], margin);
        if (ranges[a].empty()) return 0.0;
    }
    if (nslots == 0) {
        Complex s = 0.0;
        for (const auto* t : terms) s += t->coeff;
        return std::abs(s);
    }

    // Split slots into two halves with balanced grid sizes.
    std::vector<std::int64_t> prefix(nslots + 1, 1);
    for (int a = 0; a < nslots; ++a) prefix[a + 1] = prefix[a] * ranges[a].size();
    std::int64_t total = prefix[nslots];
    int split = 0;
    std::int64_t best_balance = total;
    for (int s = 0; s <= nslots; ++s) {
        std::int64_t bal = std::max(prefix[s], total / prefix[s]);
        if (bal < best_balance) {
            best_balance = bal;
            split = s;
        }
    }
    std::int64_t grid_left = prefix[split];
    std::int64_t grid_right = total / prefix[split];

    // Intern distinct left/right blocks and accumulate coefficients.
    std::map<std::vector<std::uint64_t>, int> left_ids, right_ids;
    std::vector<Eigen::VectorXcd> left_cols, right_cols;
    std::vector<std::array<int, 2>> term_ids(terms.size());
    for (size_t ti = 0; ti < terms.size(); ++ti) {
        const ProductTerm& t = *terms[ti];
        auto lsig = block_signature(t, ranges, 0, split);
        auto [lit, lnew] = left_ids.try_emplace(std::move(lsig), static_cast<int>(left_cols.size()));
        if (lnew) left_cols.push_back(expand_block(t, ranges, 0, split));
        auto rsig = block_signature(t, ranges, split, nslots);
        auto [rit, rnew] =
            right_ids.try_emplace(std::move(rsig), static_cast<int>(right_cols.size()));
        if (rnew) right_cols.push_back(expand_block(t, ranges, split, nslots));
        term_ids[ti] = {lit->second, rit->second};
    }
    const int nl = static_cast<int>(left_cols.size());
    const int nr = static_cast<int>(right_cols.size());
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(nl, nr);
    for (size_t ti = 0; ti < terms.size(); ++ti)
        C(term_ids[ti][0], term_ids[ti][1]) += terms[ti]->coeff;

    Eigen::MatrixXcd U(grid_left, nl);
    for (int l = 0; l < nl; ++l) U.col(l) = left_cols[l];
    Eigen::MatrixXcd V(grid_right, nr);
    for (int r = 0; r < nr; ++r) V.col(r) = right_cols[r];

    Eigen::MatrixXcd UC = U * C; // grid_left x nr
    double best = 0.0;
    const std::int64_t block = std::max<std::int64_t>(1, 4'000'000 / std::max<std::int64_t>(1, grid_left));
    for (std::int64_t r0 = 0; r0 < grid_right; r0 += block) {
        std::int64_t rb = std::min(block, grid_right - r0);
        Eigen::MatrixXcd G = UC * V.middleRows(r0, rb).transpose();
        best = std::max(best, G.cwiseAbs().maxCoeff());
    }
    return best;
}

std::map<std::vector<int>, std::vector<const ProductTerm*>> group_by_profile(
    const std::vector<ProductTerm>& terms) {
    std::map<std::vector<int>, std::vector<const ProductTerm*>> groups;
    for (const auto& t : terms) {
        std::vector<int> bands(t.factors.size());
        for (size_t i = 0; i < t.factors.size(); ++i) bands[i] = t.factors[i].band;
        groups[bands].push_back(&t);
    }
    return groups;
}

void check_margin(const std::vector<int>& dims, int margin) {
    if (margin < 0) throw ConstraintError("margin must be nonnegative");
    for (int d : dims)
        if (margin >= d)
            throw ConstraintError("margin leaves an empty interior; increase the fock dimension");
}

ExponentVec add_exponents(const ExponentVec& a, const ExponentVec& b) {
    ExponentVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

ExponentVec negate_exponent(const ExponentVec& a) {
    ExponentVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

} // namespace

BandedFactor BandedFactor::identity(int dim) {
    BandedFactor f;
    f.band = 0;
    f.w.assign(dim, Complex(1.0, 0.0));
    return f;
}

BandedFactor BandedFactor::zero(int dim) {
    BandedFactor f;
    f.band = 0;
    f.w.assign(dim, Complex(0.0, 0.0));
    return f;
}

bool BandedFactor::is_structurally_zero() const {
    for (Complex c : w)
        if (!is_zero(c)) return false;
    return true;
}

BandedFactor compose_factors(const BandedFactor& outer, const BandedFactor& inner, int dim) {
    BandedFactor r;
    r.band = outer.band + inner.band;
    r.w.assign(dim, Complex(0.0, 0.0));
    for (int c = 0; c < dim; ++c) {
        int mid = c + inner.band;
        if (mid < 0 || mid >= dim) continue;
        r.w[c] = canon(inner.w[c] * outer.w[mid]);
    }
    return r;
}

BandedFactor adjoint_factor(const BandedFactor& f, int dim) {
    // f maps e_c -> w[c] e_{c+band}; the adjoint maps e_{c+band} -> conj(w[c]) e_c,
    // so column c' of the adjoint reads f at column c' - band.
    BandedFactor r;
    r.band = -f.band;
    r.w.assign(dim, Complex(0.0, 0.0));
    for (int c = 0; c < dim; ++c) {
        int fc = c - f.band;
        if (fc < 0 || fc >= dim) continue;
        if (c + r.band < 0 || c + r.band >= dim) continue;
        r.w[c] = canon(std::conj(f.w[fc]));
    }
    return r;
}

namespace {

// Total order on terms: structure (bands, then weight bit patterns), with the
// coefficient bits as a tiebreak.  Sorting before merging makes the stored
// term list canonical and fixes the accumulation order of colliding terms, so
// equal operators built along different routes end up with bitwise-identical
// term lists.
bool term_less(const ProductTerm& a, const ProductTerm& b) {
    if (a.factors.size() != b.factors.size()) return a.factors.size() < b.factors.size();
    for (size_t i = 0; i < a.factors.size(); ++i) {
        const auto& fa = a.factors[i];
        const auto& fb = b.factors[i];
        if (fa.band != fb.band) return fa.band < fb.band;
        if (fa.w.size() != fb.w.size()) return fa.w.size() < fb.w.size();
        for (size_t j = 0; j < fa.w.size(); ++j) {
            auto ra = std::bit_cast<std::uint64_t>(fa.w[j].real());
            auto rb = std::bit_cast<std::uint64_t>(fb.w[j].real());
            if (ra != rb) return ra < rb;
            auto ia = std::bit_cast<std::uint64_t>(fa.w[j].imag());
            auto ib = std::bit_cast<std::uint64_t>(fb.w[j].imag());
            if (ia != ib) return ia < ib;
        }
    }
    auto car = std::bit_cast<std::uint64_t>(a.coeff.real());
    auto cbr = std::bit_cast<std::uint64_t>(b.coeff.real());
    if (car != cbr) return car < cbr;
    return std::bit_cast<std::uint64_t>(a.coeff.imag()) <
           std::bit_cast<std::uint64_t>(b.coeff.imag());
}

} // namespace

void merge_product_terms(std::vector<ProductTerm>& terms) {
    std::sort(terms.begin(), terms.end(), term_less);
    std::vector<ProductTerm> merged;
    merged.reserve(terms.size());
    for (auto& t : terms) {
        if (!merged.empty() && same_structure(merged.back(), t))
            merged.back().coeff += t.coeff;
        else
            merged.push_back(std::move(t));
    }
    terms.clear();
    for (auto& t : merged) {
        if (is_zero(t.coeff)) continue;
        bool dead = false;
        for (const auto& f : t.factors)
            if (f.is_structurally_zero()) {
                dead = true;
                break;
            }
        if (!dead) terms.push_back(std::move(t));
    }
}

FockOperator fock_add(const FockOperator& a, const FockOperator& b) {
    FockOperator r;
    r.terms = a.terms;
    r.terms.insert(r.terms.end(), b.terms.begin(), b.terms.end());
    merge_product_terms(r.terms);
    return r;
}

FockOperator fock_mul(const FockOperator& a, const FockOperator& b, const std::vector<int>& dims) {
    FockOperator r;
    r.terms.reserve(a.terms.size() * b.terms.size());
    for (const auto& ta : a.terms) {
        for (const auto& tb : b.terms) {
            ProductTerm t;
            t.coeff = canon(ta.coeff * tb.coeff);
            t.factors.resize(dims.size());
            bool dead = is_zero(t.coeff);
            for (size_t s = 0; s < dims.size() && !dead; ++s) {
                t.factors[s] = compose_factors(ta.factors[s], tb.factors[s], dims[s]);
                dead = t.factors[s].is_structurally_zero();
            }
            if (!dead) r.terms.push_back(std::move(t));
        }
    }
    merge_product_terms(r.terms);
    return r;
}

FockOperator fock_adjoint(const FockOperator& a, const std::vector<int>& dims) {
    FockOperator r;
    r.terms.reserve(a.terms.size());
    for (const auto& t : a.terms) {
        ProductTerm s;
        s.coeff = canon(std::conj(t.coeff));
        s.factors.reserve(t.factors.size());
        for (size_t i = 0; i < t.factors.size(); ++i)
            s.factors.push_back(adjoint_factor(t.factors[i], dims[i]));
        r.terms.push_back(std::move(s));
    }
    return r;
}

FockOperator fock_scale(Complex s, const FockOperator& a) {
    FockOperator r;
    if (is_zero(s)) return r;
    r.terms = a.terms;
    for (auto& t : r.terms) t.coeff = canon(t.coeff * s);
    return r;
}

double fock_max_interior_abs(const FockOperator& a, const std::vector<int>& dims, int margin) {
    check_margin(dims, margin);
    double best = 0.0;
    for (const auto& [bands, group] : group_by_profile(a.terms))
        best = std::max(best, profile_max_abs(group, bands, dims, margin));
    return best;
}

double fock_frobenius_sq(const FockOperator& a, const std::vector<int>& dims) {
    double total = 0.0;
    for (const auto& [bands, group] : group_by_profile(a.terms)) {
        (void)bands;
        const size_t n = group.size();
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < n; ++j) {
                Complex prod = group[i]->coeff * std::conj(group[j]->coeff);
                for (size_t s = 0; s < dims.size(); ++s) {
                    Complex dot = 0.0;
                    const auto& wi = group[i]->factors[s].w;
                    const auto& wj = group[j]->factors[s].w;
                    for (int c = 0; c < dims[s]; ++c) dot += wi[c] * std::conj(wj[c]);
                    prod *= dot;
                }
                total += prod.real();
            }
        }
    }
    return std::max(0.0, total);
}

double fock_max_interior_diff(const FockOperator& a, const FockOperator& b,
                              const std::vector<int>& dims, int margin) {
    FockOperator diff;
    diff.terms = a.terms;
    for (const auto& t : b.terms) {
        ProductTerm neg = t;
        neg.coeff *= Complex(-1.0, 0.0);
        diff.terms.push_back(std::move(neg));
    }
    merge_product_terms(diff.terms);
    return fock_max_interior_abs(diff, dims, margin);
}

SlotMatrix SlotMatrix::identity(int dim) {
    SlotMatrix m(dim);
    m.bands[0] = std::vector<Complex>(dim, Complex(1.0, 0.0));
    return m;
}

void SlotMatrix::set(int row, int col, Complex v) {
    if (row < 0 || row >= dim || col < 0 || col >= dim)
        throw IndexError("slot matrix entry out of range");
    auto& w = bands.try_emplace(row - col, std::vector<Complex>(dim, Complex(0.0, 0.0)))
                  .first->second;
    if (v.real() == 0.0) v = Complex(0.0, v.imag());
    if (v.imag() == 0.0) v = Complex(v.real(), 0.0);
    w[col] = v;
}

Complex SlotMatrix::at(int row, int col) const {
    if (row < 0 || row >= dim || col < 0 || col >= dim)
        throw IndexError("slot matrix entry out of range");
    auto it = bands.find(row - col);
    if (it == bands.end()) return 0.0;
    return it->second[col];
}

SlotMatrix SlotMatrix::scaled(Complex s) const {
    SlotMatrix m(dim);
    for (const auto& [b, w] : bands) {
        auto sw = w;
        for (auto& v : sw) {
            v *= s;
            if (v.real() == 0.0 && v.imag() == 0.0) v = Complex(0.0, 0.0);
        }
        m.bands[b] = std::move(sw);
    }
    return m;
}

SlotMatrix SlotMatrix::adjoint() const {
    SlotMatrix m(dim);
    for (const auto& [b, w] : bands) {
        std::vector<Complex> aw(dim, Complex(0.0, 0.0));
        for (int c = 0; c < dim; ++c) {
            int fc = c - b;
            if (fc < 0 || fc >= dim) continue;
            Complex v = std::conj(w[fc]);
            if (v.real() == 0.0) v = Complex(0.0, v.imag());
            if (v.imag() == 0.0) v = Complex(v.real(), 0.0);
            aw[c] = v;
        }
        m.bands[-b] = std::move(aw);
    }
    return m;
}

LaurentOperator LaurentOperator::zero(const TruncationSpec& trunc) {
    return LaurentOperator(trunc);
}

LaurentOperator LaurentOperator::identity(const TruncationSpec& trunc) {
    return scalar(trunc, Complex(1.0, 0.0));
}

LaurentOperator LaurentOperator::scalar(const TruncationSpec& trunc, Complex value) {
    LaurentOperator r(trunc);
    if (is_zero(value)) return r;
    ProductTerm t;
    t.coeff = value;
    for (int d : trunc.fock_dims) t.factors.push_back(BandedFactor::identity(d));
    FockOperator f;
    f.terms.push_back(std::move(t));
    r.terms_.emplace(ExponentVec(trunc.torus_rank, 0), std::move(f));
    return r;
}

LaurentOperator LaurentOperator::torus_monomial(const TruncationSpec& trunc,
                                                const ExponentVec& e) {
    if (static_cast<int>(e.size()) != trunc.torus_rank)
        throw ShapeError("exponent length does not match torus rank");
    LaurentOperator r(trunc);
    ProductTerm t;
    for (int d : trunc.fock_dims) t.factors.push_back(BandedFactor::identity(d));
    FockOperator f;
    f.terms.push_back(std::move(t));
    r.terms_.emplace(e, std::move(f));
    return r;
}

LaurentOperator LaurentOperator::from_terms(TruncationSpec trunc,
                                            std::map<ExponentVec, FockOperator> terms) {
    LaurentOperator r(std::move(trunc));
    for (auto& [e, f] : terms) r.insert_term(e, std::move(f));
    return r;
}

void LaurentOperator::insert_term(const ExponentVec& e, FockOperator f) {
    if (static_cast<int>(e.size()) != trunc_.torus_rank)
        throw ShapeError("exponent length does not match torus rank");
    for (const auto& t : f.terms)
        if (t.factors.size() != trunc_.fock_dims.size())
            throw ShapeError("term factor count does not match truncation");
    merge_product_terms(f.terms);
    if (f.terms.empty()) return;
    auto [it, fresh] = terms_.try_emplace(e, std::move(f));
    if (!fresh) {
        it->second = fock_add(it->second, f);
        if (it->second.terms.empty()) terms_.erase(it);
    }
}

std::vector<ExponentVec> LaurentOperator::exponents() const {
    std::vector<ExponentVec> r;
    r.reserve(terms_.size());
    for (const auto& [e, f] : terms_) r.push_back(e);
    return r;
}

const FockOperator* LaurentOperator::fock_term(const ExponentVec& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? nullptr : &it->second;
}

LaurentOperator operator+(const LaurentOperator& a, const LaurentOperator& b) {
    require_same_trunc(a.trunc_, b.trunc_);
    LaurentOperator r(a.trunc_);
    r.terms_ = a.terms_;
    for (const auto& [e, f] : b.terms_) {
        auto [it, fresh] = r.terms_.try_emplace(e, f);
        if (!fresh) {
            it->second = fock_add(it->second, f);
            if (it->second.terms.empty()) r.terms_.erase(it);
        }
    }
    return r;
}

LaurentOperator operator-(const LaurentOperator& a, const LaurentOperator& b) {
    return a + (-b);
}

LaurentOperator operator*(const LaurentOperator& a, const LaurentOperator& b) {
    require_same_trunc(a.trunc_, b.trunc_);
    LaurentOperator r(a.trunc_);
    for (const auto& [ea, fa] : a.terms_) {
        for (const auto& [eb, fb] : b.terms_) {
            FockOperator prod = fock_mul(fa, fb, a.trunc_.fock_dims);
            if (prod.terms.empty()) continue;
            ExponentVec e = add_exponents(ea, eb);
            auto [it, fresh] = r.terms_.try_emplace(e, std::move(prod));
            if (!fresh) {
                it->second = fock_add(it->second, prod);
                if (it->second.terms.empty()) r.terms_.erase(it);
            }
        }
    }
    return r;
}

LaurentOperator operator*(Complex s, const LaurentOperator& a) {
    LaurentOperator r(a.trunc());
    if (is_zero(s)) return r;
    for (const auto& [e, f] : a.terms()) {
        FockOperator sf = fock_scale(s, f);
        r.terms_.emplace(e, std::move(sf));
    }
    return r;
}

LaurentOperator adjoint(const LaurentOperator& a) {
    LaurentOperator r(a.trunc());
    std::map<ExponentVec, FockOperator> terms;
    for (const auto& [e, f] : a.terms())
        terms.emplace(negate_exponent(e), fock_adjoint(f, a.trunc().fock_dims));
    return LaurentOperator::from_terms(a.trunc(), std::move(terms));
}

LaurentOperator embed_slot(const SlotMatrix& op, int slot, const TruncationSpec& trunc) {
    if (slot < 0 || slot >= trunc.factors()) throw IndexError("slot index out of range");
    if (op.dim != trunc.fock_dims[slot])
        throw ShapeError("slot matrix dimension does not match truncation");
    FockOperator f;
    for (const auto& [band, w] : op.bands) {
        BandedFactor bf;
        bf.band = band;
        bf.w = w;
        // clamp values that fell outside the valid window
        for (int c = 0; c < op.dim; ++c)
            if (c + band < 0 || c + band >= op.dim) bf.w[c] = 0.0;
        if (bf.is_structurally_zero()) continue;
        ProductTerm t;
        t.factors.reserve(trunc.factors());
        for (int s = 0; s < trunc.factors(); ++s)
            t.factors.push_back(s == slot ? bf : BandedFactor::identity(trunc.fock_dims[s]));
        f.terms.push_back(std::move(t));
    }
    LaurentOperator r(trunc);
    if (!f.terms.empty()) {
        std::map<ExponentVec, FockOperator> terms;
        terms.emplace(ExponentVec(trunc.torus_rank, 0), std::move(f));
        return LaurentOperator::from_terms(trunc, std::move(terms));
    }
    return r;
}

double max_interior_diff(const LaurentOperator& a, const LaurentOperator& b, int margin) {
    require_same_trunc(a.trunc(), b.trunc());
    check_margin(a.trunc().fock_dims, margin);
    double best = 0.0;
    auto ita = a.terms().begin();
    auto itb = b.terms().begin();
    const FockOperator empty;
    while (ita != a.terms().end() || itb != b.terms().end()) {
        const FockOperator* fa = &empty;
        const FockOperator* fb = &empty;
        if (itb == b.terms().end() || (ita != a.terms().end() && ita->first < itb->first)) {
            fa = &ita->second;
            ++ita;
        } else if (ita == a.terms().end() || itb->first < ita->first) {
            fb = &itb->second;
            ++itb;
        } else {
            fa = &ita->second;
            fb = &itb->second;
            ++ita;
            ++itb;
        }
        best = std::max(best, fock_max_interior_diff(*fa, *fb, a.trunc().fock_dims, margin));
    }
    return best;
}

bool interior_equal(const LaurentOperator& a, const LaurentOperator& b, int margin, double tol) {
    return max_interior_diff(a, b, margin) <= tol;
}

double frobenius_norm(const LaurentOperator& a) {
    double total = 0.0;
    for (const auto& [e, f] : a.terms()) total += fock_frobenius_sq(f, a.trunc().fock_dims);
    return std::sqrt(total);
}

namespace {

// y += term applied to x over the full grid (flat row-major layout).
void apply_fock(const FockOperator& f, const std::vector<int>& dims,
                const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
    const int nslots = static_cast<int>(dims.size());
    std::vector<std::int64_t> stride(nslots, 1);
    for (int a = nslots - 2; a >= 0; --a) stride[a] = stride[a + 1] * dims[a + 1];
    y.setZero();
    std::vector<int> idx(nslots);
    for (const auto& t : f.terms) {
        std::int64_t offset = 0;
        for (int a = 0; a < nslots; ++a) offset += static_cast<std::int64_t>(t.factors[a].band) * stride[a];
        std::vector<ColRange> ranges(nslots);
        bool empty = false;
        for (int a = 0; a < nslots; ++a) {
            ranges[a] = interior_cols(dims[a], t.factors[a].band, 0);
            if (ranges[a].empty()) empty = true;
        }
        if (empty) continue;
        for (int a = 0; a < nslots; ++a) idx[a] = ranges[a].lo;
        while (true) {
            Complex v = t.coeff;
            std::int64_t flat = 0;
            for (int a = 0; a < nslots; ++a) {
                v *= t.factors[a].w[idx[a]];
                flat = flat * dims[a] + idx[a];
            }
            y[flat + offset] += v * x[flat];
            int a = nslots - 1;
            for (; a >= 0; --a) {
                if (++idx[a] <= ranges[a].hi) break;
                idx[a] = ranges[a].lo;
            }
            if (a < 0) break; // factor-free terms take exactly one pass
        }
    }
}

} // namespace

double op_norm_estimate(const LaurentOperator& a) {
    const auto& dims = a.trunc().fock_dims;
    std::int64_t grid = a.trunc().grid_size();
    if (grid > 20'000'000) throw CapError("operator grid too large for norm estimation");
    double best = 0.0;
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (const auto& [e, f] : a.terms()) {
        FockOperator fs = fock_adjoint(f, dims);
        Eigen::VectorXcd v(grid), u(grid), w(grid);
        for (std::int64_t i = 0; i < grid; ++i) v[i] = Complex(uni(rng), uni(rng));
        v.normalize();
        double sigma = 0.0;
        for (int it = 0; it < 80; ++it) {
            apply_fock(f, dims, v, u);
            double nu = u.norm();
            if (nu == 0.0) {
                sigma = 0.0;
                break;
            }
            apply_fock(fs, dims, u, w);
            double nw = w.norm();
            if (nw == 0.0) {
                sigma = nu;
                break;
            }
            v = w / nw;
            double next = std::sqrt(nw);
            if (it > 4 && std::abs(next - sigma) <= 1e-13 * std::max(1.0, sigma)) {
                sigma = next;
                break;
            }
            sigma = next;
        }
        best = std::max(best, sigma);
    }
    return best;
}

std::vector<OperatorEntry> entries_within(const LaurentOperator& a, const std::vector<int>& hi) {
    const auto& dims = a.trunc().fock_dims;
    if (hi.size() != dims.size()) throw ShapeError("bound vector length mismatch");
    std::vector<OperatorEntry> out;
    std::int64_t budget = kExpansionCap;
    for (const auto& [e, f] : a.terms()) {
        std::map<std::pair<std::vector<int>, std::vector<int>>, Complex> acc;
        const int nslots = static_cast<int>(dims.size());
        std::vector<int> idx(nslots);
        for (const auto& t : f.terms) {
            std::vector<ColRange> ranges(nslots);
            bool empty = false;
            std::int64_t cells = 1;
            for (int s = 0; s < nslots; ++s) {
                int b = t.factors[s].band;
                ranges[s].lo = std::max(0, -b);
                ranges[s].hi = std::min(hi[s], hi[s] - b);
                ranges[s].hi = std::min(ranges[s].hi, dims[s] - 1);
                if (ranges[s].empty()) {
                    empty = true;
                    break;
                }
                cells *= ranges[s].size();
            }
            if (empty) continue;
            budget -= cells;
            if (budget < 0) throw CapError("operator expansion exceeds the entry cap");
            if (nslots == 0) {
                acc[{std::vector<int>{}, std::vector<int>{}}] += t.coeff;
                continue;
            }
            for (int s = 0; s < nslots; ++s) idx[s] = ranges[s].lo;
            while (true) {
                Complex v = t.coeff;
                std::vector<int> row(nslots), col(nslots);
                for (int s = 0; s < nslots; ++s) {
                    v *= t.factors[s].w[idx[s]];
                    col[s] = idx[s];
                    row[s] = idx[s] + t.factors[s].band;
                }
                acc[{std::move(row), std::move(col)}] += v;
                int s = nslots - 1;
                for (; s >= 0; --s) {
                    if (++idx[s] <= ranges[s].hi) break;
                    idx[s] = ranges[s].lo;
                }
                if (s < 0) break;
            }
        }
        for (auto& [rc, v] : acc) {
            if (is_zero(v)) continue;
            OperatorEntry entry;
            entry.exponent = e;
            entry.row = rc.first;
            entry.col = rc.second;
            entry.value = v;
            out.push_back(std::move(entry));
        }
    }
    return out;
}

std::vector<OperatorEntry> interior_entries(const LaurentOperator& a, int margin) {
    check_margin(a.trunc().fock_dims, margin);
    std::vector<int> hi(a.trunc().fock_dims.size());
    for (size_t s = 0; s < hi.size(); ++s) hi[s] = a.trunc().fock_dims[s] - 1 - margin;
    return entries_within(a, hi);
}

int fock_degree(const LaurentOperator& a, int slot) {
    if (slot < 0 || slot >= a.trunc().factors()) throw IndexError("slot index out of range");
    int deg = 0;
    for (const auto& [e, f] : a.terms())
        for (const auto& t : f.terms) deg = std::max(deg, std::abs(t.factors[slot].band));
    return deg;
}

} // namespace qpg
