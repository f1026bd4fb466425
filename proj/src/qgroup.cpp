#include "qpg/qgroup.hpp"

#include <cmath>

namespace qpg {

double shift_weight(double q, int j) { return std::sqrt(1.0 - std::pow(q, -2.0 * j)); }

double diag_weight(double q, int j) { return std::pow(q, -static_cast<double>(j)); }

SlotMatrix alpha_matrix(double q, int dim) {
    SlotMatrix m(dim);
    auto& w = m.bands.emplace(-1, std::vector<Complex>(dim, Complex(0.0, 0.0))).first->second;
    for (int j = 1; j < dim; ++j) w[j] = shift_weight(q, j);
    return m;
}

SlotMatrix gamma_matrix(double q, int dim) {
    SlotMatrix m(dim);
    auto& w = m.bands.emplace(0, std::vector<Complex>(dim, Complex(0.0, 0.0))).first->second;
    for (int j = 0; j < dim; ++j) w[j] = diag_weight(q, j);
    return m;
}

SlotMatrix alpha_star_matrix(double q, int dim) {
    // e_j -> sqrt(1 - q^(-2(j+1))) e_{j+1}; the top transition leaves the
    // truncation box and is dropped (boundary defect).
    SlotMatrix m(dim);
    auto& w = m.bands.emplace(1, std::vector<Complex>(dim, Complex(0.0, 0.0))).first->second;
    for (int j = 0; j + 1 < dim; ++j) w[j] = shift_weight(q, j + 1);
    return m;
}

std::array<std::array<SlotMatrix, 2>, 2> pi0_block(double q, int dim) {
    if (dim < 2) throw ConstraintError("fock dimension must be >= 2");
    std::array<std::array<SlotMatrix, 2>, 2> u;
    u[0][0] = alpha_matrix(q, dim);
    u[0][1] = gamma_matrix(q, dim).scaled(Complex(-1.0 / q, 0.0));
    u[1][0] = gamma_matrix(q, dim);
    u[1][1] = alpha_star_matrix(q, dim);
    return u;
}

FactorSpec FactorSpec::fundamental(int i) {
    FactorSpec f;
    f.kind = Kind::Fundamental;
    f.index = i;
    return f;
}

FactorSpec FactorSpec::torus_char(int vars, std::vector<ExponentVec> diag) {
    FactorSpec f;
    f.kind = Kind::TorusChar;
    f.torus_vars = vars;
    f.diag = std::move(diag);
    return f;
}

FactorSpec FactorSpec::counit() { return FactorSpec{}; }

bool FactorSpec::operator==(const FactorSpec& o) const {
    return kind == o.kind && index == o.index && torus_vars == o.torus_vars && diag == o.diag;
}

FactorSpec tau_char(int n) {
    std::vector<ExponentVec> diag(n + 1, ExponentVec(n, 0));
    for (int j = 0; j < n; ++j) diag[j][j] = 1;
    diag[n].assign(n, -1);
    return FactorSpec::torus_char(n, std::move(diag));
}

FactorSpec tau_prime_char(int n) {
    std::vector<ExponentVec> diag(n + 1, ExponentVec(1, 0));
    diag[n][0] = 1;
    return FactorSpec::torus_char(1, std::move(diag));
}

FactorSpec tau_dprime_char(int n) {
    std::vector<ExponentVec> diag(n + 1, ExponentVec(n, 0));
    diag[n].assign(n, -1);
    diag[n][0] = -2;
    return FactorSpec::torus_char(n, std::move(diag));
}

void RepWord::validate() const {
    if (n < 1) throw ConstraintError("word size parameter must be positive");
    if (factors.empty()) throw ConstraintError("word must have at least one factor");
    for (const auto& f : factors) {
        switch (f.kind) {
        case FactorSpec::Kind::Fundamental:
            if (f.index < 1 || f.index > n)
                throw ConstraintError("fundamental index out of range");
            break;
        case FactorSpec::Kind::TorusChar:
            if (f.torus_vars < 0) throw ConstraintError("negative torus variable count");
            if (static_cast<int>(f.diag.size()) != n + 1)
                throw ConstraintError("torus character diagonal has wrong size");
            for (const auto& e : f.diag)
                if (static_cast<int>(e.size()) != f.torus_vars)
                    throw ConstraintError("torus character exponent length mismatch");
            break;
        case FactorSpec::Kind::Counit:
            break;
        }
    }
}

int RepWord::torus_rank() const {
    int r = 0;
    for (const auto& f : factors)
        if (f.kind == FactorSpec::Kind::TorusChar) r += f.torus_vars;
    return r;
}

int RepWord::fock_slots() const {
    int r = 0;
    for (const auto& f : factors)
        if (f.kind == FactorSpec::Kind::Fundamental) ++r;
    return r;
}

RepWord standard_long_word(int n) {
    if (n < 1) throw ConstraintError("n must be positive");
    RepWord w;
    w.n = n;
    w.factors.push_back(tau_char(n));
    for (int b = 1; b <= n; ++b)
        for (int l = b; l >= 1; --l) w.factors.push_back(FactorSpec::fundamental(l));
    return w;
}

RepWord sphere_word(int n) {
    if (n < 1) throw ConstraintError("n must be positive");
    RepWord w;
    w.n = n;
    w.factors.push_back(tau_prime_char(n));
    for (int l = n; l >= 1; --l) w.factors.push_back(FactorSpec::fundamental(l));
    return w;
}

RepWord projective_word(int n) {
    if (n < 1) throw ConstraintError("n must be positive");
    RepWord w;
    w.n = n;
    for (int l = n; l >= 1; --l) w.factors.push_back(FactorSpec::fundamental(l));
    return w;
}

RepWord nonstandard_word(int n) {
    if (n < 1) throw ConstraintError("n must be positive");
    RepWord w;
    w.n = n;
    w.factors.push_back(tau_char(n));
    for (int l = n; l >= 1; --l) w.factors.push_back(FactorSpec::fundamental(l));
    for (int l = 2; l <= n; ++l) w.factors.push_back(FactorSpec::fundamental(l));
    return w;
}

RepWord quotient_symbol_word(int n) {
    if (n < 2) throw ConstraintError("n must be at least 2");
    RepWord w;
    w.n = n;
    w.factors.push_back(tau_dprime_char(n));
    for (int l = n; l >= 2; --l) w.factors.push_back(FactorSpec::fundamental(l));
    for (int l = 3; l <= n; ++l) w.factors.push_back(FactorSpec::fundamental(l));
    return w;
}

RepWord rho_tilde_word(const RepWord& word, int n) {
    if (n < 2) throw ConstraintError("collapsing needs n >= 2");
    if (!(word == nonstandard_word(n)))
        throw ConstraintError("word does not have the expected shape");
    RepWord w = word;
    int fock_no = 0;
    for (auto& f : w.factors) {
        if (f.kind != FactorSpec::Kind::Fundamental) continue;
        ++fock_no;
        if (fock_no == n || fock_no == n + 1) f = FactorSpec::counit();
    }
    return w;
}

TruncationSpec word_trunc(const RepWord& word, int dim) {
    word.validate();
    if (dim < 2) throw ConstraintError("fock dimension must be >= 2");
    std::vector<int> dims(word.fock_slots(), dim);
    int margin = std::min(word.length(), dim - 1);
    return TruncationSpec(std::move(dims), word.torus_rank(), margin);
}

OpMatrix factor_matrix(const FactorSpec& spec, int n, double q, const TruncationSpec& trunc,
                       int slot, int torus_offset) {
    const int size = n + 1;
    OpMatrix m(size, LaurentOperator::zero(trunc));
    switch (spec.kind) {
    case FactorSpec::Kind::Fundamental: {
        const int i = spec.index;
        const int dim = trunc.fock_dims.at(slot);
        for (int j = 1; j <= size; ++j)
            if (j != i && j != i + 1) m.at(j, j) = LaurentOperator::identity(trunc);
        // the -q^{-1} scalar stays in the term coefficient, keeping the
        // stored weights the plain shift weights on every construction route
        m.at(i, i) = embed_slot(alpha_matrix(q, dim), slot, trunc);
        m.at(i, i + 1) = Complex(-1.0 / q, 0.0) * embed_slot(gamma_matrix(q, dim), slot, trunc);
        m.at(i + 1, i) = embed_slot(gamma_matrix(q, dim), slot, trunc);
        m.at(i + 1, i + 1) = embed_slot(alpha_star_matrix(q, dim), slot, trunc);
        break;
    }
    case FactorSpec::Kind::TorusChar: {
        for (int j = 1; j <= size; ++j) {
            ExponentVec e(trunc.torus_rank, 0);
            const ExponentVec& local = spec.diag.at(j - 1);
            for (size_t v = 0; v < local.size(); ++v) e.at(torus_offset + v) = local[v];
            m.at(j, j) = LaurentOperator::torus_monomial(trunc, e);
        }
        break;
    }
    case FactorSpec::Kind::Counit: {
        for (int j = 1; j <= size; ++j) m.at(j, j) = LaurentOperator::identity(trunc);
        break;
    }
    }
    return m;
}

namespace {

OpMatrix matmul(const OpMatrix& a, const OpMatrix& b, const TruncationSpec& trunc) {
    const int size = a.size();
    OpMatrix r(size, LaurentOperator::zero(trunc));
    for (int i = 1; i <= size; ++i) {
        for (int j = 1; j <= size; ++j) {
            LaurentOperator acc = LaurentOperator::zero(trunc);
            for (int k = 1; k <= size; ++k) {
                if (a.at(i, k).is_structurally_zero() || b.at(k, j).is_structurally_zero())
                    continue;
                acc = acc + a.at(i, k) * b.at(k, j);
            }
            r.at(i, j) = std::move(acc);
        }
    }
    return r;
}

} // namespace

OpMatrix rep_matrix(const RepWord& word, double q, int dim) {
    TruncationSpec trunc = word_trunc(word, dim);
    std::optional<OpMatrix> acc;
    int slot = 0;
    int offset = 0;
    for (const auto& f : word.factors) {
        OpMatrix fm = factor_matrix(f, word.n, q, trunc, slot, offset);
        if (f.kind == FactorSpec::Kind::Fundamental) ++slot;
        if (f.kind == FactorSpec::Kind::TorusChar) offset += f.torus_vars;
        if (!acc)
            acc.emplace(std::move(fm));
        else
            acc.emplace(matmul(*acc, fm, trunc));
    }
    return std::move(*acc);
}

LaurentOperator rep_generator(const RepWord& word, double q, int dim, int i, int j) {
    return rep_matrix(word, q, dim).at(i, j);
}

std::vector<LaurentOperator> sphere_generators(int n, double q, int dim) {
    OpMatrix m = rep_matrix(sphere_word(n), q, dim);
    std::vector<LaurentOperator> gens;
    gens.reserve(n + 1);
    for (int j = 1; j <= n + 1; ++j) gens.push_back(m.at(n + 1, j));
    return gens;
}

std::vector<std::vector<LaurentOperator>> projective_generators(int n, double q, int dim) {
    OpMatrix m = rep_matrix(projective_word(n), q, dim);
    std::vector<LaurentOperator> row;
    row.reserve(n + 1);
    for (int j = 1; j <= n + 1; ++j) row.push_back(m.at(n + 1, j));
    std::vector<std::vector<LaurentOperator>> z;
    z.reserve(n + 1);
    for (int i = 1; i <= n + 1; ++i) {
        std::vector<LaurentOperator> zr;
        zr.reserve(n + 1);
        LaurentOperator istar = adjoint(row[i - 1]);
        for (int j = 1; j <= n + 1; ++j) zr.push_back(istar * row[j - 1]);
        z.push_back(std::move(zr));
    }
    return z;
}

NonstandardFamily nonstandard_family_from(const OpMatrix& m, int n, double c) {
    NonstandardFamily fam;
    const Complex root_c(std::sqrt(c), 0.0);
    fam.x.reserve(n + 1);
    for (int j = 1; j <= n + 1; ++j) fam.x.push_back(root_c * m.at(1, j) + m.at(n + 1, j));
    fam.y.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
        std::vector<LaurentOperator> yr;
        yr.reserve(n + 1);
        LaurentOperator istar = adjoint(fam.x[i]);
        for (int j = 0; j <= n; ++j) yr.push_back(istar * fam.x[j]);
        fam.y.push_back(std::move(yr));
    }
    return fam;
}

NonstandardFamily nonstandard_generators(int n, double q, double c, int dim) {
    if (c < 0.0) throw ConstraintError("c must be nonnegative");
    OpMatrix m = rep_matrix(nonstandard_word(n), q, dim);
    return nonstandard_family_from(m, n, c);
}

LaurentOperator closed_form_sphere_image(int n, int i, double q, int dim) {
    if (i < 1 || i > n + 1) throw IndexError("generator index out of range");
    TruncationSpec trunc = word_trunc(sphere_word(n), dim);
    SlotMatrix g = gamma_matrix(q, dim);
    SlotMatrix as = alpha_star_matrix(q, dim);
    LaurentOperator op = LaurentOperator::torus_monomial(trunc, ExponentVec{1});
    if (i == 1) {
        for (int s = 0; s < n; ++s) op = op * embed_slot(g, s, trunc);
    } else {
        for (int s = 0; s < n + 1 - i; ++s) op = op * embed_slot(g, s, trunc);
        op = op * embed_slot(as, n + 1 - i, trunc);
    }
    return op;
}

LaurentOperator closed_form_nonstandard_image(int n, int i, double q, int dim) {
    if (n < 2) throw ConstraintError("closed form needs n >= 2");
    if (i < 1 || i > n + 1) throw IndexError("generator index out of range");
    TruncationSpec trunc = word_trunc(nonstandard_word(n), dim);
    SlotMatrix g = gamma_matrix(q, dim);
    SlotMatrix a = alpha_matrix(q, dim);
    SlotMatrix as = alpha_star_matrix(q, dim);
    const Complex mqinv(-1.0 / q, 0.0);
    auto t_monomial = [&]() {
        return LaurentOperator::torus_monomial(trunc, ExponentVec(n, -1));
    };

    LaurentOperator total = LaurentOperator::zero(trunc);

    // gamma^(n-i) | alpha* 1^(i-2) | 1^(i-1) | gamma 1^(n-i); absent for i = n+1
    if (i != n + 1) {
        LaurentOperator term = t_monomial();
        for (int s = 0; s < n - i; ++s) term = term * embed_slot(g, s, trunc);
        if (i >= 2) term = term * embed_slot(as, n - i, trunc);
        term = term * embed_slot(g, n + i - 2, trunc);
        total = total + term;
    }

    // middle sum over k; empty unless i >= 3
    if (i != 1 && i != 2) {
        for (int k = n + 1 - i; k <= n - 2; ++k) {
            LaurentOperator term = t_monomial();
            for (int s = 0; s < k; ++s) term = term * embed_slot(g, s, trunc);
            term = term * embed_slot(as, k, trunc);
            term = term * embed_slot(as, 2 * n - k - 2, trunc);
            int scaled = k - (n + 1) + i; // power of -q^{-1} gamma
            for (int s = 0; s < scaled; ++s)
                term = term * (mqinv * embed_slot(g, 2 * n - k - 1 + s, trunc));
            if (i != n + 1) term = term * embed_slot(a, n + i - 2, trunc);
            total = total + term;
        }
    }

    // gamma^(n-1) alpha* (-q^{-1} gamma)^(i-2) alpha 1^(n-i); absent for i = 1
    if (i != 1) {
        LaurentOperator term = t_monomial();
        for (int s = 0; s < n - 1; ++s) term = term * embed_slot(g, s, trunc);
        term = term * embed_slot(as, n - 1, trunc);
        for (int s = 0; s < i - 2; ++s) term = term * (mqinv * embed_slot(g, n + s, trunc));
        if (i != n + 1) term = term * embed_slot(a, n + i - 2, trunc);
        total = total + term;
    }
    return total;
}

std::optional<std::pair<int, int>> torus_lm(const ExponentVec& e) {
    if (e.empty()) return std::nullopt;
    int l = e[0];
    int m = e.size() > 1 ? e[1] : 0;
    for (size_t i = 1; i < e.size(); ++i)
        if (e[i] != m) return std::nullopt;
    return std::make_pair(l, m);
}

} // namespace qpg
