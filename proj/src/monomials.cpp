#include "qpg/monomials.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace qpg {

namespace {

LaurentOperator power(const LaurentOperator& base, int e, const LaurentOperator& one) {
    LaurentOperator r = one;
    for (int i = 0; i < e; ++i) r = r * base;
    return r;
}

} // namespace

LaurentOperator monomial_p(int n, const std::vector<int>& i_pow, const std::vector<int>& j_pow,
                           const std::vector<int>& k_pow,
                           const std::vector<LaurentOperator>& sphere_gens) {
    if (static_cast<int>(sphere_gens.size()) != n + 1)
        throw ConstraintError("expected n+1 sphere generators");
    if (static_cast<int>(i_pow.size()) != n || static_cast<int>(k_pow.size()) != n)
        throw ConstraintError("i and k must have n entries");
    if (static_cast<int>(j_pow.size()) != n + 1)
        throw ConstraintError("j must have n+1 entries");
    for (int m = 0; m < n; ++m) {
        if (i_pow[m] < 0 || k_pow[m] < 0 || j_pow[m] < 0)
            throw ConstraintError("negative exponent");
        if (i_pow[m] * k_pow[m] != 0)
            throw ConstraintError("i_m k_m must vanish for every m");
    }
    const TruncationSpec& trunc = sphere_gens.front().trunc();
    for (const auto& g : sphere_gens) require_same_trunc(trunc, g.trunc());

    LaurentOperator one = LaurentOperator::identity(trunc);
    LaurentOperator p = one;
    for (int m = n; m >= 1; --m)
        p = p * power(adjoint(sphere_gens[m - 1]), i_pow[m - 1], one);
    for (int m = 1; m <= n; ++m) {
        LaurentOperator y = sphere_gens[m - 1] * adjoint(sphere_gens[m - 1]);
        p = p * power(y, j_pow[m - 1], one);
    }
    int jn = j_pow[n];
    if (jn >= 0)
        p = p * power(sphere_gens[n], jn, one);
    else
        p = p * power(adjoint(sphere_gens[n]), -jn, one);
    for (int m = 1; m <= n; ++m) p = p * power(sphere_gens[m - 1], k_pow[m - 1], one);
    return p;
}

LaurentOperator monomial_P(int n, const std::vector<int>& r_pow, const std::vector<int>& iseq,
                           const std::vector<int>& jseq,
                           const std::vector<std::vector<LaurentOperator>>& z) {
    if (static_cast<int>(z.size()) != n + 1)
        throw ConstraintError("expected an (n+1)x(n+1) generator matrix");
    for (const auto& row : z)
        if (static_cast<int>(row.size()) != n + 1)
            throw ConstraintError("expected an (n+1)x(n+1) generator matrix");
    if (static_cast<int>(r_pow.size()) != n) throw ConstraintError("r must have n entries");
    for (int e : r_pow)
        if (e < 0) throw ConstraintError("negative exponent");
    if (iseq.size() != jseq.size()) throw ConstraintError("index sequences differ in length");
    for (size_t t = 0; t < iseq.size(); ++t) {
        if (iseq[t] < 1 || iseq[t] > n + 1 || jseq[t] < 1 || jseq[t] > n + 1)
            throw ConstraintError("index out of range");
        if (t > 0 && iseq[t] > iseq[t - 1]) throw ConstraintError("i-sequence must be nonincreasing");
        if (t > 0 && jseq[t] < jseq[t - 1]) throw ConstraintError("j-sequence must be nondecreasing");
    }
    std::set<int> iset(iseq.begin(), iseq.end());
    for (int v : jseq)
        if (iset.count(v)) throw ConstraintError("index sets must be disjoint");

    const TruncationSpec& trunc = z[0][0].trunc();
    LaurentOperator one = LaurentOperator::identity(trunc);
    LaurentOperator p = one;
    for (int m = 1; m <= n; ++m) p = p * power(z[m - 1][m - 1], r_pow[m - 1], one);
    for (size_t t = 0; t < iseq.size(); ++t) p = p * z[iseq[t] - 1][jseq[t] - 1];
    return p;
}

GramRank gram_rank(const std::vector<LaurentOperator>& ops, int margin, double tol) {
    GramRank result;
    result.count = static_cast<int>(ops.size());
    if (ops.empty()) return result;
    const TruncationSpec& trunc = ops.front().trunc();
    for (const auto& op : ops) require_same_trunc(trunc, op.trunc());

    using Key = std::vector<int>;
    std::vector<std::vector<std::pair<Key, Complex>>> flat(ops.size());
    for (size_t oi = 0; oi < ops.size(); ++oi) {
        for (const auto& ent : interior_entries(ops[oi], margin)) {
            Key k;
            k.reserve(ent.exponent.size() + ent.row.size() + ent.col.size());
            k.insert(k.end(), ent.exponent.begin(), ent.exponent.end());
            k.insert(k.end(), ent.row.begin(), ent.row.end());
            k.insert(k.end(), ent.col.begin(), ent.col.end());
            flat[oi].emplace_back(std::move(k), ent.value);
        }
    }

    // Union ops that share any flattened coordinate; the family matrix is
    // block-diagonal across the resulting components.
    std::vector<int> parent(ops.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    std::map<Key, int> key_owner;
    for (size_t oi = 0; oi < ops.size(); ++oi) {
        for (const auto& [k, v] : flat[oi]) {
            auto [it, fresh] = key_owner.try_emplace(k, static_cast<int>(oi));
            if (!fresh) parent[find(static_cast<int>(oi))] = find(it->second);
        }
    }
    std::map<int, std::vector<int>> components;
    for (size_t oi = 0; oi < ops.size(); ++oi) components[find(static_cast<int>(oi))].push_back(static_cast<int>(oi));

    double smallest = 0.0;
    double smallest_rel = 0.0;
    bool any = false;
    for (const auto& [root, members] : components) {
        std::map<Key, int> cols;
        for (int oi : members)
            for (const auto& [k, v] : flat[oi]) cols.try_emplace(k, static_cast<int>(cols.size()));
        if (cols.empty()) continue; // all-zero operators contribute no rank
        const std::int64_t rows = static_cast<std::int64_t>(members.size());
        const std::int64_t ncols = static_cast<std::int64_t>(cols.size());
        if (rows * ncols > 20'000'000)
            throw CapError("rank component too large to densify");
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(rows, ncols);
        for (std::int64_t r = 0; r < rows; ++r)
            for (const auto& [k, v] : flat[members[r]]) a(r, cols.at(k)) = v;
        // rank is invariant under scaling the rows; normalizing makes the
        // test measure angles between the flattened operators rather than
        // their (wildly different) magnitudes
        for (std::int64_t r = 0; r < rows; ++r) {
            double norm = a.row(r).norm();
            if (norm > 0.0) a.row(r) /= norm;
        }
        Eigen::VectorXd sv;
        if (std::max(rows, ncols) <= 512) {
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
            sv = svd.singularValues();
        } else {
            Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
            sv = svd.singularValues();
        }
        if (sv.size() == 0) continue;
        double block_max = sv.maxCoeff();
        result.largest = std::max(result.largest, block_max);
        if (block_max == 0.0) continue;
        double cutoff = tol * block_max;
        for (Eigen::Index s = 0; s < sv.size(); ++s) {
            if (sv[s] >= cutoff) {
                ++result.rank;
                if (!any || sv[s] < smallest) smallest = sv[s];
                double rel = sv[s] / block_max;
                if (!any || rel < smallest_rel) smallest_rel = rel;
                any = true;
            }
        }
    }
    result.smallest_kept = smallest;
    result.smallest_rel = smallest_rel;
    return result;
}

} // namespace qpg
