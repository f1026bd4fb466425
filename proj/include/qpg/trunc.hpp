#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "qpg/errors.hpp"

namespace qpg {

// Finite stand-in for a tensor product of one-sided shift spaces: factor a
// keeps levels 0..fock_dims[a]-1.  torus_rank counts the commuting Laurent
// variables carried alongside; interior_margin is the default boundary cut
// used by truncation-aware comparisons.
struct TruncationSpec {
    std::vector<int> fock_dims;
    int torus_rank = 0;
    int interior_margin = 0;

    TruncationSpec() = default;
    TruncationSpec(std::vector<int> dims, int rank, int margin = 0)
        : fock_dims(std::move(dims)), torus_rank(rank), interior_margin(margin) {
        validate();
    }

    void validate() const {
        if (torus_rank < 0) throw ConstraintError("torus_rank must be nonnegative");
        if (interior_margin < 0) throw ConstraintError("interior_margin must be nonnegative");
        for (int d : fock_dims)
            if (d < 2) throw ConstraintError("every fock dimension must be >= 2");
        if (!fock_dims.empty()) {
            int dmin = *std::min_element(fock_dims.begin(), fock_dims.end());
            if (interior_margin >= dmin)
                throw ConstraintError("interior_margin must be smaller than every fock dimension");
        }
    }

    int factors() const { return static_cast<int>(fock_dims.size()); }

    // Total dimension of the truncated tensor product (1 when no factors).
    std::int64_t grid_size() const {
        std::int64_t g = 1;
        for (int d : fock_dims) g *= d;
        return g;
    }

    bool operator==(const TruncationSpec& o) const {
        return fock_dims == o.fock_dims && torus_rank == o.torus_rank;
    }
    bool operator!=(const TruncationSpec& o) const { return !(*this == o); }
};

inline void require_same_trunc(const TruncationSpec& a, const TruncationSpec& b) {
    if (a != b) throw ShapeError("operands live on different truncations");
}

} // namespace qpg
