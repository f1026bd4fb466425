#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpg/errors.hpp"

namespace qpg {

// Levels of a truncated extended positive cone; kInf marks the point at
// infinity, which absorbs translations.
using Level = int;
constexpr Level kInfLevel = -1;

inline bool is_inf(Level v) { return v == kInfLevel; }

// Point of the truncated cone: each coordinate in {0..K-1} or infinity.
struct ExtendedPoint {
    std::vector<Level> c;

    bool operator==(const ExtendedPoint& o) const { return c == o.c; }
    bool operator<(const ExtendedPoint& o) const { return c < o.c; }
};

// Arrow of a truncated transformation groupoid: aux components act trivially
// (they only accumulate), x translates the cone, w is the source point.
// Range = x + w with infinity absorbing; on infinite coordinates the
// translation entry is still recorded (it enters subgroupoid membership).
struct GroupoidMorphism {
    std::vector<int> aux;
    std::vector<int> x;
    ExtendedPoint w;

    bool operator==(const GroupoidMorphism& o) const {
        return aux == o.aux && x == o.x && w == o.w;
    }
    bool operator<(const GroupoidMorphism& o) const {
        if (aux != o.aux) return aux < o.aux;
        if (x != o.x) return x < o.x;
        return w < o.w;
    }
};

struct GroupoidSpec {
    enum class Kind {
        Toeplitz,          // Z^m acting on the truncated cone
        Augmented,         // Z^p (trivial) x Toeplitz
        SphereSub,         // infinite coordinates force x_i = -z - x_1 - ... - x_{i-1}, tail zero
        ProjectiveSub,     // infinite coordinates force x_i = -x_1 - ... - x_{i-1}, tail zero
        PodlesSub,         // pairs (j, j, k_1, k_2) with k_1 or k_2 infinite
        NonstandardAmbient // Z x Toeplitz on 2n-1 coordinates
    };

    Kind kind = Kind::Toeplitz;
    int n = 1; // cone coordinates for Toeplitz/SphereSub/ProjectiveSub; size parameter otherwise
    int p = 0; // trivial-action components (Augmented only)
    int K = 3; // level cutoff
    int B = 2; // translation bound

    static GroupoidSpec toeplitz(int m, int K, int B);
    static GroupoidSpec augmented(int p, int m, int K, int B);
    static GroupoidSpec sphere_sub(int n, int K, int B);
    static GroupoidSpec projective_sub(int n, int K, int B);
    static GroupoidSpec podles_sub(int K, int B);
    static GroupoidSpec nonstandard_ambient(int n, int K, int B);

    int cone_dim() const;  // m
    int aux_dim() const;   // p
    bool quotiented() const {
        return kind == Kind::SphereSub || kind == Kind::ProjectiveSub;
    }

    bool operator==(const GroupoidSpec& o) const {
        return kind == o.kind && n == o.n && p == o.p && K == o.K && B == o.B;
    }
    bool operator!=(const GroupoidSpec& o) const { return !(*this == o); }
};

void require_same_spec(const GroupoidSpec& a, const GroupoidSpec& b);

// Structural validity in the ambient truncated groupoid (sizes, bounds,
// finite translates inside the box).  Membership conditions come on top.
bool valid_morphism(const GroupoidSpec& spec, const GroupoidMorphism& g);

ExtendedPoint range_point(const GroupoidMorphism& g);
ExtendedPoint source_point(const GroupoidMorphism& g);

GroupoidMorphism unit_at(const GroupoidSpec& spec, const ExtendedPoint& w);
GroupoidMorphism inverse(const GroupoidSpec& spec, const GroupoidMorphism& g);

// Composition g after h, defined when source(g) = range(h).  Throws
// OverflowError when the sum leaves the translation bound.
std::optional<GroupoidMorphism> compose(const GroupoidSpec& spec, const GroupoidMorphism& g,
                                        const GroupoidMorphism& h);

// Subgroupoid membership: the quoted implications at every infinite
// coordinate (and the diagonal/infinity constraints for the Podles case).
bool member(const GroupoidSpec& spec, const GroupoidMorphism& g);

// Canonical representative of the equivalence class: after the first
// infinite coordinate all later coordinates are infinite.  Identity map for
// non-quotiented specs.  Requires member(spec, g).
GroupoidMorphism canonicalize(const GroupoidSpec& spec, const GroupoidMorphism& g);

// All canonical morphisms of the truncated spec, duplicate-free, sorted.
std::vector<GroupoidMorphism> enumerate_morphisms(const GroupoidSpec& spec,
                                                  std::int64_t cap = 1'000'000);

std::vector<ExtendedPoint> enumerate_units(const GroupoidSpec& spec,
                                           std::int64_t cap = 1'000'000);

std::string to_string(const GroupoidMorphism& g);

} // namespace qpg
