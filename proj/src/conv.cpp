#include "qpg/conv.hpp"

#include <algorithm>
#include <map>

namespace qpg {

namespace {

bool is_zero(Complex c) { return c.real() == 0.0 && c.imag() == 0.0; }

} // namespace

ConvElement conv_zero(const GroupoidSpec& spec) { return ConvElement{spec, {}}; }

ConvElement conv_delta(const GroupoidSpec& spec, const GroupoidMorphism& g, Complex v) {
    GroupoidMorphism c = canonicalize(spec, g);
    ConvElement e{spec, {}};
    if (!is_zero(v)) e.terms.emplace(std::move(c), v);
    return e;
}

ConvElement conv_add(const ConvElement& a, const ConvElement& b) {
    require_same_spec(a.spec, b.spec);
    ConvElement r = a;
    for (const auto& [g, v] : b.terms) {
        auto [it, fresh] = r.terms.try_emplace(g, v);
        if (!fresh) {
            it->second += v;
            if (is_zero(it->second)) r.terms.erase(it);
        }
    }
    return r;
}

ConvElement conv_scale(Complex s, const ConvElement& a) {
    ConvElement r{a.spec, {}};
    if (is_zero(s)) return r;
    for (const auto& [g, v] : a.terms) r.terms.emplace(g, s * v);
    return r;
}

ConvElement convolve(const ConvElement& f, const ConvElement& g) {
    require_same_spec(f.spec, g.spec);
    ConvElement r{f.spec, {}};
    for (const auto& [g1, v1] : f.terms) {
        for (const auto& [g2, v2] : g.terms) {
            auto prod = compose(f.spec, g1, g2);
            if (!prod) continue;
            auto [it, fresh] = r.terms.try_emplace(*prod, v1 * v2);
            if (!fresh) {
                it->second += v1 * v2;
                if (is_zero(it->second)) r.terms.erase(it);
            }
        }
    }
    return r;
}

ConvElement involution(const ConvElement& f) {
    ConvElement r{f.spec, {}};
    for (const auto& [g, v] : f.terms) r.terms.emplace(inverse(f.spec, g), std::conj(v));
    return r;
}

bool conv_equal(const ConvElement& a, const ConvElement& b, double tol) {
    require_same_spec(a.spec, b.spec);
    auto ita = a.terms.begin();
    auto itb = b.terms.begin();
    while (ita != a.terms.end() || itb != b.terms.end()) {
        if (itb == b.terms.end() || (ita != a.terms.end() && ita->first < itb->first)) {
            if (std::abs(ita->second) > tol) return false;
            ++ita;
        } else if (ita == a.terms.end() || itb->first < ita->first) {
            if (std::abs(itb->second) > tol) return false;
            ++itb;
        } else {
            if (std::abs(ita->second - itb->second) > tol) return false;
            ++ita;
            ++itb;
        }
    }
    return true;
}

bool point_in_stratum(const ExtendedPoint& w, const StratumMask& mask) {
    if (mask.size() != w.c.size()) throw ShapeError("stratum mask length mismatch");
    for (size_t i = 0; i < mask.size(); ++i)
        if (mask[i] && !is_inf(w.c[i])) return false;
    return true;
}

ConvElement restrict_closed(const ConvElement& f, const StratumMask& mask) {
    if (static_cast<int>(mask.size()) != f.spec.cone_dim())
        throw ConstraintError("stratum mask does not match the groupoid");
    ConvElement r{f.spec, {}};
    for (const auto& [g, v] : f.terms)
        if (point_in_stratum(source_point(g), mask)) r.terms.emplace(g, v);
    return r;
}

std::vector<GroupoidMorphism> complement_ideal_basis(const GroupoidSpec& spec,
                                                     const StratumMask& mask, std::int64_t cap) {
    if (static_cast<int>(mask.size()) != spec.cone_dim())
        throw ConstraintError("stratum mask does not match the groupoid");
    std::vector<GroupoidMorphism> out;
    for (const auto& g : enumerate_morphisms(spec, cap))
        if (!point_in_stratum(source_point(g), mask)) out.push_back(g);
    return out;
}

AxiomReport verify_groupoid_axioms(const GroupoidSpec& spec, bool check_triples,
                                   std::int64_t cap) {
    AxiomReport rep;
    auto arrows = enumerate_morphisms(spec, cap);
    rep.arrows = static_cast<std::int64_t>(arrows.size());

    for (const auto& g : arrows) {
        // inverse laws
        GroupoidMorphism gi = inverse(spec, g);
        try {
            auto left = compose(spec, gi, g);
            auto right = compose(spec, g, gi);
            if (!left || !right) {
                rep.inverse_ok = false;
            } else {
                if (!(*left == unit_at(spec, source_point(g)))) rep.inverse_ok = false;
                if (!(*right == unit_at(spec, range_point(g)))) rep.inverse_ok = false;
            }
        } catch (const OverflowError&) {
            rep.inverse_ok = false; // inverses never overflow
        }
    }

    // composable pairs: range(h) = source(g)
    std::map<ExtendedPoint, std::vector<const GroupoidMorphism*>> by_range;
    for (const auto& g : arrows) by_range[range_point(g)].push_back(&g);

    for (const auto& g : arrows) {
        auto hit = by_range.find(source_point(g));
        if (hit == by_range.end()) continue;
        for (const auto* h : hit->second) {
            ++rep.composable_pairs;
            try {
                auto gh = compose(spec, g, *h);
                if (!gh) {
                    rep.source_range_ok = false;
                    continue;
                }
                if (!(source_point(*gh) == source_point(*h)) ||
                    !(range_point(*gh) == range_point(g)))
                    rep.source_range_ok = false;
            } catch (const OverflowError&) {
                // outside the truncation box; not a law violation
            }
        }
    }

    if (check_triples) {
        for (const auto& g : arrows) {
            auto hit = by_range.find(source_point(g));
            if (hit == by_range.end()) continue;
            for (const auto* h : hit->second) {
                auto kit = by_range.find(source_point(*h));
                if (kit == by_range.end()) continue;
                for (const auto* k : kit->second) {
                    ++rep.triples_checked;
                    try {
                        auto gh = compose(spec, g, *h);
                        auto hk = compose(spec, *h, *k);
                        if (!gh || !hk) continue;
                        auto lhs = compose(spec, *gh, *k);
                        auto rhs = compose(spec, g, *hk);
                        if (!lhs || !rhs || !(*lhs == *rhs)) rep.associativity_ok = false;
                    } catch (const OverflowError&) {
                    }
                }
            }
        }
    }
    return rep;
}

bool verify_closure(const GroupoidSpec& spec, std::int64_t cap) {
    auto arrows = enumerate_morphisms(spec, cap);
    std::map<ExtendedPoint, std::vector<const GroupoidMorphism*>> by_range;
    for (const auto& g : arrows) by_range[range_point(g)].push_back(&g);
    for (const auto& g : arrows) {
        if (!member(spec, inverse(spec, g))) return false;
        auto hit = by_range.find(source_point(g));
        if (hit == by_range.end()) continue;
        for (const auto* h : hit->second) {
            try {
                auto gh = compose(spec, g, *h);
                if (gh && !member(spec, *gh)) return false;
            } catch (const OverflowError&) {
            }
        }
    }
    return true;
}

namespace {

// All representatives of the class of a canonical quotient morphism within
// the truncation: the tail after the first infinite coordinate varies freely
// over values compatible with membership.
std::vector<GroupoidMorphism> class_representatives(const GroupoidSpec& spec,
                                                    const GroupoidMorphism& canon) {
    std::vector<GroupoidMorphism> reps{canon};
    const int m = spec.cone_dim();
    int first_inf = -1;
    for (int i = 0; i < m; ++i)
        if (is_inf(canon.w.c[i])) {
            first_inf = i;
            break;
        }
    if (first_inf < 0) return reps;
    std::vector<Level> levels;
    for (Level w = 0; w < spec.K; ++w) levels.push_back(w);
    levels.push_back(kInfLevel);
    // vary coordinates after first_inf
    std::vector<int> tail(m - first_inf - 1, 0);
    if (tail.empty()) return reps;
    std::vector<size_t> pick(tail.size(), 0);
    while (true) {
        GroupoidMorphism g = canon;
        for (size_t t = 0; t < pick.size(); ++t) g.w.c[first_inf + 1 + t] = levels[pick[t]];
        if (member(spec, g)) reps.push_back(g);
        int i = static_cast<int>(pick.size()) - 1;
        for (; i >= 0; --i) {
            if (++pick[i] < levels.size()) break;
            pick[i] = 0;
        }
        if (i < 0) break;
    }
    std::sort(reps.begin(), reps.end());
    reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
    return reps;
}

} // namespace

bool verify_quotient_descent(const GroupoidSpec& spec, std::int64_t cap) {
    if (!spec.quotiented()) return true;
    auto canon = enumerate_morphisms(spec, cap);
    std::vector<GroupoidMorphism> all;
    for (const auto& g : canon) {
        auto reps = class_representatives(spec, g);
        all.insert(all.end(), reps.begin(), reps.end());
    }
    if (static_cast<std::int64_t>(all.size()) > cap)
        throw CapError("representative enumeration exceeds the configured cap");
    std::map<ExtendedPoint, std::vector<const GroupoidMorphism*>> by_range;
    for (const auto& g : all) by_range[range_point(g)].push_back(&g);
    for (const auto& g : all) {
        auto hit = by_range.find(source_point(g));
        if (hit == by_range.end()) continue;
        GroupoidMorphism cg = canonicalize(spec, g);
        for (const auto* h : hit->second) {
            try {
                auto gh = compose(spec, g, *h);
                if (!gh) continue;
                GroupoidMorphism ch = canonicalize(spec, *h);
                // canonical forms may compose differently only through their
                // canonical sources; both routes must agree on the class
                GroupoidMorphism lhs = canonicalize(spec, *gh);
                if (!(source_point(cg) == range_point(ch))) {
                    // classes composable via these representatives but not via
                    // canonical forms would break the quotient
                    return false;
                }
                auto canon_prod = compose(spec, cg, ch);
                if (!canon_prod) return false;
                if (!(canonicalize(spec, *canon_prod) == lhs)) return false;
            } catch (const OverflowError&) {
            }
        }
    }
    return true;
}

ExactnessReport verify_exact_sequence(const GroupoidSpec& spec, const StratumMask& mask,
                                      std::int64_t cap) {
    ExactnessReport rep;
    auto arrows = enumerate_morphisms(spec, cap);
    rep.total_arrows = static_cast<std::int64_t>(arrows.size());
    std::vector<GroupoidMorphism> kernel, stratum;
    for (const auto& g : arrows) {
        bool src_in = point_in_stratum(source_point(g), mask);
        bool rng_in = point_in_stratum(range_point(g), mask);
        if (src_in != rng_in) return rep; // stratum not invariant
        (src_in ? stratum : kernel).push_back(g);
    }
    rep.stratum_arrows = static_cast<std::int64_t>(stratum.size());
    rep.kernel_arrows = static_cast<std::int64_t>(kernel.size());
    rep.dimensions_ok = rep.stratum_arrows + rep.kernel_arrows == rep.total_arrows;

    // two-sided ideal + involution closure of the kernel span
    rep.ideal_ok = true;
    std::map<ExtendedPoint, std::vector<const GroupoidMorphism*>> kernel_by_range, kernel_by_source;
    for (const auto& g : kernel) {
        kernel_by_range[range_point(g)].push_back(&g);
        kernel_by_source[source_point(g)].push_back(&g);
        if (point_in_stratum(source_point(inverse(spec, g)), mask)) rep.ideal_ok = false;
    }
    for (const auto& g : arrows) {
        // g * k for kernel k with range(k) = source(g)
        auto hit = kernel_by_range.find(source_point(g));
        if (hit != kernel_by_range.end()) {
            for (const auto* k : hit->second) {
                try {
                    auto gk = compose(spec, g, *k);
                    if (gk && point_in_stratum(source_point(*gk), mask)) rep.ideal_ok = false;
                } catch (const OverflowError&) {
                }
            }
        }
        // k * g for kernel k with source(k) = range(g)
        auto hit2 = kernel_by_source.find(range_point(g));
        if (hit2 != kernel_by_source.end()) {
            for (const auto* k : hit2->second) {
                try {
                    auto kg = compose(spec, *k, g);
                    if (kg && point_in_stratum(source_point(*kg), mask)) rep.ideal_ok = false;
                } catch (const OverflowError&) {
                }
            }
        }
    }

    // multiplicativity of the restriction on delta pairs
    rep.hom_ok = true;
    std::map<ExtendedPoint, std::vector<const GroupoidMorphism*>> by_range;
    for (const auto& g : arrows) by_range[range_point(g)].push_back(&g);
    for (const auto& g : arrows) {
        auto hit = by_range.find(source_point(g));
        if (hit == by_range.end()) continue;
        ConvElement dg = conv_delta(spec, g);
        ConvElement rg = restrict_closed(dg, mask);
        for (const auto* h : hit->second) {
            try {
                ConvElement dh = conv_delta(spec, *h);
                ConvElement lhs = restrict_closed(convolve(dg, dh), mask);
                ConvElement rhs = convolve(rg, restrict_closed(dh, mask));
                if (!conv_equal(lhs, rhs, 0.0)) rep.hom_ok = false;
            } catch (const OverflowError&) {
            }
        }
    }
    return rep;
}

std::vector<StratumReport> composition_series(const GroupoidSpec& spec, std::int64_t cap) {
    if (spec.kind != GroupoidSpec::Kind::ProjectiveSub)
        throw ConstraintError("composition series expects the projective subquotient");
    auto arrows = enumerate_morphisms(spec, cap);
    const int m = spec.cone_dim();

    auto finite_count = [&](const ExtendedPoint& w) {
        int k = 0;
        for (Level v : w.c)
            if (!is_inf(v)) ++k;
        return k;
    };

    std::vector<StratumReport> reports;
    for (int k = 0; k <= m; ++k) {
        StratumReport rep;
        rep.finite_coords = k;
        std::vector<GroupoidMorphism> stratum;
        std::map<ExtendedPoint, int> points;
        for (const auto& g : arrows) {
            if (finite_count(source_point(g)) != k) continue;
            if (finite_count(range_point(g)) != k) continue;
            stratum.push_back(g);
            points.try_emplace(source_point(g), static_cast<int>(points.size()));
            points.try_emplace(range_point(g), static_cast<int>(points.size()));
        }
        rep.points = static_cast<std::int64_t>(points.size());
        rep.arrows = static_cast<std::int64_t>(stratum.size());

        // arrows must biject with (range, source) pairs and satisfy the
        // matrix-unit law under convolution
        bool ok = rep.arrows == rep.points * rep.points;
        std::map<std::pair<ExtendedPoint, ExtendedPoint>, const GroupoidMorphism*> units;
        for (const auto& g : stratum) {
            auto key = std::make_pair(range_point(g), source_point(g));
            if (!units.try_emplace(key, &g).second) ok = false;
        }
        if (ok) {
            for (const auto& [k1, e1] : units) {
                for (const auto& [k2, e2] : units) {
                    try {
                        ConvElement prod = convolve(conv_delta(spec, *e1), conv_delta(spec, *e2));
                        if (k1.second == k2.first) {
                            auto expect = units.find(std::make_pair(k1.first, k2.second));
                            if (expect == units.end()) {
                                ok = false;
                                continue;
                            }
                            if (!conv_equal(prod, conv_delta(spec, *expect->second), 0.0)) ok = false;
                        } else {
                            if (!prod.terms.empty()) ok = false;
                        }
                    } catch (const OverflowError&) {
                        ok = false; // the stated bounds must suffice
                    }
                }
            }
            for (const auto& [key, e] : units) {
                ConvElement inv = involution(conv_delta(spec, *e));
                auto expect = units.find(std::make_pair(key.second, key.first));
                if (expect == units.end() ||
                    !conv_equal(inv, conv_delta(spec, *expect->second), 0.0))
                    ok = false;
            }
        }
        rep.matrix_units_ok = ok;
        reports.push_back(rep);
    }
    return reports;
}

namespace {

EmbeddingReport verify_tower_embedding(bool with_aux, int n, int K, int B, std::int64_t cap) {
    EmbeddingReport rep;
    if (n < 2) throw ConstraintError("embedding check needs n >= 2");
    GroupoidSpec low = with_aux ? GroupoidSpec::sphere_sub(n - 1, K, B)
                                : GroupoidSpec::projective_sub(n - 1, K, B);
    // mandated coordinate can reach n*B in magnitude
    GroupoidSpec high = with_aux ? GroupoidSpec::sphere_sub(n, K, n * B)
                                 : GroupoidSpec::projective_sub(n, K, n * B);

    auto lift = [&](const GroupoidMorphism& g) {
        GroupoidMorphism h;
        h.aux = g.aux;
        h.x = g.x;
        int z = with_aux ? g.aux[0] : 0;
        int s = 0;
        for (int v : g.x) s += v;
        h.x.push_back(-z - s);
        h.w = g.w;
        h.w.c.push_back(kInfLevel);
        return h;
    };

    auto lows = enumerate_morphisms(low, cap);
    std::vector<GroupoidMorphism> image;
    for (const auto& g : lows) {
        GroupoidMorphism h = lift(g);
        if (!member(high, h)) return rep; // image must land in the subgroupoid
        image.push_back(canonicalize(high, h));
    }
    std::sort(image.begin(), image.end());
    image.erase(std::unique(image.begin(), image.end()), image.end());
    rep.mapped = static_cast<std::int64_t>(image.size());

    // target: canonical arrows with the last coordinate infinite whose data
    // fits the lower truncation bounds
    std::vector<GroupoidMorphism> target;
    for (const auto& g : enumerate_morphisms(high, cap)) {
        if (!is_inf(g.w.c[n - 1])) continue;
        bool fits = true;
        for (int v : g.aux)
            if (std::abs(v) > B) fits = false;
        for (int i = 0; i + 1 < n; ++i)
            if (std::abs(g.x[i]) > B) fits = false;
        if (fits) target.push_back(g);
    }
    std::sort(target.begin(), target.end());
    rep.target = static_cast<std::int64_t>(target.size());
    rep.bijective =
        rep.mapped == static_cast<std::int64_t>(lows.size()) && image == target;

    // compose-preserving on all composable pairs of the lower groupoid
    rep.compose_preserving = true;
    std::map<ExtendedPoint, std::vector<const GroupoidMorphism*>> by_range;
    for (const auto& g : lows) by_range[range_point(g)].push_back(&g);
    for (const auto& g : lows) {
        auto hit = by_range.find(source_point(g));
        if (hit == by_range.end()) continue;
        for (const auto* h : hit->second) {
            try {
                auto gh = compose(low, g, *h);
                if (!gh) {
                    rep.compose_preserving = false;
                    continue;
                }
                auto lifted = compose(high, lift(g), lift(*h));
                if (!lifted || !(*lifted == lift(*gh))) rep.compose_preserving = false;
            } catch (const OverflowError&) {
            }
        }
    }
    return rep;
}

} // namespace

EmbeddingReport verify_sphere_embedding(int n, int K, int B, std::int64_t cap) {
    return verify_tower_embedding(true, n, K, B, cap);
}

EmbeddingReport verify_projective_embedding(int n, int K, int B, std::int64_t cap) {
    return verify_tower_embedding(false, n, K, B, cap);
}

bool verify_open_stratum_structure(int n, int K, int B, std::int64_t cap) {
    GroupoidSpec sphere = GroupoidSpec::sphere_sub(n, K, B);
    GroupoidSpec pair = GroupoidSpec::augmented(1, n, K, B);

    auto all_finite = [&](const GroupoidMorphism& g) {
        for (Level v : g.w.c)
            if (is_inf(v)) return false;
        return true;
    };

    std::vector<GroupoidMorphism> open_part;
    for (const auto& g : enumerate_morphisms(sphere, cap))
        if (all_finite(g)) open_part.push_back(g);

    std::vector<GroupoidMorphism> pair_part;
    for (const auto& g : enumerate_morphisms(pair, cap))
        if (all_finite(g)) pair_part.push_back(g);

    if (open_part != pair_part) return false;

    // composition agrees (same data, same law); spot the full pair set
    std::map<ExtendedPoint, std::vector<const GroupoidMorphism*>> by_range;
    for (const auto& g : open_part) by_range[range_point(g)].push_back(&g);
    for (const auto& g : open_part) {
        auto hit = by_range.find(source_point(g));
        if (hit == by_range.end()) continue;
        for (const auto* h : hit->second) {
            try {
                auto a = compose(sphere, g, *h);
                auto b = compose(pair, g, *h);
                if (a.has_value() != b.has_value()) return false;
                if (a && !(*a == *b)) return false;
            } catch (const OverflowError&) {
            }
        }
    }
    return true;
}

} // namespace qpg
