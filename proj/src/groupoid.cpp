#include "qpg/groupoid.hpp"

#include <algorithm>
#include <sstream>

namespace qpg {

GroupoidSpec GroupoidSpec::toeplitz(int m, int K, int B) {
    if (m < 1 || K < 1 || B < 0) throw ConstraintError("invalid groupoid parameters");
    GroupoidSpec s;
    s.kind = Kind::Toeplitz;
    s.n = m;
    s.K = K;
    s.B = B;
    return s;
}

GroupoidSpec GroupoidSpec::augmented(int p, int m, int K, int B) {
    if (p < 0 || m < 1 || K < 1 || B < 0) throw ConstraintError("invalid groupoid parameters");
    GroupoidSpec s;
    s.kind = Kind::Augmented;
    s.n = m;
    s.p = p;
    s.K = K;
    s.B = B;
    return s;
}

GroupoidSpec GroupoidSpec::sphere_sub(int n, int K, int B) {
    if (n < 1 || K < 1 || B < 0) throw ConstraintError("invalid groupoid parameters");
    GroupoidSpec s;
    s.kind = Kind::SphereSub;
    s.n = n;
    s.K = K;
    s.B = B;
    return s;
}

GroupoidSpec GroupoidSpec::projective_sub(int n, int K, int B) {
    if (n < 1 || K < 1 || B < 0) throw ConstraintError("invalid groupoid parameters");
    GroupoidSpec s;
    s.kind = Kind::ProjectiveSub;
    s.n = n;
    s.K = K;
    s.B = B;
    return s;
}

GroupoidSpec GroupoidSpec::podles_sub(int K, int B) {
    if (K < 1 || B < 0) throw ConstraintError("invalid groupoid parameters");
    GroupoidSpec s;
    s.kind = Kind::PodlesSub;
    s.n = 1;
    s.K = K;
    s.B = B;
    return s;
}

GroupoidSpec GroupoidSpec::nonstandard_ambient(int n, int K, int B) {
    if (n < 1 || K < 1 || B < 0) throw ConstraintError("invalid groupoid parameters");
    GroupoidSpec s;
    s.kind = Kind::NonstandardAmbient;
    s.n = n;
    s.K = K;
    s.B = B;
    return s;
}

int GroupoidSpec::cone_dim() const {
    switch (kind) {
    case Kind::Toeplitz:
    case Kind::Augmented:
    case Kind::SphereSub:
    case Kind::ProjectiveSub:
        return n;
    case Kind::PodlesSub:
        return 2;
    case Kind::NonstandardAmbient:
        return 2 * n - 1;
    }
    return n;
}

int GroupoidSpec::aux_dim() const {
    switch (kind) {
    case Kind::Toeplitz:
    case Kind::ProjectiveSub:
    case Kind::PodlesSub:
        return 0;
    case Kind::Augmented:
        return p;
    case Kind::SphereSub:
    case Kind::NonstandardAmbient:
        return 1;
    }
    return 0;
}

void require_same_spec(const GroupoidSpec& a, const GroupoidSpec& b) {
    if (a != b) throw ShapeError("elements live on different groupoids");
}

bool valid_morphism(const GroupoidSpec& spec, const GroupoidMorphism& g) {
    const int m = spec.cone_dim();
    if (static_cast<int>(g.aux.size()) != spec.aux_dim()) return false;
    if (static_cast<int>(g.x.size()) != m) return false;
    if (static_cast<int>(g.w.c.size()) != m) return false;
    for (int a : g.aux)
        if (std::abs(a) > spec.B) return false;
    for (int i = 0; i < m; ++i) {
        if (std::abs(g.x[i]) > spec.B) return false;
        Level w = g.w.c[i];
        if (is_inf(w)) continue;
        if (w < 0 || w >= spec.K) return false;
        int t = w + g.x[i];
        if (t < 0 || t >= spec.K) return false;
    }
    return true;
}

ExtendedPoint source_point(const GroupoidMorphism& g) { return g.w; }

ExtendedPoint range_point(const GroupoidMorphism& g) {
    ExtendedPoint r = g.w;
    for (size_t i = 0; i < r.c.size(); ++i)
        if (!is_inf(r.c[i])) r.c[i] += g.x[i];
    return r;
}

GroupoidMorphism unit_at(const GroupoidSpec& spec, const ExtendedPoint& w) {
    GroupoidMorphism g;
    g.aux.assign(spec.aux_dim(), 0);
    g.x.assign(spec.cone_dim(), 0);
    g.w = w;
    return g;
}

GroupoidMorphism inverse(const GroupoidSpec& spec, const GroupoidMorphism& g) {
    (void)spec;
    GroupoidMorphism r;
    r.aux.resize(g.aux.size());
    for (size_t i = 0; i < g.aux.size(); ++i) r.aux[i] = -g.aux[i];
    r.x.resize(g.x.size());
    for (size_t i = 0; i < g.x.size(); ++i) r.x[i] = -g.x[i];
    r.w = range_point(g);
    return r;
}

std::optional<GroupoidMorphism> compose(const GroupoidSpec& spec, const GroupoidMorphism& g,
                                        const GroupoidMorphism& h) {
    if (!(source_point(g) == range_point(h))) return std::nullopt;
    GroupoidMorphism r;
    r.aux.resize(g.aux.size());
    for (size_t i = 0; i < g.aux.size(); ++i) {
        r.aux[i] = g.aux[i] + h.aux[i];
        if (std::abs(r.aux[i]) > spec.B)
            throw OverflowError("composition leaves the translation bound; raise B");
    }
    r.x.resize(g.x.size());
    for (size_t i = 0; i < g.x.size(); ++i) {
        r.x[i] = g.x[i] + h.x[i];
        if (std::abs(r.x[i]) > spec.B)
            throw OverflowError("composition leaves the translation bound; raise B");
    }
    r.w = h.w;
    return r;
}

namespace {

// The translation value mandated at an infinite coordinate i (0-based).
int mandated_translation(const GroupoidSpec& spec, const GroupoidMorphism& g, int i) {
    int z = spec.kind == GroupoidSpec::Kind::SphereSub ? g.aux[0] : 0;
    int s = 0;
    for (int j = 0; j < i; ++j) s += g.x[j];
    return -z - s;
}

} // namespace

bool member(const GroupoidSpec& spec, const GroupoidMorphism& g) {
    if (!valid_morphism(spec, g)) return false;
    switch (spec.kind) {
    case GroupoidSpec::Kind::Toeplitz:
    case GroupoidSpec::Kind::Augmented:
    case GroupoidSpec::Kind::NonstandardAmbient:
        return true;
    case GroupoidSpec::Kind::PodlesSub:
        return g.x[0] == g.x[1] && (is_inf(g.w.c[0]) || is_inf(g.w.c[1]));
    case GroupoidSpec::Kind::SphereSub:
    case GroupoidSpec::Kind::ProjectiveSub: {
        const int m = spec.cone_dim();
        for (int i = 0; i < m; ++i) {
            if (!is_inf(g.w.c[i])) continue;
            if (g.x[i] != mandated_translation(spec, g, i)) return false;
            for (int j = i + 1; j < m; ++j)
                if (g.x[j] != 0) return false;
        }
        return true;
    }
    }
    return false;
}

GroupoidMorphism canonicalize(const GroupoidSpec& spec, const GroupoidMorphism& g) {
    if (!member(spec, g)) throw ConstraintError("morphism is not a member of the subgroupoid");
    if (!spec.quotiented()) return g;
    GroupoidMorphism r = g;
    const int m = spec.cone_dim();
    bool seen_inf = false;
    for (int i = 0; i < m; ++i) {
        if (seen_inf)
            r.w.c[i] = kInfLevel;
        else if (is_inf(r.w.c[i]))
            seen_inf = true;
    }
    return r;
}

namespace {

void bump(std::int64_t& count, std::int64_t cap) {
    if (++count > cap) throw CapError("enumeration exceeds the configured cap");
}

// All (x, w) choices for one free cone coordinate.
std::vector<std::pair<int, Level>> coordinate_choices(const GroupoidSpec& spec) {
    std::vector<std::pair<int, Level>> out;
    for (Level w = 0; w < spec.K; ++w)
        for (int x = -spec.B; x <= spec.B; ++x)
            if (w + x >= 0 && w + x < spec.K) out.emplace_back(x, w);
    for (int x = -spec.B; x <= spec.B; ++x) out.emplace_back(x, kInfLevel);
    return out;
}

void enumerate_ambient(const GroupoidSpec& spec, std::vector<GroupoidMorphism>& out,
                       std::int64_t cap) {
    const int m = spec.cone_dim();
    const int p = spec.aux_dim();
    auto choices = coordinate_choices(spec);
    std::int64_t count = 0;
    std::vector<int> aux(p, -spec.B);
    GroupoidMorphism g;
    g.x.assign(m, 0);
    g.w.c.assign(m, 0);
    std::vector<size_t> pick(m, 0);
    bool aux_done = false;
    while (!aux_done) {
        g.aux.assign(aux.begin(), aux.end());
        std::fill(pick.begin(), pick.end(), 0);
        while (true) {
            for (int i = 0; i < m; ++i) {
                g.x[i] = choices[pick[i]].first;
                g.w.c[i] = choices[pick[i]].second;
            }
            bump(count, cap);
            out.push_back(g);
            int i = m - 1;
            for (; i >= 0; --i) {
                if (++pick[i] < choices.size()) break;
                pick[i] = 0;
            }
            if (i < 0) break;
        }
        int a = p - 1;
        for (; a >= 0; --a) {
            if (++aux[a] <= spec.B) break;
            aux[a] = -spec.B;
        }
        aux_done = (a < 0);
        if (p == 0) aux_done = true;
    }
}

// Canonical members of the quotiented subgroupoids: a finite prefix of free
// coordinates, then optionally one infinite coordinate with its mandated
// translation and an all-infinite, zero-translation tail.
void enumerate_quotiented(const GroupoidSpec& spec, std::vector<GroupoidMorphism>& out,
                          std::int64_t cap) {
    const int m = spec.cone_dim();
    const bool has_z = spec.kind == GroupoidSpec::Kind::SphereSub;
    std::int64_t count = 0;
    auto choices = coordinate_choices(spec);
    std::vector<std::pair<int, Level>> finite_choices;
    for (auto& c : choices)
        if (!is_inf(c.second)) finite_choices.push_back(c);

    GroupoidMorphism g;
    g.aux.assign(spec.aux_dim(), 0);
    g.x.assign(m, 0);
    g.w.c.assign(m, 0);

    auto emit_with_tail = [&](int prefix_len) {
        // close with an infinite coordinate at prefix_len (if any room)
        if (prefix_len == m) {
            bump(count, cap);
            out.push_back(g);
            return;
        }
        int forced = mandated_translation(spec, g, prefix_len);
        if (std::abs(forced) > spec.B) return;
        GroupoidMorphism h = g;
        h.x[prefix_len] = forced;
        h.w.c[prefix_len] = kInfLevel;
        for (int j = prefix_len + 1; j < m; ++j) {
            h.x[j] = 0;
            h.w.c[j] = kInfLevel;
        }
        bump(count, cap);
        out.push_back(h);
    };

    // depth-first over finite prefixes
    std::function<void(int)> walk = [&](int depth) {
        emit_with_tail(depth);
        if (depth == m) return;
        for (auto& c : finite_choices) {
            g.x[depth] = c.first;
            g.w.c[depth] = c.second;
            walk(depth + 1);
        }
        g.x[depth] = 0;
        g.w.c[depth] = 0;
    };

    int zlo = has_z ? -spec.B : 0;
    int zhi = has_z ? spec.B : 0;
    for (int z = zlo; z <= zhi; ++z) {
        if (has_z) g.aux[0] = z;
        walk(0);
    }
}

void enumerate_podles(const GroupoidSpec& spec, std::vector<GroupoidMorphism>& out,
                      std::int64_t cap) {
    std::int64_t count = 0;
    GroupoidMorphism g;
    g.x.assign(2, 0);
    g.w.c.assign(2, 0);
    std::vector<Level> levels;
    for (Level w = 0; w < spec.K; ++w) levels.push_back(w);
    levels.push_back(kInfLevel);
    for (Level w1 : levels) {
        for (Level w2 : levels) {
            if (!is_inf(w1) && !is_inf(w2)) continue;
            for (int j = -spec.B; j <= spec.B; ++j) {
                if (!is_inf(w1) && (w1 + j < 0 || w1 + j >= spec.K)) continue;
                if (!is_inf(w2) && (w2 + j < 0 || w2 + j >= spec.K)) continue;
                g.x[0] = g.x[1] = j;
                g.w.c[0] = w1;
                g.w.c[1] = w2;
                bump(count, cap);
                out.push_back(g);
            }
        }
    }
}

} // namespace

std::vector<GroupoidMorphism> enumerate_morphisms(const GroupoidSpec& spec, std::int64_t cap) {
    std::vector<GroupoidMorphism> out;
    switch (spec.kind) {
    case GroupoidSpec::Kind::Toeplitz:
    case GroupoidSpec::Kind::Augmented:
    case GroupoidSpec::Kind::NonstandardAmbient:
        enumerate_ambient(spec, out, cap);
        break;
    case GroupoidSpec::Kind::SphereSub:
    case GroupoidSpec::Kind::ProjectiveSub:
        enumerate_quotiented(spec, out, cap);
        break;
    case GroupoidSpec::Kind::PodlesSub:
        enumerate_podles(spec, out, cap);
        break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<ExtendedPoint> enumerate_units(const GroupoidSpec& spec, std::int64_t cap) {
    const int m = spec.cone_dim();
    std::vector<Level> levels;
    for (Level w = 0; w < spec.K; ++w) levels.push_back(w);
    levels.push_back(kInfLevel);
    std::vector<ExtendedPoint> out;
    std::vector<size_t> pick(m, 0);
    std::int64_t count = 0;
    while (true) {
        ExtendedPoint pt;
        pt.c.resize(m);
        for (int i = 0; i < m; ++i) pt.c[i] = levels[pick[i]];
        GroupoidMorphism u = unit_at(spec, pt);
        if (member(spec, u)) {
            GroupoidMorphism cu = canonicalize(spec, u);
            bump(count, cap);
            out.push_back(cu.w);
        }
        int i = m - 1;
        for (; i >= 0; --i) {
            if (++pick[i] < levels.size()) break;
            pick[i] = 0;
        }
        if (i < 0) break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string to_string(const GroupoidMorphism& g) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < g.aux.size(); ++i) os << g.aux[i] << (i + 1 < g.aux.size() ? "," : ";");
    if (g.aux.empty()) os << ";";
    for (size_t i = 0; i < g.x.size(); ++i) os << g.x[i] << (i + 1 < g.x.size() ? "," : ";");
    for (size_t i = 0; i < g.w.c.size(); ++i) {
        if (is_inf(g.w.c[i]))
            os << "inf";
        else
            os << g.w.c[i];
        if (i + 1 < g.w.c.size()) os << ",";
    }
    os << ")";
    return os.str();
}

} // namespace qpg
