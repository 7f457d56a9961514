#pragma once

#include "fixtures.hpp"

#include <array>
#include <tuple>

namespace bifol {

// ---------------------------------------------------------------------------
// Z-periodic patterns on a strip
//
// The boundary is two copies (lower, upper) of a union of segments, each
// segment a copy of the integers. Leaf i = q*N + r of a family has endpoints
// at coordinate q*scale + offset on its residue's slots.

enum class Line { Lower, Upper };

struct Slot {
    Line line = Line::Lower;
    int seg = 0;
    long long offset = 0;
    bool operator==(const Slot&) const = default;
};

struct Family {
    std::string name;
    Sign sign = Sign::Plus;
    std::map<int, std::vector<Slot>> residues; ///< residue -> endpoint slots
    bool operator==(const Family&) const = default;
};

/// famA_i is nonseparated from famB_{i+delta} for every i with i mod N = residue.
struct NonsepTemplate {
    std::string a;
    int residue = 0;
    std::string b;
    long long delta = 0;
    bool operator==(const NonsepTemplate&) const = default;
};

/// plus_i and minus_i form a k-prong for every index i where both exist.
struct SingularityTemplate {
    std::string plus, minus;
    bool operator==(const SingularityTemplate&) const = default;
};

struct ScallopedMarker {
    std::vector<std::string> families;
    std::vector<int> residues;
    bool operator==(const ScallopedMarker&) const = default;
};

/// Offsets per residue: i = qN + r maps to i + offsets[r].
struct OffsetMap {
    std::vector<long long> offsets;
    bool operator==(const OffsetMap&) const = default;
    auto operator<=>(const OffsetMap&) const = default;

    int period() const { return static_cast<int>(offsets.size()); }
    static int residue(long long i, int n) { return static_cast<int>(((i % n) + n) % n); }
    long long apply(long long i) const { return i + offsets[residue(i, period())]; }

    bool bijective() const {
        const int n = period();
        std::vector<char> hit(n, 0);
        for (int r = 0; r < n; ++r) {
            int t = residue(r + offsets[r], n);
            if (hit[t]) return false;
            hit[t] = 1;
        }
        return true;
    }
    bool has_fixed_index() const {
        return std::any_of(offsets.begin(), offsets.end(), [](long long o) { return o == 0; });
    }

    static OffsetMap identity(int n) { return {std::vector<long long>(n, 0)}; }
    static OffsetMap shift(int n, long long s) { return {std::vector<long long>(n, s)}; }
};

/// this after h: i -> this(h(i)).
inline OffsetMap compose(const OffsetMap& g, const OffsetMap& h) {
    if (g.period() != h.period()) throw PreconditionError("compose: period mismatch");
    OffsetMap out;
    const int n = g.period();
    out.offsets.resize(n);
    for (int r = 0; r < n; ++r) {
        long long hr = h.offsets[r];
        out.offsets[r] = hr + g.offsets[OffsetMap::residue(r + hr, n)];
    }
    return out;
}

inline OffsetMap invert(const OffsetMap& g) {
    if (!g.bijective()) throw PreconditionError("invert: residue map is not a permutation");
    const int n = g.period();
    OffsetMap out;
    out.offsets.resize(n);
    for (int r = 0; r < n; ++r) out.offsets[OffsetMap::residue(r + g.offsets[r], n)] = -g.offsets[r];
    return out;
}

/// Family-wise offset map; every family of the pattern must be present.
struct IndexAutomorphism {
    std::map<std::string, OffsetMap> maps;
    bool operator==(const IndexAutomorphism&) const = default;
    auto operator<=>(const IndexAutomorphism&) const = default;
};

inline IndexAutomorphism compose(const IndexAutomorphism& g, const IndexAutomorphism& h) {
    if (g.maps.size() != h.maps.size()) throw PreconditionError("compose: family mismatch");
    IndexAutomorphism out;
    for (const auto& [f, m] : g.maps) {
        auto it = h.maps.find(f);
        if (it == h.maps.end()) throw PreconditionError("compose: family mismatch");
        out.maps[f] = compose(m, it->second);
    }
    return out;
}

inline IndexAutomorphism invert(const IndexAutomorphism& g) {
    IndexAutomorphism out;
    for (const auto& [f, m] : g.maps) out.maps[f] = invert(m);
    return out;
}

inline bool equal(const IndexAutomorphism& g, const IndexAutomorphism& h) { return g == h; }

struct PeriodicPattern {
    int period = 1;
    long long scale = 1;
    std::vector<Family> families;
    std::vector<NonsepTemplate> nonsep;
    std::vector<SingularityTemplate> singularities;
    std::optional<ScallopedMarker> scalloped;
    std::map<std::string, IndexAutomorphism> automorphisms;
    bool operator==(const PeriodicPattern&) const = default;

    const Family& family(std::string_view name) const {
        for (const auto& f : families)
            if (f.name == name) return f;
        throw UnknownId("unknown family " + std::string(name));
    }
    bool has_leaf(const std::string& fam, long long i) const {
        return family(fam).residues.count(OffsetMap::residue(i, period)) != 0;
    }
};

struct LeafRef {
    std::string family;
    long long index = 0;
    bool operator==(const LeafRef&) const = default;
    std::string id() const { return family + ":" + std::to_string(index); }
};

inline LeafRef parse_leaf_ref(std::string_view id) {
    auto colon = id.rfind(':');
    if (colon == std::string_view::npos) throw UnknownId("not a periodic leaf id: " + std::string(id));
    LeafRef r{std::string(id.substr(0, colon)), 0};
    try {
        std::size_t used = 0;
        r.index = std::stoll(std::string(id.substr(colon + 1)), &used);
        if (used != id.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw UnknownId("not a periodic leaf id: " + std::string(id));
    }
    return r;
}

inline LeafRef act(const IndexAutomorphism& g, const LeafRef& l) {
    auto it = g.maps.find(l.family);
    if (it == g.maps.end()) throw UnknownId("act: no map for family " + l.family);
    return {l.family, it->second.apply(l.index)};
}

inline std::string act(const IndexAutomorphism& g, std::string_view leaf_id) {
    return act(g, parse_leaf_ref(leaf_id)).id();
}

inline IndexAutomorphism identity_automorphism(const PeriodicPattern& pp) {
    IndexAutomorphism g;
    for (const auto& f : pp.families) g.maps[f.name] = OffsetMap::identity(pp.period);
    return g;
}

inline IndexAutomorphism shift_automorphism(const PeriodicPattern& pp, long long s) {
    IndexAutomorphism g;
    for (const auto& f : pp.families) g.maps[f.name] = OffsetMap::shift(pp.period, s);
    return g;
}

namespace detail {

using Key = std::tuple<int, int, long long>;

inline Key slot_key(const PeriodicPattern& pp, const Slot& s, long long q) {
    const long long c = q * pp.scale + s.offset;
    return s.line == Line::Lower ? Key{0, s.seg, c} : Key{1, -s.seg, -c};
}

inline std::vector<Key> leaf_keys(const PeriodicPattern& pp, const LeafRef& l) {
    const Family& f = pp.family(l.family);
    const int r = OffsetMap::residue(l.index, pp.period);
    auto it = f.residues.find(r);
    if (it == f.residues.end()) throw UnknownId("no leaf " + l.id());
    const long long q = (l.index - r) / pp.period;
    std::vector<Key> out;
    for (const auto& s : it->second) out.push_back(slot_key(pp, s, q));
    std::sort(out.begin(), out.end());
    return out;
}

inline bool keys_link(const std::vector<Key>& a, const std::vector<Key>& b) {
    std::vector<Key> all = a;
    all.insert(all.end(), b.begin(), b.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    auto rank = [&](const std::vector<Key>& v) {
        std::vector<int> out;
        for (const auto& k : v) out.push_back(static_cast<int>(std::lower_bound(all.begin(), all.end(), k) - all.begin()));
        return out;
    };
    return links(rank(a), rank(b));
}

inline int probe_range(const PeriodicPattern& pp) {
    long long span = 0;
    for (const auto& f : pp.families)
        for (const auto& [r, slots] : f.residues)
            for (const auto& s : slots) span = std::max(span, std::abs(s.offset));
    return static_cast<int>(pp.period * (4 + span / std::max<long long>(1, pp.scale)));
}

} // namespace detail

inline bool periodic_intersects(const PeriodicPattern& pp, const LeafRef& a, const LeafRef& b) {
    if (pp.family(a.family).sign == pp.family(b.family).sign) return false;
    return detail::keys_link(detail::leaf_keys(pp, a), detail::leaf_keys(pp, b));
}

inline bool periodic_nonseparated(const PeriodicPattern& pp, const LeafRef& a, const LeafRef& b) {
    for (const auto& t : pp.nonsep)
        for (int flip = 0; flip < 2; ++flip) {
            const LeafRef& x = flip ? b : a;
            const LeafRef& y = flip ? a : b;
            if (x.family == t.a && y.family == t.b && OffsetMap::residue(x.index, pp.period) == t.residue &&
                y.index == x.index + t.delta)
                return true;
        }
    return false;
}

/// Intersection band: the offsets j - i with plus_i meeting minus_j, per
/// (plus family, minus family, residue of i), within the probe range.
struct BandEntry {
    std::string plus, minus;
    int residue = 0;
    std::vector<long long> offsets;
    bool operator==(const BandEntry&) const = default;
};

inline std::vector<BandEntry> intersection_band(const PeriodicPattern& pp) {
    std::vector<BandEntry> out;
    const int P = detail::probe_range(pp);
    for (const auto& f : pp.families) {
        if (f.sign != Sign::Plus) continue;
        for (const auto& g : pp.families) {
            if (g.sign != Sign::Minus) continue;
            for (const auto& [r, slots] : f.residues) {
                BandEntry e{f.name, g.name, r, {}};
                for (long long j = r - P; j <= r + P; ++j)
                    if (pp.has_leaf(g.name, j) && periodic_intersects(pp, {f.name, r}, {g.name, j}))
                        e.offsets.push_back(j - r);
                out.push_back(std::move(e));
            }
        }
    }
    return out;
}

/// Finite pattern on the leaves with index in [lo, hi].
inline FinitePattern materialize_window(const PeriodicPattern& pp, long long lo, long long hi) {
    if (hi < lo) throw PreconditionError("materialize_window: hi < lo");
    if (hi - lo + 1 < pp.period) throw PreconditionError("materialize_window: window smaller than one period");
    std::vector<std::pair<LeafRef, std::vector<detail::Key>>> leaves;
    std::vector<detail::Key> all;
    for (const auto& f : pp.families)
        for (long long i = lo; i <= hi; ++i) {
            if (!pp.has_leaf(f.name, i)) continue;
            auto k = detail::leaf_keys(pp, {f.name, i});
            all.insert(all.end(), k.begin(), k.end());
            leaves.push_back({{f.name, i}, std::move(k)});
        }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    Builder b;
    std::vector<int> pts(all.size());
    for (std::size_t i = 0; i < all.size(); ++i) pts[i] = b.point(static_cast<double>(i));
    for (const auto& [ref, keys] : leaves) {
        std::vector<int> ps;
        for (const auto& k : keys) ps.push_back(pts[std::lower_bound(all.begin(), all.end(), k) - all.begin()]);
        b.leaf(ref.id(), pp.family(ref.family).sign, ps);
    }
    for (const auto& t : pp.nonsep)
        for (long long i = lo; i <= hi; ++i) {
            if (OffsetMap::residue(i, pp.period) != t.residue) continue;
            const long long j = i + t.delta;
            if (j < lo || j > hi || !pp.has_leaf(t.a, i) || !pp.has_leaf(t.b, j)) continue;
            b.nonseparated(LeafRef{t.a, i}.id(), LeafRef{t.b, j}.id());
        }
    for (const auto& s : pp.singularities)
        for (long long i = lo; i <= hi; ++i)
            if (pp.has_leaf(s.plus, i) && pp.has_leaf(s.minus, i))
                b.singularity(LeafRef{s.plus, i}.id(), LeafRef{s.minus, i}.id());
    return b.build();
}

/// Checks the templates on three consecutive periods and that every listed
/// automorphism is valid.
inline ValidationReport check_templates(const PeriodicPattern& pp);

struct AutomorphismCheck {
    bool bijective = true;
    bool families_complete = true;
    bool preserves = true;
    std::string detail;
    bool ok() const { return bijective && families_complete && preserves; }
};

/// Checks that g is a well-formed offset map preserving existence,
/// intersection and nonseparation over one period against the probe range.
inline AutomorphismCheck check_automorphism(const PeriodicPattern& pp, const IndexAutomorphism& g) {
    AutomorphismCheck c;
    for (const auto& f : pp.families) {
        auto it = g.maps.find(f.name);
        if (it == g.maps.end() || it->second.period() != pp.period) {
            c.families_complete = false;
            c.detail = "missing or mis-sized map for family " + f.name;
            return c;
        }
        if (!it->second.bijective()) {
            c.bijective = false;
            c.detail = "residue map of " + f.name + " is not a permutation";
            return c;
        }
    }
    if (g.maps.size() != pp.families.size()) {
        c.families_complete = false;
        c.detail = "map for unknown family";
        return c;
    }
    const int P = detail::probe_range(pp);
    for (const auto& f : pp.families)
        for (const auto& [r, slots] : f.residues) {
            LeafRef a{f.name, r};
            LeafRef ga = act(g, a);
            if (!pp.has_leaf(ga.family, ga.index)) {
                c.preserves = false;
                c.detail = a.id() + " maps to missing leaf " + ga.id();
                return c;
            }
            for (const auto& h : pp.families)
                for (long long j = r - P; j <= r + P; ++j) {
                    if (!pp.has_leaf(h.name, j)) continue;
                    LeafRef b{h.name, j};
                    LeafRef gb = act(g, b);
                    if (!pp.has_leaf(gb.family, gb.index)) {
                        c.preserves = false;
                        c.detail = b.id() + " maps to missing leaf " + gb.id();
                        return c;
                    }
                    if (periodic_intersects(pp, a, b) != periodic_intersects(pp, ga, gb) ||
                        periodic_nonseparated(pp, a, b) != periodic_nonseparated(pp, ga, gb)) {
                        c.preserves = false;
                        c.detail = "relation of " + a.id() + ", " + b.id() + " not preserved";
                        return c;
                    }
                }
        }
    return c;
}

inline bool preserves(const PeriodicPattern& pp, const IndexAutomorphism& g) { return check_automorphism(pp, g).ok(); }

/// Validated automorphism; throws PreconditionError when g is rejected.
inline IndexAutomorphism make_automorphism(const PeriodicPattern& pp, IndexAutomorphism g) {
    auto c = check_automorphism(pp, g);
    if (!c.ok()) throw PreconditionError("automorphism rejected: " + c.detail);
    return g;
}

inline ValidationReport check_templates(const PeriodicPattern& pp) {
    ValidationReport rep;
    if (pp.period < 1) rep.violations.push_back({"period < 1", {}});
    if (pp.scale < 1) rep.violations.push_back({"scale < 1", {}});
    std::set<std::string> names;
    for (const auto& f : pp.families) {
        if (!names.insert(f.name).second) rep.violations.push_back({"duplicate family", {f.name}});
        for (const auto& [r, slots] : f.residues)
            if (r < 0 || r >= pp.period) rep.violations.push_back({"residue out of range", {f.name}});
    }
    if (!rep.valid()) return rep;
    for (const auto& t : pp.nonsep)
        if (!names.count(t.a) || !names.count(t.b)) rep.violations.push_back({"nonseparated template family", {t.a, t.b}});
    for (const auto& s : pp.singularities)
        if (!names.count(s.plus) || !names.count(s.minus))
            rep.violations.push_back({"singularity template family", {s.plus, s.minus}});
    if (pp.scalloped)
        for (const auto& f : pp.scalloped->families)
            if (!names.count(f)) rep.violations.push_back({"scalloped marker family", {f}});
    if (!rep.valid()) return rep;
    auto win = validate_pattern(materialize_window(pp, 0, 3LL * pp.period - 1));
    for (auto& v : win.violations) rep.violations.push_back(std::move(v));
    for (const auto& [name, g] : pp.automorphisms) {
        auto c = check_automorphism(pp, g);
        if (!c.ok()) rep.violations.push_back({"automorphism rejected", {name, c.detail}});
    }
    return rep;
}

inline PeriodicPattern validated(PeriodicPattern pp) {
    auto rep = check_templates(pp);
    if (!rep.valid()) throw ValidationError(rep);
    return pp;
}

inline bool scalloped_invariant(const PeriodicPattern& pp, const IndexAutomorphism& g) {
    if (!pp.scalloped) throw PreconditionError("scalloped_invariant: pattern has no scalloped marker");
    const auto& m = *pp.scalloped;
    for (const auto& f : m.families) {
        auto it = g.maps.find(f);
        if (it == g.maps.end()) throw UnknownId("scalloped_invariant: no map for family " + f);
        for (int r : m.residues) {
            int t = OffsetMap::residue(r + it->second.offsets.at(r), pp.period);
            if (std::find(m.residues.begin(), m.residues.end(), t) == m.residues.end()) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Affine model of the trivial plane: (k, v) acts as x -> A^k x + v.

using Vec2 = std::array<long long, 2>;
using Mat2 = std::array<long long, 4>; ///< row-major

inline Mat2 mat_mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

inline Vec2 mat_apply(const Mat2& a, const Vec2& v) { return {a[0] * v[0] + a[1] * v[1], a[2] * v[0] + a[3] * v[1]}; }

inline constexpr Mat2 kA{2, 1, 1, 1};
inline constexpr Mat2 kAinv{1, -1, -1, 2};

inline Mat2 mat_pow_A(long long k) {
    Mat2 r{1, 0, 0, 1};
    const Mat2& base = k >= 0 ? kA : kAinv;
    for (long long i = 0; i < (k >= 0 ? k : -k); ++i) r = mat_mul(r, base);
    return r;
}

struct AffineElement {
    long long k = 0;
    Vec2 v{0, 0};
    bool operator==(const AffineElement&) const = default;
    auto operator<=>(const AffineElement&) const = default;
};

inline AffineElement compose(const AffineElement& a, const AffineElement& b) {
    Vec2 w = mat_apply(mat_pow_A(a.k), b.v);
    return {a.k + b.k, {a.v[0] + w[0], a.v[1] + w[1]}};
}

inline AffineElement invert(const AffineElement& a) {
    Vec2 w = mat_apply(mat_pow_A(-a.k), a.v);
    return {-a.k, {-w[0], -w[1]}};
}

// ---------------------------------------------------------------------------
// Periodic generators

namespace gen {

/// plus_i meets minus_j iff i <= j < i + W.
inline PeriodicPattern skew(int W) {
    if (W < 2) throw PreconditionError("skew: W < 2");
    PeriodicPattern pp;
    pp.period = 1;
    pp.scale = 2;
    pp.families.push_back({"plus", Sign::Plus, {{0, {{Line::Lower, 0, 0}, {Line::Upper, 0, 0}}}}});
    pp.families.push_back({"minus", Sign::Minus, {{0, {{Line::Lower, 0, 1}, {Line::Upper, 0, 1 - 2LL * W}}}}});
    pp.automorphisms["s"] = shift_automorphism(pp, 1);
    return validated(pp);
}

/// Product model: every vertical meets every horizontal. Period 2 so that
/// elements fixing one residue class are representable.
inline PeriodicPattern trivial_periodic() {
    PeriodicPattern pp;
    pp.period = 2;
    pp.scale = 10;
    Family v{"V", Sign::Plus, {}}, h{"H", Sign::Minus, {}};
    for (int r = 0; r < 2; ++r) {
        v.residues[r] = {{Line::Lower, 1, 5LL * r}, {Line::Upper, 0, 5LL * r}};
        h.residues[r] = {{Line::Lower, 0, -5LL * r}, {Line::Upper, 1, -5LL * r}};
    }
    pp.families = {v, h};
    pp.automorphisms["t"] = shift_automorphism(pp, 1);
    pp.automorphisms["e"] = {{{"V", {{0, 2}}}, {"H", {{0, 2}}}}};
    pp.automorphisms["r"] = {{{"V", {{1, -1}}}, {"H", {{0, 0}}}}};
    return validated(pp);
}

/// Periodic ladder: blocks {V_2q, V_2q+1} under bottom arches BA_2q, with
/// the pair (V_2q+1, V_2q+2) nonseparated and bridged by Z, M1, M2 on top.
inline PeriodicPattern ladder_periodic() {
    PeriodicPattern pp;
    pp.period = 2;
    pp.scale = 100;
    Family v{"V", Sign::Plus, {}};
    v.residues[0] = {{Line::Lower, 0, 10}, {Line::Upper, 0, 10}};
    v.residues[1] = {{Line::Lower, 0, 30}, {Line::Upper, 0, 30}};
    pp.families.push_back(v);
    pp.families.push_back({"BA", Sign::Minus, {{0, {{Line::Lower, 0, 5}, {Line::Lower, 0, 35}}}}});
    pp.families.push_back({"Z", Sign::Plus, {{0, {{Line::Upper, 0, 40}, {Line::Upper, 0, 80}}}}});
    pp.families.push_back({"M1", Sign::Minus, {{0, {{Line::Upper, 0, 25}, {Line::Upper, 0, 50}}}}});
    pp.families.push_back({"M2", Sign::Minus, {{0, {{Line::Upper, 0, 70}, {Line::Upper, 0, 115}}}}});
    pp.nonsep.push_back({"V", 1, "V", 1});
    pp.automorphisms["g"] = shift_automorphism(pp, 2);
    return validated(pp);
}

/// Product region bounded by four sides of nonseparated caps: L and R (plus)
/// on the left and right, B and T (minus) on the bottom and top. The marker
/// singles out residue 0 of the interior families.
inline PeriodicPattern scalloped() {
    PeriodicPattern pp;
    pp.period = 2;
    pp.scale = 8;
    Family v{"V", Sign::Plus, {}}, h{"H", Sign::Minus, {}};
    Family l{"L", Sign::Plus, {}}, r{"R", Sign::Plus, {}}, b{"B", Sign::Minus, {}}, t{"T", Sign::Minus, {}};
    for (int q = 0; q < 2; ++q) {
        const long long c = 4LL * q;
        v.residues[q] = {{Line::Lower, 1, c}, {Line::Upper, 0, c}};
        h.residues[q] = {{Line::Lower, 0, -c}, {Line::Upper, 1, -c}};
        b.residues[q] = {{Line::Lower, 1, c - 1}, {Line::Lower, 1, c + 1}};
        t.residues[q] = {{Line::Upper, 0, c - 1}, {Line::Upper, 0, c + 1}};
        l.residues[q] = {{Line::Lower, 0, -c - 1}, {Line::Lower, 0, -c + 1}};
        r.residues[q] = {{Line::Upper, 1, -c - 1}, {Line::Upper, 1, -c + 1}};
    }
    pp.families = {v, h, l, r, b, t};
    for (const char* f : {"L", "R", "B", "T"})
        for (int q = 0; q < 2; ++q) pp.nonsep.push_back({f, q, f, 1});
    pp.scalloped = ScallopedMarker{{"V", "H"}, {0}};
    pp.automorphisms["g2"] = shift_automorphism(pp, 2);
    pp.automorphisms["g1"] = shift_automorphism(pp, 1);
    return validated(pp);
}

} // namespace gen
} // namespace bifol
