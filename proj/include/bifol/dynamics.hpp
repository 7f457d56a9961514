#pragma once

#include "ball.hpp"
#include "graphs.hpp"
#include "periodic.hpp"

namespace bifol {

/// Materialized window of a periodic pattern with the leaf graph of one sign.
struct Window {
    long long lo = 0, hi = 0;
    Sign sign = Sign::Plus;
    Pattern pattern;
    LeafGraph graph;
    std::vector<std::vector<int>> dist; ///< all-pairs over graph vertices

    bool contains(const LeafRef& r) const { return r.index >= lo && r.index <= hi; }
    int leaf(const LeafRef& r) const { return pattern.index(r.id()); }
    LeafRef ref(int l) const { return parse_leaf_ref(pattern.id(l)); }
    int d(int a, int b) const { return dist[graph.of_leaf(a)][graph.of_leaf(b)]; }
};

inline Window make_window(const PeriodicPattern& pp, long long lo, long long hi, Sign sign = Sign::Plus) {
    Pattern p = Pattern::make(materialize_window(pp, lo, hi));
    LeafGraph g = build_graph(p, sign == Sign::Plus ? GraphKind::Xplus : GraphKind::Xminus);
    auto d = all_pairs(g);
    return Window{lo, hi, sign, std::move(p), std::move(g), std::move(d)};
}

inline bool has_fixed_leaf(const PeriodicPattern& pp, const IndexAutomorphism& g, std::optional<Sign> sign = {}) {
    for (const auto& f : pp.families) {
        if (sign && f.sign != *sign) continue;
        const auto& m = g.maps.at(f.name);
        for (const auto& [r, slots] : f.residues)
            if (m.offsets.at(r) == 0) return true;
    }
    return false;
}

/// Pattern leaf of g(l) within the window, or -1 when it falls outside.
inline int act_in(const Window& w, const IndexAutomorphism& g, int l) {
    LeafRef r = act(g, w.ref(l));
    return w.contains(r) ? w.leaf(r) : -1;
}

// ---------------------------------------------------------------------------
// Axis

struct AxisData {
    std::vector<int> leaves;               ///< ordered in the direction of g
    std::vector<std::vector<int>> blocks;  ///< block decomposition of the axis
    int t = 0;                             ///< blocks per fundamental domain of g
    bool convex = true;                    ///< the pseudo-interval between the ends equals the axis
    BlockMode mode = BlockMode::NonsepBlocks;

    int block_of(int l) const {
        for (std::size_t i = 0; i < blocks.size(); ++i)
            if (std::find(blocks[i].begin(), blocks[i].end(), l) != blocks[i].end()) return static_cast<int>(i);
        return -1;
    }
    bool on_axis(int l) const { return std::find(leaves.begin(), leaves.end(), l) != leaves.end(); }
};

/// Leaves x of the window separating g^-1(x) from g(x), with their blocks.
inline AxisData axis(const Window& w, const IndexAutomorphism& g, BlockMode mode = BlockMode::NonsepBlocks) {
    const Pattern& p = w.pattern;
    const IndexAutomorphism gi = invert(g);
    AxisData a;
    a.mode = mode;
    std::vector<int> back(p.leaf_count(), -1);
    for (int x : p.leaves_of(w.sign)) {
        const int fx = act_in(w, g, x), bx = act_in(w, gi, x);
        if (fx < 0 || bx < 0) continue;
        if (fx == x) throw PreconditionError("axis: element fixes leaf " + p.id(x));
        if (fx != bx && p.region(x, fx) != p.region(x, bx)) {
            a.leaves.push_back(x);
            back[x] = bx;
        }
    }
    std::sort(a.leaves.begin(), a.leaves.end(), [&](int u, int v) {
        if (u == v) return false;
        return p.region(v, u) == p.region(v, back[v]);
    });
    if (a.leaves.empty()) return a;
    auto pi = pseudo_interval(p, a.leaves.front(), a.leaves.back(), mode);
    a.convex = pi.chain == a.leaves;
    a.blocks = pi.blocks;
    // t from a leaf starting an interior block.
    int x = a.blocks.size() > 1 ? a.blocks[1].front() : a.leaves.front();
    if (mode == BlockMode::NonsepBlocks) {
        const int gx = act_in(w, g, x);
        if (gx >= 0) a.t = static_cast<int>(pseudo_interval(p, x, gx, mode).blocks.size()) - 1;
    }
    return a;
}

inline AxisData axis(const PeriodicPattern& pp, const IndexAutomorphism& g, Sign sign, int window_periods,
                     BlockMode mode = BlockMode::NonsepBlocks) {
    if (has_fixed_leaf(pp, g, sign)) throw PreconditionError("axis: element has a fixed leaf");
    const long long n = pp.period;
    return axis(make_window(pp, -window_periods * n, window_periods * n - 1, sign), g, mode);
}

/// g maps axis leaves to axis leaves and shifts block indices by t.
inline bool axis_invariant(const Window& w, const AxisData& a, const IndexAutomorphism& g) {
    for (int x : a.leaves) {
        const int gx = act_in(w, g, x);
        if (gx < 0) continue;
        if (!a.on_axis(gx)) {
            // Leaves whose image lies past the window's last complete axis leaf are not decidable.
            if (act_in(w, g, gx) >= 0 && act_in(w, invert(g), gx) >= 0) return false;
            continue;
        }
        const int bx = a.block_of(x), bgx = a.block_of(gx);
        if (a.mode == BlockMode::NonsepBlocks && bx >= 0 && bgx >= 0 && bgx - bx != a.t) return false;
    }
    return true;
}

inline std::vector<std::vector<int>> induced_blocks(const Window& w, const AxisData& a, int x, int y) {
    if (!a.on_axis(x) || !a.on_axis(y)) throw PreconditionError("induced_blocks: leaf off the axis");
    return pseudo_interval(w.pattern, x, y, a.mode).blocks;
}

struct InducedCheck {
    bool agree = true;
    int start_shift = 0; ///< block index of the first induced block's right end minus block of x
    int end_shift = 0;   ///< block of y minus block index of the last induced block's left end
};

/// Interior induced blocks are whole axis blocks; end blocks shift by at most one.
/// The pair is taken in axis order.
inline InducedCheck induced_block_check(const Window& w, const AxisData& a, int x, int y) {
    InducedCheck c;
    if (a.block_of(x) > a.block_of(y) ||
        (a.block_of(x) == a.block_of(y) &&
         std::find(a.leaves.begin(), a.leaves.end(), x) > std::find(a.leaves.begin(), a.leaves.end(), y)))
        std::swap(x, y);
    auto ib = induced_blocks(w, a, x, y);
    const int bx = a.block_of(x), by = a.block_of(y);
    for (std::size_t i = 1; i + 1 < ib.size(); ++i) {
        const int b = a.block_of(ib[i].front());
        if (b < 0 || a.blocks[b] != ib[i]) c.agree = false;
    }
    c.start_shift = a.block_of(ib.front().back()) - bx;
    c.end_shift = by - a.block_of(ib.back().front());
    if (std::abs(c.start_shift) > 1 || std::abs(c.end_shift) > 1) c.agree = false;
    return c;
}

// ---------------------------------------------------------------------------
// Projection to a pseudo-line

/// The leaf of A, or nonseparated pair of A, met by every pseudo-interval from x to A.
inline std::vector<int> project_to_pseudoline(const Pattern& p, const std::vector<int>& A, int x) {
    if (std::find(A.begin(), A.end(), x) != A.end()) return {x};
    if (A.empty()) throw PreconditionError("project_to_pseudoline: empty pseudo-line");
    std::vector<std::vector<int>> chains;
    for (int y : A) chains.push_back(ordered_separators(p, x, y));
    auto meets = [&](const std::vector<int>& c, int l) { return std::find(c.begin(), c.end(), l) != c.end(); };
    std::vector<int> common;
    for (int a : A)
        if (std::all_of(chains.begin(), chains.end(), [&](const auto& c) { return meets(c, a); })) common.push_back(a);
    if (common.size() == 1) return common;
    std::vector<std::vector<int>> pairs;
    for (std::size_t i = 0; i + 1 < A.size(); ++i) {
        const int a = A[i], b = A[i + 1];
        if (!p.nonseparated(a, b)) continue;
        if (std::all_of(chains.begin(), chains.end(), [&](const auto& c) { return meets(c, a) || meets(c, b); }))
            pairs.push_back({a, b});
    }
    if (common.empty() && pairs.size() == 1) return pairs.front();
    throw PreconditionError("project_to_pseudoline: projection of " + p.id(x) + " undefined in this window");
}

/// d(x, p_A(x)) <= d(x, y) for every y in A.
inline bool projection_is_closest(const Window& w, const std::vector<int>& A, int x) {
    auto proj = project_to_pseudoline(w.pattern, A, x);
    int dp = INF;
    for (int l : proj) dp = std::min(dp, w.d(x, l));
    for (int y : A)
        if (dp > w.d(x, y)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Large overlap

struct OverlapReport {
    std::vector<int> J;
    int d_ab = 0, d_a_ha = 0, d_b_hb = 0;
    int d_j1_a = 0, d_j2_b = 0, d_hj1_a = 0, d_hj2_b = 0;
    int bound = 0; ///< 2 eps + 2
    bool image_inside = true;
    bool pass() const {
        return !J.empty() && image_inside && d_j1_a <= bound && d_j2_b <= bound && d_hj1_a <= bound &&
               d_hj2_b <= bound;
    }
};

inline OverlapReport overlap_interval(const Window& w, int a, int b, const IndexAutomorphism& h, int eps) {
    const Pattern& p = w.pattern;
    OverlapReport r;
    r.bound = 2 * eps + 2;
    const int ha = act_in(w, h, a), hb = act_in(w, h, b);
    const IndexAutomorphism hi = invert(h);
    const int hia = act_in(w, hi, a), hib = act_in(w, hi, b);
    if (ha < 0 || hb < 0 || hia < 0 || hib < 0) throw PreconditionError("overlap_interval: images leave the window");
    r.d_ab = w.d(a, b);
    r.d_a_ha = w.d(a, ha);
    r.d_b_hb = w.d(b, hb);
    if (!(r.d_ab != INF && r.d_ab > 4 * eps + 5 && r.d_a_ha < eps && r.d_b_hb < eps))
        throw PreconditionError("overlap_interval: preconditions unmet (d(a,b)=" + std::to_string(r.d_ab) +
                                ", d(a,ha)=" + std::to_string(r.d_a_ha) + ", d(b,hb)=" + std::to_string(r.d_b_hb) +
                                ")");
    auto ab = ordered_separators(p, a, b);
    auto pre = ordered_separators(p, hia, hib);
    for (int l : ab)
        if (std::find(pre.begin(), pre.end(), l) != pre.end()) r.J.push_back(l);
    if (r.J.empty()) return r;
    const int j1 = r.J.front(), j2 = r.J.back();
    for (int l : r.J) {
        const int hl = act_in(w, h, l);
        if (hl < 0 || std::find(ab.begin(), ab.end(), hl) == ab.end()) r.image_inside = false;
    }
    r.d_j1_a = w.d(j1, a);
    r.d_j2_b = w.d(j2, b);
    r.d_hj1_a = w.d(act_in(w, h, j1), a);
    r.d_hj2_b = w.d(act_in(w, h, j2), b);
    return r;
}

/// Smallest distance between leaves of two blocks.
inline int block_distance(const Window& w, const std::vector<int>& B, const std::vector<int>& C) {
    int best = INF;
    for (int a : B)
        for (int c : C) best = std::min(best, w.d(a, c));
    return best;
}

// ---------------------------------------------------------------------------
// Classification

enum class Verdict { FixedPoint, FixedLeaf, Scalloped, BoundedOrbit, Loxodromic, Inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::FixedPoint: return "elliptic(fixed_point)";
    case Verdict::FixedLeaf: return "elliptic(fixed_leaf)";
    case Verdict::Scalloped: return "elliptic(scalloped)";
    case Verdict::BoundedOrbit: return "elliptic(bounded_orbit)";
    case Verdict::Loxodromic: return "loxodromic";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct Classification {
    Verdict verdict = Verdict::Inconclusive;
    int n = 0;
    int d_n = 0;  ///< d(v, g^n v)
    int D = 0;    ///< diameter of one fundamental domain
    int diam_w = 0, diam_2w = 0;
    double tau_lower = 0, tau_upper = 0;
    std::string base;

    bool elliptic() const { return verdict != Verdict::Loxodromic && verdict != Verdict::Inconclusive; }
};

inline bool has_fixed_point(const PeriodicPattern& pp, const IndexAutomorphism& g) {
    const int P = detail::probe_range(pp);
    for (const auto& f : pp.families) {
        if (f.sign != Sign::Plus) continue;
        for (const auto& [r, _] : f.residues) {
            if (g.maps.at(f.name).offsets.at(r) != 0) continue;
            for (const auto& h : pp.families) {
                if (h.sign != Sign::Minus) continue;
                for (long long j = r - P; j <= r + P; ++j)
                    if (pp.has_leaf(h.name, j) && g.maps.at(h.name).apply(j) == j &&
                        periodic_intersects(pp, {f.name, r}, {h.name, j}))
                        return true;
            }
        }
    }
    return false;
}

inline Classification classify_isometry(const PeriodicPattern& pp, const IndexAutomorphism& g, int window_periods,
                                        int nmax) {
    auto chk = check_automorphism(pp, g);
    if (!chk.ok()) throw PreconditionError("classify_isometry: " + chk.detail);
    if (window_periods < 1 || nmax < 1) throw PreconditionError("classify_isometry: window and nmax must be positive");
    Classification c;
    c.n = nmax;
    if (has_fixed_point(pp, g)) {
        c.verdict = Verdict::FixedPoint;
        return c;
    }
    if (has_fixed_leaf(pp, g)) {
        c.verdict = Verdict::FixedLeaf;
        return c;
    }
    if (pp.scalloped && scalloped_invariant(pp, g)) {
        c.verdict = Verdict::Scalloped;
        return c;
    }
    const long long N = pp.period;
    c.diam_w = diameter(make_window(pp, 0, window_periods * N - 1).graph);
    c.diam_2w = diameter(make_window(pp, 0, 2 * window_periods * N - 1).graph);
    if (c.diam_w != INF && c.diam_w == c.diam_2w) {
        c.verdict = Verdict::BoundedOrbit;
        return c;
    }
    const Family* base = nullptr;
    for (const auto& f : pp.families)
        if (f.sign == Sign::Plus && !f.residues.empty()) {
            base = &f;
            break;
        }
    if (!base) return c;
    LeafRef v{base->name, base->residues.begin()->first};
    LeafRef gv = v;
    for (int i = 0; i < nmax; ++i) gv = act(g, gv);
    const long long pad = window_periods * N;
    const long long lo = std::min(v.index, gv.index) - pad, hi = std::max(v.index, gv.index) + pad;
    Window w = make_window(pp, lo, hi);
    c.base = v.id();
    c.d_n = w.d(w.leaf(v), w.leaf(gv));
    int D = 0;
    for (const auto& f : pp.families) {
        if (f.sign != Sign::Plus) continue;
        for (const auto& f2 : pp.families) {
            if (f2.sign != Sign::Plus) continue;
            for (long long i = v.index; i < v.index + N; ++i)
                for (long long j = v.index; j < v.index + N; ++j)
                    if (pp.has_leaf(f.name, i) && pp.has_leaf(f2.name, j))
                        D = std::max(D, w.d(w.leaf({f.name, i}), w.leaf({f2.name, j})));
        }
    }
    c.D = D;
    if (c.d_n == INF || D == INF) return c;
    c.tau_upper = double(c.d_n) / nmax;
    c.tau_lower = double(c.d_n - D) / nmax;
    c.verdict = c.tau_lower > 0 ? Verdict::Loxodromic : Verdict::Inconclusive;
    return c;
}

// ---------------------------------------------------------------------------
// WPD witness scan

struct NamedAutomorphism {
    std::string name;
    IndexAutomorphism element;
};

struct WpdResult {
    std::vector<std::string> witnesses;  ///< candidates with both displacements below eps
    std::vector<std::string> rejected;   ///< candidates that do not preserve the pattern
    std::vector<std::string> far_block_fixers; ///< nontrivial witnesses fixing axis leaves in far blocks
    std::vector<IndexAutomorphism> witness_elements;
};

inline WpdResult wpd_scan(const PeriodicPattern& pp, const IndexAutomorphism& g, const LeafRef& p, int eps, int n,
                          const std::vector<NamedAutomorphism>& candidates, int window_periods) {
    if (classify_isometry(pp, g, window_periods, std::max(n, 4)).verdict != Verdict::Loxodromic)
        throw PreconditionError("wpd_scan: element is not loxodromic");
    LeafRef gnp = p;
    for (int i = 0; i < n; ++i) gnp = act(g, gnp);
    std::vector<NamedAutomorphism> valid;
    WpdResult res;
    long long lo = std::min(p.index, gnp.index), hi = std::max(p.index, gnp.index);
    for (const auto& c : candidates) {
        if (!preserves(pp, c.element)) {
            res.rejected.push_back(c.name);
            continue;
        }
        valid.push_back(c);
        for (const auto& r : {act(c.element, p), act(c.element, gnp)}) {
            lo = std::min(lo, r.index);
            hi = std::max(hi, r.index);
        }
    }
    const long long pad = window_periods * pp.period;
    Window w = make_window(pp, lo - pad, hi + pad);
    AxisData ax = axis(w, g);
    const IndexAutomorphism id = identity_automorphism(pp);
    for (const auto& c : valid) {
        const int d0 = w.d(w.leaf(p), w.leaf(act(c.element, p)));
        const int d1 = w.d(w.leaf(gnp), w.leaf(act(c.element, gnp)));
        if (d0 >= eps || d1 >= eps) continue;
        res.witnesses.push_back(c.name);
        res.witness_elements.push_back(c.element);
        if (c.element == id) continue;
        std::vector<int> fixed_blocks;
        for (int x : ax.leaves)
            if (act_in(w, c.element, x) == x) fixed_blocks.push_back(ax.block_of(x));
        if (fixed_blocks.size() >= 2) {
            auto [mn, mx] = std::minmax_element(fixed_blocks.begin(), fixed_blocks.end());
            if (*mx - *mn >= std::max(ax.t, 1)) res.far_block_fixers.push_back(c.name);
        }
    }
    return res;
}

/// Word ball of the given generators as named candidates ("id", "g", "g.h^-1", ...).
inline std::vector<NamedAutomorphism> candidate_ball(const PeriodicPattern& pp,
                                                     const std::vector<NamedAutomorphism>& gens, int radius) {
    std::vector<IndexAutomorphism> sym;
    std::vector<std::string> names;
    const IndexAutomorphism id = identity_automorphism(pp);
    for (const auto& g : gens)
        for (int s = 0; s < 2; ++s) {
            IndexAutomorphism e = s ? invert(g.element) : g.element;
            if (e == id || std::find(sym.begin(), sym.end(), e) != sym.end()) continue;
            sym.push_back(e);
            names.push_back(s ? g.name + "^-1" : g.name);
        }
    auto ball = enumerate_ball(sym, id, radius, [](const IndexAutomorphism& a, const IndexAutomorphism& b) {
        return compose(a, b);
    });
    std::vector<NamedAutomorphism> out;
    for (std::size_t i = 0; i < ball.size(); ++i)
        out.push_back({i == 0 ? "id" : "w" + std::to_string(i) + "|" + std::to_string(ball[i].length),
                       ball[i].element});
    return out;
}

struct WpdStability {
    WpdResult small, large;
    bool stable = false;
};

/// Repeats the scan with the ball radius grown by 2 and the window doubled.
inline WpdStability wpd_stability(const PeriodicPattern& pp, const IndexAutomorphism& g, const LeafRef& p, int eps,
                                  int n, const std::vector<NamedAutomorphism>& gens, int radius, int window_periods) {
    WpdStability s;
    s.small = wpd_scan(pp, g, p, eps, n, candidate_ball(pp, gens, radius), window_periods);
    s.large = wpd_scan(pp, g, p, eps, n, candidate_ball(pp, gens, radius + 2), 2 * window_periods);
    auto a = s.small.witness_elements, b = s.large.witness_elements;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    s.stable = a == b;
    return s;
}

} // namespace bifol
