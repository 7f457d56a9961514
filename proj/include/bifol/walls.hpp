#pragma once

#include "graphs.hpp"

#include <functional>

namespace bifol {

enum class WallKind { H, Plus, Minus, RPlus, RMinus };

inline const char* to_string(WallKind k) {
    switch (k) {
    case WallKind::H: return "dH";
    case WallKind::Plus: return "d+";
    case WallKind::Minus: return "d-";
    case WallKind::RPlus: return "dR+";
    case WallKind::RMinus: return "dR-";
    }
    return "?";
}

inline WallKind parse_wall_kind(std::string_view s) {
    for (WallKind k : {WallKind::H, WallKind::Plus, WallKind::Minus, WallKind::RPlus, WallKind::RMinus})
        if (s == to_string(k)) return k;
    throw UnknownId("unknown metric kind " + std::string(s));
}

inline constexpr std::array<WallKind, 5> kAllWallKinds{WallKind::H, WallKind::Plus, WallKind::Minus, WallKind::RPlus,
                                                       WallKind::RMinus};

/// Disjoint leaves that no third leaf of the pattern intersects both of.
inline bool aligned(const Pattern& p, int l, int l2) {
    if (l == l2) throw PreconditionError("aligned: same leaf twice");
    if (p.intersects(l, l2)) return false;
    for (int t = 0; t < p.leaf_count(); ++t)
        if (t != l && t != l2 && p.intersects(t, l) && p.intersects(t, l2)) return false;
    return true;
}

inline bool reeb_separated(const Pattern& p, int l, int l2) {
    if (l == l2) throw PreconditionError("reeb_separated: same leaf twice");
    if (p.sign(l) != p.sign(l2)) throw PreconditionError("reeb_separated: mixed signs");
    return pseudo_interval(p, l, l2).blocks.size() >= 2;
}

namespace detail {

inline bool kind_admits(const Pattern& p, WallKind k, int l) {
    switch (k) {
    case WallKind::H: return true;
    case WallKind::Plus:
    case WallKind::RPlus: return p.sign(l) == Sign::Plus;
    case WallKind::Minus:
    case WallKind::RMinus: return p.sign(l) == Sign::Minus;
    }
    return false;
}

inline bool pair_admissible(const Pattern& p, WallKind k, int a, int b) {
    if (k == WallKind::RPlus || k == WallKind::RMinus) return reeb_separated(p, a, b);
    return aligned(p, a, b);
}

} // namespace detail

using SeparationOracle = std::function<bool(int leaf, const PointLoc& x, const PointLoc& y)>;

inline SeparationOracle default_separation(const Pattern& p) {
    return [&p](int l, const PointLoc& x, const PointLoc& y) { return separates_point(p, l, x, y); };
}

struct WallFamily {
    WallKind kind = WallKind::H;
    std::vector<int> leaves; ///< ordered from x towards y
};

/// Leaves of the kind separating x from y, in no particular order.
inline std::vector<int> separating_leaves(const Pattern& p, WallKind k, const PointLoc& x, const PointLoc& y,
                                          const SeparationOracle& sep) {
    std::vector<int> out;
    for (int l = 0; l < p.leaf_count(); ++l)
        if (detail::kind_admits(p, k, l) && sep(l, x, y)) out.push_back(l);
    return out;
}

/// Largest admissible family of leaves separating x from y. Distinct points
/// separated by no leaf at all raise DegenerateInput.
inline WallFamily longest_chain_witness(const Pattern& p, const PointLoc& x, const PointLoc& y, WallKind k,
                                        const SeparationOracle& sep) {
    WallFamily fam{k, {}};
    if (x == y) return fam;
    bool any = false;
    for (int l = 0; l < p.leaf_count() && !any; ++l) any = sep(l, x, y);
    if (!any) throw DegenerateInput("points are separated by no leaf");
    auto cand = separating_leaves(p, k, x, y, sep);
    const int n = static_cast<int>(cand.size());
    // before[i][j]: cand[i] lies strictly between x and cand[j].
    std::vector<std::vector<char>> edge(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const int a = cand[i], b = cand[j];
            if (p.intersects(a, b)) continue;
            const int sa = p.side(a, x), sb = p.side(b, x);
            const bool before = sa == -1 || (sb != -1 && sb == p.region(b, a));
            if (before && detail::pair_admissible(p, k, a, b)) edge[i][j] = 1;
        }
    std::vector<int> best(n, -1);
    std::function<int(int)> longest = [&](int i) {
        if (best[i] != -1) return best[i];
        int b = 1;
        for (int j = 0; j < n; ++j)
            if (edge[i][j]) b = std::max(b, 1 + longest(j));
        return best[i] = b;
    };
    int start = -1;
    for (int i = 0; i < n; ++i)
        if (start == -1 || longest(i) > longest(start)) start = i;
    if (start == -1) return fam;
    for (int cur = start;;) {
        fam.leaves.push_back(cand[cur]);
        int next = -1;
        for (int j = 0; j < n; ++j)
            if (edge[cur][j] && longest(j) == longest(cur) - 1) {
                next = j;
                break;
            }
        if (next == -1) break;
        cur = next;
    }
    return fam;
}

inline WallFamily longest_chain_witness(const Pattern& p, int x, int y, WallKind k) {
    return longest_chain_witness(p, p.point(x), p.point(y), k, default_separation(p));
}

inline long long wall_distance(const Pattern& p, const PointLoc& x, const PointLoc& y, WallKind k,
                               const SeparationOracle& sep) {
    if (x == y) return 0;
    const long long c = static_cast<long long>(longest_chain_witness(p, x, y, k, sep).leaves.size());
    return k == WallKind::H ? c : c + 1;
}

inline long long wall_distance(const Pattern& p, int x, int y, WallKind k) {
    if (x < 0 || x >= p.point_count() || y < 0 || y >= p.point_count()) throw UnknownId("wall_distance: unknown point");
    return wall_distance(p, p.point(x), p.point(y), k, default_separation(p));
}

/// Distance matrix over the marked points.
inline std::vector<std::vector<long long>> wall_matrix(const Pattern& p, WallKind k,
                                                       const SeparationOracle& sep) {
    const int n = p.point_count();
    std::vector<std::vector<long long>> d(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) d[i][j] = d[j][i] = wall_distance(p, p.point(i), p.point(j), k, sep);
    return d;
}

inline std::vector<std::vector<long long>> wall_matrix(const Pattern& p, WallKind k) {
    return wall_matrix(p, k, default_separation(p));
}

struct MetricReport {
    std::size_t triples = 0;
    std::vector<std::string> violations;
    bool pass() const { return violations.empty(); }
};

/// Identity of indiscernibles, symmetry and triangle inequality over a matrix.
inline MetricReport metric_axiom_check(const std::vector<std::vector<long long>>& d) {
    MetricReport rep;
    const int n = static_cast<int>(d.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if ((d[i][j] == 0) != (i == j) || d[i][j] < 0)
                rep.violations.push_back("identity " + std::to_string(i) + "," + std::to_string(j));
            if (d[i][j] != d[j][i]) rep.violations.push_back("symmetry " + std::to_string(i) + "," + std::to_string(j));
            for (int k = 0; k < n; ++k) {
                ++rep.triples;
                if (d[i][k] > d[i][j] + d[j][k])
                    rep.violations.push_back("triangle " + std::to_string(i) + "," + std::to_string(j) + "," +
                                             std::to_string(k));
            }
        }
    return rep;
}

inline MetricReport metric_axiom_check(const Pattern& p, WallKind k) { return metric_axiom_check(wall_matrix(p, k)); }

// ---------------------------------------------------------------------------
// Comparison with leaf graphs

struct MetricQiRow {
    WallKind kind;
    GraphKind graph;
    std::size_t pairs = 0;
    std::vector<std::string> violations;
    long long min_lower_slack = std::numeric_limits<long long>::max(); ///< d_graph - (d - 2)
    long long min_upper_slack = std::numeric_limits<long long>::max(); ///< 5d - d_graph
};

struct MetricQiReport {
    std::vector<MetricQiRow> rows;
    std::size_t skipped_region_points = 0;
    bool pass() const {
        return std::all_of(rows.begin(), rows.end(), [](const MetricQiRow& r) { return r.violations.empty(); });
    }
};

/// d - 2 <= d_graph(f(x), f(y)) <= 5 d for crossing points, where f picks the
/// leaf of the matching sign through each point.
inline MetricQiReport qi_metric_report(const Pattern& p) {
    MetricQiReport rep;
    std::vector<int> crossings;
    for (int i = 0; i < p.point_count(); ++i) {
        if (p.point(i).crossing)
            crossings.push_back(i);
        else
            ++rep.skipped_region_points;
    }
    const std::array<std::pair<WallKind, GraphKind>, 4> combos{{{WallKind::Plus, GraphKind::Xplus},
                                                                {WallKind::Minus, GraphKind::Xminus},
                                                                {WallKind::RPlus, GraphKind::GammaPlus},
                                                                {WallKind::RMinus, GraphKind::GammaMinus}}};
    for (auto [wk, gk] : combos) {
        MetricQiRow row;
        row.kind = wk;
        row.graph = gk;
        LeafGraph g = build_graph(p, gk);
        auto dg = all_pairs(g);
        const bool plus = gk == GraphKind::Xplus || gk == GraphKind::GammaPlus;
        for (std::size_t a = 0; a < crossings.size(); ++a)
            for (std::size_t b = a; b < crossings.size(); ++b) {
                const auto& x = p.point(crossings[a]);
                const auto& y = p.point(crossings[b]);
                const long long d = wall_distance(p, crossings[a], crossings[b], wk);
                const int fx = plus ? x.plus : x.minus, fy = plus ? y.plus : y.minus;
                const int raw = dg[g.of_leaf(fx)][g.of_leaf(fy)];
                ++row.pairs;
                const std::string tag = p.point_id(crossings[a]) + "," + p.point_id(crossings[b]);
                if (raw == INF) {
                    row.violations.push_back(tag + ": graph distance infinite");
                    continue;
                }
                const long long dgv = raw;
                row.min_lower_slack = std::min(row.min_lower_slack, dgv - (d - 2));
                row.min_upper_slack = std::min(row.min_upper_slack, 5 * d - dgv);
                if (d - 2 > dgv || dgv > 5 * d)
                    row.violations.push_back(tag + ": d=" + std::to_string(d) + " graph=" + std::to_string(dgv));
            }
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

} // namespace bifol
