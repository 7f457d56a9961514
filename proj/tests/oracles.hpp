#pragma once

// Brute-force reference implementations. They work directly on the raw
// FinitePattern data and share no code with the library beyond the types.

#include "bifol/pattern.hpp"
#include "bifol/periodic.hpp"
#include "bifol/walls.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <unordered_set>
#include <vector>

namespace oracle {

using bifol::FinitePattern;
using bifol::Sign;

inline constexpr int kInf = 1 << 29;

struct Chords {
    std::vector<std::string> ids;
    std::vector<Sign> sign;
    std::vector<std::vector<int>> ends; ///< sorted boundary positions
    std::vector<int> partner;           ///< singular partner or -1
    std::set<std::pair<int, int>> nonsep;
    std::map<std::string, int> idx;

    explicit Chords(const FinitePattern& fp) {
        std::map<std::string, int> pos;
        for (std::size_t i = 0; i < fp.boundary.size(); ++i) pos[fp.boundary[i]] = static_cast<int>(i);
        for (const auto& l : fp.leaves) {
            idx[l.id] = static_cast<int>(ids.size());
            ids.push_back(l.id);
            sign.push_back(l.sign);
            std::vector<int> e;
            for (const auto& lab : l.endpoints) e.push_back(pos.at(lab));
            std::sort(e.begin(), e.end());
            ends.push_back(e);
        }
        partner.assign(ids.size(), -1);
        for (const auto& s : fp.singularities) {
            partner[idx.at(s.plus)] = idx.at(s.minus);
            partner[idx.at(s.minus)] = idx.at(s.plus);
        }
        for (const auto& [a, b] : fp.nonseparated) {
            nonsep.insert({idx.at(a), idx.at(b)});
            nonsep.insert({idx.at(b), idx.at(a)});
        }
    }

    int n() const { return static_cast<int>(ids.size()); }
    bool singular(int l) const { return ends[l].size() > 2; }

    /// Arc of leaf a holding boundary position q (q not an endpoint of a).
    int arc(int a, int q) const {
        int below = 0;
        for (int e : ends[a]) below += e < q;
        return (below + static_cast<int>(ends[a].size()) - 1) % static_cast<int>(ends[a].size());
    }

    bool cross(int a, int b) const {
        if (a == b) return false;
        if (partner[a] == b) return true;
        std::set<int> arcs;
        for (int q : ends[b])
            if (std::find(ends[a].begin(), ends[a].end(), q) == ends[a].end()) arcs.insert(arc(a, q));
        return arcs.size() >= 2;
    }

    /// Arc of m containing the disjoint leaf l.
    int region(int m, int l) const {
        for (int q : ends[l])
            if (std::find(ends[m].begin(), ends[m].end(), q) == ends[m].end()) return arc(m, q);
        return -1;
    }

    bool separates(int m, int x, int y) const { return region(m, x) != region(m, y); }
};

// ---------------------------------------------------------------------------
// Graphs

using Matrix = std::vector<std::vector<int>>;

/// Adjacency over all leaves; vertices of other signs stay isolated for X+/X-.
inline Matrix adjacency(const Chords& c, bifol::GraphKind kind) {
    using bifol::GraphKind;
    const int n = c.n();
    Matrix adj(n, std::vector<int>(n, 0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            if (kind == GraphKind::X) {
                adj[a][b] = c.sign[a] != c.sign[b] && c.cross(a, b);
                continue;
            }
            const Sign s = kind == GraphKind::Xplus ? Sign::Plus : Sign::Minus;
            if (c.sign[a] != s || c.sign[b] != s) continue;
            for (int t = 0; t < n && !adj[a][b]; ++t)
                adj[a][b] = c.sign[t] != s && !c.singular(t) && c.cross(t, a) && c.cross(t, b);
        }
    return adj;
}

inline Matrix floyd_warshall(const Matrix& adj) {
    const int n = static_cast<int>(adj.size());
    Matrix d(n, std::vector<int>(n, kInf));
    for (int i = 0; i < n; ++i) {
        d[i][i] = 0;
        for (int j = 0; j < n; ++j)
            if (adj[i][j]) d[i][j] = 1;
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    return d;
}

// ---------------------------------------------------------------------------
// Pseudo-intervals as intersections of paths

/// Same-sign leaves joined when no leaf of that sign separates them.
inline Matrix leaf_space_graph(const Chords& c, Sign s) {
    const int n = c.n();
    Matrix adj(n, std::vector<int>(n, 0));
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            if (c.sign[a] != s || c.sign[b] != s) continue;
            bool sep = false;
            for (int m = 0; m < n && !sep; ++m)
                sep = m != a && m != b && c.sign[m] == s && c.separates(m, a, b);
            adj[a][b] = adj[b][a] = !sep;
        }
    return adj;
}

inline bool reachable(const Matrix& adj, int from, int to, int removed) {
    const int n = static_cast<int>(adj.size());
    std::vector<char> seen(n, 0);
    std::vector<int> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        if (u == to) return true;
        for (int v = 0; v < n; ++v)
            if (adj[u][v] && !seen[v] && v != removed) {
                seen[v] = 1;
                stack.push_back(v);
            }
    }
    return false;
}

struct Interval {
    std::vector<int> chain;
    std::vector<std::vector<int>> blocks;
};

/// Leaves lying on every x-y path of the leaf-space graph, ordered by the
/// number of such leaves between x and them, then cut at declared pairs.
inline Interval pseudo_interval(const Chords& c, int x, int y) {
    Matrix g = leaf_space_graph(c, c.sign[x]);
    Interval out;
    if (x == y) {
        out.chain = {x};
        out.blocks = {{x}};
        return out;
    }
    std::vector<int> on_all;
    for (int m = 0; m < c.n(); ++m)
        if (m != x && m != y && c.sign[m] == c.sign[x] && !reachable(g, x, y, m)) on_all.push_back(m);
    std::vector<std::pair<int, int>> ranked;
    for (int m : on_all) {
        int before = 0;
        for (int m2 : on_all)
            if (m2 != m && !reachable(g, x, m, m2)) ++before;
        ranked.push_back({before, m});
    }
    std::sort(ranked.begin(), ranked.end());
    out.chain.push_back(x);
    for (auto [r, m] : ranked) out.chain.push_back(m);
    out.chain.push_back(y);
    out.blocks.push_back({x});
    for (std::size_t i = 1; i < out.chain.size(); ++i) {
        if (c.nonsep.count({out.chain[i - 1], out.chain[i]})) out.blocks.push_back({});
        out.blocks.back().push_back(out.chain[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Wall metrics by subset enumeration

struct Point {
    int plus = -1, minus = -1;   ///< crossing, or -1
    std::map<int, int> sides;    ///< region point sides
};

inline std::vector<Point> points(const Chords& c, const FinitePattern& fp) {
    std::vector<Point> out;
    for (const auto& m : fp.points) {
        Point p;
        if (const auto* x = std::get_if<bifol::Crossing>(&m.locator)) {
            p.plus = c.idx.at(x->plus);
            p.minus = c.idx.at(x->minus);
        } else {
            for (const auto& [id, s] : std::get<bifol::RegionPoint>(m.locator).sides) p.sides[c.idx.at(id)] = s;
        }
        out.push_back(p);
    }
    return out;
}

/// -1 on the leaf, otherwise the arc of l holding the point.
inline int side(const Chords& c, int l, const Point& p) {
    if (p.plus < 0) return p.sides.at(l);
    if (l == p.plus || l == p.minus) return -1;
    return c.region(l, c.sign[l] == Sign::Plus ? p.plus : p.minus);
}

inline bool separates(const Chords& c, int l, const Point& x, const Point& y) {
    const int sx = side(c, l, x), sy = side(c, l, y);
    if (sx == -1 && sy == -1) return false;
    return sx == -1 || sy == -1 || sx != sy;
}

inline bool aligned(const Chords& c, int a, int b) {
    if (c.cross(a, b)) return false;
    for (int t = 0; t < c.n(); ++t)
        if (t != a && t != b && c.cross(t, a) && c.cross(t, b)) return false;
    return true;
}

inline bool reeb(const Chords& c, int a, int b) { return pseudo_interval(c, a, b).blocks.size() >= 2; }

/// Largest admissible separating family; -1 for distinct points no leaf separates.
inline int max_family(const Chords& c, const Point& x, const Point& y, bifol::WallKind k) {
    using bifol::WallKind;
    std::vector<int> cand;
    bool any = false;
    for (int l = 0; l < c.n(); ++l) {
        if (!separates(c, l, x, y)) continue;
        any = true;
        const bool ok = k == WallKind::H ||
                        ((k == WallKind::Plus || k == WallKind::RPlus) ? c.sign[l] == Sign::Plus
                                                                       : c.sign[l] == Sign::Minus);
        if (ok) cand.push_back(l);
    }
    if (!any) return -1;
    const int n = static_cast<int>(cand.size());
    const bool reeb_kind = k == WallKind::RPlus || k == WallKind::RMinus;
    std::vector<std::vector<char>> ok(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            ok[i][j] = ok[j][i] = !c.cross(cand[i], cand[j]) &&
                                  (reeb_kind ? reeb(c, cand[i], cand[j]) : aligned(c, cand[i], cand[j]));
    int best = 0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        const int size = __builtin_popcount(mask);
        if (size <= best) continue;
        bool good = true;
        for (int i = 0; i < n && good; ++i)
            for (int j = i + 1; j < n && good; ++j)
                if ((mask >> i & 1) && (mask >> j & 1) && !ok[i][j]) good = false;
        if (good) best = size;
    }
    return best;
}

// ---------------------------------------------------------------------------
// Census

struct Affine {
    int k;
    long long x, y;
    bool operator==(const Affine& o) const { return k == o.k && x == o.x && y == o.y; }
};

struct AffineHash {
    std::size_t operator()(const Affine& a) const {
        return std::hash<long long>()(a.x * 1000003LL + a.y) ^ (std::hash<int>()(a.k) << 1);
    }
};

/// M^k for M = [[2,1],[1,1]] and its inverse [[1,-1],[-1,2]].
inline std::array<long long, 4> power(int k) {
    std::array<long long, 4> r{1, 0, 0, 1};
    const std::array<long long, 4> m = k >= 0 ? std::array<long long, 4>{2, 1, 1, 1}
                                              : std::array<long long, 4>{1, -1, -1, 2};
    for (int i = 0; i < std::abs(k); ++i)
        r = {r[0] * m[0] + r[1] * m[2], r[0] * m[1] + r[1] * m[3], r[2] * m[0] + r[3] * m[2],
             r[2] * m[1] + r[3] * m[3]};
    return r;
}

/// x -> M^k x + v composed as a(b(x)).
inline Affine compose(const Affine& a, const Affine& b) {
    auto m = power(a.k);
    return {a.k + b.k, m[0] * b.x + m[1] * b.y + a.x, m[2] * b.x + m[3] * b.y + a.y};
}

/// Fixed point exists iff det(I - M^k) != 0, or the map is the identity.
inline bool affine_free(const Affine& a) {
    auto m = power(a.k);
    const long long det = (1 - m[0]) * (1 - m[3]) - m[1] * m[2];
    if (det != 0) return false;
    return a.x != 0 || a.y != 0;
}

struct CensusRow {
    std::size_t ball = 0, free = 0;
};

template <class T, class Hash, class Compose, class Free>
std::vector<CensusRow> census(const std::vector<T>& gens, const T& id, int nmax, Compose comp, Free is_free) {
    std::unordered_set<T, Hash> seen{id};
    std::vector<T> frontier{id};
    std::vector<CensusRow> rows;
    std::size_t free = is_free(id) ? 1 : 0;
    rows.push_back({1, free});
    for (int r = 1; r <= nmax; ++r) {
        std::vector<T> next;
        for (const auto& e : frontier)
            for (const auto& s : gens) {
                T h = comp(e, s);
                if (seen.insert(h).second) {
                    next.push_back(h);
                    if (is_free(h)) ++free;
                }
            }
        frontier = std::move(next);
        rows.push_back({seen.size(), free});
    }
    return rows;
}

inline std::vector<CensusRow> trivial_census(int nmax) {
    std::vector<Affine> gens{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    return census<Affine, AffineHash>(gens, Affine{0, 0, 0}, nmax, compose, affine_free);
}

struct Offsets {
    std::vector<long long> o;
    bool operator==(const Offsets& b) const { return o == b.o; }
};

struct OffsetsHash {
    std::size_t operator()(const Offsets& a) const {
        std::size_t h = 1469598103934665603ULL;
        for (long long v : a.o) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ULL;
        return h;
    }
};

inline long long mod(long long a, long long n) { return ((a % n) + n) % n; }

/// i -> i + o[i mod N], composed as a(b(i)).
inline Offsets compose(const Offsets& a, const Offsets& b) {
    const long long n = static_cast<long long>(a.o.size());
    Offsets r{std::vector<long long>(a.o.size())};
    for (long long i = 0; i < n; ++i) r.o[i] = b.o[i] + a.o[mod(i + b.o[i], n)];
    return r;
}

inline Offsets inverse(const Offsets& a) {
    const long long n = static_cast<long long>(a.o.size());
    Offsets r{std::vector<long long>(a.o.size())};
    for (long long i = 0; i < n; ++i) r.o[mod(i + a.o[i], n)] = -a.o[i];
    return r;
}

inline bool offsets_free(const Offsets& a) {
    return std::none_of(a.o.begin(), a.o.end(), [](long long v) { return v == 0; });
}

/// Unit shift, swap of residues 0 and 1, and the shift by N + 1, with inverses.
inline std::vector<CensusRow> skew_census(int n, int nmax) {
    Offsets t{std::vector<long long>(n, 1)}, h{std::vector<long long>(n, n + 1)}, s{std::vector<long long>(n, 0)};
    s.o[0] = 1;
    s.o[1] = -1;
    std::vector<Offsets> gens{t, inverse(t), s, h, inverse(h)};
    return census<Offsets, OffsetsHash>(gens, Offsets{std::vector<long long>(n, 0)}, nmax,
                                        [](const Offsets& a, const Offsets& b) { return compose(a, b); },
                                        offsets_free);
}

} // namespace oracle
