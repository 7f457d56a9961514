#pragma once

#include "pattern.hpp"

#include <deque>
#include <limits>
#include <optional>

namespace bifol {

inline constexpr int INF = std::numeric_limits<int>::max();

/// Simple undirected graph with labelled vertices and sorted adjacency lists.
struct Graph {
    std::vector<std::string> labels;
    std::vector<std::vector<int>> adj;

    int size() const { return static_cast<int>(adj.size()); }
    std::size_t edge_count() const {
        std::size_t e = 0;
        for (const auto& a : adj) e += a.size();
        return e / 2;
    }
    bool adjacent(int u, int v) const { return std::binary_search(adj.at(u).begin(), adj.at(u).end(), v); }
    int vertex(std::string_view label) const {
        for (int i = 0; i < size(); ++i)
            if (labels[i] == label) return i;
        throw UnknownId("unknown vertex " + std::string(label));
    }
};

inline Graph cycle_graph(int n) {
    Graph g;
    g.adj.resize(n);
    for (int i = 0; i < n; ++i) {
        g.labels.push_back("c" + std::to_string(i));
        g.adj[i] = {(i + n - 1) % n, (i + 1) % n};
        std::sort(g.adj[i].begin(), g.adj[i].end());
        g.adj[i].erase(std::unique(g.adj[i].begin(), g.adj[i].end()), g.adj[i].end());
    }
    return g;
}

enum class GraphKind { X, Xplus, Xminus, GammaPlus, GammaMinus };

inline const char* to_string(GraphKind k) {
    switch (k) {
    case GraphKind::X: return "x";
    case GraphKind::Xplus: return "xplus";
    case GraphKind::Xminus: return "xminus";
    case GraphKind::GammaPlus: return "gammaplus";
    case GraphKind::GammaMinus: return "gammaminus";
    }
    return "?";
}

inline GraphKind parse_graph_kind(std::string_view s) {
    for (GraphKind k : {GraphKind::X, GraphKind::Xplus, GraphKind::Xminus, GraphKind::GammaPlus, GraphKind::GammaMinus})
        if (s == to_string(k)) return k;
    throw UnknownId("unknown graph kind " + std::string(s));
}

/// Graph on the leaves of a pattern; vertex i is leaf `leaves[i]`.
struct LeafGraph : Graph {
    GraphKind kind = GraphKind::X;
    std::vector<int> leaves;
    std::vector<int> vertex_of; ///< leaf index to vertex, -1 when absent

    int of_leaf(int l) const {
        int v = vertex_of.at(l);
        if (v < 0) throw UnknownId("leaf not a vertex of this graph");
        return v;
    }
};

inline LeafGraph build_graph(const Pattern& p, GraphKind kind) {
    LeafGraph g;
    g.kind = kind;
    g.vertex_of.assign(p.leaf_count(), -1);
    const bool both = kind == GraphKind::X;
    const Sign s = (kind == GraphKind::Xplus || kind == GraphKind::GammaPlus) ? Sign::Plus : Sign::Minus;
    for (int l = 0; l < p.leaf_count(); ++l)
        if (both || p.sign(l) == s) {
            g.vertex_of[l] = static_cast<int>(g.leaves.size());
            g.leaves.push_back(l);
            g.labels.push_back(p.id(l));
        }
    const int n = static_cast<int>(g.leaves.size());
    g.adj.assign(n, {});
    std::vector<int> transversals;
    if (kind == GraphKind::Xplus || kind == GraphKind::Xminus)
        for (int t : p.leaves_of(opposite(s)))
            if (!p.singular(t)) transversals.push_back(t);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const int a = g.leaves[i], b = g.leaves[j];
            bool e = false;
            switch (kind) {
            case GraphKind::X: e = p.intersects(a, b); break;
            case GraphKind::Xplus:
            case GraphKind::Xminus:
                e = std::any_of(transversals.begin(), transversals.end(),
                                [&](int t) { return p.intersects(t, a) && p.intersects(t, b); });
                break;
            case GraphKind::GammaPlus:
            case GraphKind::GammaMinus: e = pseudo_interval(p, a, b).blocks.size() == 1; break;
            }
            if (e) {
                g.adj[i].push_back(j);
                g.adj[j].push_back(i);
            }
        }
    return g;
}

/// Distances from `src`, INF for unreachable vertices. `removed` vertices are skipped.
inline std::vector<int> bfs(const Graph& g, int src, const std::vector<char>* removed = nullptr) {
    std::vector<int> d(g.size(), INF);
    if (removed && (*removed)[src]) return d;
    std::deque<int> q{src};
    d[src] = 0;
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int w : g.adj[u])
            if (d[w] == INF && !(removed && (*removed)[w])) {
                d[w] = d[u] + 1;
                q.push_back(w);
            }
    }
    return d;
}

inline int distance(const Graph& g, int u, int v) {
    if (u < 0 || u >= g.size() || v < 0 || v >= g.size()) throw UnknownId("distance: unknown vertex");
    return bfs(g, u)[v];
}

inline int leaf_distance(const Pattern& p, const LeafGraph& g, std::string_view a, std::string_view b) {
    return distance(g, g.of_leaf(p.index(a)), g.of_leaf(p.index(b)));
}

inline std::vector<std::vector<int>> all_pairs(const Graph& g) {
    std::vector<std::vector<int>> d(g.size());
    for (int u = 0; u < g.size(); ++u) d[u] = bfs(g, u);
    return d;
}

inline int diameter(const Graph& g) {
    int best = 0;
    for (int u = 0; u < g.size(); ++u)
        for (int x : bfs(g, u)) best = std::max(best, x);
    return best;
}

inline bool connected(const Graph& g) {
    if (g.size() == 0) return true;
    auto d = bfs(g, 0);
    return std::find(d.begin(), d.end(), INF) == d.end();
}

// ---------------------------------------------------------------------------
// Path projection

/// Union of the separator chains along consecutive vertices of an X+ or X- path.
inline std::vector<int> project_path(const Pattern& p, const LeafGraph& g, const std::vector<int>& path_leaves) {
    if (g.kind != GraphKind::Xplus && g.kind != GraphKind::Xminus)
        throw PreconditionError("project_path: graph must be Xplus or Xminus");
    std::set<int> out;
    for (std::size_t i = 0; i < path_leaves.size(); ++i) {
        out.insert(path_leaves[i]);
        if (i == 0) continue;
        int a = path_leaves[i - 1], b = path_leaves[i];
        if (a != b && !g.adjacent(g.of_leaf(a), g.of_leaf(b)))
            throw PreconditionError("project_path: " + p.id(a) + " and " + p.id(b) + " are not adjacent");
        for (int l : ordered_separators(p, a, b)) out.insert(l);
    }
    return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// Bottleneck criterion

struct BottleneckWitness {
    int x, y, mid;
};

struct BottleneckResult {
    bool pass = true;
    std::optional<BottleneckWitness> witness;
    std::size_t triples_checked = 0;
};

/// Every midpoint v of every even-length geodesic pair (x, y) must disconnect
/// x from y once the closed ball B(v, K) is removed.
inline BottleneckResult bottleneck_certify(const Graph& g, int K) {
    if (K < 0) throw PreconditionError("bottleneck_certify: K < 0");
    if (!connected(g)) throw PreconditionError("bottleneck_certify: graph is disconnected");
    const int n = g.size();
    auto d = all_pairs(g);
    // comp[v][u]: component of u in G - B(v, K), -1 inside the ball.
    std::vector<std::vector<int>> comp(n);
    auto components = [&](int v) -> const std::vector<int>& {
        if (!comp[v].empty()) return comp[v];
        std::vector<char> removed(n);
        for (int u = 0; u < n; ++u) removed[u] = d[v][u] <= K;
        auto& c = comp[v];
        c.assign(n, -1);
        int next = 0;
        for (int u = 0; u < n; ++u) {
            if (removed[u] || c[u] != -1) continue;
            auto r = bfs(g, u, &removed);
            for (int w = 0; w < n; ++w)
                if (r[w] != INF) c[w] = next;
            ++next;
        }
        return c;
    };
    BottleneckResult res;
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) {
            const int dist = d[x][y];
            if (dist % 2 != 0 || dist / 2 <= K) continue;
            for (int v = 0; v < n; ++v) {
                if (d[x][v] != dist / 2 || d[v][y] != dist / 2) continue;
                ++res.triples_checked;
                const auto& c = components(v);
                if (c[x] != -1 && c[x] == c[y]) {
                    res.pass = false;
                    res.witness = BottleneckWitness{x, y, v};
                    return res;
                }
            }
        }
    return res;
}

/// Smallest K in [0, kmax] passing bottleneck_certify, or nullopt.
inline std::optional<int> min_bottleneck_constant(const Graph& g, int kmax) {
    for (int k = 0; k <= kmax; ++k)
        if (bottleneck_certify(g, k).pass) return k;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Inclusion inequalities between X and X+/X-

struct InclusionViolation {
    std::string a, b;
    int d_sign, d_x;
};

struct InclusionReport {
    std::size_t pairs = 0;
    std::vector<InclusionViolation> violations;
    double max_ratio = 0; ///< max d_X / d_{X+-} over finite pairs
    bool pass() const { return violations.empty(); }
};

inline InclusionReport qi_inclusion_report(const Pattern& p) {
    InclusionReport rep;
    LeafGraph gx = build_graph(p, GraphKind::X);
    auto dx = all_pairs(gx);
    for (GraphKind k : {GraphKind::Xplus, GraphKind::Xminus}) {
        LeafGraph gs = build_graph(p, k);
        auto ds = all_pairs(gs);
        for (int i = 0; i < gs.size(); ++i)
            for (int j = i + 1; j < gs.size(); ++j) {
                ++rep.pairs;
                const long long s = ds[i][j];
                const long long x = dx[gx.of_leaf(gs.leaves[i])][gx.of_leaf(gs.leaves[j])];
                const bool lower = s == INF ? x == INF : s <= x;
                const bool upper = x == INF ? s == INF : (s == INF || x <= 2 * s);
                if (!lower || !upper) rep.violations.push_back({gs.labels[i], gs.labels[j], ds[i][j], static_cast<int>(x)});
                if (s != INF && x != INF && s > 0) rep.max_ratio = std::max(rep.max_ratio, double(x) / double(s));
            }
    }
    return rep;
}

} // namespace bifol
