#include "bifol/report.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bifol;

namespace {

constexpr std::uint64_t kSeed = 20260418;

std::vector<NamedPattern> small_patterns(int count = 60) { return random_patterns(kSeed, count, 12); }

std::vector<int> on_geodesics(const std::vector<std::vector<int>>& d, int x, int y) {
    std::vector<int> out;
    for (int v = 0; v < int(d.size()); ++v)
        if (d[x][v] != INF && d[v][y] != INF && d[x][v] + d[v][y] == d[x][y]) out.push_back(v);
    return out;
}

} // namespace

TEST_CASE("random patterns are valid and reproducible") {
    auto a = small_patterns(), b = small_patterns();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(validate_pattern(a[i].pattern).valid());
        CHECK(serialize(a[i].pattern) == serialize(b[i].pattern));
        CHECK(a[i].pattern.leaves.size() <= 12);
    }
    CHECK(digest_of(a) == digest_of(b));
}

TEST_CASE("linking is symmetric and never same-sign") {
    for (const auto& np : small_patterns()) {
        Pattern p = Pattern::make(np.pattern);
        for (int a = 0; a < p.leaf_count(); ++a)
            for (int b = 0; b < p.leaf_count(); ++b) {
                CHECK(p.intersects(a, b) == p.intersects(b, a));
                if (p.sign(a) == p.sign(b)) CHECK_FALSE(p.intersects(a, b));
            }
    }
}

TEST_CASE("graph distances match Floyd-Warshall") {
    for (const auto& np : small_patterns()) {
        CAPTURE(np.name);
        Pattern p = Pattern::make(np.pattern);
        oracle::Chords c(np.pattern);
        for (GraphKind k : {GraphKind::X, GraphKind::Xplus, GraphKind::Xminus}) {
            LeafGraph g = build_graph(p, k);
            auto d = all_pairs(g);
            auto want = oracle::floyd_warshall(oracle::adjacency(c, k));
            for (int i = 0; i < g.size(); ++i)
                for (int j = 0; j < g.size(); ++j) {
                    const int w = want[c.idx.at(g.labels[i])][c.idx.at(g.labels[j])];
                    CHECK(d[i][j] == (w == oracle::kInf ? INF : w));
                }
        }
    }
}

TEST_CASE("X edges lie in the Gamma graphs") {
    for (const auto& np : small_patterns()) {
        Pattern p = Pattern::make(np.pattern);
        for (auto [xs, gs] : {std::pair{GraphKind::Xplus, GraphKind::GammaPlus},
                              std::pair{GraphKind::Xminus, GraphKind::GammaMinus}}) {
            LeafGraph x = build_graph(p, xs), g = build_graph(p, gs);
            for (int u = 0; u < x.size(); ++u)
                for (int w : x.adj[u]) CHECK(g.adjacent(u, w));
        }
    }
}

TEST_CASE("pseudo-intervals match the path oracle") {
    for (const auto& np : small_patterns()) {
        CAPTURE(np.name);
        Pattern p = Pattern::make(np.pattern);
        oracle::Chords c(np.pattern);
        for (Sign s : {Sign::Plus, Sign::Minus})
            for (int x : p.leaves_of(s))
                for (int y : p.leaves_of(s)) {
                    auto got = pseudo_interval(p, x, y);
                    auto want = oracle::pseudo_interval(c, c.idx.at(p.id(x)), c.idx.at(p.id(y)));
                    CHECK(got.chain == want.chain);
                    CHECK(got.blocks == want.blocks);
                }
    }
}

TEST_CASE("separators are totally ordered") {
    for (const auto& np : small_patterns()) {
        Pattern p = Pattern::make(np.pattern);
        for (Sign s : {Sign::Plus, Sign::Minus})
            for (int x : p.leaves_of(s))
                for (int y : p.leaves_of(s)) {
                    if (x == y) continue;
                    auto sep = ordered_separators(p, x, y);
                    for (std::size_t i = 0; i < sep.size(); ++i)
                        for (std::size_t j = i + 1; j < sep.size(); ++j) {
                            if (sep[i] != x && sep[j] != y)
                                CHECK((separates_leaves(p, sep[i], x, sep[j]) || p.nonseparated(sep[i], sep[j])));
                            for (std::size_t k = j + 1; k < sep.size(); ++k)
                                CHECK(separates_leaves(p, sep[j], sep[i], sep[k]));
                        }
                }
    }
}

TEST_CASE("chain coherence") {
    std::size_t triples = 0;
    for (const auto& np : small_patterns()) {
        Pattern p = Pattern::make(np.pattern);
        for (Sign s : {Sign::Plus, Sign::Minus}) {
            auto L = p.leaves_of(s);
            for (int a : L)
                for (int b : L)
                    for (int c : L) {
                        if (a == b || b == c || a == c || !separates_leaves(p, b, a, c)) continue;
                        ++triples;
                        for (int t = 0; t < p.leaf_count(); ++t)
                            if (p.intersects(t, a) && p.intersects(t, c)) CHECK(p.intersects(t, b));
                    }
        }
    }
    CHECK(triples > 100);
}

TEST_CASE("nonseparated pairs have no transversal and no separator") {
    std::size_t pairs = 0;
    for (const auto& np : random_patterns(kSeed, 120, 12)) {
        Pattern p = Pattern::make(np.pattern);
        for (auto [a, b] : p.nonseparated_pairs()) {
            ++pairs;
            for (int t = 0; t < p.leaf_count(); ++t) {
                CHECK_FALSE((p.intersects(t, a) && p.intersects(t, b)));
                if (t != a && t != b && p.sign(t) == p.sign(a)) CHECK_FALSE(separates_leaves(p, t, a, b));
            }
        }
    }
    CHECK(pairs > 0);
}

TEST_CASE("geodesics stay near the pseudo-interval") {
    for (const auto& np : small_patterns()) {
        CAPTURE(np.name);
        Pattern p = Pattern::make(np.pattern);
        LeafGraph g = build_graph(p, GraphKind::Xplus);
        auto d = all_pairs(g);
        for (int x = 0; x < g.size(); ++x)
            for (int y = 0; y < g.size(); ++y) {
                auto chain = pseudo_interval(p, g.leaves[x], g.leaves[y]).chain;
                for (int v : on_geodesics(d, x, y)) {
                    int near = INF;
                    for (int l : chain) near = std::min(near, d[v][g.of_leaf(l)]);
                    CHECK(near <= 2);
                }
            }
    }
}

TEST_CASE("every path passes within 3 of every geodesic vertex") {
    for (const auto& np : small_patterns(30)) {
        Pattern p = Pattern::make(np.pattern);
        LeafGraph g = build_graph(p, GraphKind::Xplus);
        auto d = all_pairs(g);
        for (int x = 0; x < g.size(); ++x)
            for (int y = x + 1; y < g.size(); ++y)
                for (int v : on_geodesics(d, x, y)) {
                    std::vector<char> removed(g.size(), 0);
                    for (int w = 0; w < g.size(); ++w) removed[w] = d[v][w] <= 3;
                    if (removed[x] || removed[y]) continue;
                    CHECK(bfs(g, x, &removed)[y] == INF);
                }
    }
}

TEST_CASE("block count bounds the X+ distance") {
    for (const auto& np : small_patterns()) {
        Pattern p = Pattern::make(np.pattern);
        for (auto [sign, kind] : {std::pair{Sign::Plus, GraphKind::Xplus}, std::pair{Sign::Minus, GraphKind::Xminus}}) {
            LeafGraph g = build_graph(p, kind);
            auto d = all_pairs(g);
            for (int x : p.leaves_of(sign))
                for (int y : p.leaves_of(sign))
                    CHECK(d[g.of_leaf(x)][g.of_leaf(y)] >= int(pseudo_interval(p, x, y).blocks.size()) - 1);
        }
    }
}

TEST_CASE("wall families match subset enumeration") {
    std::size_t compared = 0;
    for (const auto& np : small_patterns(40)) {
        CAPTURE(np.name);
        Pattern p = Pattern::make(np.pattern);
        oracle::Chords c(np.pattern);
        auto pts = oracle::points(c, np.pattern);
        for (WallKind k : kAllWallKinds)
            for (int i = 0; i < p.point_count(); ++i)
                for (int j = i + 1; j < p.point_count(); ++j) {
                    const int want = oracle::max_family(c, pts[i], pts[j], k);
                    if (want < 0) {
                        CHECK_THROWS_AS(longest_chain_witness(p, i, j, k), DegenerateInput);
                        continue;
                    }
                    CHECK(int(longest_chain_witness(p, i, j, k).leaves.size()) == want);
                    ++compared;
                }
    }
    CHECK(compared > 1000);
}

TEST_CASE("wall metrics satisfy the axioms") {
    for (const auto& np : small_patterns(40)) {
        Pattern p = Pattern::make(np.pattern);
        for (WallKind k : kAllWallKinds) {
            auto rep = metric_axiom_check(p, k);
            CAPTURE(np.name);
            CHECK(rep.pass());
        }
    }
}

TEST_CASE("inclusion inequalities on random patterns") {
    for (const auto& np : small_patterns()) CHECK(qi_inclusion_report(Pattern::make(np.pattern)).pass());
}
