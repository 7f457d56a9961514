#include "bifol/report.hpp"
#include "doctest.h"
#include "oracles.hpp"

#include <fstream>

using namespace bifol;

namespace {

json expected_ladder() {
    std::ifstream in(std::string(BIFOL_FIXTURES) + "/expected_ladder.json");
    return json::parse(in);
}

} // namespace

TEST_CASE("grid graphs") {
    Pattern g = Pattern::make(gen::grid3());
    LeafGraph xp = build_graph(g, GraphKind::Xplus);
    CHECK(xp.size() == 3);
    CHECK(xp.edge_count() == 3);
    CHECK(diameter(xp) == 1);

    LeafGraph x = build_graph(g, GraphKind::X);
    CHECK(x.size() == 6);
    CHECK(x.edge_count() == 9);
    CHECK(diameter(x) == 2);
    CHECK(leaf_distance(g, x, "v0", "v1") == 2);
    CHECK(leaf_distance(g, x, "v0", "v0") == 0);
    CHECK_THROWS_AS(distance(x, 0, 99), UnknownId);
}

TEST_CASE("ladder gamma distance") {
    for (int n = 1; n <= 8; ++n) {
        Pattern l = Pattern::make(gen::ladder(n));
        LeafGraph gp = build_graph(l, GraphKind::GammaPlus);
        CAPTURE(n);
        CHECK(leaf_distance(l, gp, "v0", "v" + std::to_string(2 * n - 1)) == n);
    }
}

TEST_CASE("ladder and prong chains match the frozen table") {
    json t = expected_ladder();
    for (int n = 1; n <= 8; ++n) {
        Pattern l = Pattern::make(gen::ladder(n));
        const int d = leaf_distance(l, build_graph(l, GraphKind::Xplus), "v0", "v" + std::to_string(2 * n - 1));
        CHECK(d == t["ladder"][std::to_string(n)].get<int>());
        CHECK(d >= n - 1);
    }
    for (int m = 1; m <= 3; ++m) {
        Pattern p = Pattern::make(gen::prongdiv(m));
        const int d = leaf_distance(p, build_graph(p, GraphKind::Xplus), "x", "y");
        CHECK(d == t["prongdiv"][std::to_string(m)].get<int>());
        CHECK(d >= m);
        CHECK(pseudo_interval(p, "x", "y", BlockMode::ProngBlocks).blocks.size() == std::size_t(m + 1));
    }
}

TEST_CASE("skew window distances grow linearly") {
    Pattern p = Pattern::make(materialize_window(gen::skew(2), 0, 12));
    LeafGraph g = build_graph(p, GraphKind::Xplus);
    for (int m = 0; m <= 12; ++m) CHECK(leaf_distance(p, g, "plus:0", "plus:" + std::to_string(m)) == m);
}

TEST_CASE("sinestrip gamma diameters") {
    for (int m = 1; m <= 6; ++m) {
        Pattern p = Pattern::make(gen::sinestrip(m));
        CAPTURE(m);
        CHECK(diameter(build_graph(p, GraphKind::GammaPlus)) == 1);
        CHECK(diameter(build_graph(p, GraphKind::GammaMinus)) >= m);
    }
}

TEST_CASE("graphs match the Floyd-Warshall oracle on the catalog") {
    for (const auto& f : gen::catalog()) {
        FinitePattern fp = f.make();
        CAPTURE(f.name);
        Pattern p = Pattern::make(fp);
        oracle::Chords c(fp);
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

TEST_CASE("X+ edges are Gamma+ edges") {
    for (const auto& f : gen::catalog()) {
        Pattern p = Pattern::make(f.make());
        for (auto [xs, gs] : {std::pair{GraphKind::Xplus, GraphKind::GammaPlus},
                              std::pair{GraphKind::Xminus, GraphKind::GammaMinus}}) {
            LeafGraph x = build_graph(p, xs), g = build_graph(p, gs);
            for (int u = 0; u < x.size(); ++u)
                for (int w : x.adj[u]) CHECK(g.adjacent(u, w));
        }
    }
}

TEST_CASE("path projection") {
    Pattern g = Pattern::make(gen::grid3());
    LeafGraph xp = build_graph(g, GraphKind::Xplus);
    const int v0 = g.index("v0"), v1 = g.index("v1"), v2 = g.index("v2");
    CHECK(project_path(g, xp, {v0, v2}) == std::vector<int>{v0, v1, v2});
    CHECK(project_path(g, xp, {v1}) == std::vector<int>{v1});
    CHECK_THROWS_AS(project_path(g, build_graph(g, GraphKind::X), {v0}), PreconditionError);

    for (int n = 2; n <= 5; ++n) {
        Pattern l = Pattern::make(gen::ladder(n));
        LeafGraph lg = build_graph(l, GraphKind::Xplus);
        const int a = l.index("v0"), b = l.index("v" + std::to_string(2 * n - 1));
        // One geodesic by walking down the BFS tree from b.
        auto da = bfs(lg, lg.of_leaf(a));
        std::vector<int> path{lg.of_leaf(b)};
        while (path.back() != lg.of_leaf(a))
            for (int w : lg.adj[path.back()])
                if (da[w] == da[path.back()] - 1) {
                    path.push_back(w);
                    break;
                }
        std::vector<int> leaves;
        for (int v : path) leaves.push_back(lg.leaves[v]);
        auto proj = project_path(l, lg, leaves);
        for (int x : pseudo_interval(l, a, b).chain) CHECK(std::find(proj.begin(), proj.end(), x) != proj.end());
    }

    Pattern l2 = Pattern::make(gen::ladder(2));
    CHECK_THROWS_AS(project_path(l2, build_graph(l2, GraphKind::Xplus), {l2.index("v0"), l2.index("v3")}),
                    PreconditionError);
}

TEST_CASE("bottleneck certification") {
    Pattern g = Pattern::make(gen::grid3());
    CHECK(bottleneck_certify(build_graph(g, GraphKind::Xplus), 3).pass);
    Pattern l = Pattern::make(gen::ladder(8));
    CHECK(bottleneck_certify(build_graph(l, GraphKind::Xplus), 3).pass);

    auto c = bottleneck_certify(cycle_graph(12), 1);
    CHECK_FALSE(c.pass);
    REQUIRE(c.witness);
    CHECK(c.witness->x != c.witness->y);

    Graph split;
    split.adj = {{}, {}};
    split.labels = {"a", "b"};
    CHECK_THROWS_AS(bottleneck_certify(split, 3), PreconditionError);
    CHECK(min_bottleneck_constant(cycle_graph(12), 8).has_value());
}

TEST_CASE("inclusion inequalities") {
    CHECK(qi_inclusion_report(Pattern::make(gen::grid3())).pass());

    Pattern s = Pattern::make(materialize_window(gen::skew(2), 0, 8));
    auto rep = qi_inclusion_report(s);
    CHECK(rep.pass());
    CHECK(rep.max_ratio == doctest::Approx(2.0));

    FinitePattern single;
    single.boundary = {"a", "b"};
    single.leaves = {{"l", Sign::Plus, {"a", "b"}}};
    CHECK(qi_inclusion_report(Pattern::make(single)).pass());
}

TEST_CASE("dividing prongs force distance") {
    for (int m = 1; m <= 3; ++m) {
        Pattern p = Pattern::make(gen::prongdiv(m));
        CHECK(leaf_distance(p, build_graph(p, GraphKind::Xplus), "x", "y") >= 2);
    }
}
