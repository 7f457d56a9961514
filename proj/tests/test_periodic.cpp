#include "bifol/report.hpp"
#include "doctest.h"

using namespace bifol;

namespace {

/// Random bijective offset map of period n with offsets in [-3n, 3n].
OffsetMap random_offsets(Rng& rng, int n) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    OffsetMap m;
    for (int r = 0; r < n; ++r) {
        const long long lap = static_cast<long long>(rng.below(7)) - 3;
        m.offsets.push_back(perm[r] - r + lap * n);
    }
    return m;
}

AffineElement random_affine(Rng& rng) {
    return {static_cast<long long>(rng.below(5)) - 2,
            {static_cast<long long>(rng.below(11)) - 5, static_cast<long long>(rng.below(11)) - 5}};
}

} // namespace

TEST_CASE("generators") {
    Pattern t = Pattern::make(gen::trivial(3));
    CHECK(diameter(build_graph(t, GraphKind::Xplus)) == 1);
    CHECK_THROWS_AS(gen::skew(1), PreconditionError);
    CHECK_THROWS_AS(gen::ladder(0), PreconditionError);
    CHECK_THROWS_AS(gen::prong(2), PreconditionError);

    for (int W = 2; W <= 4; ++W) {
        Pattern s = Pattern::make(materialize_window(gen::skew(W), 0, 12));
        for (int i = 0; i <= 12; ++i)
            for (int j = 0; j <= 12; ++j)
                CHECK(intersects(s, "plus:" + std::to_string(i), "minus:" + std::to_string(j)) == (i <= j && j < i + W));
    }
    Pattern s2 = Pattern::make(materialize_window(gen::skew(2), 0, 6));
    CHECK(leaf_distance(s2, build_graph(s2, GraphKind::Xplus), "plus:0", "plus:6") == 6);

    Pattern sine = Pattern::make(gen::sinestrip(4));
    CHECK(diameter(build_graph(sine, GraphKind::GammaPlus)) == 1);
    CHECK(diameter(build_graph(sine, GraphKind::GammaMinus)) >= 4);
}

TEST_CASE("sinestrip minus diameter grows with m") {
    int prev = 0;
    for (int m = 1; m <= 6; ++m) {
        Pattern p = Pattern::make(gen::sinestrip(m));
        const int d = diameter(build_graph(p, GraphKind::GammaMinus));
        CHECK(d > prev);
        prev = d;
    }
}

TEST_CASE("windows") {
    FinitePattern w = materialize_window(gen::skew(2), 0, 3);
    CHECK(w.leaves.size() == 8);
    CHECK(validate_pattern(w).valid());

    auto lp = gen::ladder_periodic();
    CHECK_THROWS_AS(materialize_window(lp, 0, 0), PreconditionError);
    CHECK_THROWS_AS(materialize_window(lp, 3, 1), PreconditionError);

    // Two periods of the ladder, one block per nonseparated template and period.
    Pattern p = Pattern::make(materialize_window(lp, 0, 2 * lp.period - 1));
    auto plus = p.leaves_of(Sign::Plus);
    std::size_t best = 0;
    for (int a : plus)
        for (int b : plus) best = std::max(best, pseudo_interval(p, a, b).blocks.size());
    CHECK(best == 2 * lp.nonsep.size());
}

TEST_CASE("window distances are monotone") {
    auto pp = gen::skew(3);
    int prev = INF;
    for (long long hi : {8, 16, 32}) {
        Pattern p = Pattern::make(materialize_window(pp, 0, hi));
        const int d = leaf_distance(p, build_graph(p, GraphKind::Xplus), "plus:0", "plus:8");
        CHECK(d <= prev);
        prev = d;
    }
}

TEST_CASE("automorphism algebra") {
    auto pp = gen::skew(2);
    const auto& s = pp.automorphisms.at("s");
    CHECK(act(s, "plus:3") == "plus:4");
    CHECK(compose(s, invert(s)) == identity_automorphism(pp));
    CHECK(preserves(pp, s));

    OffsetMap bad{{0, 1}};
    CHECK_FALSE(bad.bijective());
    CHECK_THROWS_AS(invert(bad), PreconditionError);
    auto tp = gen::trivial_periodic();
    IndexAutomorphism g = identity_automorphism(tp);
    g.maps.begin()->second = bad;
    auto chk = check_automorphism(tp, g);
    CHECK_FALSE(chk.ok());
    CHECK_FALSE(chk.bijective);
}

TEST_CASE("offset maps form a group") {
    Rng rng(20260418);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(5));
        OffsetMap a = random_offsets(rng, n), b = random_offsets(rng, n), c = random_offsets(rng, n);
        REQUIRE(a.bijective());
        CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
        CHECK(compose(a, invert(a)) == OffsetMap::identity(n));
        CHECK(compose(invert(a), a) == OffsetMap::identity(n));
        CHECK(compose(a, OffsetMap::identity(n)) == a);
        for (long long i = -2 * n; i <= 2 * n; ++i) CHECK(compose(a, b).apply(i) == a.apply(b.apply(i)));
    }
}

TEST_CASE("affine group law") {
    Rng rng(7);
    const AffineElement id{};
    for (int trial = 0; trial < 300; ++trial) {
        AffineElement a = random_affine(rng), b = random_affine(rng), c = random_affine(rng);
        CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
        CHECK(compose(a, invert(a)) == id);
        CHECK(compose(invert(a), a) == id);
    }
    AffineElement a{1, {0, 0}}, t{0, {1, 0}};
    CHECK(compose(a, t) == AffineElement{1, {2, 1}});
}

TEST_CASE("scalloped invariance") {
    auto sc = gen::scalloped();
    CHECK(scalloped_invariant(sc, sc.automorphisms.at("g2")));
    CHECK_FALSE(scalloped_invariant(sc, sc.automorphisms.at("g1")));
    auto sk = gen::skew(2);
    CHECK_THROWS_AS(scalloped_invariant(sk, sk.automorphisms.at("s")), PreconditionError);
}

TEST_CASE("periodic catalog automorphisms preserve their patterns") {
    for (const auto& f : gen::periodic_catalog()) {
        auto pp = f.make();
        CAPTURE(f.name);
        for (const auto& [name, g] : pp.automorphisms) CHECK(check_automorphism(pp, g).ok());
    }
}
