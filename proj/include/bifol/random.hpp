#pragma once

#include "fixtures.hpp"
#include "graphs.hpp"

#include <random>

namespace bifol {

/// Portable draws from mt19937_64; the standard distributions are
/// implementation-defined, so reductions are done by hand.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : eng_() % n; }
    bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 eng_;
};

namespace detail {

/// Random non-crossing perfect matching on the positions `pos` of a circle.
inline std::vector<std::pair<int, int>> random_noncrossing(Rng& rng, const std::vector<int>& pos) {
    const int m = static_cast<int>(pos.size()) / 2;
    std::vector<int> word(2 * m);
    for (int i = 0; i < m; ++i) word[i] = 1, word[m + i] = -1;
    rng.shuffle(word);
    // Rotate to a Dyck word: start right after the minimum prefix sum.
    int sum = 0, best = 0, start = 0;
    for (int i = 0; i < 2 * m; ++i) {
        sum += word[i];
        if (sum < best) best = sum, start = i + 1;
    }
    std::vector<std::pair<int, int>> out;
    std::vector<int> stack;
    for (int k = 0; k < 2 * m; ++k) {
        const int i = (start + k) % (2 * m);
        if (word[i] == 1) {
            stack.push_back(i);
        } else {
            out.emplace_back(pos[stack.back()], pos[i]);
            stack.pop_back();
        }
    }
    return out;
}

} // namespace detail

struct RandomPatternOptions {
    int min_leaves = 4;
    int max_leaves = 20;
    int nonsep_percent = 30;
    std::size_t max_points = 30;
    int max_attempts = 10000;
};

/// Random valid pattern of regular chords with connected X+ and X-, declared
/// nonseparated pairs drawn from the eligible ones, and crossing points marked.
inline FinitePattern random_pattern(Rng& rng, const RandomPatternOptions& opt = {}) {
    for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
        const int total = opt.min_leaves + static_cast<int>(rng.below(opt.max_leaves - opt.min_leaves + 1));
        const int np = 1 + static_cast<int>(rng.below(total - 1));
        std::vector<int> signs(2 * total);
        for (int i = 0; i < 2 * total; ++i) signs[i] = i < 2 * np ? 1 : 0;
        rng.shuffle(signs);
        std::vector<int> ppos, mpos;
        for (int i = 0; i < 2 * total; ++i) (signs[i] ? ppos : mpos).push_back(i);
        Builder b;
        std::vector<int> pts(2 * total);
        for (int i = 0; i < 2 * total; ++i) pts[i] = b.point(i);
        int c = 0;
        for (auto [u, v] : detail::random_noncrossing(rng, ppos)) b.leaf("p" + std::to_string(c++), Sign::Plus, {pts[u], pts[v]});
        c = 0;
        for (auto [u, v] : detail::random_noncrossing(rng, mpos)) b.leaf("m" + std::to_string(c++), Sign::Minus, {pts[u], pts[v]});
        FinitePattern fp = b.build();
        Pattern p = Pattern::make(fp);
        if (!connected(build_graph(p, GraphKind::Xplus)) || !connected(build_graph(p, GraphKind::Xminus))) continue;
        for (int x = 0; x < p.leaf_count(); ++x)
            for (int y = x + 1; y < p.leaf_count(); ++y) {
                if (p.sign(x) != p.sign(y) || ordered_separators(p, x, y).size() != 2) continue;
                bool transversal = false;
                for (int t = 0; t < p.leaf_count() && !transversal; ++t)
                    transversal = p.intersects(t, x) && p.intersects(t, y);
                if (transversal || !rng.chance(opt.nonsep_percent, 100)) continue;
                fp.nonseparated.emplace_back(p.id(x), p.id(y));
            }
        return with_crossing_points(std::move(fp), opt.max_points);
    }
    throw PreconditionError("random_pattern: no connected pattern found");
}

} // namespace bifol
