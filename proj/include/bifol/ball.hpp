#pragma once

#include "error.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace bifol {

template <class T>
struct NamedGenerator {
    std::string name;
    T element;
};

template <class T>
struct BallEntry {
    T element;
    int length = 0;
};

/// Per-call cost guard: aborts when the projected time of the remaining
/// spheres exceeds the budget.
struct Budget {
    std::int64_t ms = -1; ///< negative means unlimited
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    std::int64_t elapsed_ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    }
};

/// Cayley-graph BFS. Elements are ordered by (length, discovery); the result
/// is independent of hashing since discovery order is fixed by the
/// generator order.
template <class T, class Mul>
std::vector<BallEntry<T>> enumerate_ball(const std::vector<T>& symmetric_gens, const T& identity, int n, Mul mul,
                                         const Budget& budget = {}, std::vector<std::size_t>* sphere_ends = nullptr) {
    if (n < 0) throw PreconditionError("enumerate_ball: n < 0");
    std::map<T, int> seen;
    std::vector<BallEntry<T>> out{{identity, 0}};
    seen.emplace(identity, 0);
    if (sphere_ends) sphere_ends->assign(1, 1);
    std::size_t begin = 0;
    double ms_per_product = 0;
    std::size_t prev_sphere = 1;
    for (int r = 1; r <= n; ++r) {
        const std::size_t end = out.size();
        // From radius 4 on, remaining spheres are assumed to grow at the last
        // observed ratio; earlier ratios are dominated by the first sphere.
        const double ratio = std::max(1.0, double(end - begin) / double(prev_sphere));
        const int last = r >= 4 ? n : r;
        double projected = 0, term = ms_per_product * double(end - begin) * double(symmetric_gens.size());
        for (int k = r; k <= last && projected <= double(budget.ms); ++k, term *= ratio) projected += term;
        if (budget.ms >= 0 && r > 1 && double(budget.elapsed_ms()) + projected > double(budget.ms))
            throw BudgetExceeded("ball enumeration to radius " + std::to_string(n) + " projected to exceed " +
                                 std::to_string(budget.ms) + " ms");
        prev_sphere = end - begin;
        auto t0 = std::chrono::steady_clock::now();
        for (std::size_t i = begin; i < end; ++i)
            for (const auto& s : symmetric_gens) {
                T h = mul(out[i].element, s);
                if (seen.emplace(h, r).second) out.push_back({std::move(h), r});
            }
        const double took =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        const double products = double(end - begin) * double(symmetric_gens.size());
        if (products > 0) ms_per_product = std::max(ms_per_product, took / products);
        begin = end;
        if (sphere_ends) sphere_ends->push_back(out.size());
        if (budget.ms >= 0 && budget.elapsed_ms() > budget.ms)
            throw BudgetExceeded("ball enumeration exceeded " + std::to_string(budget.ms) + " ms");
    }
    return out;
}

} // namespace bifol
