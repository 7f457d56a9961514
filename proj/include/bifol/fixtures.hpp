#pragma once

#include "pattern.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace bifol {

/// Assembles a FinitePattern from boundary points placed at real-valued
/// positions along the circle. Labels are derived from the leaves using them.
class Builder {
public:
    int point(double key) {
        keys_.push_back(key);
        return static_cast<int>(keys_.size()) - 1;
    }

    void leaf(const std::string& id, Sign sign, std::vector<int> pts) { leaves_.push_back({id, sign, std::move(pts)}); }
    void singularity(const std::string& plus, const std::string& minus) { fp_.singularities.push_back({plus, minus}); }
    void nonseparated(const std::string& a, const std::string& b) { fp_.nonseparated.emplace_back(a, b); }
    void crossing_point(const std::string& id, const std::string& plus, const std::string& minus) {
        fp_.points.push_back({id, Crossing{plus, minus}});
    }
    void region_point(const std::string& id, std::map<std::string, int> sides) {
        fp_.points.push_back({id, RegionPoint{std::move(sides)}});
    }

    FinitePattern build() const {
        FinitePattern fp = fp_;
        const int n = static_cast<int>(keys_.size());
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return keys_[a] < keys_[b]; });
        std::vector<int> rank(n);
        for (int i = 0; i < n; ++i) rank[order[i]] = i;
        std::vector<std::string> names(n);
        std::vector<Leaf> leaves;
        for (const auto& pl : leaves_) {
            std::vector<int> pts = pl.pts;
            std::sort(pts.begin(), pts.end(), [&](int a, int b) { return rank[a] < rank[b]; });
            for (std::size_t j = 0; j < pts.size(); ++j) {
                std::string nm = pl.id + "." + std::to_string(j);
                names[pts[j]] = names[pts[j]].empty() ? nm : names[pts[j]] + "/" + nm;
            }
            leaves.push_back({pl.id, pl.sign, {}});
        }
        for (std::size_t i = 0; i < leaves_.size(); ++i) {
            std::vector<int> pts = leaves_[i].pts;
            std::sort(pts.begin(), pts.end(), [&](int a, int b) { return rank[a] < rank[b]; });
            for (int q : pts) leaves[i].endpoints.push_back(names[q]);
        }
        for (int i : order)
            if (!names[i].empty()) fp.boundary.push_back(names[i]);
        fp.leaves = std::move(leaves);
        return fp;
    }

private:
    struct Pending {
        std::string id;
        Sign sign;
        std::vector<int> pts;
    };
    std::vector<double> keys_;
    std::vector<Pending> leaves_;
    FinitePattern fp_;
};

/// Builds a pattern from a counterclockwise word of tokens; each leaf id
/// appears once per endpoint, and "a/b" marks an endpoint shared by a and b.
inline FinitePattern from_word(const std::string& word, const std::map<std::string, Sign>& signs) {
    Builder b;
    std::map<std::string, std::vector<int>> pts;
    std::vector<std::string> order;
    std::istringstream in(word);
    std::string tok;
    double key = 0;
    while (in >> tok) {
        int h = b.point(key);
        key += 1;
        std::size_t start = 0;
        while (true) {
            std::size_t slash = tok.find('/', start);
            std::string id = tok.substr(start, slash == std::string::npos ? std::string::npos : slash - start);
            if (!pts.count(id)) order.push_back(id);
            pts[id].push_back(h);
            if (slash == std::string::npos) break;
            start = slash + 1;
        }
    }
    for (const auto& id : order) {
        auto it = signs.find(id);
        if (it == signs.end()) throw UnknownId("from_word: no sign for " + id);
        b.leaf(id, it->second, pts[id]);
    }
    return b.build();
}

/// Adds every crossing as a marked point, in leaf order, up to `limit` points.
inline FinitePattern with_crossing_points(FinitePattern fp, std::size_t limit = 30) {
    Pattern p = Pattern::make(fp);
    for (auto [a, b] : relations(p).crossings) {
        if (fp.points.size() >= limit) break;
        std::string id = "x:" + p.id(a) + "^" + p.id(b);
        bool dup = std::any_of(fp.points.begin(), fp.points.end(), [&](const MarkedPoint& m) {
            const auto* c = std::get_if<Crossing>(&m.locator);
            return m.id == id || (c && c->plus == p.id(a) && c->minus == p.id(b));
        });
        if (!dup) fp.points.push_back({id, Crossing{p.id(a), p.id(b)}});
    }
    return fp;
}

namespace gen {

/// n vertical and n horizontal chords, all linking.
/// Boundary, counterclockwise: bottoms, right ends, tops reversed, left ends reversed.
inline FinitePattern trivial(int n) {
    if (n < 1) throw PreconditionError("trivial: n < 1");
    Builder b;
    for (int i = 0; i < n; ++i) b.leaf("v" + std::to_string(i), Sign::Plus, {b.point(i), b.point(3.0 * n - i)});
    for (int j = 0; j < n; ++j) b.leaf("h" + std::to_string(j), Sign::Minus, {b.point(n + j), b.point(5.0 * n - j)});
    return b.build();
}

/// trivial(3) with all crossings marked and one point in the lower-left cell.
inline FinitePattern grid3() {
    FinitePattern fp = with_crossing_points(trivial(3));
    Pattern p = Pattern::make(fp);
    std::map<std::string, int> sides;
    // The corner cell touches the gap between the last and first label.
    const int last = p.boundary_size() - 1;
    for (int l = 0; l < p.leaf_count(); ++l) {
        const auto& e = p.ends(l);
        int below = static_cast<int>(std::upper_bound(e.begin(), e.end(), last) - e.begin());
        sides[p.id(l)] = (below - 1 + static_cast<int>(e.size())) % static_cast<int>(e.size());
    }
    fp.points.push_back({"r:corner", RegionPoint{sides}});
    return fp;
}

/// Single lozenge with sides p1, p2 (plus) and m1, m2 (minus); p1 fits m1, p2
/// fits m2. With `interior` one transversal of each sign crosses the lozenge.
inline FinitePattern lozenge(bool interior = true) {
    if (!interior)
        return from_word("p1 p2/m2 m1 p2 p1/m1 m2",
                         {{"p1", Sign::Plus}, {"p2", Sign::Plus}, {"m1", Sign::Minus}, {"m2", Sign::Minus}});
    return from_word("p1 q p2/m2 n m1 p2 q p1/m1 n m2", {{"p1", Sign::Plus},
                                                          {"p2", Sign::Plus},
                                                          {"q", Sign::Plus},
                                                          {"m1", Sign::Minus},
                                                          {"m2", Sign::Minus},
                                                          {"n", Sign::Minus}});
}

/// Chain of n lozenges, each glued to the previous one at a corner.
inline FinitePattern chain(int n, bool interior = true) {
    if (n < 1) throw PreconditionError("chain: n < 1");
    Builder b;
    // Hexagon of lozenge i: h[0] free end of plus1, h[1] = plus2/minus2,
    // h[2] free end of minus1, h[3] free end of plus2, h[4] = plus1/minus1,
    // h[5] free end of minus2.
    std::vector<double> h{0, 10, 20, 30, 40, 50};
    std::vector<int> hp(6);
    for (int i = 0; i < 6; ++i) hp[i] = b.point(h[i]);
    std::string plus1 = "p0", plus2 = "p1", minus1 = "m0", minus2 = "m1";
    struct Side {
        std::string id;
        Sign sign;
        std::vector<int> pts;
    };
    std::map<std::string, Side> sides;
    auto add = [&](const std::string& id, Sign s, int pt) {
        auto& sd = sides[id];
        sd.id = id;
        sd.sign = s;
        sd.pts.push_back(pt);
    };
    add(plus1, Sign::Plus, hp[0]);
    add(plus1, Sign::Plus, hp[4]);
    add(plus2, Sign::Plus, hp[1]);
    add(plus2, Sign::Plus, hp[3]);
    add(minus1, Sign::Minus, hp[2]);
    add(minus1, Sign::Minus, hp[4]);
    add(minus2, Sign::Minus, hp[1]);
    add(minus2, Sign::Minus, hp[5]);
    int next = 2;
    for (int i = 0; i < n; ++i) {
        if (interior) {
            const double d = (h[2] - h[1]) / 10.0;
            const double d2 = (h[4] - h[3]) / 10.0;
            std::string q = "q" + std::to_string(i), r = "n" + std::to_string(i);
            b.leaf(q, Sign::Plus, {b.point(h[1] - d), b.point(h[4] - d2)});
            b.leaf(r, Sign::Minus, {b.point(h[1] + d), b.point(h[4] + d2)});
        }
        if (i + 1 == n) break;
        // Next lozenge: plus1' = plus2, minus2' = minus1, new plus2' fits minus1
        // at h[2], new minus1' fits plus2 at h[3].
        const double lo = h[2], hi = h[3];
        std::vector<double> g{h[1], h[2], lo + (hi - lo) / 3, lo + 2 * (hi - lo) / 3, h[3], h[4]};
        std::string np = "p" + std::to_string(next), nm = "m" + std::to_string(next);
        ++next;
        int a = b.point(g[2]);
        int c = b.point(g[3]);
        int shared_q = -1, shared_n = -1;
        for (auto& [id, sd] : sides)
            for (int pt : sd.pts) {
                if (id == minus1 && std::find(hp.begin(), hp.end(), pt) != hp.end() && pt == hp[2]) shared_q = pt;
                if (id == plus2 && pt == hp[3]) shared_n = pt;
            }
        add(np, Sign::Plus, shared_q);
        add(np, Sign::Plus, c);
        add(nm, Sign::Minus, a);
        add(nm, Sign::Minus, shared_n);
        std::string o_plus2 = plus2, o_minus1 = minus1;
        plus1 = o_plus2;
        minus2 = o_minus1;
        plus2 = np;
        minus1 = nm;
        h = g;
        hp = {hp[1], hp[2], a, c, hp[3], hp[4]};
    }
    for (const auto& [id, sd] : sides) b.leaf(id, sd.sign, sd.pts);
    return b.build();
}

/// Plus k-prong P with minus partner M. Chord a_j crosses the j-th ray of M,
/// chord b_j the j-th ray of P; a_j also meets b_j and b_{j+1}.
inline FinitePattern prong(int k) {
    if (k < 3) throw PreconditionError("prong: k < 3");
    std::map<std::string, Sign> signs{{"P", Sign::Plus}, {"M", Sign::Minus}};
    std::string w;
    for (int j = 0; j < k; ++j) {
        std::string a = "a" + std::to_string(j), bj = "b" + std::to_string(j), bn = "b" + std::to_string((j + 1) % k);
        signs[a] = Sign::Plus;
        signs[bj] = Sign::Minus;
        w += "P " + a + " " + bj + " M " + bn + " " + a + " ";
    }
    FinitePattern fp = from_word(w, signs);
    fp.singularities.push_back({"P", "M"});
    return fp;
}

namespace detail {

/// Word of a 3-prong with suffix `s`; `q1`, `q2`, `q0` replace the second
/// occurrence of b1, the Q2 occurrence of b1, and the Q0 occurrence of b0.
inline std::string prong3_word(const std::string& s, const std::string& q0, const std::string& q1,
                               const std::string& q2, const std::string& q5, std::map<std::string, Sign>& signs) {
    auto t = [&](const char* base) { return std::string(base) + s; };
    for (const char* pl : {"P", "a0", "a1", "a2"}) signs[t(pl)] = Sign::Plus;
    for (const char* mi : {"M", "b0", "b1", "b2"}) signs[t(mi)] = Sign::Minus;
    std::string w;
    w += t("P") + " " + t("a0") + " " + q0 + " " + t("M") + " ";
    w += q1 + " " + t("a0") + " ";
    w += t("P") + " " + t("a1") + " " + q2 + " " + t("M") + " ";
    w += t("b2") + " " + t("a1") + " ";
    w += t("P") + " " + t("a2") + " " + t("b2") + " " + t("M") + " ";
    w += q5 + " " + t("a2");
    return w;
}

} // namespace detail

/// Nested chain of m 3-prongs between leaves x and y; x sits in one quadrant
/// of every prong and y in the opposite one.
inline FinitePattern prongdiv(int m = 1) {
    if (m < 1) throw PreconditionError("prongdiv: m < 1");
    std::map<std::string, Sign> signs{{"x", Sign::Plus}, {"y", Sign::Plus}};
    std::string inner;
    for (int i = m; i >= 1; --i) {
        std::string s = std::to_string(i);
        std::string b0 = "b0" + s, b1 = "b1" + s;
        std::string q2 = i == m ? "y " + b1 + " y" : inner;
        std::string q5 = i == 1 ? "x " + b0 + " x" : b0;
        std::string w = detail::prong3_word(s, b0, b1, q2, q5, signs);
        if (i > 1) {
            // The parent's b1 enters this prong right after its first P; the
            // plus chord c runs outside a0 and links both prongs' minus leaves.
            std::string parent_b1 = "b1" + std::to_string(i - 1);
            std::string head = "P" + s + " ";
            std::string c = "c" + s;
            signs[c] = Sign::Plus;
            w = head + c + " " + parent_b1 + " " + w.substr(head.size());
            const std::string close = "a0" + s + " P" + s + " ";
            w.insert(w.find(close) + close.size() - head.size(), c + " ");
        }
        inner = w;
    }
    FinitePattern fp = from_word(inner, signs);
    for (int i = 1; i <= m; ++i) fp.singularities.push_back({"P" + std::to_string(i), "M" + std::to_string(i)});
    return fp;
}

/// Single 3-prong with x outside (quadrant 5) and y placed in quadrant q of {0, 1, 2}.
inline FinitePattern prong_pair(int q) {
    std::map<std::string, Sign> signs{{"x", Sign::Plus}, {"y", Sign::Plus}};
    std::string q0 = q == 0 ? "y b01 y" : "b01";
    std::string q1 = q == 1 ? "y b11 y" : "b11";
    std::string q2 = q == 2 ? "y b11 y" : "b11";
    std::string w = detail::prong3_word("1", q0, q1, q2, "x b01 x", signs);
    FinitePattern fp = from_word(w, signs);
    fp.singularities.push_back({"P1", "M1"});
    return fp;
}

inline FinitePattern prongnondiv() { return prong_pair(1); }

/// Points a = (v0, h0), b = (v1, h1) where h1 crosses v0 but h0 misses v1.
inline FinitePattern partlink() {
    FinitePattern fp = from_word("h0 v0 h0 v1 h1 v1 v0 h1", {{"v0", Sign::Plus},
                                                              {"v1", Sign::Plus},
                                                              {"h0", Sign::Minus},
                                                              {"h1", Sign::Minus}});
    fp.points.push_back({"a", Crossing{"v0", "h0"}});
    fp.points.push_back({"b", Crossing{"v1", "h1"}});
    return fp;
}

/// n blocks of two vertical plus leaves each, covered by a bottom arch.
/// Consecutive blocks meet at a declared nonseparated pair bridged by a short
/// plus cap z and two minus arches m, w crossing z and one side each.
inline FinitePattern ladder(int n, bool common_transversal = false) {
    if (n < 1) throw PreconditionError("ladder: n < 1");
    Builder b;
    const double top = 1e6;
    auto bottom_pt = [&](double x) { return b.point(x); };
    auto top_pt = [&](double x) { return b.point(top - x); };
    auto v = [](int i) { return "v" + std::to_string(i); };
    for (int q = 0; q < n; ++q) {
        double base = 100.0 * q;
        for (int r = 0; r < 2; ++r) {
            double x = base + 10 + 20 * r;
            b.leaf(v(2 * q + r), Sign::Plus, {bottom_pt(x), top_pt(x)});
        }
        b.leaf("u" + std::to_string(q), Sign::Minus, {bottom_pt(base + 5), bottom_pt(base + 35)});
        if (q + 1 < n) {
            std::string s = std::to_string(q);
            b.leaf("z" + s, Sign::Plus, {top_pt(base + 40), top_pt(base + 80)});
            b.leaf("m" + s, Sign::Minus, {top_pt(base + 25), top_pt(base + 50)});
            b.leaf("w" + s, Sign::Minus, {top_pt(base + 70), top_pt(base + 115)});
            b.nonseparated(v(2 * q + 1), v(2 * q + 2));
        }
    }
    if (common_transversal && n >= 2) b.leaf("t", Sign::Minus, {top_pt(22), top_pt(118)});
    return b.build();
}

/// Window of the region between y = sin x and y = sin x + 1/2 over m periods,
/// with vertical plus leaves and horizontal minus leaves. Horizontal levels
/// through a tangency split into a declared nonseparated pair.
inline FinitePattern sinestrip(int m, int verticals_per_period = 32) {
    if (m < 1) throw PreconditionError("sinestrip: m < 1");
    using std::numbers::pi;
    const double x0 = 0, x1 = 2 * pi * m, len = x1 - x0;
    const double eps = 1e-4;
    Builder b;
    auto lower = [&](double x) { return b.point(x - x0); };
    auto right = [&](double y) { return b.point(len + 10 + y); };
    auto upper = [&](double x) { return b.point(len + 100 + (x1 - x)); };
    auto left = [&](double y) { return b.point(2 * len + 200 + (5 - y)); };
    const int nv = verticals_per_period * m;
    for (int j = 0; j < nv; ++j) {
        double x = x0 + (j + 0.5) * len / nv;
        b.leaf("v" + std::to_string(j), Sign::Plus, {lower(x), upper(x)});
    }
    const std::vector<double> levels{-0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0, 1.25};
    for (std::size_t li = 0; li < levels.size(); ++li) {
        const double c = levels[li];
        // Boundary hits: lower curve where sin x = c, upper curve where sin x = c - 1/2.
        struct Hit {
            double x;
            int kind; // 0 lower, 1 upper, 2 tangency
        };
        std::vector<Hit> hits;
        auto roots = [&](double s, int kind) {
            if (s > 1 || s < -1) return;
            double a = std::asin(s);
            for (int t = -1; t <= m + 1; ++t) {
                double base = 2 * pi * t;
                std::vector<double> cand;
                if (std::abs(std::abs(s) - 1) < 1e-12)
                    cand = {base + a};
                else
                    cand = {base + a, base + pi - a};
                for (double x : cand)
                    if (x > x0 && x < x1) hits.push_back({x, std::abs(std::abs(s) - 1) < 1e-12 ? 2 : kind});
            }
        };
        roots(c, 0);
        roots(c - 0.5, 1);
        std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.x < b.x; });
        auto inside = [&](double x) { return std::sin(x) < c && c < std::sin(x) + 0.5; };
        std::vector<double> cuts{x0};
        for (const auto& h : hits) cuts.push_back(h.x);
        cuts.push_back(x1);
        int comp = 0;
        std::string prev_id;
        bool prev_tangent = false;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            double a = cuts[i], z = cuts[i + 1];
            if (!inside((a + z) / 2)) continue;
            std::string id = "h" + std::to_string(li) + "_" + std::to_string(comp++);
            int pa, pz;
            if (i == 0)
                pa = left(c);
            else if (hits[i - 1].kind == 2)
                pa = c > 0 ? lower(a + eps) : upper(a + eps);
            else
                pa = hits[i - 1].kind == 0 ? lower(a) : upper(a);
            bool tangent_end = i + 1 < cuts.size() - 1 && hits[i].kind == 2;
            if (i + 1 == cuts.size() - 1)
                pz = right(c);
            else if (tangent_end)
                pz = c > 0 ? lower(z - eps) : upper(z - eps);
            else
                pz = hits[i].kind == 0 ? lower(z) : upper(z);
            b.leaf(id, Sign::Minus, {pa, pz});
            if (prev_tangent && i > 0 && hits[i - 1].kind == 2) b.nonseparated(prev_id, id);
            prev_id = id;
            prev_tangent = tangent_end;
        }
    }
    return b.build();
}

} // namespace gen
} // namespace bifol
