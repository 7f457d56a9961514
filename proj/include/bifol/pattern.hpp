#pragma once

#include "error.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace bifol {

enum class Sign { Plus, Minus };

inline Sign opposite(Sign s) { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }
inline const char* to_string(Sign s) { return s == Sign::Plus ? "plus" : "minus"; }

struct Leaf {
    std::string id;
    Sign sign = Sign::Plus;
    std::vector<std::string> endpoints;
    bool operator==(const Leaf&) const = default;
};

struct Singularity {
    std::string plus;
    std::string minus;
    bool operator==(const Singularity&) const = default;
};

struct Crossing {
    std::string plus;
    std::string minus;
    bool operator==(const Crossing&) const = default;
};

/// Complementary region given by one arc index per leaf.
struct RegionPoint {
    std::map<std::string, int> sides;
    bool operator==(const RegionPoint&) const = default;
};

struct MarkedPoint {
    std::string id;
    std::variant<Crossing, RegionPoint> locator;
    bool operator==(const MarkedPoint&) const = default;
};

/// Chord-diagram truncation of a bifoliated plane. Boundary labels are listed
/// counterclockwise; a label shared by two leaves encodes a perfect fit.
struct FinitePattern {
    std::vector<std::string> boundary;
    std::vector<Leaf> leaves;
    std::vector<Singularity> singularities;
    std::vector<std::pair<std::string, std::string>> nonseparated;
    std::vector<MarkedPoint> points;
    bool operator==(const FinitePattern&) const = default;
};

struct Violation {
    std::string rule;
    std::vector<std::string> subjects;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool valid() const { return violations.empty(); }
    bool has(std::string_view rule) const {
        return std::any_of(violations.begin(), violations.end(),
                           [&](const Violation& v) { return v.rule == rule; });
    }
};

struct ValidationError : Error {
    ValidationReport report;
    explicit ValidationError(ValidationReport r)
        : Error("invalid pattern: " + (r.violations.empty() ? std::string("?") : r.violations.front().rule)),
          report(std::move(r)) {}
};

namespace detail {

/// Arc of the circle minus `ends` (sorted) that contains `pos`; arc i runs
/// from ends[i] to ends[i+1], the last one wraps.
inline int arc_index(const std::vector<int>& ends, int pos) {
    const int k = static_cast<int>(ends.size());
    const int below = static_cast<int>(std::lower_bound(ends.begin(), ends.end(), pos) - ends.begin());
    return (below - 1 + k) % k;
}

inline bool contains(const std::vector<int>& sorted, int v) {
    return std::binary_search(sorted.begin(), sorted.end(), v);
}

/// Distinct arcs of `of` met by the endpoints of `by` that are not endpoints of `of`.
inline std::vector<int> arcs_met(const std::vector<int>& of, const std::vector<int>& by) {
    std::vector<int> arcs;
    for (int e : by) {
        if (contains(of, e)) continue;
        int a = arc_index(of, e);
        if (std::find(arcs.begin(), arcs.end(), a) == arcs.end()) arcs.push_back(a);
    }
    std::sort(arcs.begin(), arcs.end());
    return arcs;
}

inline bool links(const std::vector<int>& a, const std::vector<int>& b) {
    return arcs_met(a, b).size() >= 2 || arcs_met(b, a).size() >= 2;
}

inline int shared_count(const std::vector<int>& a, const std::vector<int>& b) {
    int c = 0;
    for (int e : a)
        if (contains(b, e)) ++c;
    return c;
}

} // namespace detail

struct PointLoc {
    bool crossing = true;
    int plus = -1;
    int minus = -1;
    std::vector<int> sides;
    bool operator==(const PointLoc&) const = default;
};

/// Validated, index-compiled pattern. Immutable.
class Pattern {
public:
    static Pattern make(FinitePattern fp);

    const FinitePattern& source() const { return src_; }
    int leaf_count() const { return static_cast<int>(sign_.size()); }
    int boundary_size() const { return B_; }
    int point_count() const { return static_cast<int>(pts_.size()); }

    int index(std::string_view id) const {
        auto it = leaf_idx_.find(std::string(id));
        if (it == leaf_idx_.end()) throw UnknownId("unknown leaf " + std::string(id));
        return it->second;
    }
    const std::string& id(int l) const { return src_.leaves.at(l).id; }
    Sign sign(int l) const { return sign_.at(l); }
    const std::vector<int>& ends(int l) const { return ends_.at(l); }
    bool singular(int l) const { return ends_.at(l).size() > 2; }
    int singularity_of(int l) const { return sing_of_.at(l); }
    int singularity_count() const { return static_cast<int>(sings_.size()); }
    /// (plus leaf, minus leaf) of singularity s.
    std::pair<int, int> singularity(int s) const { return sings_.at(s); }

    bool intersects(int a, int b) const { return inter_[a][b] != 0; }
    bool shares_endpoint(int a, int b) const { return detail::shared_count(ends_[a], ends_[b]) > 0; }
    bool nonseparated(int a, int b) const { return nonsep_[a][b] != 0; }
    std::vector<std::pair<int, int>> nonseparated_pairs() const;

    int arc_of(int l, int pos) const { return detail::arc_index(ends_[l], pos); }

    /// Arc of m containing the leaf l; m and l must be distinct and disjoint.
    int region(int m, int l) const {
        if (m == l || intersects(m, l))
            throw PreconditionError("region: " + id(m) + " and " + id(l) + " are not disjoint");
        for (int e : ends_[l])
            if (!detail::contains(ends_[m], e)) return arc_of(m, e);
        throw PreconditionError("region: no free endpoint");
    }

    int point_index(std::string_view id) const {
        auto it = pt_idx_.find(std::string(id));
        if (it == pt_idx_.end()) throw UnknownId("unknown point " + std::string(id));
        return it->second;
    }
    const PointLoc& point(int p) const { return pts_.at(p); }
    const std::string& point_id(int p) const { return src_.points.at(p).id; }

    /// -1 when the point lies on l, otherwise the arc index of its region.
    int side(int l, const PointLoc& pt) const {
        if (!pt.crossing) return pt.sides.at(l);
        if (l == pt.plus || l == pt.minus) return -1;
        return region(l, sign_[l] == Sign::Plus ? pt.plus : pt.minus);
    }

    std::vector<int> leaves_of(Sign s) const {
        std::vector<int> out;
        for (int l = 0; l < leaf_count(); ++l)
            if (sign_[l] == s) out.push_back(l);
        return out;
    }

private:
    friend ValidationReport validate_pattern(const FinitePattern& fp);
    Pattern() = default;

    FinitePattern src_;
    int B_ = 0;
    std::unordered_map<std::string, int> label_pos_;
    std::unordered_map<std::string, int> leaf_idx_;
    std::unordered_map<std::string, int> pt_idx_;
    std::vector<Sign> sign_;
    std::vector<std::vector<int>> ends_;
    std::vector<int> sing_of_;
    std::vector<std::pair<int, int>> sings_;
    std::vector<std::vector<char>> inter_;
    std::vector<std::vector<char>> nonsep_;
    std::vector<PointLoc> pts_;

    /// Fills the index tables; structural problems go to `rep` and return false.
    bool compile(ValidationReport& rep);
};

inline std::vector<std::pair<int, int>> Pattern::nonseparated_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < leaf_count(); ++a)
        for (int b = a + 1; b < leaf_count(); ++b)
            if (nonsep_[a][b]) out.emplace_back(a, b);
    return out;
}

inline bool Pattern::compile(ValidationReport& rep) {
    auto fail = [&](std::string rule, std::vector<std::string> subj) {
        rep.violations.push_back({std::move(rule), std::move(subj)});
    };
    B_ = static_cast<int>(src_.boundary.size());
    for (int i = 0; i < B_; ++i)
        if (!label_pos_.emplace(src_.boundary[i], i).second) fail("duplicate label", {src_.boundary[i]});
    const int L = static_cast<int>(src_.leaves.size());
    sign_.resize(L);
    ends_.resize(L);
    sing_of_.assign(L, -1);
    for (int l = 0; l < L; ++l) {
        const Leaf& leaf = src_.leaves[l];
        if (!leaf_idx_.emplace(leaf.id, l).second) fail("duplicate leaf id", {leaf.id});
        sign_[l] = leaf.sign;
        std::vector<int> seq;
        for (const auto& lab : leaf.endpoints) {
            auto it = label_pos_.find(lab);
            if (it == label_pos_.end()) {
                fail("unknown label", {leaf.id, lab});
                continue;
            }
            seq.push_back(it->second);
        }
        if (leaf.endpoints.size() < 2) fail("endpoint count", {leaf.id});
        std::vector<int> sorted = seq;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) fail("repeated endpoint", {leaf.id});
        int descents = 0;
        for (std::size_t i = 0; i < seq.size(); ++i)
            if (seq[i] > seq[(i + 1) % seq.size()]) ++descents;
        if (seq.size() >= 3 && descents != 1) fail("endpoints not in cyclic order", {leaf.id});
        ends_[l] = sorted;
    }
    if (!rep.valid()) return false;

    inter_.assign(L, std::vector<char>(L, 0));
    for (int a = 0; a < L; ++a)
        for (int b = a + 1; b < L; ++b)
            if (sign_[a] != sign_[b] && detail::links(ends_[a], ends_[b])) inter_[a][b] = inter_[b][a] = 1;

    for (const auto& s : src_.singularities) {
        auto p = leaf_idx_.find(s.plus);
        auto m = leaf_idx_.find(s.minus);
        if (p == leaf_idx_.end() || m == leaf_idx_.end()) {
            fail("unknown leaf", {s.plus, s.minus});
            continue;
        }
        int si = static_cast<int>(sings_.size());
        sings_.emplace_back(p->second, m->second);
        for (int l : {p->second, m->second}) {
            if (sing_of_[l] != -1) fail("leaf in several singularities", {src_.leaves[l].id});
            sing_of_[l] = si;
        }
    }

    nonsep_.assign(L, std::vector<char>(L, 0));
    for (const auto& [a, b] : src_.nonseparated) {
        auto ia = leaf_idx_.find(a);
        auto ib = leaf_idx_.find(b);
        if (ia == leaf_idx_.end() || ib == leaf_idx_.end() || ia->second == ib->second) {
            fail("nonseparated pair malformed", {a, b});
            continue;
        }
        nonsep_[ia->second][ib->second] = nonsep_[ib->second][ia->second] = 1;
    }

    for (int i = 0; i < static_cast<int>(src_.points.size()); ++i) {
        const auto& mp = src_.points[i];
        if (!pt_idx_.emplace(mp.id, i).second) fail("duplicate point id", {mp.id});
        PointLoc loc;
        if (const auto* c = std::get_if<Crossing>(&mp.locator)) {
            auto p = leaf_idx_.find(c->plus);
            auto m = leaf_idx_.find(c->minus);
            if (p == leaf_idx_.end() || m == leaf_idx_.end()) {
                fail("point references unknown leaf", {mp.id});
            } else {
                loc.plus = p->second;
                loc.minus = m->second;
            }
        } else {
            const auto& rp = std::get<RegionPoint>(mp.locator);
            loc.crossing = false;
            loc.sides.assign(L, -1);
            for (const auto& [lid, arc] : rp.sides) {
                auto it = leaf_idx_.find(lid);
                if (it == leaf_idx_.end()) {
                    fail("point references unknown leaf", {mp.id, lid});
                    continue;
                }
                loc.sides[it->second] = arc;
            }
        }
        pts_.push_back(std::move(loc));
    }
    return rep.valid();
}

inline ValidationReport validate_pattern(const FinitePattern& fp) {
    ValidationReport rep;
    Pattern p;
    p.src_ = fp;
    if (!p.compile(rep)) return rep;
    auto fail = [&](std::string rule, std::vector<std::string> subj) {
        rep.violations.push_back({std::move(rule), std::move(subj)});
    };
    const int L = p.leaf_count();
    auto name = [&](int l) { return p.id(l); };

    for (int s = 0; s < p.singularity_count(); ++s) {
        auto [pl, mi] = p.sings_[s];
        if (p.sign(pl) != Sign::Plus || p.sign(mi) != Sign::Minus) {
            fail("singularity sign", {name(pl), name(mi)});
            continue;
        }
        const std::size_t k = p.ends(pl).size();
        if (k != p.ends(mi).size()) {
            fail("singularity prong count mismatch", {name(pl), name(mi)});
            continue;
        }
        if (k < 3) {
            fail("degenerate singularity", {name(pl), name(mi)});
            continue;
        }
        std::vector<std::pair<int, int>> all;
        for (int e : p.ends(pl)) all.emplace_back(e, 0);
        for (int e : p.ends(mi)) all.emplace_back(e, 1);
        std::sort(all.begin(), all.end());
        bool alt = true;
        for (std::size_t i = 0; i < all.size(); ++i)
            if (all[i].first == all[(i + 1) % all.size()].first ||
                all[i].second == all[(i + 1) % all.size()].second)
                alt = false;
        if (!alt) fail("singularity not alternating", {name(pl), name(mi)});
    }
    for (int l = 0; l < L; ++l)
        if (p.singular(l) && p.singularity_of(l) == -1) fail("singular leaf without singularity", {name(l)});

    for (int a = 0; a < L; ++a) {
        for (int b = a + 1; b < L; ++b) {
            const auto& ea = p.ends(a);
            const auto& eb = p.ends(b);
            const int shared = detail::shared_count(ea, eb);
            if (shared > 1) fail("multiple shared endpoints", {name(a), name(b)});
            if (p.sign(a) == p.sign(b)) {
                if (shared > 0) fail("same-sign shared endpoint", {name(a), name(b)});
                if (detail::links(ea, eb)) fail("same-sign crossing", {name(a), name(b)});
                continue;
            }
            if (!p.intersects(a, b)) continue;
            if (shared > 0) {
                fail("perfect fit crosses", {name(a), name(b)});
                continue;
            }
            const bool partners = p.singularity_of(a) != -1 && p.singularity_of(a) == p.singularity_of(b);
            if (partners) continue;
            auto adjacent_pair = [](const std::vector<int>& arcs, std::size_t k) {
                if (arcs.size() > 2) return false;
                if (arcs.size() < 2) return true;
                int d = arcs[1] - arcs[0];
                return d == 1 || d == static_cast<int>(k) - 1;
            };
            if (!adjacent_pair(detail::arcs_met(ea, eb), ea.size()) ||
                !adjacent_pair(detail::arcs_met(eb, ea), eb.size()))
                fail("double crossing", {name(a), name(b)});
        }
    }

    for (auto [a, b] : p.nonseparated_pairs()) {
        if (p.sign(a) != p.sign(b)) {
            fail("nonseparated pair of mixed sign", {name(a), name(b)});
            continue;
        }
        for (int m = 0; m < L; ++m) {
            if (m == a || m == b) continue;
            if (p.sign(m) == p.sign(a)) {
                if (p.region(m, a) != p.region(m, b)) fail("nonseparated pair separated", {name(a), name(b), name(m)});
            } else if (p.intersects(m, a) && p.intersects(m, b)) {
                fail("nonseparated pair has common transversal", {name(a), name(b), name(m)});
            }
        }
    }

    // Gap g sits between labels g and g+1; a region point must pick arcs
    // that pairwise share a gap.
    const int B = p.boundary_size();
    auto gaps_of = [&](int l, int arc) {
        std::vector<char> in(B, 0);
        for (int g = 0; g < B; ++g) {
            // gap g lies strictly after label g, so its arc is the one containing g + 1/2.
            const auto& e = p.ends(l);
            int below = static_cast<int>(std::upper_bound(e.begin(), e.end(), g) - e.begin());
            int k = static_cast<int>(e.size());
            if ((below - 1 + k) % k == arc) in[g] = 1;
        }
        return in;
    };
    std::set<PointLoc, bool (*)(const PointLoc&, const PointLoc&)> seen(
        [](const PointLoc& x, const PointLoc& y) {
            return std::tie(x.crossing, x.plus, x.minus, x.sides) < std::tie(y.crossing, y.plus, y.minus, y.sides);
        });
    for (int i = 0; i < p.point_count(); ++i) {
        const PointLoc& pt = p.point(i);
        const std::string& pid = p.point_id(i);
        if (pt.plus == -1 && pt.crossing) continue;
        if (!seen.insert(pt).second) fail("duplicate point", {pid});
        if (pt.crossing) {
            if (p.sign(pt.plus) != Sign::Plus || p.sign(pt.minus) != Sign::Minus)
                fail("crossing point sign", {pid});
            else if (!p.intersects(pt.plus, pt.minus))
                fail("crossing point leaves disjoint", {pid, name(pt.plus), name(pt.minus)});
            continue;
        }
        bool complete = true;
        for (int l = 0; l < L; ++l) {
            int s = pt.sides[l];
            if (s < 0 || s >= static_cast<int>(p.ends(l).size())) {
                fail("region point side missing", {pid, name(l)});
                complete = false;
            }
        }
        if (!complete) continue;
        std::vector<std::vector<char>> gaps(L);
        for (int l = 0; l < L; ++l) gaps[l] = gaps_of(l, pt.sides[l]);
        for (int a = 0; a < L; ++a)
            for (int b = a + 1; b < L; ++b) {
                bool meet = false;
                for (int g = 0; g < B && !meet; ++g) meet = gaps[a][g] && gaps[b][g];
                if (!meet) fail("region point empty", {pid, name(a), name(b)});
            }
    }
    return rep;
}

inline Pattern Pattern::make(FinitePattern fp) {
    ValidationReport rep = validate_pattern(fp);
    if (!rep.valid()) throw ValidationError(std::move(rep));
    Pattern p;
    p.src_ = std::move(fp);
    ValidationReport again;
    p.compile(again);
    return p;
}

// ---------------------------------------------------------------------------
// Relations

struct PerfectFit {
    int plus;
    int minus;
    std::string label;
};

struct Relations {
    std::vector<std::pair<int, int>> crossings; ///< (plus, minus)
    std::vector<PerfectFit> perfect_fits;
};

inline Relations relations(const Pattern& p) {
    Relations r;
    for (int a : p.leaves_of(Sign::Plus))
        for (int b : p.leaves_of(Sign::Minus)) {
            if (p.intersects(a, b)) r.crossings.emplace_back(a, b);
            for (int e : p.ends(a))
                if (detail::contains(p.ends(b), e)) r.perfect_fits.push_back({a, b, p.source().boundary[e]});
        }
    return r;
}

inline bool intersects(const Pattern& p, std::string_view a, std::string_view b) {
    return p.intersects(p.index(a), p.index(b));
}

// ---------------------------------------------------------------------------
// Separation

inline bool separates_leaves(const Pattern& p, int m, int l, int l2) {
    if (p.sign(m) != p.sign(l) || p.sign(m) != p.sign(l2))
        throw PreconditionError("separates_leaves: leaves of mixed sign");
    if (m == l || m == l2 || l == l2) throw PreconditionError("separates_leaves: leaves not distinct");
    return p.region(m, l) != p.region(m, l2);
}

inline bool separates_point(const Pattern& p, int l, const PointLoc& x, const PointLoc& y) {
    if (x == y) return false;
    int sx = p.side(l, x);
    int sy = p.side(l, y);
    if (sx == -1 && sy == -1) return false;
    if (sx == -1 || sy == -1) return true;
    return sx != sy;
}

inline bool separates_point(const Pattern& p, int l, int x, int y) {
    return separates_point(p, l, p.point(x), p.point(y));
}

inline PointLoc crossing_point(const Pattern& p, int plus, int minus) {
    if (!p.intersects(plus, minus) || p.sign(plus) != Sign::Plus)
        throw PreconditionError("crossing_point: " + p.id(plus) + " and " + p.id(minus) + " do not cross");
    PointLoc loc;
    loc.plus = plus;
    loc.minus = minus;
    return loc;
}

// ---------------------------------------------------------------------------
// Pseudo-intervals

enum class BlockMode { NonsepBlocks, ProngBlocks };

struct PseudoInterval {
    int source = -1;
    int target = -1;
    std::vector<int> chain; ///< source, separators in order, target
    std::vector<std::vector<int>> blocks;

    std::vector<int> separators() const {
        if (chain.size() <= 2) return {};
        return {chain.begin() + 1, chain.end() - 1};
    }
    bool contains(int l) const { return std::find(chain.begin(), chain.end(), l) != chain.end(); }
};

bool is_dividing_prong(const Pattern& p, int s, int x, int y);

/// Source, separators and target of the pseudo-interval, ordered from x to y.
inline std::vector<int> ordered_separators(const Pattern& p, int x, int y) {
    if (p.sign(x) != p.sign(y)) throw PreconditionError("pseudo_interval: mixed signs");
    if (x == y) return {x};
    std::vector<int> seps;
    for (int m : p.leaves_of(p.sign(x)))
        if (m != x && m != y && p.region(m, x) != p.region(m, y)) seps.push_back(m);
    const int n = static_cast<int>(seps.size());
    std::vector<int> rank(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && p.region(seps[i], seps[j]) == p.region(seps[i], x)) ++rank[i];
    std::vector<int> chain(n + 2, -1);
    chain.front() = x;
    chain.back() = y;
    for (int i = 0; i < n; ++i) {
        if (chain[rank[i] + 1] != -1) throw PreconditionError("pseudo_interval: incomparable separators");
        chain[rank[i] + 1] = seps[i];
    }
    return chain;
}

inline PseudoInterval pseudo_interval(const Pattern& p, int x, int y, BlockMode mode = BlockMode::NonsepBlocks) {
    PseudoInterval pi;
    pi.source = x;
    pi.target = y;
    pi.chain = ordered_separators(p, x, y);
    std::vector<int> cur{pi.chain.front()};
    for (std::size_t i = 1; i < pi.chain.size(); ++i) {
        int prev = pi.chain[i - 1];
        int l = pi.chain[i];
        if (mode == BlockMode::NonsepBlocks) {
            if (p.nonseparated(prev, l)) {
                pi.blocks.push_back(cur);
                cur.clear();
            }
            cur.push_back(l);
        } else {
            cur.push_back(l);
            bool last = i + 1 == pi.chain.size();
            int s = p.singularity_of(l);
            if (!last && s != -1 && is_dividing_prong(p, s, x, y)) {
                pi.blocks.push_back(cur);
                cur = {l};
            }
        }
    }
    pi.blocks.push_back(cur);
    return pi;
}

inline PseudoInterval pseudo_interval(const Pattern& p, std::string_view x, std::string_view y,
                                      BlockMode mode = BlockMode::NonsepBlocks) {
    return pseudo_interval(p, p.index(x), p.index(y), mode);
}

// ---------------------------------------------------------------------------
// Quadrants and dividing prongs

struct Quadrants {
    int k = 0;
    /// Boundary positions bounding each region: region q runs from bounds[q] to bounds[q+1].
    std::vector<int> bounds;
    /// Per leaf, the regions it meets (empty for the prong leaves themselves).
    std::vector<std::vector<int>> incidence;
};

namespace detail {

inline Quadrants quadrants_from(const Pattern& p, int a, int b) {
    Quadrants q;
    std::vector<int> rays = p.ends(a);
    rays.insert(rays.end(), p.ends(b).begin(), p.ends(b).end());
    std::sort(rays.begin(), rays.end());
    // Start the cyclic enumeration at the first endpoint of `a`.
    auto start = std::find(rays.begin(), rays.end(), p.ends(a).front());
    std::rotate(rays.begin(), start, rays.end());
    q.bounds = rays;
    q.k = static_cast<int>(rays.size()) / 2;
    std::vector<int> sorted = rays;
    std::sort(sorted.begin(), sorted.end());
    const int off = static_cast<int>(std::find(sorted.begin(), sorted.end(), rays.front()) - sorted.begin());
    const int n = static_cast<int>(rays.size());
    q.incidence.resize(p.leaf_count());
    for (int l = 0; l < p.leaf_count(); ++l) {
        if (l == a || l == b) continue;
        std::set<int> met;
        for (int e : p.ends(l)) {
            if (contains(sorted, e)) continue;
            met.insert(((arc_index(sorted, e) - off) % n + n) % n);
        }
        q.incidence[l].assign(met.begin(), met.end());
    }
    return q;
}

} // namespace detail

inline Quadrants faces_and_quadrants(const Pattern& p, int s) {
    if (s < 0 || s >= p.singularity_count()) throw UnknownId("unknown singularity");
    auto [pl, mi] = p.singularity(s);
    return detail::quadrants_from(p, pl, mi);
}

/// Four quadrants around a regular crossing.
inline Quadrants crossing_quadrants(const Pattern& p, int plus, int minus) {
    if (!p.intersects(plus, minus)) throw PreconditionError("crossing_quadrants: leaves do not cross");
    if (p.singular(plus) || p.singular(minus)) throw PreconditionError("crossing_quadrants: singular leaf");
    return detail::quadrants_from(p, plus, minus);
}

inline bool is_dividing_prong(const Pattern& p, int s, int x, int y) {
    if (s < 0 || s >= p.singularity_count()) throw UnknownId("unknown singularity");
    auto [pl, mi] = p.singularity(s);
    const int prong = p.sign(x) == Sign::Plus ? pl : mi;
    if (p.sign(x) != p.sign(y)) throw PreconditionError("is_dividing_prong: mixed signs");
    if (x == prong || y == prong || x == y) throw PreconditionError("is_dividing_prong: leaves not distinct");
    if (p.region(prong, x) == p.region(prong, y))
        throw PreconditionError("is_dividing_prong: prong does not separate the leaves");
    Quadrants q = faces_and_quadrants(p, s);
    const auto& qx = q.incidence[x];
    if (qx.size() != 1) return false;
    const int n = 2 * q.k;
    const int j = qx.front();
    for (int d = -2; d <= 2; ++d) {
        int bad = ((j + d) % n + n) % n;
        if (std::find(q.incidence[y].begin(), q.incidence[y].end(), bad) != q.incidence[y].end()) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Partial linking

inline bool partially_linked(const Pattern& p, const PointLoc& a, const PointLoc& b) {
    if (!a.crossing || !b.crossing) throw PreconditionError("partially_linked: region points are not accepted");
    if (a.plus == b.plus || a.minus == b.minus) throw PreconditionError("partially_linked: points share a leaf");
    return p.intersects(a.plus, b.minus) != p.intersects(a.minus, b.plus);
}

// ---------------------------------------------------------------------------
// Lozenges

struct Lozenge {
    int plus1, plus2, minus1, minus2; ///< plus1 fits minus1, plus2 fits minus2
    std::pair<int, int> corner1;      ///< plus1 x minus2
    std::pair<int, int> corner2;      ///< plus2 x minus1
};

struct LozengeReport {
    std::vector<Lozenge> lozenges;
    std::vector<std::vector<int>> chains; ///< lozenge indices per maximal chain
    std::vector<std::pair<int, int>> corners;
    std::vector<std::pair<int, int>> non_corners;
    /// (chain, singularity) pairs where a chain spreads over more than three adjacent quadrants.
    std::vector<std::pair<int, int>> claim_flags;
};

inline LozengeReport detect_lozenges(const Pattern& p) {
    LozengeReport rep;
    Relations rel = relations(p);
    const auto& pf = rel.perfect_fits;
    for (std::size_t i = 0; i < pf.size(); ++i)
        for (std::size_t j = i + 1; j < pf.size(); ++j) {
            int a = pf[i].plus, b = pf[i].minus, c = pf[j].plus, d = pf[j].minus;
            if (a == c || b == d) continue;
            if (p.intersects(a, d) && p.intersects(c, b)) rep.lozenges.push_back({a, c, b, d, {a, d}, {c, b}});
        }
    const int n = static_cast<int>(rep.lozenges.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const auto& u = rep.lozenges[i];
            const auto& v = rep.lozenges[j];
            if (u.corner1 == v.corner1 || u.corner1 == v.corner2 || u.corner2 == v.corner1 || u.corner2 == v.corner2)
                parent[find(i)] = find(j);
        }
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
    for (auto& [root, members] : groups) rep.chains.push_back(members);
    std::set<std::pair<int, int>> corner_set;
    for (const auto& lz : rep.lozenges) {
        corner_set.insert(lz.corner1);
        corner_set.insert(lz.corner2);
    }
    for (auto c : rel.crossings) (corner_set.count(c) ? rep.corners : rep.non_corners).push_back(c);

    for (int ci = 0; ci < static_cast<int>(rep.chains.size()); ++ci) {
        std::set<int> sides;
        for (int li : rep.chains[ci]) {
            const auto& lz = rep.lozenges[li];
            sides.insert({lz.plus1, lz.plus2, lz.minus1, lz.minus2});
        }
        for (int s = 0; s < p.singularity_count(); ++s) {
            if (corner_set.count(p.singularity(s))) continue;
            Quadrants q = faces_and_quadrants(p, s);
            const int m = 2 * q.k;
            std::vector<char> met(m, 0);
            for (int l : sides)
                for (int qi : q.incidence[l]) met[qi] = 1;
            bool fits = std::count(met.begin(), met.end(), 1) == 0;
            for (int start = 0; start < m && !fits; ++start) {
                bool ok = true;
                for (int t = 0; t < m; ++t)
                    if (met[(start + t) % m] && t >= 3) ok = false;
                fits = ok;
            }
            if (!fits) rep.claim_flags.emplace_back(ci, s);
        }
    }
    return rep;
}

} // namespace bifol
