#pragma once

#include "ball.hpp"
#include "periodic.hpp"

#include <cmath>
#include <cstdlib>

namespace bifol {

enum class Model { TrivialAffine, SkewIntmap };

inline const char* to_string(Model m) { return m == Model::TrivialAffine ? "trivial" : "skew"; }

inline Model parse_model(std::string_view s) {
    if (s == "trivial") return Model::TrivialAffine;
    if (s == "skew") return Model::SkewIntmap;
    throw UnknownId("unknown model " + std::string(s));
}

enum class FixKind { Fixed, Free };

/// Free iff a nonzero pure translation.
inline FixKind classify_fixed_free(const AffineElement& g) {
    return g.k == 0 && (g.v[0] != 0 || g.v[1] != 0) ? FixKind::Free : FixKind::Fixed;
}

/// Fixed iff some index is fixed.
inline FixKind classify_fixed_free(const OffsetMap& g) {
    return g.has_fixed_index() ? FixKind::Fixed : FixKind::Free;
}

template <class T>
struct GeneratingSet {
    std::vector<NamedGenerator<T>> named;

    std::vector<T> symmetric(const T& identity) const {
        std::vector<T> out;
        auto push = [&](const T& x) {
            if (!(x == identity) && std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
        };
        for (const auto& g : named) {
            push(g.element);
            push(invert(g.element));
        }
        return out;
    }
    const T& get(std::string_view name) const {
        for (const auto& g : named)
            if (g.name == name) return g.element;
        throw UnknownId("unknown generator " + std::string(name));
    }
};

inline GeneratingSet<AffineElement> trivial_generators() {
    return {{{"A", {1, {0, 0}}}, {"t1", {0, {1, 0}}}, {"t2", {0, {0, 1}}}}};
}

inline constexpr int kSkewPeriod = 16;

/// Unit shift t, the residue swap s (0 <-> 1), and the displacement h = shift by N + 1.
inline GeneratingSet<OffsetMap> skew_generators(int n = kSkewPeriod) {
    OffsetMap s = OffsetMap::identity(n);
    s.offsets[0] = 1;
    s.offsets[1] = -1;
    return {{{"t", OffsetMap::shift(n, 1)}, {"s", s}, {"h", OffsetMap::shift(n, n + 1)}}};
}

inline AffineElement identity_of(const GeneratingSet<AffineElement>&) { return {}; }
inline OffsetMap identity_of(const GeneratingSet<OffsetMap>& s) {
    return OffsetMap::identity(s.named.empty() ? 1 : s.named.front().element.period());
}

template <class T>
std::vector<BallEntry<T>> enumerate_ball(const GeneratingSet<T>& S, int n, const Budget& budget = {},
                                         std::vector<std::size_t>* sphere_ends = nullptr) {
    return enumerate_ball(
        S.symmetric(identity_of(S)), identity_of(S), n, [](const T& a, const T& b) { return compose(a, b); }, budget,
        sphere_ends);
}

struct BallRow {
    int n = 0;
    std::size_t ball = 0;
    std::size_t free = 0;
    std::size_t fixed = 0;
    double free_fraction = 0;
    double lambda_g = 0;
    double lambda_free = 0;
};

struct Check {
    std::string name;
    bool pass = true;
    std::string detail;
};

struct CensusReport {
    Model model = Model::TrivialAffine;
    int nmax = 0;
    std::vector<BallRow> rows;
    std::vector<Check> checks;
    bool pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }
};

inline double log_or_neg_inf(std::size_t x) {
    return x == 0 ? -std::numeric_limits<double>::infinity() : std::log(double(x));
}

/// Least-squares slope of ln y against ln x.
inline double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(xs[i]);
        my += std::log(ys[i]);
    }
    mx /= double(n);
    my /= double(n);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (std::log(xs[i]) - mx) * (std::log(ys[i]) - my);
        den += (std::log(xs[i]) - mx) * (std::log(xs[i]) - mx);
    }
    return den == 0 ? 0 : num / den;
}

template <class T>
std::vector<BallRow> ball_rows(const std::vector<BallEntry<T>>& ball, int nmax) {
    std::vector<BallRow> rows(nmax + 1);
    for (int n = 0; n <= nmax; ++n) rows[n].n = n;
    for (const auto& e : ball) {
        const bool free = classify_fixed_free(e.element) == FixKind::Free;
        for (int n = e.length; n <= nmax; ++n) {
            ++rows[n].ball;
            ++(free ? rows[n].free : rows[n].fixed);
        }
    }
    for (auto& r : rows) {
        r.free_fraction = double(r.free) / double(r.ball);
        r.lambda_g = r.n == 0 ? 0 : std::log(double(r.ball)) / r.n;
        r.lambda_free = r.n == 0 ? 0 : log_or_neg_inf(r.free) / r.n;
    }
    return rows;
}

/// |B(n+1)| <= 2|S| |B(n)| for n >= 1.
inline Check doubling_check(const std::vector<BallRow>& rows, std::size_t named) {
    Check c{"ball growth |B(n+1)| <= 2|S||B(n)|", true, ""};
    for (std::size_t i = 1; i + 1 < rows.size(); ++i)
        if (rows[i + 1].ball > 2 * named * rows[i].ball) {
            c.pass = false;
            c.detail = "fails at n=" + std::to_string(rows[i].n);
        }
    return c;
}

/// Ball statistics for the trivial model with the polynomial-versus-exponential checks.
inline CensusReport growth_report(const GeneratingSet<AffineElement>& S, int nmax, const Budget& budget = {}) {
    CensusReport rep;
    rep.model = Model::TrivialAffine;
    rep.nmax = nmax;
    auto ball = enumerate_ball(S, nmax, budget);
    rep.rows = ball_rows(ball, nmax);
    rep.checks.push_back(doubling_check(rep.rows, S.named.size()));
    {
        Check c{"free elements are exactly the nonzero translations", true, ""};
        for (const auto& e : ball) {
            const bool translation = e.element.k == 0 && !(e.element.v[0] == 0 && e.element.v[1] == 0);
            if (translation != (classify_fixed_free(e.element) == FixKind::Free)) c.pass = false;
        }
        rep.checks.push_back(c);
    }
    {
        Check c{"free fraction strictly decreasing for n >= 3", true, ""};
        for (int n = 4; n <= nmax; ++n)
            if (!(rep.rows[n].free_fraction < rep.rows[n - 1].free_fraction)) {
                c.pass = false;
                c.detail = "not decreasing at n=" + std::to_string(n);
            }
        rep.checks.push_back(c);
    }
    if (nmax >= 10) {
        Check c{"ln|B(10)|/10 >= 0.3", rep.rows[10].lambda_g >= 0.3, ""};
        c.detail = std::to_string(rep.rows[10].lambda_g);
        rep.checks.push_back(c);
        std::vector<double> xs, ys;
        for (int n = 5; n <= 10; ++n) {
            xs.push_back(n);
            ys.push_back(double(rep.rows[n].free));
        }
        const double slope = loglog_slope(xs, ys);
        rep.checks.push_back({"log-log slope of |Free ∩ B(n)| over [5,10] <= 2.5", slope <= 2.5, std::to_string(slope)});
    }
    return rep;
}

struct GenericityReport {
    CensusReport census;
    int R = 0;
    std::size_t K = 0;
    double L = 0;
    std::size_t g_or_hg_failures = 0;
    std::size_t checked = 0;
};

/// Skew model: every g in the ball has g or hg free, and the free fraction is
/// bounded below by 1/(LK) with K = |B(R)|, L = (2|S|)^R, R = |h|.
inline GenericityReport genericity_report(const GeneratingSet<OffsetMap>& S, std::string_view h_name, int nmax,
                                          const Budget& budget = {}) {
    GenericityReport out;
    const OffsetMap& h = S.get(h_name);
    const long long n_period = h.period();
    if (std::any_of(h.offsets.begin(), h.offsets.end(), [&](long long o) { return o < n_period + 1; }))
        throw PreconditionError("genericity_report: h must displace every index by at least N + 1");
    auto ball = enumerate_ball(S, nmax, budget);
    auto& rep = out.census;
    rep.model = Model::SkewIntmap;
    rep.nmax = nmax;
    rep.rows = ball_rows(ball, nmax);
    rep.checks.push_back(doubling_check(rep.rows, S.named.size()));
    for (const auto& e : ball) {
        if (e.length == 0) continue;
        ++out.checked;
        if (classify_fixed_free(e.element) == FixKind::Fixed && classify_fixed_free(compose(h, e.element)) == FixKind::Fixed)
            ++out.g_or_hg_failures;
    }
    rep.checks.push_back({"g or hg free on the whole ball", out.g_or_hg_failures == 0,
                          std::to_string(out.g_or_hg_failures) + " failures of " + std::to_string(out.checked)});
    for (const auto& e : ball)
        if (e.element == h) out.R = e.length;
    if (out.R == 0) throw PreconditionError("genericity_report: h not reached within the ball");
    out.K = rep.rows.at(out.R).ball;
    out.L = std::pow(2.0 * double(S.named.size()), out.R);
    {
        Check c{"free fraction >= 1/(LK)", true, ""};
        const double bound = 1.0 / (out.L * double(out.K));
        for (int n = 0; n + out.R <= nmax; ++n)
            if (rep.rows[n + out.R].free_fraction < bound) {
                c.pass = false;
                c.detail = "fails at n=" + std::to_string(n + out.R);
            }
        if (c.pass) c.detail = "bound " + std::to_string(bound);
        rep.checks.push_back(c);
    }
    {
        Check c{"free fraction positive", true, ""};
        for (int n = 1; n <= nmax; ++n)
            if (rep.rows[n].free == 0) c.pass = false;
        rep.checks.push_back(c);
    }
    if (nmax >= 3) {
        Check c{"lambda gap decreasing over the top three radii", true, ""};
        for (int n = nmax - 1; n <= nmax; ++n) {
            const double prev = rep.rows[n - 1].lambda_g - rep.rows[n - 1].lambda_free;
            const double cur = rep.rows[n].lambda_g - rep.rows[n].lambda_free;
            if (!(cur < prev)) c.pass = false;
            c.detail += (c.detail.empty() ? "" : " ") + std::to_string(prev);
        }
        rep.checks.push_back(c);
    }
    return out;
}

inline std::int64_t budget_from_env(std::int64_t fallback) {
    if (const char* e = std::getenv("BIFOL_BUDGET_MS")) {
        char* end = nullptr;
        long long v = std::strtoll(e, &end, 10);
        if (end && *end == '\0') return v;
    }
    return fallback;
}

} // namespace bifol
