#pragma once

#include "catalog.hpp"
#include "dynamics.hpp"
#include "io.hpp"
#include "random.hpp"
#include "walls.hpp"

namespace bifol {

/// Acceptance-criterion ids carried by report checks.
namespace tag {
inline constexpr const char* bottleneck = "C1";
inline constexpr const char* inclusion = "C2";
inline constexpr const char* wall_vs_graph = "C3";
inline constexpr const char* metric_axioms = "C4";
inline constexpr const char* pseudo_interval = "C5";
inline constexpr const char* ladder_distance = "C6";
inline constexpr const char* window_lemmas = "C7";
inline constexpr const char* classification = "C8";
inline constexpr const char* census_trivial = "C9";
inline constexpr const char* census_skew = "C10";
inline constexpr const char* determinism = "C11";
} // namespace tag

inline std::string fnv1a_hex(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

struct TaggedCheck {
    std::string tag;
    std::string name;
    bool pass = true;
    std::string detail;
};

struct Report {
    std::string verb;
    std::string digest;
    json inputs = json::object();
    json results = json::object();
    json environment = json::object();
    std::vector<TaggedCheck> checks;

    bool pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const TaggedCheck& c) { return c.pass; });
    }
    void check(const char* t, std::string name, bool ok, std::string detail = {}) {
        checks.push_back({t, std::move(name), ok, std::move(detail)});
    }
    json to_json() const {
        json j;
        j["verb"] = verb;
        j["inputs"] = inputs;
        j["digest"] = digest;
        j["results"] = results;
        j["environment"] = environment;
        j["pass"] = pass();
        j["checks"] = json::array();
        for (const auto& c : checks)
            j["checks"].push_back({{"tag", c.tag}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        return j;
    }
    std::string str() const { return dump(to_json()); }
};

struct NamedPattern {
    std::string name;
    FinitePattern pattern;
};

inline std::vector<NamedPattern> catalog_patterns() {
    std::vector<NamedPattern> out;
    for (const auto& f : gen::catalog()) out.push_back({f.name, f.make()});
    return out;
}

inline std::vector<NamedPattern> random_patterns(std::uint64_t seed, int count, int max_leaves = 20) {
    Rng rng(seed);
    RandomPatternOptions opt;
    opt.max_leaves = max_leaves;
    std::vector<NamedPattern> out;
    for (int i = 0; i < count; ++i) out.push_back({"random" + std::to_string(i), random_pattern(rng, opt)});
    return out;
}

inline std::string digest_of(const std::vector<NamedPattern>& ps) {
    std::string all;
    for (const auto& p : ps) all += p.name + "\n" + serialize(p.pattern);
    return fnv1a_hex(all);
}

inline constexpr std::array<GraphKind, 4> kSignedGraphKinds{GraphKind::Xplus, GraphKind::Xminus, GraphKind::GammaPlus,
                                                            GraphKind::GammaMinus};

/// Bottleneck constant K on the signed graphs; the smallest constant up to
/// `kmax_x` is recorded for X.
inline Report bottleneck_report(const std::vector<NamedPattern>& ps, int K, int kmax_x = 8) {
    Report r;
    r.verb = "bottleneck";
    r.digest = digest_of(ps);
    r.inputs["patterns"] = ps.size();
    r.environment["K"] = K;
    r.environment["kmax_x"] = kmax_x;
    std::size_t graphs = 0, failures = 0, x_failures = 0;
    int worst_x = 0;
    for (const auto& np : ps) {
        Pattern p = Pattern::make(np.pattern);
        json row;
        for (GraphKind k : kSignedGraphKinds) {
            LeafGraph g = build_graph(p, k);
            if (g.size() == 0) continue;
            ++graphs;
            auto res = bottleneck_certify(g, K);
            json cell{{"pass", res.pass}, {"triples", res.triples_checked}};
            if (res.witness)
                cell["witness"] = {g.labels[res.witness->x], g.labels[res.witness->y], g.labels[res.witness->mid]};
            if (!res.pass) ++failures;
            row[to_string(k)] = cell;
        }
        LeafGraph gx = build_graph(p, GraphKind::X);
        auto kx = min_bottleneck_constant(gx, kmax_x);
        row["x_constant"] = kx ? json(*kx) : json(nullptr);
        if (kx)
            worst_x = std::max(worst_x, *kx);
        else
            ++x_failures;
        r.results[np.name] = row;
    }
    r.check(tag::bottleneck, "signed graphs pass with K=" + std::to_string(K), failures == 0,
            std::to_string(failures) + " failures of " + std::to_string(graphs));
    r.check(tag::bottleneck, "X passes with some K <= " + std::to_string(kmax_x), x_failures == 0,
            "largest constant " + std::to_string(worst_x));
    return r;
}

/// Inclusion and wall-metric comparisons plus metric axioms on every pattern.
inline Report metric_suite_report(const std::vector<NamedPattern>& ps) {
    Report r;
    r.verb = "metric";
    r.digest = digest_of(ps);
    r.inputs["patterns"] = ps.size();
    std::size_t incl = 0, qi = 0, axioms = 0;
    for (const auto& np : ps) {
        Pattern p = Pattern::make(np.pattern);
        auto ir = qi_inclusion_report(p);
        auto mr = qi_metric_report(p);
        json row{{"inclusion_pairs", ir.pairs}, {"inclusion_violations", ir.violations.size()}};
        incl += ir.violations.size();
        for (const auto& q : mr.rows) {
            qi += q.violations.size();
            row["qi"][std::string(to_string(q.kind))] = {{"pairs", q.pairs}, {"violations", q.violations}};
        }
        for (WallKind k : kAllWallKinds) {
            auto ar = metric_axiom_check(p, k);
            axioms += ar.violations.size();
            row["axioms"][std::string(to_string(k))] = ar.violations.size();
        }
        r.results[np.name] = row;
    }
    r.check(tag::inclusion, "d_sign <= d_X <= 2 d_sign", incl == 0, std::to_string(incl) + " violations");
    r.check(tag::wall_vs_graph, "d - 2 <= d_graph <= 5 d", qi == 0, std::to_string(qi) + " violations");
    r.check(tag::metric_axioms, "wall metrics satisfy the metric axioms", axioms == 0,
            std::to_string(axioms) + " violations");
    return r;
}

inline std::string format_ratio(double x) { return format_fixed(x); }

/// Periodic isometry classification with the measured distances.
inline Report classify_report(const PeriodicPattern& pp, const std::string& name, const std::string& element,
                              int window_periods, int nmax) {
    Report r;
    r.verb = "classify";
    r.digest = fnv1a_hex(serialize(pp));
    r.inputs = {{"pattern", name}, {"element", element}};
    r.environment = {{"window_periods", window_periods}, {"nmax", nmax}};
    auto it = pp.automorphisms.find(element);
    if (it == pp.automorphisms.end()) throw UnknownId("unknown automorphism " + element);
    auto c = classify_isometry(pp, it->second, window_periods, nmax);
    r.results = {{"verdict", to_string(c.verdict)},
                 {"elliptic", c.elliptic()},
                 {"n", c.n},
                 {"d_n", c.d_n},
                 {"D", c.D},
                 {"diam_w", c.diam_w},
                 {"diam_2w", c.diam_2w},
                 {"tau_lower", format_ratio(c.tau_lower)},
                 {"tau_upper", format_ratio(c.tau_upper)},
                 {"base", c.base}};
    r.check(tag::classification, "classification is conclusive", c.verdict != Verdict::Inconclusive,
            to_string(c.verdict));
    return r;
}

inline Report census_report(const CensusReport& c, const char* t, const json& extra = json::object()) {
    Report r;
    r.verb = "census";
    r.inputs = {{"model", to_string(c.model)}, {"nmax", c.nmax}};
    r.digest = fnv1a_hex(census_csv(c.rows));
    json rows = json::array();
    for (const auto& row : c.rows)
        rows.push_back({{"n", row.n},
                        {"ball_size", row.ball},
                        {"free_count", row.free},
                        {"free_fraction", format_fixed(row.free_fraction)},
                        {"lambda_G", format_fixed(row.lambda_g)},
                        {"lambda_Free", format_fixed(row.lambda_free)}});
    r.results["rows"] = rows;
    for (const auto& [k, v] : extra.items()) r.results[k] = v;
    for (const auto& ch : c.checks) r.check(t, ch.name, ch.pass, ch.detail);
    return r;
}

} // namespace bifol
