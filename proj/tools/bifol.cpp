#include "bifol/report.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace bifol;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kProperty = 3, kBudget = 4 };

struct Source {
    std::string in;
    std::string fixture;
    std::string window;

    void add_to(CLI::App* app, bool with_window = true) {
        app->add_option("--in", in, "pattern file (JSON)");
        app->add_option("--fixture", fixture, "named built-in fixture");
        if (with_window) app->add_option("--window", window, "lo:hi leaf-index window for periodic inputs");
    }
};

struct Loaded {
    std::string name;
    std::optional<FinitePattern> finite;
    std::optional<PeriodicPattern> periodic;
};

Loaded load(const Source& s) {
    if (s.in.empty() == s.fixture.empty()) throw PreconditionError("give exactly one of --in, --fixture");
    Loaded out;
    if (!s.in.empty()) {
        out.name = s.in;
        const std::string text = read_file(s.in);
        json j = parse_json_text(text);
        if (is_periodic(j))
            out.periodic = periodic_from_json(j);
        else
            out.finite = parse_finite(text);
        return out;
    }
    out.name = s.fixture;
    for (const auto& f : gen::catalog())
        if (f.name == s.fixture) out.finite = f.make();
    if (!out.finite) out.periodic = gen::periodic_by_name(s.fixture);
    return out;
}

PeriodicPattern load_periodic(const Source& s) {
    Loaded l = load(s);
    if (!l.periodic) throw PreconditionError("expected a periodic pattern");
    return *l.periodic;
}

/// Finite pattern; periodic inputs are materialized over --window.
NamedPattern load_finite(const Source& s) {
    Loaded l = load(s);
    if (l.finite) return {l.name, *l.finite};
    long long lo = 0, hi = 2LL * l.periodic->period - 1;
    if (!s.window.empty()) {
        auto colon = s.window.find(':');
        if (colon == std::string::npos) throw PreconditionError("--window expects lo:hi");
        lo = std::stoll(s.window.substr(0, colon));
        hi = std::stoll(s.window.substr(colon + 1));
    }
    return {l.name + "[" + std::to_string(lo) + ":" + std::to_string(hi) + "]",
            with_crossing_points(materialize_window(*l.periodic, lo, hi))};
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty())
        std::cout << text;
    else
        write_file(out, text);
}

int finish(const Report& r, const std::string& out) {
    emit(r.str(), out);
    return r.pass() ? kOk : kProperty;
}

json leaf_list(const Pattern& p, const std::vector<int>& ls) {
    json a = json::array();
    for (int l : ls) a.push_back(p.id(l));
    return a;
}

std::vector<std::string> split_pair(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos) throw PreconditionError("expected a,b");
    return {s.substr(0, comma), s.substr(comma + 1)};
}

json dist_json(long long d) { return d == INF ? json("inf") : json(d); }

GeneratingSet<OffsetMap> skew_gens_from_json(const json& j) {
    detail::require_keys(j, {"model", "period", "generators"}, {}, "generators");
    const int n = j.at("period").get<int>();
    GeneratingSet<OffsetMap> s;
    for (const auto& g : j.at("generators")) {
        detail::require_keys(g, {"name", "offsets"}, {}, "generator");
        OffsetMap m{g.at("offsets").get<std::vector<long long>>()};
        if (m.period() != n) throw PreconditionError("generator period mismatch");
        if (!m.bijective()) throw PreconditionError("generator " + g.at("name").get<std::string>() + " is not bijective");
        s.named.push_back({g.at("name").get<std::string>(), m});
    }
    return s;
}

GeneratingSet<AffineElement> trivial_gens_from_json(const json& j) {
    detail::require_keys(j, {"model", "generators"}, {}, "generators");
    GeneratingSet<AffineElement> s;
    for (const auto& g : j.at("generators")) {
        detail::require_keys(g, {"name", "k", "v"}, {}, "generator");
        auto v = g.at("v").get<std::vector<long long>>();
        if (v.size() != 2) throw PreconditionError("generator v must have two entries");
        s.named.push_back({g.at("name").get<std::string>(), AffineElement{g.at("k").get<int>(), {v[0], v[1]}}});
    }
    return s;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bifol: leaf graphs, wall metrics, isometry classification and censuses"};
    app.require_subcommand(1);
    std::string out;

    // validate
    auto* validate = app.add_subcommand("validate", "parse and validate a pattern");
    Source validate_src;
    validate_src.add_to(validate, false);

    // gen
    auto* genc = app.add_subcommand("gen", "emit a fixture or a random pattern as JSON");
    std::string gen_name;
    bool gen_random = false, gen_list = false;
    std::uint64_t seed = 1;
    int max_leaves = 20;
    genc->add_option("--fixture", gen_name, "fixture name");
    genc->add_flag("--random", gen_random, "random valid pattern");
    genc->add_flag("--list", gen_list, "list fixture names");
    genc->add_option("--seed", seed, "random seed");
    genc->add_option("--max-leaves", max_leaves, "leaf bound for random patterns")->check(CLI::Range(4, 200));
    genc->add_option("--out", out, "output path");

    // graph
    auto* graph = app.add_subcommand("graph", "build a leaf graph");
    Source graph_src;
    graph_src.add_to(graph);
    std::string kind_name, dot_path, csv_path;
    graph->add_option("--kind", kind_name, "x|xplus|xminus|gammaplus|gammaminus")->required();
    graph->add_option("--dot", dot_path, "write DOT");
    graph->add_option("--csv", csv_path, "write the distance matrix as CSV");
    graph->add_option("--out", out, "report path");

    // dist
    auto* dist = app.add_subcommand("dist", "graph distance between two leaves");
    Source dist_src;
    dist_src.add_to(dist);
    std::string from, to;
    dist->add_option("--kind", kind_name, "graph kind")->required();
    dist->add_option("--from", from, "leaf id")->required();
    dist->add_option("--to", to, "leaf id")->required();
    dist->add_option("--out", out, "report path");

    // bottleneck
    auto* bottleneck = app.add_subcommand("bottleneck", "bottleneck certification");
    Source bn_src;
    bn_src.add_to(bottleneck);
    int K = 3, random_count = 0, kmax_x = 8;
    bottleneck->add_option("--K", K, "bottleneck constant")->check(CLI::NonNegativeNumber);
    bottleneck->add_option("--kmax-x", kmax_x, "largest constant tried for X")->check(CLI::NonNegativeNumber);
    bottleneck->add_option("--random", random_count, "number of random patterns")->check(CLI::NonNegativeNumber);
    bottleneck->add_option("--seed", seed, "random seed");
    bottleneck->add_option("--out", out, "report path");

    // metric
    auto* metric = app.add_subcommand("metric", "wall-counting distance");
    Source metric_src;
    metric_src.add_to(metric);
    std::string wall_kind, points;
    metric->add_option("--kind", wall_kind, "dH|d+|d-|dR+|dR-")->required();
    metric->add_option("--points", points, "a,b marked point ids");
    metric->add_option("--csv", csv_path, "write the all-pairs matrix as CSV");
    metric->add_option("--out", out, "report path");

    // lozenges
    auto* lozenges = app.add_subcommand("lozenges", "detect lozenges and chains");
    Source loz_src;
    loz_src.add_to(lozenges);
    lozenges->add_option("--out", out, "report path");

    // classify
    auto* classify = app.add_subcommand("classify", "classify a periodic automorphism");
    Source cls_src;
    std::string element;
    int window = 64, nmax = 16;
    classify->add_option("--pattern", cls_src.in, "periodic pattern file");
    classify->add_option("--fixture", cls_src.fixture, "named periodic fixture");
    classify->add_option("--element", element, "automorphism name")->required();
    classify->add_option("--window", window, "window width in leaf indices")->check(CLI::PositiveNumber);
    classify->add_option("--nmax", nmax, "largest power")->check(CLI::PositiveNumber);
    classify->add_option("--out", out, "report path");

    // wpd
    auto* wpd = app.add_subcommand("wpd", "coarse stabilizer scan along an axis");
    Source wpd_src;
    std::string g_name;
    int ball = 8, eps = 1, segment = 4, wpd_periods = 4;
    wpd->add_option("--pattern", wpd_src.in, "periodic pattern file");
    wpd->add_option("--fixture", wpd_src.fixture, "named periodic fixture");
    wpd->add_option("--g", g_name, "loxodromic automorphism name")->required();
    wpd->add_option("--ball", ball, "candidate ball radius")->check(CLI::NonNegativeNumber);
    wpd->add_option("--eps", eps, "displacement bound")->check(CLI::PositiveNumber);
    wpd->add_option("--n", segment, "axis segment length in powers of g")->check(CLI::PositiveNumber);
    wpd->add_option("--window", wpd_periods, "padding in periods")->check(CLI::PositiveNumber);
    wpd->add_option("--out", out, "report path");

    // census
    auto* census = app.add_subcommand("census", "free versus fixed census on word balls");
    census->set_help_flag("--help", "print this help message and exit");
    std::string model_name = "skew", gens_path, h_name = "h";
    int census_nmax = 10;
    census->add_option("--model", model_name, "trivial|skew");
    census->add_option("--gens", gens_path, "generators file");
    census->add_option("--nmax", census_nmax, "ball radius")->check(CLI::NonNegativeNumber);
    census->add_option("--h", h_name, "name of the displacement generator (skew)");
    census->add_option("--csv", csv_path, "write per-radius rows as CSV");
    census->add_option("--out", out, "report path");

    // export
    auto* exportc = app.add_subcommand("export", "write a graph as DOT or its distances as CSV");
    Source exp_src;
    exp_src.add_to(exportc);
    std::string format = "dot";
    exportc->add_option("--kind", kind_name, "graph kind")->required();
    exportc->add_option("--format", format, "dot|csv")->check(CLI::IsMember({"dot", "csv"}));
    exportc->add_option("--out", out, "output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*validate) {
            Report r;
            r.verb = "validate";
            r.inputs["pattern"] = validate_src.in.empty() ? validate_src.fixture : validate_src.in;
            try {
                Loaded l = load(validate_src);
                r.results["kind"] = l.finite ? "finite" : "periodic";
                r.results["valid"] = true;
                r.digest = fnv1a_hex(l.finite ? serialize(*l.finite) : serialize(*l.periodic));
            } catch (const ValidationError& e) {
                r.results["valid"] = false;
                json v = json::array();
                for (const auto& x : e.report.violations) v.push_back({{"rule", x.rule}, {"subjects", x.subjects}});
                r.results["violations"] = v;
                emit(r.str(), "");
                return kData;
            }
            emit(r.str(), "");
            return kOk;
        }

        if (*genc) {
            if (gen_list) {
                for (const auto& f : gen::catalog()) std::cout << f.name << "\n";
                for (const auto& f : gen::periodic_catalog()) std::cout << f.name << " (periodic)\n";
                return kOk;
            }
            if (gen_random == !gen_name.empty()) throw PreconditionError("give exactly one of --fixture, --random");
            if (gen_random) {
                Rng rng(seed);
                RandomPatternOptions opt;
                opt.max_leaves = max_leaves;
                emit(serialize(random_pattern(rng, opt)), out);
                return kOk;
            }
            Loaded l = load(Source{"", gen_name, ""});
            emit(l.finite ? serialize(*l.finite) : serialize(*l.periodic), out);
            return kOk;
        }

        if (*graph || *exportc) {
            NamedPattern np = load_finite(*graph ? graph_src : exp_src);
            Pattern p = Pattern::make(np.pattern);
            LeafGraph g = build_graph(p, parse_graph_kind(kind_name));
            if (*exportc) {
                write_file(out, format == "dot" ? export_dot(p, g) : distance_csv(g));
                return kOk;
            }
            if (!dot_path.empty()) write_file(dot_path, export_dot(p, g));
            if (!csv_path.empty()) write_file(csv_path, distance_csv(g));
            Report r;
            r.verb = "graph";
            r.inputs = {{"pattern", np.name}, {"kind", to_string(g.kind)}};
            r.digest = fnv1a_hex(serialize(np.pattern));
            r.results = {{"vertices", g.size()},
                         {"edges", g.edge_count()},
                         {"connected", connected(g)},
                         {"diameter", dist_json(diameter(g))}};
            return finish(r, out);
        }

        if (*dist) {
            NamedPattern np = load_finite(dist_src);
            Pattern p = Pattern::make(np.pattern);
            LeafGraph g = build_graph(p, parse_graph_kind(kind_name));
            Report r;
            r.verb = "dist";
            r.inputs = {{"pattern", np.name}, {"kind", to_string(g.kind)}, {"from", from}, {"to", to}};
            r.digest = fnv1a_hex(serialize(np.pattern));
            r.results["distance"] = dist_json(leaf_distance(p, g, from, to));
            return finish(r, out);
        }

        if (*bottleneck) {
            std::vector<NamedPattern> ps;
            const bool explicit_input = !bn_src.in.empty() || !bn_src.fixture.empty();
            if (explicit_input) ps.push_back(load_finite(bn_src));
            if (random_count > 0) {
                auto rs = random_patterns(seed, random_count);
                ps.insert(ps.end(), rs.begin(), rs.end());
            }
            if (ps.empty()) ps = catalog_patterns();
            Report r = bottleneck_report(ps, K, kmax_x);
            r.environment["seed"] = seed;
            r.environment["random"] = random_count;
            return finish(r, out);
        }

        if (*metric) {
            NamedPattern np = load_finite(metric_src);
            Pattern p = Pattern::make(np.pattern);
            const WallKind k = parse_wall_kind(wall_kind);
            Report r;
            r.verb = "metric";
            r.inputs = {{"pattern", np.name}, {"kind", to_string(k)}};
            r.digest = fnv1a_hex(serialize(np.pattern));
            if (!points.empty()) {
                auto ab = split_pair(points);
                const int a = p.point_index(ab[0]), b = p.point_index(ab[1]);
                r.inputs["points"] = ab;
                r.results["distance"] = wall_distance(p, a, b, k);
                if (a != b) {
                    auto fam = longest_chain_witness(p, a, b, k);
                    r.results["witness"] = leaf_list(p, fam.leaves);
                }
            }
            auto d = wall_matrix(p, k);
            if (!csv_path.empty()) {
                Graph labels;
                for (int i = 0; i < p.point_count(); ++i) labels.labels.push_back(p.point_id(i));
                std::ostringstream csv;
                csv << "point";
                for (const auto& l : labels.labels) csv << "," << l;
                csv << "\n";
                for (int i = 0; i < p.point_count(); ++i) {
                    csv << labels.labels[i];
                    for (int j = 0; j < p.point_count(); ++j) csv << "," << d[i][j];
                    csv << "\n";
                }
                write_file(csv_path, csv.str());
            }
            auto axioms = metric_axiom_check(d);
            r.results["axiom_violations"] = axioms.violations;
            r.check(tag::metric_axioms, std::string(to_string(k)) + " satisfies the metric axioms", axioms.pass(),
                    std::to_string(axioms.violations.size()) + " violations");
            if (k != WallKind::H) {
                auto qi = qi_metric_report(p);
                for (const auto& row : qi.rows) {
                    if (row.kind != k) continue;
                    r.results["graph"] = to_string(row.graph);
                    r.results["pairs"] = row.pairs;
                    r.results["qi_violations"] = row.violations;
                    r.check(tag::wall_vs_graph, "d - 2 <= d_graph <= 5 d", row.violations.empty(),
                            std::to_string(row.violations.size()) + " violations");
                }
            }
            return finish(r, out);
        }

        if (*lozenges) {
            NamedPattern np = load_finite(loz_src);
            Pattern p = Pattern::make(np.pattern);
            auto rep = detect_lozenges(p);
            Report r;
            r.verb = "lozenges";
            r.inputs["pattern"] = np.name;
            r.digest = fnv1a_hex(serialize(np.pattern));
            json ls = json::array();
            for (const auto& z : rep.lozenges)
                ls.push_back({{"plus", {p.id(z.plus1), p.id(z.plus2)}},
                              {"minus", {p.id(z.minus1), p.id(z.minus2)}},
                              {"corners",
                               {{p.id(z.corner1.first), p.id(z.corner1.second)},
                                {p.id(z.corner2.first), p.id(z.corner2.second)}}}});
            r.results["lozenges"] = ls;
            r.results["chains"] = rep.chains;
            r.results["corner_pairs"] = rep.corners.size();
            r.results["claim_flags"] = rep.claim_flags;
            return finish(r, out);
        }

        if (*classify) {
            PeriodicPattern pp = load_periodic(cls_src);
            const int periods = std::max(1, window / (2 * pp.period));
            Report r = classify_report(pp, cls_src.in.empty() ? cls_src.fixture : cls_src.in, element, periods, nmax);
            r.environment["window"] = window;
            return finish(r, out);
        }

        if (*wpd) {
            PeriodicPattern pp = load_periodic(wpd_src);
            auto it = pp.automorphisms.find(g_name);
            if (it == pp.automorphisms.end()) throw UnknownId("unknown automorphism " + g_name);
            std::vector<NamedAutomorphism> gens;
            for (const auto& [name, e] : pp.automorphisms) gens.push_back({name, e});
            const auto* base = &pp.families.front();
            for (const auto& f : pp.families)
                if (f.sign == Sign::Plus) {
                    base = &f;
                    break;
                }
            const LeafRef p{base->name, base->residues.begin()->first};
            auto s = wpd_stability(pp, it->second, p, eps, segment, gens, ball, wpd_periods);
            Report r;
            r.verb = "wpd";
            r.digest = fnv1a_hex(serialize(pp));
            r.inputs = {{"pattern", wpd_src.in.empty() ? wpd_src.fixture : wpd_src.in}, {"g", g_name}};
            r.environment = {{"ball", ball}, {"eps", eps}, {"n", segment}, {"window_periods", wpd_periods}};
            r.results = {{"base", p.id()},
                         {"witnesses", s.small.witnesses},
                         {"rejected", s.small.rejected},
                         {"fixing_far_blocks", s.small.far_block_fixers},
                         {"witnesses_grown", s.large.witnesses.size()},
                         {"stable", s.stable}};
            r.check(tag::window_lemmas, "witness set stable under growth", s.stable);
            r.check(tag::window_lemmas, "finitely many witnesses", !s.small.witnesses.empty());
            return finish(r, out);
        }

        if (*census) {
            const Model model = parse_model(model_name);
            Budget budget{budget_from_env(120000)};
            json gens_json;
            if (!gens_path.empty()) {
                gens_json = parse_json_text(read_file(gens_path));
                if (!gens_json.is_object() || gens_json.value("model", "") != model_name)
                    throw PreconditionError("generators file is for a different model");
            }
            Report r;
            if (model == Model::TrivialAffine) {
                auto S = gens_path.empty() ? trivial_generators() : trivial_gens_from_json(gens_json);
                auto c = growth_report(S, census_nmax, budget);
                r = census_report(c, tag::census_trivial);
                if (!csv_path.empty()) write_file(csv_path, census_csv(c.rows));
            } else {
                auto S = gens_path.empty() ? skew_generators() : skew_gens_from_json(gens_json);
                const std::string h = h_name == "shift" && gens_path.empty() ? "h" : h_name;
                auto g = genericity_report(S, h, census_nmax, budget);
                r = census_report(g.census, tag::census_skew,
                                  {{"R", g.R}, {"K", g.K}, {"L", g.L}, {"g_or_hg_failures", g.g_or_hg_failures}});
                if (!csv_path.empty()) write_file(csv_path, census_csv(g.census.rows));
            }
            r.environment = {{"budget_ms", budget.ms}};
            return finish(r, out);
        }
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kBudget;
    } catch (const ParseError& e) {
        std::cerr << "parse error at byte " << e.offset << ": " << e.what() << "\n";
        return kData;
    } catch (const ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kData;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    }
    return kUsage;
}
