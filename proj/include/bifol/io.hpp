#pragma once

#include "census.hpp"
#include "graphs.hpp"
#include "periodic.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

namespace bifol {

using json = nlohmann::json;

namespace detail {

inline void require_keys(const json& j, std::initializer_list<const char*> required,
                         std::initializer_list<const char*> optional, const char* what) {
    if (!j.is_object()) throw ParseError(std::string(what) + ": expected an object", 0);
    for (const char* k : required)
        if (!j.contains(k)) throw ParseError(std::string(what) + ": missing key \"" + k + "\"", 0);
    for (const auto& [k, v] : j.items()) {
        bool known = false;
        for (const char* r : required) known = known || k == r;
        for (const char* o : optional) known = known || k == o;
        if (!known) throw ParseError(std::string(what) + ": unknown key \"" + k + "\"", 0);
    }
}

inline Sign parse_sign(const json& j) {
    const auto s = j.get<std::string>();
    if (s == "plus") return Sign::Plus;
    if (s == "minus") return Sign::Minus;
    throw ParseError("unknown sign \"" + s + "\"", 0);
}

template <class F>
auto guarded(F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw ParseError(e.what(), 0);
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// Finite patterns

inline json to_json(const FinitePattern& fp) {
    json j;
    j["boundary"] = fp.boundary;
    j["leaves"] = json::array();
    for (const auto& l : fp.leaves) j["leaves"].push_back({{"id", l.id}, {"sign", to_string(l.sign)}, {"endpoints", l.endpoints}});
    j["singularities"] = json::array();
    for (const auto& s : fp.singularities) j["singularities"].push_back({{"plus", s.plus}, {"minus", s.minus}});
    j["nonseparated"] = json::array();
    for (const auto& [a, b] : fp.nonseparated) j["nonseparated"].push_back({a, b});
    j["points"] = json::array();
    for (const auto& m : fp.points) {
        json pj{{"id", m.id}};
        if (const auto* c = std::get_if<Crossing>(&m.locator))
            pj["crossing"] = {{"plus", c->plus}, {"minus", c->minus}};
        else
            pj["region"] = std::get<RegionPoint>(m.locator).sides;
        j["points"].push_back(pj);
    }
    return j;
}

inline FinitePattern finite_from_json(const json& j) {
    return detail::guarded([&] {
        detail::require_keys(j, {"boundary", "leaves"}, {"singularities", "nonseparated", "points"}, "pattern");
        FinitePattern fp;
        fp.boundary = j.at("boundary").get<std::vector<std::string>>();
        for (const auto& l : j.at("leaves")) {
            detail::require_keys(l, {"id", "sign", "endpoints"}, {}, "leaf");
            fp.leaves.push_back({l.at("id").get<std::string>(), detail::parse_sign(l.at("sign")),
                                 l.at("endpoints").get<std::vector<std::string>>()});
        }
        if (j.contains("singularities"))
            for (const auto& s : j.at("singularities")) {
                detail::require_keys(s, {"plus", "minus"}, {}, "singularity");
                fp.singularities.push_back({s.at("plus").get<std::string>(), s.at("minus").get<std::string>()});
            }
        if (j.contains("nonseparated"))
            for (const auto& n : j.at("nonseparated")) {
                if (!n.is_array() || n.size() != 2) throw ParseError("nonseparated: expected a pair", 0);
                fp.nonseparated.emplace_back(n[0].get<std::string>(), n[1].get<std::string>());
            }
        if (j.contains("points"))
            for (const auto& p : j.at("points")) {
                detail::require_keys(p, {"id"}, {"crossing", "region"}, "point");
                if (p.contains("crossing") == p.contains("region"))
                    throw ParseError("point: exactly one of crossing, region", 0);
                MarkedPoint m{p.at("id").get<std::string>(), Crossing{}};
                if (p.contains("crossing")) {
                    const auto& c = p.at("crossing");
                    detail::require_keys(c, {"plus", "minus"}, {}, "crossing");
                    m.locator = Crossing{c.at("plus").get<std::string>(), c.at("minus").get<std::string>()};
                } else {
                    m.locator = RegionPoint{p.at("region").get<std::map<std::string, int>>()};
                }
                fp.points.push_back(std::move(m));
            }
        return fp;
    });
}

// ---------------------------------------------------------------------------
// Periodic patterns

inline json to_json(const IndexAutomorphism& g) {
    json j = json::object();
    for (const auto& [f, m] : g.maps) j[f] = m.offsets;
    return j;
}

inline IndexAutomorphism automorphism_from_json(const json& j) {
    return detail::guarded([&] {
        if (!j.is_object()) throw ParseError("automorphism: expected an object", 0);
        IndexAutomorphism g;
        for (const auto& [f, v] : j.items()) g.maps[f] = OffsetMap{v.get<std::vector<long long>>()};
        return g;
    });
}

inline json to_json(const PeriodicPattern& pp) {
    json j;
    j["period"] = pp.period;
    j["scale"] = pp.scale;
    j["families"] = json::array();
    for (const auto& f : pp.families) {
        json res = json::object();
        for (const auto& [r, slots] : f.residues) {
            json arr = json::array();
            for (const auto& s : slots)
                arr.push_back({{"line", s.line == Line::Lower ? "lower" : "upper"}, {"seg", s.seg}, {"offset", s.offset}});
            res[std::to_string(r)] = arr;
        }
        j["families"].push_back({{"name", f.name}, {"sign", to_string(f.sign)}, {"residues", res}});
    }
    j["nonsep"] = json::array();
    for (const auto& t : pp.nonsep)
        j["nonsep"].push_back({{"a", t.a}, {"residue", t.residue}, {"b", t.b}, {"delta", t.delta}});
    j["singularities"] = json::array();
    for (const auto& s : pp.singularities) j["singularities"].push_back({{"plus", s.plus}, {"minus", s.minus}});
    if (pp.scalloped) j["scalloped"] = {{"families", pp.scalloped->families}, {"residues", pp.scalloped->residues}};
    j["automorphisms"] = json::object();
    for (const auto& [name, g] : pp.automorphisms) j["automorphisms"][name] = to_json(g);
    j["band"] = json::array();
    for (const auto& b : intersection_band(pp))
        j["band"].push_back({{"plus", b.plus}, {"minus", b.minus}, {"residue", b.residue}, {"offsets", b.offsets}});
    return j;
}

/// Parses and validates; a present "band" must equal the derived one.
inline PeriodicPattern periodic_from_json(const json& j) {
    PeriodicPattern pp = detail::guarded([&] {
        detail::require_keys(j, {"period", "families"},
                             {"scale", "nonsep", "singularities", "scalloped", "automorphisms", "band"}, "periodic pattern");
        PeriodicPattern pp;
        pp.period = j.at("period").get<int>();
        pp.scale = j.value("scale", 1LL);
        for (const auto& f : j.at("families")) {
            detail::require_keys(f, {"name", "sign", "residues"}, {}, "family");
            Family fam{f.at("name").get<std::string>(), detail::parse_sign(f.at("sign")), {}};
            for (const auto& [r, slots] : f.at("residues").items()) {
                std::vector<Slot> ss;
                for (const auto& s : slots) {
                    detail::require_keys(s, {"line", "seg", "offset"}, {}, "slot");
                    const auto line = s.at("line").get<std::string>();
                    if (line != "lower" && line != "upper") throw ParseError("slot: unknown line \"" + line + "\"", 0);
                    ss.push_back({line == "lower" ? Line::Lower : Line::Upper, s.at("seg").get<int>(),
                                  s.at("offset").get<long long>()});
                }
                fam.residues[std::stoi(r)] = ss;
            }
            pp.families.push_back(std::move(fam));
        }
        if (j.contains("nonsep"))
            for (const auto& t : j.at("nonsep")) {
                detail::require_keys(t, {"a", "residue", "b", "delta"}, {}, "nonsep");
                pp.nonsep.push_back({t.at("a").get<std::string>(), t.at("residue").get<int>(),
                                     t.at("b").get<std::string>(), t.at("delta").get<long long>()});
            }
        if (j.contains("singularities"))
            for (const auto& s : j.at("singularities"))
                pp.singularities.push_back({s.at("plus").get<std::string>(), s.at("minus").get<std::string>()});
        if (j.contains("scalloped")) {
            const auto& s = j.at("scalloped");
            detail::require_keys(s, {"families", "residues"}, {}, "scalloped");
            pp.scalloped = ScallopedMarker{s.at("families").get<std::vector<std::string>>(),
                                           s.at("residues").get<std::vector<int>>()};
        }
        if (j.contains("automorphisms"))
            for (const auto& [name, g] : j.at("automorphisms").items()) pp.automorphisms[name] = automorphism_from_json(g);
        return pp;
    });
    pp = validated(std::move(pp));
    if (j.contains("band")) {
        json derived = to_json(pp).at("band");
        if (derived != j.at("band")) throw ParseError("band does not match the families", 0);
    }
    return pp;
}

// ---------------------------------------------------------------------------
// Files

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), e.byte);
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
    if (!out) throw Error("cannot write " + path);
}

inline bool is_periodic(const json& j) { return j.is_object() && j.contains("period"); }

/// Parses a finite pattern; validation failures surface as ValidationError.
inline FinitePattern parse_finite(const std::string& text) {
    FinitePattern fp = finite_from_json(parse_json_text(text));
    auto rep = validate_pattern(fp);
    if (!rep.valid()) throw ValidationError(rep);
    return fp;
}

inline PeriodicPattern parse_periodic(const std::string& text) { return periodic_from_json(parse_json_text(text)); }

inline std::string serialize(const FinitePattern& fp) { return dump(to_json(fp)); }
inline std::string serialize(const PeriodicPattern& pp) { return dump(to_json(pp)); }

// ---------------------------------------------------------------------------
// Exports

inline std::string export_dot(const Graph& g, const Pattern* p = nullptr, const std::vector<int>* leaves = nullptr) {
    std::ostringstream out;
    out << "graph G {\n";
    for (int v = 0; v < g.size(); ++v) {
        out << "  \"" << g.labels[v] << "\"";
        if (p && leaves) {
            const int l = (*leaves)[v];
            out << " [label=\"" << g.labels[v] << " (" << (p->sign(l) == Sign::Plus ? "+" : "-") << ")\"";
            if (p->singular(l)) out << ", shape=box, singular=true";
            out << "]";
        }
        out << ";\n";
    }
    for (int u = 0; u < g.size(); ++u)
        for (int w : g.adj[u])
            if (u < w) out << "  \"" << g.labels[u] << "\" -- \"" << g.labels[w] << "\";\n";
    out << "}\n";
    return out.str();
}

inline std::string export_dot(const Pattern& p, const LeafGraph& g) { return export_dot(g, &p, &g.leaves); }

inline std::string distance_csv(const Graph& g) {
    auto d = all_pairs(g);
    std::ostringstream out;
    out << "vertex";
    for (const auto& l : g.labels) out << "," << l;
    out << "\n";
    for (int u = 0; u < g.size(); ++u) {
        out << g.labels[u];
        for (int v = 0; v < g.size(); ++v) {
            out << ",";
            if (d[u][v] == INF)
                out << "inf";
            else
                out << d[u][v];
        }
        out << "\n";
    }
    return out.str();
}

inline constexpr const char* kCensusHeader = "n,ball_size,free_count,free_fraction,lambda_G,lambda_Free";

inline std::string format_fixed(double x) {
    if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
    std::ostringstream out;
    out << std::fixed << std::setprecision(6) << x;
    return out.str();
}

inline std::string census_csv(const std::vector<BallRow>& rows) {
    std::ostringstream out;
    out << kCensusHeader << "\n";
    for (const auto& r : rows)
        out << r.n << "," << r.ball << "," << r.free << "," << format_fixed(r.free_fraction) << ","
            << format_fixed(r.lambda_g) << "," << format_fixed(r.lambda_free) << "\n";
    return out.str();
}

} // namespace bifol
