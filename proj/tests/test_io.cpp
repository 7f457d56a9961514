#include "bifol/report.hpp"
#include "doctest.h"

using namespace bifol;

namespace {

std::string fixture(const std::string& name) { return read_file(std::string(BIFOL_FIXTURES) + "/" + name + ".json"); }

} // namespace

TEST_CASE("finite fixtures round-trip byte for byte") {
    for (const auto& f : gen::catalog()) {
        CAPTURE(f.name);
        const std::string text = serialize(f.make());
        CHECK(fixture(f.name) == text);
        CHECK(serialize(parse_finite(text)) == text);
    }
}

TEST_CASE("periodic fixtures round-trip byte for byte") {
    for (const auto& f : gen::periodic_catalog()) {
        CAPTURE(f.name);
        const std::string text = serialize(f.make());
        CHECK(fixture(f.name) == text);
        CHECK(serialize(parse_periodic(text)) == text);
        CHECK(is_periodic(parse_json_text(text)));
    }
    CHECK_FALSE(is_periodic(parse_json_text(fixture("grid3"))));
}

TEST_CASE("malformed input") {
    CHECK_THROWS_AS(parse_finite(fixture("invalid/truncated")), ParseError);
    CHECK_THROWS_AS(parse_finite(fixture("invalid/unknown_key")), ParseError);
    CHECK_THROWS_AS(parse_finite("{\"boundary\": [], \"leaves\": [{\"id\": \"a\", \"sign\": \"up\", \"endpoints\": []}]}"),
                    ParseError);
    CHECK_THROWS_AS(parse_finite("{\"leaves\": []}"), ParseError);
    CHECK_THROWS_AS(parse_finite("[1, 2]"), ParseError);

    try {
        parse_finite(fixture("invalid/crossing_plus"));
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(e.report.has("same-sign crossing"));
    }
    try {
        parse_finite(fixture("invalid/ladder2_transversal"));
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(e.report.has("nonseparated pair has common transversal"));
    }
}

TEST_CASE("periodic band must match the families") {
    json j = to_json(gen::skew(2));
    j["band"][0]["offsets"] = json::array({0});
    CHECK_THROWS_AS(periodic_from_json(j), ParseError);
    json k = to_json(gen::skew(2));
    k["colour"] = "red";
    CHECK_THROWS_AS(periodic_from_json(k), ParseError);
    json l = to_json(gen::skew(2));
    l.erase("band");
    CHECK(serialize(periodic_from_json(l)) == serialize(gen::skew(2)));
}

TEST_CASE("dot export") {
    Pattern g = Pattern::make(gen::grid3());
    const std::string dot = export_dot(g, build_graph(g, GraphKind::Xplus));
    CHECK(dot.rfind("graph G {\n", 0) == 0);
    CHECK(std::count(dot.begin(), dot.end(), '\n') == 1 + 3 + 3 + 1);
    auto edges = [](const std::string& s) {
        std::size_t n = 0;
        for (std::size_t i = s.find(" -- "); i != std::string::npos; i = s.find(" -- ", i + 1)) ++n;
        return n;
    };
    CHECK(edges(dot) == 3);

    Pattern l = Pattern::make(gen::ladder(3));
    LeafGraph gp = build_graph(l, GraphKind::GammaPlus);
    CHECK(gp.size() == int(l.leaves_of(Sign::Plus).size()));
    const std::string ld = export_dot(l, gp);
    CHECK(edges(ld) == gp.edge_count());

    Pattern p = Pattern::make(gen::prong(3));
    CHECK(export_dot(p, build_graph(p, GraphKind::Xplus)).find("singular=true") != std::string::npos);
}

TEST_CASE("distance csv") {
    Graph split;
    split.adj = {{1}, {0}, {}};
    split.labels = {"a", "b", "c"};
    CHECK(distance_csv(split) == "vertex,a,b,c\na,0,1,inf\nb,1,0,inf\nc,inf,inf,0\n");
}

TEST_CASE("report json is stable") {
    auto ps = catalog_patterns();
    ps.resize(3);
    const std::string a = bottleneck_report(ps, 3).str(), b = bottleneck_report(ps, 3).str();
    CHECK(a == b);
    json j = json::parse(a);
    CHECK(j["verb"] == "bottleneck");
    CHECK(j["checks"][0]["tag"] == tag::bottleneck);
    CHECK(j["digest"].get<std::string>().size() == 16);
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("files") {
    CHECK_THROWS_AS(read_file("/nonexistent/bifol.json"), Error);
    CHECK_THROWS_AS(write_file("/nonexistent/dir/out.json", "x"), Error);
}
