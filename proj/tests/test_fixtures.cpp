// test_fixtures.cpp - bundled problems, input documents and charge parsing
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "qscatter/fixtures.hpp"

using namespace qs;

TEST_CASE("embedded fixtures match the files on disk") {
    auto names = fixture_names();
    CHECK(names == std::vector<std::string>{"P2", "V1", "V2", "dP5", "pentagon"});
    for (const auto& n : names) {
        std::ifstream in(std::string(QS_SOURCE_DIR) + "/fixtures/" + n + ".json");
        REQUIRE(in);
        std::stringstream ss;
        ss << in.rdbuf();
        CHECK_MESSAGE(ss.str() == fixture_text(n), n);
    }
    CHECK_THROWS_AS(fixture_text("nope"), Error);
}

TEST_CASE("every fixture loads") {
    for (const auto& n : fixture_names()) {
        Problem P = load_fixture(n);
        CHECK(P.name == n);
        CHECK(P.diagram.surface.has_value());
        CHECK_FALSE(P.generators.empty());
    }
    Problem D = load_fixture("dP5");
    CHECK(D.order == 3);
    CHECK(D.diagram.surface->r == 5);
    CHECK(D.diagram.walls.size() == 5);
    CHECK(load_fixture("dP5", 2).diagram.order == 2);

    Problem pent = load_fixture("pentagon");
    REQUIRE(pent.seed.has_value());
    CHECK(pent.mode == LabelMode::Fresh);
    CHECK_FALSE(pent.diagram.degree_weights.empty());
}

TEST_CASE("problem documents are validated") {
    using nlohmann::json;
    CHECK_THROWS_AS(problem_from_json(json::array()), Error);
    CHECK_THROWS_AS(problem_from_json(json{{"kind", "other"}}), Error);
    CHECK_THROWS_AS(problem_from_json(json::parse(fixture_text("V1")), 0), Error);

    json bad = json::parse(fixture_text("V1"));
    bad["generators"][0]["point"] = {0, -1, 0};
    CHECK_THROWS_AS(problem_from_json(bad), Error);

    json seed = {{"kind", "seed"}, {"seed", {{"seed_vectors", json::array()}}}};
    Problem empty = problem_from_json(seed);
    CHECK(empty.diagram.walls.empty());
    CHECK_FALSE(empty.diagram.surface.has_value());

    try {
        load_problem("/nonexistent/file.json");
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidInput);
    }
    try {
        load_problem("builtin:missing");
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() != ErrorKind::Internal);
    }
}

TEST_CASE("charges") {
    Problem P = load_fixture("dP5");
    const auto& S = *P.diagram.surface;
    CHECK(parse_charge(S, "0") == ChartVector{0, 0, 0});
    CHECK(parse_charge(S, "v3") == ChartVector{2, 1, 0});
    CHECK(parse_charge(S, "2v1+v2") == ChartVector{0, 2, 1});
    CHECK(parse_charge(S, "v2 + 2v1") == ChartVector{0, 2, 1});
    CHECK(parse_charge(S, "v5+v1") == ChartVector{4, 1, 1});
    CHECK(parse_charge(S, "th_v4", P.generators) == ChartVector{3, 1, 0});
    CHECK(parse_charge(S, "[1,0,2]") == ChartVector{2, 2, 0});
    CHECK_THROWS_AS(parse_charge(S, "v1+v3"), Error);
    CHECK_THROWS_AS(parse_charge(S, "v9"), Error);
    CHECK_THROWS_AS(parse_charge(S, "x"), Error);
    CHECK_THROWS_AS(parse_charge(S, "[0,-1,0]"), Error);
    CHECK(parse_charges(S, "v1, [0,1,1] ,0").size() == 3);

    Problem V = load_fixture("V1");
    const auto& S1 = *V.diagram.surface;
    CHECK(parse_charge(S1, "v1'") == canonical_point(S1, {0, 0, 1}));
    CHECK(parse_charge(S1, "2v1+v1'") == ChartVector{0, 2, 1});
    CHECK(parse_charge(S1, "x", V.generators) == ChartVector{0, 2, 1});
}
