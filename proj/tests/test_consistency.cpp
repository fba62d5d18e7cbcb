// test_consistency.cpp - consistency of canonical diagrams on B
#include <doctest.h>

#include "qscatter/fixtures.hpp"

using namespace qs;
using nlohmann::json;

namespace {

std::vector<ChartVector> rays(const TropicalSurface& S) {
    std::vector<ChartVector> out;
    for (int j = 0; j < S.r; ++j) out.push_back({j, 1, 0});
    return out;
}

}  // namespace

TEST_CASE("dP5 is consistent") {
    for (int N : {1, 2, 3}) {
        Problem P = load_fixture("dP5", N);
        auto rep = consistency_check_on_B(P.diagram, rays(*P.diagram.surface), N);
        CHECK_MESSAGE(rep.pass, "N=" << N << ": " << rep.first_failure);
        CHECK(rep.comparisons > 0);
    }
}

TEST_CASE("dP5 with more charges") {
    Problem P = load_fixture("dP5");
    std::vector<ChartVector> ch = rays(*P.diagram.surface);
    ch.push_back({0, 1, 1});
    ch.push_back({2, 2, 1});
    auto rep = consistency_check_on_B(P.diagram, ch, 3);
    CHECK_MESSAGE(rep.pass, rep.first_failure);
}

TEST_CASE("perturbed dP5 is inconsistent") {
    json doc = json::parse(fixture_text("dP5"));
    SUBCASE("wrong q-power on one wall") {
        doc["diagram"]["walls"][0]["f"][1]["coeff"] = {{"1/2", 1}};
    }
    SUBCASE("spurious extra factor on one wall") {
        // f * (1 + z^{E1} X^{-1}) truncated
        auto& f = doc["diagram"]["walls"][0]["f"];
        f[1]["coeff"] = {{"-1/2", 1}, {"0", 1}};
        f.push_back({{"tangent", {-2, 0}}, {"class", {{"E1", 2}}}, {"coeff", {{"-1/2", 1}}}});
    }
    Problem P = problem_from_json(doc);
    auto rep = consistency_check_on_B(P.diagram, rays(*P.diagram.surface), 3);
    CHECK_FALSE(rep.pass);
    CHECK_FALSE(rep.first_failure.empty());
}

TEST_CASE("pentagon canonical diagram") {
    Problem P = load_fixture("pentagon");
    auto rep = consistency_check_on_B(P.diagram, rays(*P.diagram.surface), P.order);
    CHECK_MESSAGE(rep.pass, rep.first_failure);
}

TEST_CASE("toric and one-ray surfaces") {
    for (const char* n : {"P2", "V1", "V2"}) {
        Problem P = load_fixture(n);
        auto rep = consistency_check_on_B(P.diagram, rays(*P.diagram.surface), P.order);
        CHECK_MESSAGE(rep.pass, n << ": " << rep.first_failure);
    }
}
