// test_mirror_algebra.cpp - theta algebras, specialization and presentations
#include <doctest.h>

#include "helpers.hpp"
#include "qscatter/mirror_algebra.hpp"

using namespace qs;
using qt::s;

namespace {

std::vector<std::string> texts(const Presentation& P) {
    std::vector<std::string> out;
    for (const auto& r : P.relations) {
        CHECK_MESSAGE(r.verified, relation_text(r, P));
        out.push_back(relation_text(r, P));
    }
    return out;
}

bool has(const std::vector<std::string>& v, const std::string& t) { return std::find(v.begin(), v.end(), t) != v.end(); }

std::map<std::string, QScalar> all_labels(const ScatteringDiagram& D, long v) {
    std::map<std::string, QScalar> m;
    for (const auto& l : D.labels) m[l] = QScalar(v);
    return m;
}

std::string idx(int j) { return std::to_string((j + 5) % 5 + 1); }

}  // namespace

TEST_CASE("V1 relations") {
    Problem P = load_fixture("V1");
    ThetaAlgebra A = build_algebra(P.diagram, P.order);
    Presentation pres = derive_relations(A, P.generators);
    CHECK(texts(pres) == std::vector<std::string>{
                             "q^{1/2}*x*y - q^{-1/2}*y*x = (q^{3/2} - q^{-3/2})*z^2",
                             "q^{1/2}*z*x - q^{-1/2}*x*z = 0",
                             "q^{1/2}*y*z - q^{-1/2}*z*y = (q - q^{-1})*x",
                             "x*y*z = q^{1/2}*x^2 + q*z^3",
                         });
    CHECK(classical_text(pres.relations[3], pres) == "x*y*z = x^2 + z^3");
}

TEST_CASE("V2 relations") {
    Problem P = load_fixture("V2");
    ThetaAlgebra A = build_algebra(P.diagram, P.order);
    Presentation pres = derive_relations(A, P.generators);
    CHECK(texts(pres) == std::vector<std::string>{
                             "q^{1/2}*x*y - q^{-1/2}*y*x = (q - q^{-1})*z",
                             "q^{1/2}*z*x - q^{-1/2}*x*z = 0",
                             "q^{1/2}*y*z - q^{-1/2}*z*y = 0",
                             "x*y*z = q^{1/2}*z^2",
                         });
}

TEST_CASE("V2 commutator against the table") {
    // q^{1/2} xy - q^{-1/2} yx computed straight from two rows
    Problem P = load_fixture("V2");
    ThetaAlgebra A = build_algebra(P.diagram, P.order);
    ChartVector x{0, 1, 0}, y{1, 1, 0}, z{0, 1, 1};
    ThetaElement lhs = add(A.multiply(A.theta(x), A.theta(y)) , A.multiply(A.theta(y), A.theta(x)), -s(-2));
    lhs = A.times_class(lhs, A.surface().zero_class(), s(1));
    ThetaElement want = A.times_class(A.theta(z), A.surface().zero_class(), s(2) - s(-2));
    CHECK(is_zero(add(lhs, want, -1)));
}

TEST_CASE("dP5 relations") {
    Problem P = load_fixture("dP5");
    ThetaAlgebra A = build_algebra(P.diagram, 3);
    auto rel = texts(derive_relations(A, P.generators));
    CHECK(rel.size() == 15);
    for (int j = 0; j < 5; ++j) {
        std::string a = "th_v" + idx(j - 1), b = "th_v" + idx(j + 1), m = "th_v" + idx(j);
        std::string D = "D" + idx(j), E = "E" + idx(j);
        bool forward = (j - 1 + 5) % 5 < (j + 1) % 5;
        std::string lo = forward ? a : b, hi = forward ? b : a;
        // generators in increasing index order on the left
        std::string fw = lo + "*" + hi + " = z^{" + D + "+" + E + "} + q^{" + (forward ? "1/2" : "-1/2") + "}*z^{" + D + "}*" + m;
        std::string bw = hi + "*" + lo + " = z^{" + D + "+" + E + "} + q^{" + (forward ? "-1/2" : "1/2") + "}*z^{" + D + "}*" + m;
        CHECK_MESSAGE(has(rel, fw), fw);
        CHECK_MESSAGE(has(rel, bw), bw);
    }
    CHECK(has(rel, "th_v1*th_v3 = z^{D2+E2} + q^{1/2}*z^{D2}*th_v2"));
    CHECK(has(rel, "th_v3*th_v1 = z^{D2+E2} + q^{-1/2}*z^{D2}*th_v2"));
    CHECK(has(rel, "th_v4*th_v1 = z^{D5+E5} + q^{1/2}*z^{D5}*th_v5"));
}

TEST_CASE("specialization") {
    Problem P = load_fixture("dP5");
    ThetaAlgebra A = build_algebra(P.diagram, 3);

    SUBCASE("all classes to 1 gives the A2 form") {
        auto rel = texts(derive_relations(specialize_classes(A, all_labels(P.diagram, 1)), P.generators));
        CHECK(has(rel, "th_v1*th_v3 = 1 + q^{1/2}*th_v2"));
        CHECK(has(rel, "th_v3*th_v1 = 1 + q^{-1/2}*th_v2"));
        CHECK(has(rel, "th_v5*th_v2 = 1 + q^{1/2}*th_v1"));
        CHECK(has(rel, "th_v3*th_v5 = 1 + q^{1/2}*th_v4"));
    }
    SUBCASE("all classes to 0 gives the special fiber") {
        auto rel = texts(derive_relations(specialize_classes(A, all_labels(P.diagram, 0)), P.generators));
        CHECK(has(rel, "th_v1*th_v3 = 0"));
        CHECK(has(rel, "th_v2*th_v5 = 0"));
        CHECK(has(rel, "q^{1/2}*th_v2*th_v1 - q^{-1/2}*th_v1*th_v2 = 0"));
    }
    SUBCASE("empty assignment changes nothing") {
        ThetaAlgebra B = specialize_classes(A, {});
        REQUIRE(B.table.rows.size() == A.table.rows.size());
        for (size_t i = 0; i < A.table.rows.size(); ++i) CHECK(B.table.rows[i].terms == A.table.rows[i].terms);
    }
    SUBCASE("unknown labels are rejected") {
        CHECK_THROWS_AS(specialize_classes(A, {{"F9", QScalar(1)}}), Error);
    }
}

TEST_CASE("associativity") {
    for (const auto& n : fixture_names()) {
        Problem P = load_fixture(n);
        ThetaAlgebra A = build_algebra(P.diagram, std::min(P.order, 3));
        auto rep = associativity_check(A, 4);
        CHECK_MESSAGE(rep.pass, n << ": " << rep.first_failure);
        CHECK(rep.checked > 0);
    }
}

TEST_CASE("generators must generate") {
    Problem P = load_fixture("V2");
    ThetaAlgebra A = build_algebra(P.diagram, P.order);
    try {
        derive_relations(A, {P.generators[0]});
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonGenerating);
    }
}

TEST_CASE("presentations are deterministic") {
    Problem P = load_fixture("V1");
    BuildOptions one;
    one.threads = 1;
    BuildOptions many;
    many.threads = 4;
    auto a = to_json(derive_relations(build_algebra(P.diagram, 1, one), P.generators)).dump();
    auto b = to_json(derive_relations(build_algebra(P.diagram, 1, many), P.generators)).dump();
    CHECK(a == b);
}
