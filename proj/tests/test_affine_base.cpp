// test_affine_base.cpp - charts, transport and weights on B
#include <doctest.h>

#include <random>
#include <set>

#include "qscatter/affine_base.hpp"

using namespace qs;

namespace {

TropicalSurface dp5() {
    std::vector<std::string> labels;
    for (int i = 1; i <= 5; ++i) labels.push_back("D" + std::to_string(i));
    for (int i = 1; i <= 5; ++i) labels.push_back("E" + std::to_string(i));
    std::vector<ClassVec> kinks;
    std::vector<std::vector<std::string>> exc;
    for (int j = 0; j < 5; ++j) {
        ClassVec k(10, 0);
        k[static_cast<size_t>(j)] = 1;
        kinks.push_back(k);
        exc.push_back({"E" + std::to_string(j + 1)});
    }
    TropicalSurface S = build_surface({-1, -1, -1, -1, -1}, kinks, labels, exc);
    S.fan = std::vector<V2>{{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {0, -1}};
    return S;
}

TropicalSurface toric_p2(bool with_kinks) {
    std::vector<ClassVec> kinks;
    std::vector<std::string> labels;
    if (with_kinks) {
        labels = {"D1", "D2", "D3"};
        for (int j = 0; j < 3; ++j) {
            ClassVec k(3, 0);
            k[static_cast<size_t>(j)] = 1;
            kinks.push_back(k);
        }
    } else {
        kinks.assign(3, ClassVec{});
    }
    return build_surface({1, 1, 1}, kinks, labels);
}

}  // namespace

TEST_CASE("build_surface") {
    TropicalSurface P = toric_p2(false);
    CHECK(P.monodromy() == std::array<long, 4>{1, 0, 0, 1});
    TropicalSurface S = dp5();
    CHECK(S.r == 5);
    CHECK(S.class_rank() == 10);
    for (int j = 0; j < S.r; ++j) {
        auto t = S.transition_matrix(j);
        CHECK(t[0] * t[3] - t[1] * t[2] == 1);
    }
    TropicalSurface one = build_surface({3}, {ClassVec{1}}, {"D1"});
    CHECK(one.r == 1);
    CHECK(one.to_prev(0, one.to_next(0, {2, 5})) == V2{2, 5});
    CHECK_THROWS_AS(build_surface({1, 1}, {ClassVec{}}, {}), Error);
    CHECK_THROWS_AS(build_surface({1}, {ClassVec{-1}}, {"D1"}), Error);
}

TEST_CASE("toric monodromy from fans") {
    // Hirzebruch F_1 and a hexagon: selfint from complete smooth fans
    CHECK(build_surface({0, 1, 0, -1}, std::vector<ClassVec>(4), {}).monodromy() == std::array<long, 4>{1, 0, 0, 1});
    CHECK(build_surface({-1, -1, -1, -1, -1, -1}, std::vector<ClassVec>(6), {}).monodromy() ==
          std::array<long, 4>{1, 0, 0, 1});
    // dP5 boundary is not toric: monodromy is nontrivial
    CHECK(dp5().monodromy() != std::array<long, 4>{1, 0, 0, 1});
}

TEST_CASE("transport_tangent") {
    TropicalSurface S = dp5();
    for (int j = 0; j < 5; ++j) {
        // v_j seen from the previous chart
        ChartVector vj{S.prev(j), 0, 1};
        CHECK(transport_tangent(S, vj, j, +1) == ChartVector{j, 1, 0});
        // v_{j-1}: basis coordinates (-d_j, -1), psi-chart coordinates (-1, -d) for v_{j+1}
        ChartVector vjm1{S.prev(j), 1, 0};
        ChartVector t = transport_tangent(S, vjm1, j, +1);
        CHECK(t == ChartVector{j, -S.selfint[static_cast<size_t>(j)], -1});
        CHECK(psi_coords(S, j, t) == V2{1, 0});
        CHECK(psi_coords(S, j, ChartVector{j, 0, 1}) == V2{-1, -S.selfint[static_cast<size_t>(j)]});
        CHECK(psi_coords(S, j, ChartVector{j, 1, 0}) == V2{0, 1});
    }
    CHECK_THROWS_AS(transport_tangent(S, ChartVector{2, 1, 0}, 0, +1), Error);
    std::mt19937 rng(5);
    std::uniform_int_distribution<long> co(-20, 20);
    std::uniform_int_distribution<int> ray(0, 4);
    for (int i = 0; i < 100; ++i) {
        int k = ray(rng);
        ChartVector v{S.prev(k), co(rng), co(rng)};
        CHECK(transport_tangent(S, transport_tangent(S, v, k, +1), k, -1) == v);
    }
}

TEST_CASE("transport_monomial") {
    TropicalSurface S = dp5();
    ClassVec zero = S.zero_class();
    // tangent to the ray: class unchanged
    auto [t0, b0] = transport_monomial(S, ChartVector{4, 0, 3}, zero, 0, +1);
    CHECK(t0 == ChartVector{0, 3, 0});
    CHECK(b0 == zero);
    for (int j = 0; j < 5; ++j) {
        // phi(m-) + phi(m+) = kappa - d phi(m_rho), all in the chart of sigma_j
        auto [mminus, cminus] = transport_monomial(S, ChartVector{S.prev(j), 1, 0}, zero, j, +1);
        long d = S.selfint[static_cast<size_t>(j)];
        CHECK(mminus.a + 0 == -d * 1);
        CHECK(mminus.b + 1 == 0);
        CHECK(cminus == S.kinks[static_cast<size_t>(j)]);
        // and back again
        auto [back, cb] = transport_monomial(S, mminus, cminus, j, -1);
        CHECK(back == ChartVector{S.prev(j), 1, 0});
        CHECK(cb == zero);
    }
    // full loop on a toric surface with trivial kinks
    TropicalSurface P = toric_p2(false);
    ChartVector m{0, 2, -7};
    ClassVec c;
    for (int k = 1; k <= 3; ++k) std::tie(m, c) = transport_monomial(P, m, c, k, +1);
    CHECK(m == ChartVector{0, 2, -7});
}

TEST_CASE("weight and points") {
    TropicalSurface S = dp5();
    CHECK(weight(S, {2, 1, 0}) == std::vector<long>{0, 0, 1, 0, 0});
    CHECK(weight(S, {0, 0, 0}) == std::vector<long>(5, 0));
    CHECK(weight(S, {3, 2, 3}) == std::vector<long>{0, 0, 0, 2, 3});
    CHECK(canonical_point(S, {1, 0, 4}) == ChartVector{2, 4, 0});
    CHECK(point_representations(S, {1, 0, 4}).size() == 2);
    TropicalSurface one = build_surface({0}, {ClassVec{1}}, {"D1"});
    auto reps = point_representations(one, {0, 1, 0});
    CHECK(reps.size() == 2);
    CHECK(reps[1] == ChartVector{0, 0, 1});
}

TEST_CASE("intersections") {
    TropicalSurface S = dp5();
    ClassVec d2(10, 0);
    d2[1] = 1;
    CHECK(S.intersect(d2) == std::vector<long>{1, -1, 1, 0, 0});
    ClassVec e3(10, 0);
    e3[7] = 1;
    CHECK(S.intersect(e3) == std::vector<long>{0, 0, 1, 0, 0});
    TropicalSurface two = build_surface({0, 0}, {ClassVec{1, 0}, ClassVec{0, 1}}, {"D1", "D2"});
    CHECK(two.intersect({1, 0}) == std::vector<long>{0, 2});
}

TEST_CASE("develop_ray_crossings") {
    TropicalSurface S = dp5();
    DevelopedPoint Q{1, mpq_class(1), mpq_class(2), 0};
    CHECK(develop_ray_crossings(S, Q, {1, 1}, Orientation::Forward, 10).empty());
    DevelopedPoint near{1, mpq_class(3), mpq_class(1, 10), 0};
    auto c = develop_ray_crossings(S, near, {0, -1}, Orientation::Forward, 1);
    REQUIRE(c.size() == 1);
    CHECK(c[0].ray == 1);
    CHECK(c[0].point.chart == 0);
    CHECK(c[0].point.a == 0);
    CHECK(c[0].point.b == 3);
    CHECK_THROWS_AS(develop_ray_crossings(S, {1, 1, 1, 0}, {-1, -1}, Orientation::Forward, 5), Error);
    // r = 2 with the x.y picture: from z near w + v2 the line of charge w' crosses rho_2 once
    TropicalSurface two = build_surface({0, 0}, {ClassVec{1, 0}, ClassVec{0, 1}}, {"D1", "D2"});
    DevelopedPoint z{0, mpq_class(1003, 1000), mpq_class(10007, 10000), 0};
    auto cr = develop_ray_crossings(two, z, {1, 0}, Orientation::Backward, 10);
    REQUIRE(cr.size() == 1);
    CHECK(cr[0].ray == 1);
    CHECK(cr[0].dir == V2{0, 1});
    // winding counts passes through rho_1
    auto wrap = develop_ray_crossings(S, {4, mpq_class(1), mpq_class(1, 3), 0}, {-2, 1}, Orientation::Forward, 1);
    REQUIRE(wrap.size() == 1);
    CHECK(wrap[0].ray == 0);
    CHECK(wrap[0].point.winding == 1);
}

TEST_CASE("nu_pushforward") {
    TropicalSurface S = dp5();
    for (int j = 0; j < 5; ++j) CHECK(nu_pushforward(S, {j, 1, 0}) == (*S.fan)[static_cast<size_t>(j)]);
    CHECK(nu_pushforward(S, {0, 2, 3}) == V2{5, 3});
    std::set<V2> image;
    for (int j = 0; j < 5; ++j)
        for (long a = 0; a <= 6; ++a)
            for (long b = 0; b <= 6; ++b) {
                ChartVector p = canonical_point(S, {j, a, b});
                if (p.chart != j && !(a == 0 && b == 0)) continue;
                if (p.a == 0 && p.b == 0 && j != 0) continue;
                CHECK(image.insert(nu_pushforward(S, p)).second);
            }
    for (long x = -3; x <= 3; ++x)
        for (long y = -3; y <= 3; ++y) CHECK(image.count(V2{x, y}) == 1);
    TropicalSurface P = toric_p2(false);
    CHECK_THROWS_AS(nu_pushforward(P, {0, 1, 0}), Error);
}

TEST_CASE("json") {
    TropicalSurface S = dp5();
    TropicalSurface T = surface_from_json(to_json(S));
    CHECK(T.selfint == S.selfint);
    CHECK(T.kinks == S.kinks);
    CHECK(T.intersections == S.intersections);
    CHECK(T.fan.has_value());
    CHECK_THROWS_AS(surface_from_json(nlohmann::json::parse(R"({"rays":[]})")), Error);
    CHECK(class_str(S, S.kinks[0]) == "D1");
}
