// acceptance.cpp - one pass/fail line per acceptance criterion
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "qscatter/mirror_algebra.hpp"

using namespace qs;
using qt::s;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;
    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail = what;
        pass = pass && ok;
    }
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_s, const std::function<Outcome()>& body) {
    auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (limit_s > 0 && secs >= limit_s) o.require(false, "too slow");
    failures += !o.pass;
    char timing[64];
    if (limit_s > 0)
        std::snprintf(timing, sizeof timing, "%.2f s < %.0f s", secs, limit_s);
    else
        std::snprintf(timing, sizeof timing, "%.2f s", secs);
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << ". " << name << " [" << timing << "]";
    if (!o.detail.empty()) std::cout << "  " << o.detail;
    std::cout << std::endl;
}

std::string v(int j) { return "th_v" + std::to_string((j + 4) % 5 + 1); }  // cyclic, 1-based
std::string n(int j) { return std::to_string((j + 4) % 5 + 1); }

struct Derived {
    Presentation pres;
    std::vector<std::string> text;
    bool verified = true;
};

Derived relations_of(const ThetaAlgebra& A, const std::vector<Generator>& gens) {
    Derived d;
    d.pres = derive_relations(A, gens);
    for (const auto& r : d.pres.relations) {
        d.text.push_back(relation_text(r, d.pres));
        d.verified = d.verified && r.verified;
    }
    return d;
}

bool contains(const std::vector<std::string>& v, const std::string& t) {
    return std::find(v.begin(), v.end(), t) != v.end();
}

std::vector<ChartVector> generator_points(const Problem& P) {
    std::vector<ChartVector> out;
    for (const auto& g : P.generators) out.push_back(canonical_point(*P.diagram.surface, g.point));
    return out;
}

QTorusElement random_elem(std::mt19937& rng, int order) {
    std::uniform_int_distribution<int> cnt(1, 3), t(-2, 2), c(0, 2);
    QTorusElement r(order);
    for (int i = cnt(rng); i > 0; --i)
        r.add_term({{t(rng), t(rng)}, {c(rng), c(rng)}}, QScalar(qt::random_lpoly(rng, 3, 2, true), LPoly(1)));
    return r;
}

QTorusElement random_wall(std::mt19937& rng, const V2& m, int order) {
    std::uniform_int_distribution<int> l(-2, -1), c(0, 2), cnt(1, 3);
    QTorusElement f = QTorusElement::one(order, 2);
    for (int i = cnt(rng); i > 0; --i) {
        ClassVec cls{c(rng), c(rng)};
        if (cls[0] + cls[1] == 0) cls[0] = 1;
        f.add_term({m * l(rng), cls}, QScalar(qt::random_lpoly(rng, 2, 2, true), LPoly(1)));
    }
    return f;
}

}  // namespace

int main() {
    auto suite0 = Clock::now();

    criterion(1, "degree-5 del Pezzo relations, N = 3", 10, [] {
        Outcome o;
        Problem P = load_fixture("dP5", 3);
        Derived d = relations_of(build_algebra(P.diagram, 3), P.generators);
        o.require(d.verified, "unverified relation");
        for (int j = 1; j <= 5; ++j) {
            std::string cls = "z^{D" + n(j) + "+E" + n(j) + "}", dj = "z^{D" + n(j) + "}";
            std::string fw = v(j - 1) + "*" + v(j + 1) + " = " + cls + " + q^{1/2}*" + dj + "*" + v(j);
            std::string bw = v(j + 1) + "*" + v(j - 1) + " = " + cls + " + q^{-1/2}*" + dj + "*" + v(j);
            o.require(contains(d.text, fw), "missing " + fw);
            o.require(contains(d.text, bw), "missing " + bw);
        }
        if (o.pass) o.detail = "10 product relations bit-exact";
        return o;
    });

    criterion(2, "V1 quantization", 10, [] {
        Outcome o;
        Problem P = load_fixture("V1");
        Derived d = relations_of(build_algebra(P.diagram, P.order), P.generators);
        std::vector<std::string> want{
            "q^{1/2}*x*y - q^{-1/2}*y*x = (q^{3/2} - q^{-3/2})*z^2",
            "q^{1/2}*z*x - q^{-1/2}*x*z = 0",
            "q^{1/2}*y*z - q^{-1/2}*z*y = (q - q^{-1})*x",
            "x*y*z = q^{1/2}*x^2 + q*z^3",
        };
        o.require(d.verified, "unverified relation");
        for (const auto& w : want) o.require(contains(d.text, w), "missing " + w);
        o.require(d.text.size() == want.size(), "extra relations");
        if (o.pass) o.detail = "x*y*z = q^{1/2}*x^2 + q*z^3";
        return o;
    });

    criterion(3, "V2 quantization", 10, [] {
        Outcome o;
        Problem P = load_fixture("V2");
        ThetaAlgebra A = build_algebra(P.diagram, P.order);
        Derived d = relations_of(A, P.generators);
        o.require(d.verified, "unverified relation");
        for (const char* w : {"q^{1/2}*y*z - q^{-1/2}*z*y = 0", "q^{1/2}*z*x - q^{-1/2}*x*z = 0", "x*y*z = q^{1/2}*z^2"})
            o.require(contains(d.text, w), std::string("missing ") + w);
        // x y commutator straight from the theta table
        auto gens = generator_points(P);
        const auto &x = gens[0], &y = gens[1], &z = gens[2];
        ClassVec zero = A.surface().zero_class();
        ThetaElement comm = add(A.times_class(A.multiply(A.theta(x), A.theta(y)), zero, s(1)),
                                A.times_class(A.multiply(A.theta(y), A.theta(x)), zero, s(-1)), -1);
        ThetaElement with_z = A.times_class(A.theta(z), zero, s(2) - s(-2));
        ThetaElement with_z2 = A.times_class(A.multiply(A.theta(z), A.theta(z)), zero, s(2) - s(-2));
        o.require(is_zero(add(comm, with_z, -1)), "table commutator is not (q - q^{-1})*z");
        o.require(!is_zero(add(comm, with_z2, -1)), "table commutator equals (q - q^{-1})*z^2");
        o.require(contains(d.text, "q^{1/2}*x*y - q^{-1/2}*y*x = (q - q^{-1})*z"), "derived commutator differs from table");
        if (o.pass)
            o.detail = "table: q^{1/2}*x*y - q^{-1/2}*y*x = (q - q^{-1})*z; the reference derivation's (q - q^{-1})*z^2 "
                       "does not hold";
        return o;
    });

    criterion(4, "quantum pentagon, N = 5", 5, [] {
        Outcome o;
        const int N = 5;
        Problem P = load_fixture("pentagon", N);
        ScatteringDiagram C = complete(build_seed_diagram(*P.seed, N), N);
        QTorusElement want = QTorusElement::one(N, 2) + QTorusElement::monomial({{-1, -1}, {1, 1}}, s(-1), N);
        int added = 0;
        for (const auto& w : C.walls) {
            if (!w.added) continue;
            ++added;
            o.require(w.dir == V2{1, 1}, "added wall off the diagonal");
            o.require(w.f == want, "added wall function " + w.f.str(C.labels));
        }
        o.require(added == 1, std::to_string(added) + " added walls");
        auto loop = check_loop_identity(C, N);
        o.require(loop.pass, "loop identity fails at degree " + std::to_string(loop.degree));
        if (o.pass) o.detail = "one wall, f = " + want.str(C.labels);
        return o;
    });

    criterion(5, "A2 specialization", 10, [] {
        Outcome o;
        Problem P = load_fixture("dP5", 3);
        ThetaAlgebra A = build_algebra(P.diagram, 3);
        std::map<std::string, QScalar> ones;
        for (const auto& l : P.diagram.labels) ones[l] = QScalar(1);
        Derived d = relations_of(specialize_classes(A, ones), P.generators);
        o.require(d.verified, "unverified relation");
        for (int j = 1; j <= 5; ++j) {
            std::string w = v(j - 1) + "*" + v(j + 1) + " = 1 + q^{1/2}*" + v(j);
            o.require(contains(d.text, w), "missing " + w);
        }
        return o;
    });

    criterion(6, "q-integrality, all fixtures, N <= 4", 0, [] {
        Outcome o;
        int checked = 0;
        for (const auto& name : fixture_names())
            for (int N = 1; N <= 4; ++N) {
                Problem P = load_fixture(name, N);
                BuildOptions opt;
                opt.charge_bound = 3;
                ThetaAlgebra A = build_algebra(P.diagram, N, opt);
                auto rep = q_integrality(A.table);
                checked += rep.checked;
                o.require(rep.pass, name + " N=" + std::to_string(N) + ": " + rep.first_failure);
            }
        if (o.pass) o.detail = std::to_string(checked) + " coefficients, 0 failures";
        return o;
    });

    criterion(7, "torus grading", 0, [] {
        Outcome o;
        for (const auto& name : fixture_names()) {
            Problem P = load_fixture(name);
            BuildOptions opt;
            opt.charge_bound = 3;
            ThetaAlgebra A = build_algebra(P.diagram, std::min(P.order, 3), opt);
            auto rep = weight_check(A.table, A.surface());
            o.require(rep.pass, name + ": " + rep.first_failure);
        }
        // corrupt one class in one row
        Problem P = load_fixture("dP5");
        const auto& S = *P.diagram.surface;
        StructureTable t;
        t.rows.push_back(structure_constants(P.diagram, {0, 1, 0}, {2, 1, 0}, 3));
        RCoeff& unit = t.rows[0].terms[{0, 0, 0}];
        QScalar c = unit.begin()->second;
        ClassVec wrong = unit.begin()->first;
        wrong[S.label_index("E2")] -= 1;
        unit = {{wrong, c}};
        o.require(!weight_check(t, S).pass, "mutation not detected");
        if (o.pass) o.detail = "all fixtures pass; corrupted class detected";
        return o;
    });

    criterion(8, "consistency on B, dP5 at N = 3", 0, [] {
        Outcome o;
        Problem P = load_fixture("dP5", 3);
        std::vector<ChartVector> rays;
        for (int j = 0; j < 5; ++j) rays.push_back({j, 1, 0});
        auto rep = consistency_check_on_B(P.diagram, rays, 3);
        o.require(rep.pass, rep.first_failure);
        auto doc = nlohmann::json::parse(fixture_text("dP5"));
        doc["diagram"]["walls"][0]["f"][1]["coeff"] = {{"1/2", 1}};
        Problem bad = problem_from_json(doc);
        auto brep = consistency_check_on_B(bad.diagram, rays, 3);
        o.require(!brep.pass, "perturbed diagram passes");
        if (o.pass) o.detail = std::to_string(rep.comparisons) + " comparisons; perturbed: " + brep.first_failure;
        return o;
    });

    criterion(9, "Poisson cross-check", 0, [] {
        Outcome o;
        for (const char* name : {"V1", "V2", "dP5"}) {
            Problem P = load_fixture(name);
            auto pts = generator_points(P);
            // throws if the q-commutator limit and the classical sum disagree
            auto table = poisson_table(P.diagram, pts, P.order);
            for (const auto& e : table) {
                auto r12 = structure_constants(P.diagram, e.p1, e.p2, P.order);
                auto r21 = structure_constants(P.diagram, e.p2, e.p1, P.order);
                for (const auto& [p, m] : e.bracket)
                    for (const auto& [c, val] : m) {
                        QScalar a = r12.terms[p].count(c) ? r12.terms[p][c] : QScalar(0);
                        QScalar b = r21.terms[p].count(c) ? r21.terms[p][c] : QScalar(0);
                        o.require(poisson_extract(a, b) == val, std::string(name) + ": bracket mismatch");
                    }
            }
        }
        // V2: {x,y} = 2z - xy and {z,x} = -zx, products taken classically
        Problem P = load_fixture("V2");
        auto g = generator_points(P);
        auto table = poisson_table(P.diagram, g, P.order);
        auto classical = [&](ChartVector a, ChartVector b) {
            PoissonRow r;
            for (const auto& [p, m] : structure_constants(P.diagram, a, b, P.order).terms)
                for (const auto& [c, val] : m) r[p][c] = classical_limit(val);
            return r;
        };
        auto bracket = [&](ChartVector a, ChartVector b) {
            for (const auto& e : table) {
                if (e.p1 == a && e.p2 == b) return e.bracket;
                if (e.p1 == b && e.p2 == a) {
                    PoissonRow r = e.bracket;
                    for (auto& [p, m] : r)
                        for (auto& [c, val] : m) val = -val;
                    return r;
                }
            }
            return PoissonRow{};
        };
        auto combine = [](PoissonRow a, const PoissonRow& b, long k) {
            for (const auto& [p, m] : b)
                for (const auto& [c, val] : m) a[p][c] += k * val;
            for (auto it = a.begin(); it != a.end();) {
                for (auto jt = it->second.begin(); jt != it->second.end();)
                    jt = jt->second == 0 ? it->second.erase(jt) : std::next(jt);
                it = it->second.empty() ? a.erase(it) : std::next(it);
            }
            return a;
        };
        ClassVec zero = P.diagram.surface->zero_class();
        PoissonRow two_z{{g[2], {{zero, 2}}}};
        o.require(bracket(g[0], g[1]) == combine(two_z, classical(g[0], g[1]), -1), "{x,y} != 2z - xy");
        o.require(bracket(g[2], g[0]) == combine({}, classical(g[2], g[0]), -1), "{z,x} != -zx");
        if (o.pass) o.detail = "V1, V2, dP5 exact; {x,y} = 2z - xy, {z,x} = -zx";
        return o;
    });

    criterion(10, "property suites", 0, [] {
        Outcome o;
        int triples = 0;
        for (const auto& name : fixture_names()) {
            Problem P = load_fixture(name);
            ThetaAlgebra A = build_algebra(P.diagram, 3);
            auto rep = associativity_check(A, 4);
            triples += rep.checked;
            o.require(rep.pass, name + ": " + rep.first_failure);
        }
        std::mt19937 rng(20240611);
        std::vector<V2> dirs{{1, 0}, {0, 1}, {1, 1}, {-1, 2}, {2, -3}};
        for (int i = 0; i < 200; ++i) {
            V2 m = dirs[static_cast<size_t>(i) % dirs.size()];
            QTorusElement f = random_wall(rng, m, 8);
            QTorusElement a = random_elem(rng, 8), b = random_elem(rng, 8);
            int eps = i % 2 ? -1 : 1;
            o.require(wallcross_apply(f, m, a * b, eps) == wallcross_apply(f, m, a, eps) * wallcross_apply(f, m, b, eps),
                      "wall-crossing not multiplicative");
            o.require(wallcross_apply(f, m, wallcross_apply(f, m, a, eps), -eps) == a, "wall-crossing not invertible");
        }
        for (const auto& name : {"pentagon", "P2"}) {
            Problem P = load_fixture(name, 5);
            ScatteringDiagram C = complete(build_seed_diagram(*P.seed, 5), 5);
            o.require(to_json(complete(C, 5)) == to_json(C), std::string(name) + ": completion not idempotent");
        }
        if (o.pass)
            o.detail = std::to_string(triples) + " associativity triples; 200 random wall-crossings; completion idempotent";
        return o;
    });

    double total = std::chrono::duration<double>(Clock::now() - suite0).count();
    bool in_budget = total < 300;
    failures += !in_budget;
    std::printf("%s  suite runtime [%.2f s < 300 s]\n", in_budget ? "PASS" : "FAIL", total);
    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " failing") << std::endl;
    return failures == 0 ? 0 : 1;
}
