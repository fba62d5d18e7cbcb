// scattering.cpp - path-ordered products and order-by-order completion on R^2
#include "qscatter/scattering.hpp"

#include <algorithm>
#include <map>

namespace qs {

namespace {

int sgn(long x) { return (x > 0) - (x < 0); }

// position of v on the anticlockwise circle starting at b: [0, pi) is 0, [pi, 2pi) is 1
int rel_half(const V2& b, const V2& v) {
    long d = det(b, v);
    long dot = b.x * v.x + b.y * v.y;
    return (d > 0 || (d == 0 && dot > 0)) ? 0 : 1;
}

bool rel_less(const V2& b, const V2& v, const V2& w) {
    int hv = rel_half(b, v), hw = rel_half(b, w);
    if (hv != hw) return hv < hw;
    return det(v, w) > 0;
}

bool same_ray(const V2& a, const V2& b) { return det(a, b) == 0 && a.x * b.x + a.y * b.y > 0; }

std::string wall_key(const Wall& w) {
    std::string k;
    for (const auto& [e, c] : w.f.terms()) {
        k += std::to_string(e.m.x) + "," + std::to_string(e.m.y) + ":";
        for (int x : e.c) k += std::to_string(x) + ",";
        k += to_json(c).dump() + ";";
    }
    return k;
}

}  // namespace

int crossing_sign(const Wall& w, const V2& velocity) {
    int s = -sgn(det(w.m_hamiltonian(), velocity));
    if (s == 0) throw Error(ErrorKind::Degenerate, "path tangent to a wall");
    return s;
}

int crossing_sign(const Wall& w, const mpq_class& va, const mpq_class& vb) {
    V2 m = w.m_hamiltonian();
    mpq_class d = va * m.y - vb * m.x;  // <v, m>
    int s = sgn(d);                     // -<m, v> = <v, m>
    if (s == 0) throw Error(ErrorKind::Degenerate, "path tangent to a wall");
    return s;
}

void normalize_walls(ScatteringDiagram& D) {
    for (auto& w : D.walls) {
        if (!is_primitive(w.dir)) throw Error(ErrorKind::NonPrimitive, "wall direction not primitive");
        if (D.surface) {
            const TropicalSurface& S = *D.surface;
            if (w.chart < 0 || w.chart >= S.r) throw Error(ErrorKind::InvalidInput, "wall chart out of range");
            if (w.dir == V2{0, 1}) {
                QTorusElement g(w.f.order(), S.next(w.chart), w.f.classical());
                for (const auto& [e, c] : w.f.terms()) g.add_term({S.to_next(w.chart, e.m), e.c}, c);
                w.chart = S.next(w.chart);
                w.dir = {1, 0};
                w.f = g;
            }
            if (!(w.dir == V2{1, 0}) && !(w.dir.x > 0 && w.dir.y > 0))
                throw Error(ErrorKind::InvalidInput, "wall direction outside its cone");
        }
        w.f.set_chart(w.chart);
        validate_wall_function(w.f, w.m_hamiltonian());
    }
}

void sort_walls(ScatteringDiagram& D) {
    std::vector<std::pair<std::string, Wall>> keyed;
    for (auto& w : D.walls) keyed.emplace_back(wall_key(w), std::move(w));
    std::stable_sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) {
        const Wall& a = x.second;
        const Wall& b = y.second;
        if (a.chart != b.chart) return a.chart < b.chart;
        if (a.dir != b.dir) return angle_less(a.dir, b.dir);
        if (a.orient != b.orient) return a.orient < b.orient;
        if (a.added != b.added) return a.added < b.added;
        return x.first < y.first;
    });
    D.walls.clear();
    for (auto& [k, w] : keyed) D.walls.push_back(std::move(w));
}

std::vector<size_t> arc_walls(const ScatteringDiagram& D, const V2& from, const V2& to) {
    std::vector<size_t> out;
    bool full = same_ray(from, to);
    for (size_t i = 0; i < D.walls.size(); ++i) {
        const V2& d = D.walls[i].dir;
        if (same_ray(d, from) || same_ray(d, to)) throw Error(ErrorKind::Degenerate, "arc endpoint on a wall");
        if (full || rel_less(from, d, to)) out.push_back(i);
    }
    std::stable_sort(out.begin(), out.end(),
                     [&](size_t a, size_t b) { return rel_less(from, D.walls[a].dir, D.walls[b].dir); });
    return out;
}

QTorusElement path_ordered_product(const ScatteringDiagram& D, const V2& from, const V2& to,
                                   const QTorusElement& elem, bool anticlockwise) {
    std::vector<size_t> idx = anticlockwise ? arc_walls(D, from, to) : arc_walls(D, to, from);
    if (!anticlockwise) std::reverse(idx.begin(), idx.end());
    QTorusElement cur = elem;
    for (size_t i : idx) {
        const Wall& w = D.walls[i];
        V2 v{-w.dir.y, w.dir.x};
        if (!anticlockwise) v = -v;
        cur = wallcross_apply(w.f, w.m_hamiltonian(), cur, crossing_sign(w, v));
    }
    return cur;
}

QTorusElement loop_product(const ScatteringDiagram& D, const QTorusElement& elem) {
    std::vector<size_t> idx(D.walls.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    auto key = [&](size_t i) {
        const V2& d = D.walls[i].dir;
        return d.y == 0 && d.x > 0;  // the positive x-axis comes last
    };
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        bool ka = key(a), kb = key(b);
        if (ka != kb) return kb;
        if (ka) return false;
        return angle_less(D.walls[a].dir, D.walls[b].dir);
    });
    QTorusElement cur = elem;
    for (size_t i : idx) {
        const Wall& w = D.walls[i];
        cur = wallcross_apply(w.f, w.m_hamiltonian(), cur, crossing_sign(w, V2{-w.dir.y, w.dir.x}));
    }
    return cur;
}

namespace {

struct LoopDefect {
    std::vector<QTorusElement> defects;  // theta(z^{e_i}) - z^{e_i}
};

LoopDefect loop_defect(const ScatteringDiagram& D, int order, bool classical) {
    LoopDefect out;
    for (V2 e : {V2{1, 0}, V2{0, 1}}) {
        QTorusElement z = QTorusElement::monomial({e, ClassVec(D.rank(), 0)}, QScalar(1), order, 0, classical);
        out.defects.push_back(loop_product(D, z) - z);
    }
    return out;
}

bool diagram_classical(const ScatteringDiagram& D) { return !D.walls.empty() && D.walls.front().f.classical(); }

}  // namespace

LoopReport check_loop_identity(const ScatteringDiagram& D, int N) {
    LoopReport rep;
    LoopDefect ld = loop_defect(D, N, diagram_classical(D));
    int low = INT_MAX;
    for (const auto& d : ld.defects)
        for (const auto& [e, c] : d.terms()) low = std::min(low, e.degree());
    if (low == INT_MAX) return rep;
    rep.pass = false;
    rep.degree = low;
    for (size_t i = 0; i < ld.defects.size(); ++i)
        for (const auto& [e, c] : ld.defects[i].terms()) {
            if (e.degree() != low) continue;
            QTorusElement t = QTorusElement::monomial(e, c, N);
            rep.terms.push_back("z^e" + std::to_string(i + 1) + ": " + t.str(D.labels));
        }
    return rep;
}

ScatteringDiagram complete(const ScatteringDiagram& Din, int N) {
    if (Din.surface) throw Error(ErrorKind::InvalidInput, "completion runs on the smooth model R^2");
    ScatteringDiagram D = Din;
    D.order = N;
    bool classical = diagram_classical(D);
    for (auto& w : D.walls) {
        w.f = w.f.truncated(N);
        if (w.f.min_positive_degree() < 1) throw Error(ErrorKind::UngradedInput, "nonconstant wall term of degree 0");
    }
    normalize_walls(D);
    size_t rank = D.rank();
    std::map<V2, size_t> added_at;  // direction -> wall index
    for (size_t i = 0; i < D.walls.size(); ++i)
        if (D.walls[i].added) added_at[D.walls[i].dir] = i;
    const V2 gens[2] = {{1, 0}, {0, 1}};
    for (int k = 1; k < N; ++k) {
        LoopDefect ld = loop_defect(D, k + 1, classical);
        // increments per outgoing direction
        std::map<V2, QTorusElement> inc;
        std::map<Exp, QScalar> solved;
        for (int i = 0; i < 2; ++i) {
            for (const auto& [e, a] : ld.defects[static_cast<size_t>(i)].terms()) {
                if (e.degree() < k) throw Error(ErrorKind::Internal, "loop defect below the current order");
                if (e.degree() > k) continue;
                Exp s{e.m - gens[i], e.c};
                if (s.m.is_zero()) throw Error(ErrorKind::Internal, "central loop defect");
                V2 md = primitive(-s.m);
                long l = multiple_of(s.m, md);
                long n = det(md, gens[i]);
                if (n == 0) continue;
                QScalar K = classical ? QScalar(n)
                                      : (QScalar::q_pow(static_cast<int>(l * n)) - QScalar(1)) /
                                            (QScalar::q_pow(static_cast<int>(l)) - QScalar(1));
                QScalar twist = classical ? QScalar(1) : QScalar::s_pow(static_cast<int>(det(gens[i], s.m)));
                QScalar c = a / (K * twist);
                auto it = solved.find(s);
                if (it != solved.end()) {
                    if (it->second != c) throw Error(ErrorKind::Internal, "inconsistent defect extraction");
                    continue;
                }
                solved.emplace(s, c);
                auto [jt, fresh] = inc.try_emplace(md, QTorusElement(N, 0, classical));
                jt->second.add_term(s, c);
            }
        }
        for (auto& [md, g] : inc) {
            QTorusElement one = QTorusElement::one(N, rank, 0, classical);
            auto it = added_at.find(md);
            if (it == added_at.end()) {
                Wall w;
                w.dir = md;
                w.orient = WallOrientation::Outgoing;
                w.f = one + g;
                w.added = true;
                added_at[md] = D.walls.size();
                D.walls.push_back(w);
            } else {
                Wall& w = D.walls[it->second];
                w.f = w.f * (one + g);
            }
        }
        if (!inc.empty()) {
            LoopDefect check = loop_defect(D, k + 1, classical);
            for (const auto& d : check.defects)
                if (!d.is_zero()) throw Error(ErrorKind::Internal, "completion failed to cancel the loop defect");
        }
    }
    sort_walls(D);
    return D;
}

ScatteringDiagram classical_limit(const ScatteringDiagram& D) {
    ScatteringDiagram C = D;
    for (auto& w : C.walls) w.f = classical_limit(w.f);
    return C;
}

std::vector<SegmentHit> segment_wall_hits(const ScatteringDiagram& D, int chart, const mpq_class& pa,
                                          const mpq_class& pb, const mpq_class& ua, const mpq_class& ub,
                                          const std::optional<mpq_class>& tmax) {
    std::vector<SegmentHit> out;
    for (size_t i = 0; i < D.walls.size(); ++i) {
        const Wall& w = D.walls[i];
        if (w.chart != chart || w.on_ray()) continue;
        mpq_class duw = ua * w.dir.y - ub * w.dir.x;  // <u, w>
        if (duw == 0) continue;
        mpq_class dpw = pa * w.dir.y - pb * w.dir.x;  // <P, w>
        mpq_class t = -dpw / duw;
        if (t <= 0) continue;
        if (tmax && t >= *tmax) continue;
        mpq_class xa = pa + t * ua, xb = pb + t * ub;
        if (xa == 0 && xb == 0) throw Error(ErrorKind::Degenerate, "segment through the origin");
        if (xa * w.dir.x + xb * w.dir.y <= 0) continue;
        out.push_back({i, t});
    }
    std::stable_sort(out.begin(), out.end(), [](const SegmentHit& a, const SegmentHit& b) { return a.t < b.t; });
    return out;
}

QTorusElement cone_path_product(const ScatteringDiagram& D, int chart, const mpq_class& a0, const mpq_class& b0,
                                const mpq_class& a1, const mpq_class& b1, const QTorusElement& elem) {
    mpq_class ua = a1 - a0, ub = b1 - b0;
    QTorusElement cur = elem;
    for (const auto& h : segment_wall_hits(D, chart, a0, b0, ua, ub, mpq_class(1))) {
        const Wall& w = D.walls[h.wall];
        cur = wallcross_apply(w.f, w.m_hamiltonian(), cur, crossing_sign(w, ua, ub));
    }
    return cur;
}

// ---------------------------------------------------------------- JSON

nlohmann::json to_json(const ScatteringDiagram& D) {
    nlohmann::json walls = nlohmann::json::array();
    for (const auto& w : D.walls) {
        nlohmann::json jw = {{"direction", {w.dir.x, w.dir.y}},
                             {"chart", w.chart},
                             {"orientation", w.orient == WallOrientation::Outgoing ? "outgoing" : "ingoing"},
                             {"f", to_json(w.f, D.labels)}};
        if (w.added) jw["added"] = true;
        walls.push_back(jw);
    }
    nlohmann::json j = {{"order", D.order}, {"walls", walls}};
    if (!D.degree_weights.empty()) j["grading"] = "anticanonical";
    j["surface"] = D.surface ? to_json(*D.surface) : nlohmann::json();
    if (!D.surface) j["classes"] = D.labels;
    return j;
}

ScatteringDiagram diagram_from_json(const nlohmann::json& j) {
    ScatteringDiagram D;
    try {
        D.order = j.at("order").get<int>();
        if (D.order < 1) throw Error(ErrorKind::InvalidInput, "order must be at least 1");
        if (j.contains("surface") && !j.at("surface").is_null()) {
            D.surface = surface_from_json(j.at("surface"));
            D.labels = D.surface->labels;
        } else {
            D.labels = j.value("classes", std::vector<std::string>{});
        }
        for (const auto& jw : j.value("walls", nlohmann::json::array())) {
            Wall w;
            w.dir = {jw.at("direction").at(0).get<long>(), jw.at("direction").at(1).get<long>()};
            w.chart = jw.value("chart", 0);
            std::string o = jw.value("orientation", "outgoing");
            if (o != "outgoing" && o != "ingoing") throw Error(ErrorKind::Parse, "bad orientation " + o);
            w.orient = o == "outgoing" ? WallOrientation::Outgoing : WallOrientation::Ingoing;
            w.added = jw.value("added", false);
            w.f = qtorus_from_json(jw.at("f"), D.labels, D.order);
            w.f.set_chart(w.chart);
            D.walls.push_back(std::move(w));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("diagram: ") + e.what());
    }
    normalize_walls(D);
    std::string grading = j.value("grading", "sum");
    if (grading == "anticanonical")
        use_anticanonical_grading(D);
    else if (grading != "sum")
        throw Error(ErrorKind::InvalidInput, "grading must be sum or anticanonical, got " + grading);
    return D;
}

void use_anticanonical_grading(ScatteringDiagram& D) {
    if (!D.surface) throw Error(ErrorKind::InvalidInput, "anticanonical grading needs a surface");
    D.degree_weights = anticanonical_weights(*D.surface);
    DegreeGrading g(D.degree_weights);
    for (auto& w : D.walls) {
        QTorusElement f(D.order, w.chart, w.f.classical());
        for (const auto& [e, c] : w.f.terms()) f.add_term(e, c);
        w.f = f;
    }
    D.walls.erase(std::remove_if(D.walls.begin(), D.walls.end(), [](const Wall& w) { return w.f.size() <= 1; }),
                  D.walls.end());
}

}  // namespace qs
