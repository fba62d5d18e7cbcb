// affine_base.cpp - charts of B, kink transport, weights and the developing map
#include "qscatter/affine_base.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

namespace qs {

long gcd_content(const V2& v) { return std::gcd(std::labs(v.x), std::labs(v.y)); }

V2 primitive(const V2& v) {
    long g = gcd_content(v);
    if (g == 0) throw Error(ErrorKind::InvalidInput, "zero vector has no primitive direction");
    return {v.x / g, v.y / g};
}

bool is_primitive(const V2& v) { return gcd_content(v) == 1; }

namespace {
int half_plane(const V2& v) { return (v.y > 0 || (v.y == 0 && v.x > 0)) ? 0 : 1; }
}  // namespace

bool angle_less(const V2& a, const V2& b) {
    int ha = half_plane(a), hb = half_plane(b);
    if (ha != hb) return ha < hb;
    return det(a, b) > 0;
}

namespace {
thread_local const std::vector<int>* g_weights = nullptr;
}

int class_degree(const ClassVec& c) {
    if (!g_weights || g_weights->empty()) return std::accumulate(c.begin(), c.end(), 0);
    int d = 0;
    for (size_t i = 0; i < c.size(); ++i) d += c[i] * (i < g_weights->size() ? (*g_weights)[i] : 1);
    return d;
}

DegreeGrading::DegreeGrading(const std::vector<int>& weights) : prev_(g_weights) { g_weights = &weights; }
DegreeGrading::~DegreeGrading() { g_weights = prev_; }

std::vector<int> anticanonical_weights(const TropicalSurface& S) {
    std::vector<int> w;
    for (size_t i = 0; i < S.labels.size(); ++i) {
        long d = 0;
        if (i < S.intersections.size())
            for (long x : S.intersections[i]) d += x;
        if (d < 1)
            throw Error(ErrorKind::InvalidInput, "class " + S.labels[i] + " has no positive anticanonical degree");
        w.push_back(static_cast<int>(d));
    }
    return w;
}

bool class_effective(const ClassVec& c) {
    for (int x : c)
        if (x < 0) return false;
    return true;
}

ClassVec class_add(const ClassVec& a, const ClassVec& b, long scale_b) {
    ClassVec r = a;
    if (r.size() < b.size()) r.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) r[i] += static_cast<int>(scale_b * b[i]);
    return r;
}

int TropicalSurface::label_index(const std::string& name) const {
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == name) return static_cast<int>(i);
    return -1;
}

V2 TropicalSurface::to_next(int j, const V2& v) const {
    long d = selfint[static_cast<size_t>(next(j))];
    return {v.y - d * v.x, -v.x};
}

V2 TropicalSurface::to_prev(int j, const V2& v) const {
    long d = selfint[static_cast<size_t>(j)];
    return {-v.y, v.x - d * v.y};
}

std::array<long, 4> TropicalSurface::transition_matrix(int j) const {
    long d = selfint[static_cast<size_t>(next(j))];
    return {-d, 1, -1, 0};
}

std::array<long, 4> TropicalSurface::monodromy() const {
    std::array<long, 4> m{1, 0, 0, 1};
    for (int j = 0; j < r; ++j) {
        auto t = transition_matrix(j);
        m = {t[0] * m[0] + t[1] * m[2], t[0] * m[1] + t[1] * m[3], t[2] * m[0] + t[3] * m[2],
             t[2] * m[1] + t[3] * m[3]};
    }
    return m;
}

std::vector<long> TropicalSurface::intersect(const ClassVec& beta) const {
    std::vector<long> out(static_cast<size_t>(r), 0);
    for (size_t i = 0; i < beta.size() && i < intersections.size(); ++i)
        for (int j = 0; j < r; ++j) out[static_cast<size_t>(j)] += beta[i] * intersections[i][static_cast<size_t>(j)];
    return out;
}

namespace {

// D_j . D_k for the anticanonical cycle; for r = 1 the node adds 2
long boundary_intersection(const TropicalSurface& S, int j, int k) {
    if (S.r == 1) return S.selfint[0] + 2;
    if (j == k) return S.selfint[static_cast<size_t>(j)];
    if (S.r == 2) return 2;
    if (k == S.next(j) || k == S.prev(j)) return 1;
    return 0;
}

void fill_intersections(TropicalSurface& S) {
    S.intersections.assign(S.labels.size(), std::vector<long>(static_cast<size_t>(S.r), 0));
    for (int j = 0; j < S.r; ++j) {
        const ClassVec& k = S.kinks[static_cast<size_t>(j)];
        int unit = -1, nonzero = 0;
        for (size_t i = 0; i < k.size(); ++i)
            if (k[i] != 0) {
                ++nonzero;
                if (k[i] == 1) unit = static_cast<int>(i);
            }
        if (nonzero == 1 && unit >= 0)
            for (int m = 0; m < S.r; ++m)
                S.intersections[static_cast<size_t>(unit)][static_cast<size_t>(m)] = boundary_intersection(S, j, m);
    }
    for (int j = 0; j < S.r && j < static_cast<int>(S.exceptionals.size()); ++j)
        for (const auto& e : S.exceptionals[static_cast<size_t>(j)]) {
            int i = S.label_index(e);
            if (i < 0) throw Error(ErrorKind::InvalidInput, "unknown exceptional label " + e);
            S.intersections[static_cast<size_t>(i)][static_cast<size_t>(j)] = 1;
        }
}

}  // namespace

TropicalSurface build_surface(const std::vector<int>& selfint, const std::vector<ClassVec>& kinks,
                              const std::vector<std::string>& labels,
                              const std::vector<std::vector<std::string>>& exceptionals) {
    if (selfint.empty()) throw Error(ErrorKind::InvalidInput, "surface needs at least one ray");
    if (kinks.size() != selfint.size()) throw Error(ErrorKind::InvalidInput, "kinks and selfint lengths differ");
    if (!exceptionals.empty() && exceptionals.size() != selfint.size())
        throw Error(ErrorKind::InvalidInput, "exceptionals and selfint lengths differ");
    TropicalSurface S;
    S.r = static_cast<int>(selfint.size());
    S.selfint = selfint;
    S.labels = labels;
    for (const auto& k : kinks) {
        if (k.size() != labels.size()) throw Error(ErrorKind::InvalidInput, "kink has wrong class rank");
        if (!class_effective(k)) throw Error(ErrorKind::InvalidInput, "kink is not effective");
    }
    S.kinks = kinks;
    S.exceptionals = exceptionals.empty() ? std::vector<std::vector<std::string>>(selfint.size()) : exceptionals;
    fill_intersections(S);
    return S;
}

namespace {

// integer basis of {x : x^T A = 0} by unimodular row reduction of [A | I]
std::vector<ClassVec> left_kernel(const std::vector<std::vector<long>>& A, size_t cols) {
    size_t n = A.size();
    std::vector<std::vector<long>> M(n), U(n);
    for (size_t i = 0; i < n; ++i) {
        M[i] = A[i];
        U[i].assign(n, 0);
        U[i][i] = 1;
    }
    size_t row = 0;
    for (size_t c = 0; c < cols && row < n; ++c) {
        for (;;) {
            size_t best = n;
            for (size_t i = row; i < n; ++i)
                if (M[i][c] != 0 && (best == n || std::labs(M[i][c]) < std::labs(M[best][c]))) best = i;
            if (best == n) break;
            std::swap(M[row], M[best]);
            std::swap(U[row], U[best]);
            bool done = true;
            for (size_t i = row + 1; i < n; ++i) {
                long f = M[i][c] / M[row][c];
                if (f != 0) {
                    for (size_t k = 0; k < cols; ++k) M[i][k] -= f * M[row][k];
                    for (size_t k = 0; k < n; ++k) U[i][k] -= f * U[row][k];
                }
                if (M[i][c] != 0) done = false;
            }
            if (done) {
                ++row;
                break;
            }
        }
    }
    std::vector<ClassVec> out;
    for (size_t i = row; i < n; ++i) {
        ClassVec v(n);
        for (size_t k = 0; k < n; ++k) v[k] = static_cast<int>(U[i][k]);
        out.push_back(v);
    }
    return out;
}

}  // namespace

std::vector<ClassVec> class_relations(const TropicalSurface& S) {
    if (!S.relations.empty()) return S.relations;
    size_t n = S.labels.size();
    if (n == 0 || S.intersections.size() != n) return {};
    std::vector<std::vector<long>> A;
    for (size_t i = 0; i < n; ++i) {
        const auto& row = S.intersections[i];
        if (std::all_of(row.begin(), row.end(), [](long x) { return x == 0; })) return {};
        std::vector<long> a(row.begin(), row.end());
        ClassVec unit(n, 0);
        unit[i] = 1;
        a.push_back(class_degree(unit));  // keep the active class degree
        A.push_back(a);
    }
    return left_kernel(A, static_cast<size_t>(S.r) + 1);
}

ClassReducer::ClassReducer(const std::vector<ClassVec>& relations) {
    std::vector<ClassVec> rows;
    for (const auto& r : relations)
        if (std::any_of(r.begin(), r.end(), [](int x) { return x != 0; })) rows.push_back(r);
    std::vector<bool> used(rows.size(), false);
    for (size_t step = 0; step < rows.size(); ++step) {
        // pick a unit entry, preferring later labels
        size_t br = rows.size(), bc = 0;
        for (size_t i = 0; i < rows.size(); ++i) {
            if (used[i]) continue;
            for (size_t c = rows[i].size(); c-- > 0;) {
                if (std::abs(rows[i][c]) != 1) continue;
                if (br == rows.size() || c > bc) br = i, bc = c;
                break;
            }
        }
        if (br == rows.size()) break;
        used[br] = true;
        ClassVec piv = rows[br];
        if (piv[bc] < 0)
            for (auto& x : piv) x = -x;
        for (size_t i = 0; i < rows.size(); ++i) {
            if (i == br || rows[i][bc] == 0) continue;
            rows[i] = class_add(rows[i], piv, -rows[i][bc]);
        }
        for (auto& [c, r] : rows_)
            if (r[bc] != 0) r = class_add(r, piv, -r[bc]);
        rows_.emplace_back(bc, piv);
    }
    for (size_t i = 0; i < rows.size(); ++i)
        if (!used[i] && std::any_of(rows[i].begin(), rows[i].end(), [](int x) { return x != 0; }))
            throw Error(ErrorKind::InvalidInput, "class relations need unit pivots");
}

ClassVec ClassReducer::reduce(const ClassVec& c) const {
    ClassVec out = c;
    for (const auto& [col, row] : rows_)
        if (col < out.size() && out[col] != 0) out = class_add(out, row, -out[col]);
    return out;
}

ChartVector transport_tangent(const TropicalSurface& S, const ChartVector& v, int ray, int direction) {
    ray = ((ray % S.r) + S.r) % S.r;
    if (direction > 0) {
        if (v.chart != S.prev(ray)) throw Error(ErrorKind::ChartMismatch, "vector not adjacent to crossed ray");
        V2 w = S.to_next(v.chart, v.v());
        return {ray, w.x, w.y};
    }
    if (v.chart != ray) throw Error(ErrorKind::ChartMismatch, "vector not adjacent to crossed ray");
    V2 w = S.to_prev(ray, v.v());
    return {S.prev(ray), w.x, w.y};
}

std::pair<ChartVector, ClassVec> transport_monomial(const TropicalSurface& S, const ChartVector& m,
                                                    const ClassVec& beta, int ray, int direction) {
    ChartVector t = transport_tangent(S, m, ray, direction);
    const ClassVec& kappa = S.kinks[static_cast<size_t>(((ray % S.r) + S.r) % S.r)];
    // phi jumps by delta * kappa across the ray, delta measured into the ray's own chart
    long delta = direction > 0 ? t.b : t.a;
    return {t, class_add(beta, kappa, -delta)};
}

V2 psi_coords(const TropicalSurface& S, int j, const ChartVector& v) {
    j = ((j % S.r) + S.r) % S.r;
    if (v.chart == S.prev(j) && (S.r > 1 || v.chart != j)) return v.v();
    if (v.chart == j) {
        long d = S.selfint[static_cast<size_t>(j)];
        return {-v.b, v.a - d * v.b};
    }
    throw Error(ErrorKind::ChartMismatch, "vector not adjacent to psi chart");
}

ChartVector canonical_point(const TropicalSurface& S, const ChartVector& p) {
    if (p.a < 0 || p.b < 0) throw Error(ErrorKind::InvalidInput, "point outside its cone");
    if (p.a == 0 && p.b == 0) return {0, 0, 0};
    if (p.a == 0) return {S.next(p.chart), p.b, 0};
    return p;
}

std::vector<ChartVector> point_representations(const TropicalSurface& S, const ChartVector& p) {
    ChartVector c = canonical_point(S, p);
    if (c.a == 0 && c.b == 0) {
        std::vector<ChartVector> out;
        for (int j = 0; j < S.r; ++j) out.push_back({j, 0, 0});
        return out;
    }
    if (c.b == 0) return {c, {S.prev(c.chart), 0, c.a}};
    return {c};
}

std::vector<long> weight(const TropicalSurface& S, const ChartVector& p) {
    std::vector<long> w(static_cast<size_t>(S.r), 0);
    w[static_cast<size_t>(p.chart)] += p.a;
    w[static_cast<size_t>(S.next(p.chart))] += p.b;
    return w;
}

V2 nu_pushforward(const TropicalSurface& S, const ChartVector& v) {
    if (!S.fan) throw Error(ErrorKind::InvalidInput, "surface has no toric model");
    const auto& f = *S.fan;
    return f[static_cast<size_t>(v.chart)] * v.a + f[static_cast<size_t>(S.next(v.chart))] * v.b;
}

ExitEvent next_exit(const mpq_class& a, const mpq_class& b, const V2& u) {
    ExitEvent ev;
    bool hx = u.x < 0, hy = u.y < 0;
    mpq_class tx, ty;
    if (hx) tx = a / mpq_class(-u.x);
    if (hy) ty = b / mpq_class(-u.y);
    if (!hx && !hy) return ev;
    if (hx && hy && tx == ty) throw Error(ErrorKind::Degenerate, "path through the origin");
    if (hx && (!hy || tx < ty)) {
        ev.kind = ExitEvent::NextRay;
        ev.t = tx;
    } else {
        ev.kind = ExitEvent::PrevRay;
        ev.t = ty;
    }
    if (ev.t == 0) throw Error(ErrorKind::Degenerate, "path leaves its cone at the start point");
    ev.a = a + ev.t * u.x;
    ev.b = b + ev.t * u.y;
    return ev;
}

std::vector<RayCrossing> develop_ray_crossings(const TropicalSurface& S, const DevelopedPoint& Q, const V2& dir,
                                               Orientation orient, int max_crossings) {
    if (dir.is_zero()) throw Error(ErrorKind::InvalidInput, "zero direction");
    if (Q.a == 0 && Q.b == 0) throw Error(ErrorKind::Degenerate, "start point at the origin");
    std::vector<RayCrossing> out;
    DevelopedPoint P = Q;
    V2 u = orient == Orientation::Forward ? dir : -dir;
    for (int step = 0; step < max_crossings; ++step) {
        ExitEvent ev = next_exit(P.a, P.b, u);
        if (ev.kind == ExitEvent::Escape) break;
        RayCrossing c;
        if (ev.kind == ExitEvent::NextRay) {
            c.ray = S.next(P.chart);
            c.point = {c.ray, ev.b, 0, P.winding + (c.ray == 0 ? 1 : 0)};
            c.dir = S.to_next(P.chart, u);
        } else {
            c.ray = P.chart;
            c.point = {S.prev(P.chart), 0, ev.a, P.winding - (c.ray == 0 ? 1 : 0)};
            c.dir = S.to_prev(P.chart, u);
        }
        out.push_back(c);
        P = c.point;
        u = c.dir;
    }
    return out;
}

// ---------------------------------------------------------------- JSON

nlohmann::json class_to_json(const TropicalSurface& S, const ClassVec& c) {
    nlohmann::json j = nlohmann::json::object();
    for (size_t i = 0; i < c.size(); ++i)
        if (c[i] != 0) j[S.labels.at(i)] = c[i];
    return j;
}

ClassVec class_from_json(const TropicalSurface& S, const nlohmann::json& j) {
    ClassVec c = S.zero_class();
    if (j.is_null()) return c;
    if (!j.is_object()) throw Error(ErrorKind::Parse, "class must be an object");
    for (const auto& [k, v] : j.items()) {
        int i = S.label_index(k);
        if (i < 0) throw Error(ErrorKind::Parse, "unknown class label " + k);
        c[static_cast<size_t>(i)] += v.get<int>();
    }
    return c;
}

std::string class_str(const TropicalSurface& S, const ClassVec& c) {
    std::string out;
    for (size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        if (c[i] < 0)
            out += "-";
        else if (!out.empty())
            out += "+";
        if (std::abs(c[i]) != 1) out += std::to_string(std::abs(c[i]));
        out += S.labels.at(i);
    }
    return out.empty() ? "0" : out;
}

nlohmann::json to_json(const TropicalSurface& S) {
    nlohmann::json rays = nlohmann::json::array();
    for (int j = 0; j < S.r; ++j) {
        nlohmann::json r = {{"selfint", S.selfint[static_cast<size_t>(j)]},
                            {"kink", class_to_json(S, S.kinks[static_cast<size_t>(j)])}};
        if (!S.exceptionals[static_cast<size_t>(j)].empty()) r["exceptionals"] = S.exceptionals[static_cast<size_t>(j)];
        rays.push_back(r);
    }
    nlohmann::json j = {{"rays", rays}, {"classes", S.labels}};
    nlohmann::json inter = nlohmann::json::object();
    for (size_t i = 0; i < S.labels.size() && i < S.intersections.size(); ++i) {
        const auto& row = S.intersections[i];
        if (std::any_of(row.begin(), row.end(), [](long x) { return x != 0; })) inter[S.labels[i]] = row;
    }
    j["intersections"] = inter;
    if (!S.relations.empty()) {
        nlohmann::json rel = nlohmann::json::array();
        for (const auto& r : S.relations) rel.push_back(class_to_json(S, r));
        j["relations"] = rel;
    }
    if (S.fan) {
        nlohmann::json f = nlohmann::json::array();
        for (const auto& v : *S.fan) f.push_back({v.x, v.y});
        j["fan"] = f;
    }
    return j;
}

TropicalSurface surface_from_json(const nlohmann::json& j) {
    try {
        std::vector<std::string> labels = j.at("classes").get<std::vector<std::string>>();
        TropicalSurface tmp;
        tmp.labels = labels;
        std::vector<int> selfint;
        std::vector<ClassVec> kinks;
        std::vector<std::vector<std::string>> exc;
        for (const auto& r : j.at("rays")) {
            selfint.push_back(r.at("selfint").get<int>());
            kinks.push_back(class_from_json(tmp, r.value("kink", nlohmann::json::object())));
            exc.push_back(r.value("exceptionals", std::vector<std::string>{}));
        }
        TropicalSurface S = build_surface(selfint, kinks, labels, exc);
        if (j.contains("fan")) {
            std::vector<V2> fan;
            for (const auto& v : j.at("fan")) fan.push_back({v.at(0).get<long>(), v.at(1).get<long>()});
            if (static_cast<int>(fan.size()) != S.r) throw Error(ErrorKind::InvalidInput, "fan has wrong length");
            S.fan = fan;
        }
        if (j.contains("intersections")) {
            for (const auto& [k, v] : j.at("intersections").items()) {
                int i = S.label_index(k);
                if (i < 0) throw Error(ErrorKind::Parse, "unknown class label " + k);
                auto row = v.get<std::vector<long>>();
                if (static_cast<int>(row.size()) != S.r) throw Error(ErrorKind::Parse, "intersection row length");
                S.intersections[static_cast<size_t>(i)] = row;
            }
        }
        for (const auto& r : j.value("relations", nlohmann::json::array())) {
            ClassVec c = class_from_json(S, r);
            if (class_degree(c) != 0) throw Error(ErrorKind::InvalidInput, "class relation changes the degree");
            S.relations.push_back(c);
        }
        return S;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("surface: ") + e.what());
    }
}

}  // namespace qs
