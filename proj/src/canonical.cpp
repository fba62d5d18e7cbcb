// canonical.cpp - toric-model seeds, completion on R^2 and the pull-back to B
#include "qscatter/canonical.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace qs {

std::vector<std::string> Seed::class_labels() const {
    std::vector<std::string> out;
    for (const auto& b : blowups) out.push_back(b.label);
    return out;
}

namespace {

V2 v2_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::Parse, "vector must be [a, b]");
    return {j.at(0).get<long>(), j.at(1).get<long>()};
}

bool same_ray(const V2& a, const V2& b) { return det(a, b) == 0 && a.x * b.x + a.y * b.y > 0; }

}  // namespace

Seed seed_from_json(const nlohmann::json& j) {
    Seed s;
    try {
        std::vector<V2> vecs;
        for (const auto& v : j.value("seed_vectors", nlohmann::json::array())) vecs.push_back(v2_from_json(v));
        std::vector<Blowup> given;
        for (const auto& b : j.value("blowups", nlohmann::json::array()))
            given.push_back({v2_from_json(b.at("dir")), b.at("class").get<std::string>()});
        if (vecs.empty()) {
            s.blowups = given;
        } else {
            if (!given.empty() && given.size() != vecs.size())
                throw Error(ErrorKind::InvalidInput, "blowups and seed_vectors differ in length");
            for (size_t i = 0; i < vecs.size(); ++i) {
                if (!given.empty() && given[i].dir != vecs[i])
                    throw Error(ErrorKind::InvalidInput, "blowup direction does not match its seed vector");
                s.blowups.push_back({vecs[i], given.empty() ? "E" + std::to_string(i + 1) : given[i].label});
            }
        }
        for (const auto& v : j.value("extra_rays", nlohmann::json::array())) s.extra_rays.push_back(v2_from_json(v));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("seed: ") + e.what());
    }
    std::set<std::string> seen;
    for (const auto& b : s.blowups) {
        if (!is_primitive(b.dir)) throw Error(ErrorKind::NonPrimitive, "seed vector not primitive");
        if (!seen.insert(b.label).second) throw Error(ErrorKind::InvalidInput, "duplicate class label " + b.label);
    }
    for (const auto& v : s.extra_rays)
        if (!is_primitive(v)) throw Error(ErrorKind::NonPrimitive, "extra ray not primitive");
    return s;
}

nlohmann::json to_json(const Seed& s) {
    nlohmann::json vecs = nlohmann::json::array(), bl = nlohmann::json::array(), ex = nlohmann::json::array();
    for (const auto& b : s.blowups) {
        vecs.push_back({b.dir.x, b.dir.y});
        bl.push_back({{"dir", {b.dir.x, b.dir.y}}, {"class", b.label}});
    }
    for (const auto& v : s.extra_rays) ex.push_back({v.x, v.y});
    return {{"seed_vectors", vecs}, {"blowups", bl}, {"extra_rays", ex}};
}

ScatteringDiagram build_seed_diagram(const Seed& seed, int N) {
    ScatteringDiagram D;
    D.labels = seed.class_labels();
    D.order = N;
    size_t rank = D.labels.size();
    std::vector<V2> dirs;
    std::map<V2, QTorusElement> f;
    for (size_t i = 0; i < seed.blowups.size(); ++i) {
        const V2& m = seed.blowups[i].dir;
        if (!is_primitive(m)) throw Error(ErrorKind::NonPrimitive, "seed vector not primitive");
        ClassVec c(rank, 0);
        c[i] = 1;
        QTorusElement factor = QTorusElement::one(N, rank);
        factor.add_term({-m, c}, QScalar::s_pow(-1));
        auto it = f.find(m);
        if (it == f.end()) {
            dirs.push_back(m);
            f.emplace(m, factor);
        } else {
            it->second = it->second * factor;
        }
    }
    for (const V2& m : dirs) {
        Wall in;
        in.dir = -m;
        in.orient = WallOrientation::Ingoing;
        in.f = f.at(m);
        Wall out = in;
        out.dir = m;
        out.orient = WallOrientation::Outgoing;
        D.walls.push_back(in);
        D.walls.push_back(out);
    }
    normalize_walls(D);
    sort_walls(D);
    return D;
}

namespace {

std::vector<V2> seed_fan(const Seed& seed) {
    std::vector<V2> fan;
    auto add = [&](const V2& v) {
        for (const auto& w : fan)
            if (same_ray(v, w)) return;
        fan.push_back(v);
    };
    for (const auto& b : seed.blowups) add(-b.dir);
    for (const auto& v : seed.extra_rays) add(v);
    std::sort(fan.begin(), fan.end(), angle_less);
    if (fan.size() < 3) throw Error(ErrorKind::InvalidInput, "toric model fan needs at least three rays");
    for (size_t j = 0; j < fan.size(); ++j)
        if (det(fan[j], fan[(j + 1) % fan.size()]) != 1)
            throw Error(ErrorKind::InvalidInput, "toric model fan is not smooth and complete");
    return fan;
}

int fan_ray_of(const std::vector<V2>& fan, const V2& v) {
    for (size_t j = 0; j < fan.size(); ++j)
        if (same_ray(fan[j], v)) return static_cast<int>(j);
    return -1;
}

int fan_cone_of(const std::vector<V2>& fan, const V2& v) {
    for (size_t j = 0; j < fan.size(); ++j) {
        const V2& a = fan[j];
        const V2& b = fan[(j + 1) % fan.size()];
        if (det(a, v) > 0 && det(v, b) > 0) return static_cast<int>(j);
    }
    throw Error(ErrorKind::Internal, "direction outside every cone of the fan");
}

// nu^{-1} on cone j: t = a fan_j + b fan_{j+1}
V2 nu_inverse(const std::vector<V2>& fan, int j, const V2& t) {
    const V2& u = fan[static_cast<size_t>(j)];
    const V2& w = fan[(static_cast<size_t>(j) + 1) % fan.size()];
    return {det(t, w), det(u, t)};
}

}  // namespace

TropicalSurface surface_from_seed(const Seed& seed) {
    std::vector<V2> fan = seed_fan(seed);
    int r = static_cast<int>(fan.size());
    std::vector<std::string> labels;
    for (int j = 0; j < r; ++j) labels.push_back("D" + std::to_string(j + 1));
    for (const auto& b : seed.blowups) labels.push_back(b.label);
    std::vector<int> selfint;
    std::vector<ClassVec> kinks;
    std::vector<std::vector<std::string>> exc(static_cast<size_t>(r));
    for (const auto& b : seed.blowups) exc[static_cast<size_t>(fan_ray_of(fan, -b.dir))].push_back(b.label);
    for (int j = 0; j < r; ++j) {
        const V2& prev = fan[static_cast<size_t>((j + r - 1) % r)];
        const V2& next = fan[static_cast<size_t>((j + 1) % r)];
        long dbar = -det(prev, next);
        selfint.push_back(static_cast<int>(dbar) - static_cast<int>(exc[static_cast<size_t>(j)].size()));
        ClassVec k(labels.size(), 0);
        k[static_cast<size_t>(j)] = 1;
        kinks.push_back(k);
    }
    TropicalSurface S = build_surface(selfint, kinks, labels, exc);
    S.fan = fan;
    return S;
}

namespace {

// Writes every class of a wall as a combination of its minimal exponents.
struct WallBasis {
    std::vector<Exp> gens;
    std::map<Exp, std::vector<int>> coords;
};

bool decompose(const Exp& e, const std::vector<Exp>& gens, size_t from, std::vector<int>& k) {
    if (e.m.is_zero() && std::all_of(e.c.begin(), e.c.end(), [](int x) { return x == 0; })) return true;
    for (size_t i = from; i < gens.size(); ++i) {
        Exp rest{e.m - gens[i].m, class_add(e.c, gens[i].c, -1)};
        if (!class_effective(rest.c)) continue;
        ++k[i];
        if (decompose(rest, gens, i, k)) return true;
        --k[i];
    }
    return false;
}

WallBasis wall_basis(const QTorusElement& f) {
    std::vector<Exp> terms;
    for (const auto& [e, c] : f.terms())
        if (!e.m.is_zero()) terms.push_back(e);
    std::sort(terms.begin(), terms.end(), [](const Exp& a, const Exp& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return a < b;
    });
    WallBasis wb;
    for (const auto& e : terms) {
        std::vector<int> k(wb.gens.size(), 0);
        if (decompose(e, wb.gens, 0, k)) {
            wb.coords[e] = k;
            continue;
        }
        wb.gens.push_back(e);
        for (auto& [x, v] : wb.coords) v.push_back(0);
        std::vector<int> unit(wb.gens.size(), 0);
        unit.back() = 1;
        wb.coords[e] = unit;
    }
    for (auto& [x, v] : wb.coords) v.resize(wb.gens.size(), 0);
    return wb;
}

}  // namespace

ScatteringDiagram canonical_diagram(const Seed& seed, int N, LabelMode mode) {
    TropicalSurface S = surface_from_seed(seed);
    const std::vector<V2>& fan = *S.fan;
    ScatteringDiagram R = complete(build_seed_diagram(seed, N), N);
    size_t nd = static_cast<size_t>(S.r);
    size_t rank = S.labels.size();

    // pull back wall by wall, merging walls that share a support on B
    std::map<std::pair<int, V2>, Wall> merged;
    std::vector<std::pair<int, V2>> order;
    for (const auto& w : R.walls) {
        int ray = fan_ray_of(fan, w.dir);
        Wall b;
        b.orient = WallOrientation::Outgoing;
        b.added = w.added;
        if (ray >= 0) {
            b.chart = ray;
            b.dir = {1, 0};
        } else {
            b.chart = fan_cone_of(fan, w.dir);
            b.dir = nu_inverse(fan, b.chart, w.dir);
        }
        b.f = QTorusElement(N, b.chart);
        for (const auto& [e, c] : w.f.terms()) {
            ClassVec cls(rank, 0);
            for (size_t i = 0; i < e.c.size(); ++i) cls[nd + i] = e.c[i];
            V2 t;
            if (ray >= 0) {
                long l = multiple_of(e.m, fan[static_cast<size_t>(ray)]);
                // ingoing factors 1 + q^{-1/2} z^{-E} X become 1 + q^{-1/2} z^{E} X^{-1}
                t = {w.orient == WallOrientation::Ingoing ? -l : l, 0};
            } else {
                t = nu_inverse(fan, b.chart, e.m);
            }
            b.f.add_term({t, cls}, c);
        }
        auto key = std::make_pair(b.chart, b.dir);
        auto it = merged.find(key);
        if (it == merged.end()) {
            merged.emplace(key, b);
            order.push_back(key);
        } else {
            it->second.f = it->second.f * b.f;
            it->second.added = it->second.added && b.added;
        }
    }

    ScatteringDiagram D;
    D.order = N;
    for (const auto& k : order) D.walls.push_back(merged.at(k));
    D.labels = S.labels;
    D.surface = S;
    sort_walls(D);
    if (mode == LabelMode::Keep) {
        normalize_walls(D);
        return D;
    }

    // fresh labels: one class per minimal exponent of each wall
    std::vector<std::string> labels(S.labels.begin(), S.labels.begin() + static_cast<long>(nd));
    std::vector<std::vector<std::string>> exc(nd);
    std::vector<std::pair<size_t, std::vector<long>>> rows;  // label index, intersections with D_j
    for (auto& w : D.walls) {
        WallBasis wb = wall_basis(w.f);
        size_t first = labels.size();
        for (size_t g = 0; g < wb.gens.size(); ++g) {
            labels.push_back("E" + std::to_string(labels.size() - nd + 1));
            // a curve with tangency l (a v_j + b v_{j+1}) meets D_j, D_{j+1} with multiplicities la, lb
            const V2& t = wb.gens[g].m;
            std::vector<long> row(nd, 0);
            row[static_cast<size_t>(w.chart)] += -t.x;
            row[static_cast<size_t>(S.next(w.chart))] += -t.y;
            rows.emplace_back(labels.size() - 1, row);
            if (w.on_ray()) exc[static_cast<size_t>(w.chart)].push_back(labels.back());
        }
        QTorusElement g(N, w.chart);
        for (const auto& [e, c] : w.f.terms()) {
            ClassVec cls(first + wb.gens.size(), 0);
            if (!e.m.is_zero()) {
                const auto& k = wb.coords.at(e);
                for (size_t i = 0; i < k.size(); ++i) cls[first + i] = k[i];
            }
            g.add_term({e.m, cls}, c);
        }
        w.f = g;
    }
    for (auto& w : D.walls) {
        QTorusElement g(N, w.chart);
        for (const auto& [e, c] : w.f.terms()) {
            ClassVec cls = e.c;
            cls.resize(labels.size(), 0);
            g.add_term({e.m, cls}, c);
        }
        w.f = g;
    }
    std::vector<ClassVec> kinks;
    for (size_t j = 0; j < nd; ++j) {
        ClassVec k(labels.size(), 0);
        k[j] = 1;
        kinks.push_back(k);
    }
    TropicalSurface F = build_surface(S.selfint, kinks, labels, exc);
    F.fan = S.fan;
    for (const auto& [i, row] : rows) F.intersections[i] = row;
    D.surface = F;
    D.labels = labels;
    normalize_walls(D);
    sort_walls(D);
    return D;
}

// ---------------------------------------------------------------- rho presentation

namespace {

QTorusElement to_prev_chart(const TropicalSurface& S, const QTorusElement& f, int ray) {
    // functions of X: tangents (l, 0) in chart ray become (0, l) in chart ray-1
    QTorusElement g(f.order(), S.prev(ray), f.classical());
    for (const auto& [e, c] : f.terms()) g.add_term({{e.m.y, e.m.x}, e.c}, c);
    return g;
}

std::string x_poly_str(const QTorusElement& a, const std::vector<std::string>& labels, bool second) {
    if (a.is_zero()) return "0";
    std::string out;
    for (const auto& [e, c] : a.terms()) {
        long k = second ? e.m.y : e.m.x;
        std::string cs = c.str();
        bool compound = cs.find(' ') != std::string::npos;
        std::string cls;
        for (size_t i = 0; i < e.c.size(); ++i) {
            if (e.c[i] == 0) continue;
            if (!cls.empty()) cls += "+";
            if (e.c[i] != 1) cls += std::to_string(e.c[i]);
            cls += labels.at(i);
        }
        std::vector<std::string> parts;
        if (!c.is_one() || (cls.empty() && k == 0)) parts.push_back(compound ? "(" + cs + ")" : cs);
        if (!cls.empty()) parts.push_back("z^{" + cls + "}");
        if (k == 1) parts.push_back("X");
        if (k != 0 && k != 1) parts.push_back("X^{" + std::to_string(k) + "}");
        std::string t;
        for (size_t i = 0; i < parts.size(); ++i) t += (i ? "*" : "") + parts[i];
        if (!out.empty()) out += " + ";
        out += t;
    }
    return out;
}

}  // namespace

RhoPresentation rho_presentation(const ScatteringDiagram& D, int ray) {
    if (!D.surface) throw Error(ErrorKind::InvalidInput, "rho presentation needs a surface");
    const TropicalSurface& S = *D.surface;
    if (ray < 0 || ray >= S.r) throw Error(ErrorKind::InvalidInput, "not a ray of the fan");
    int N = D.order;
    size_t rank = D.rank();
    int d = S.selfint[static_cast<size_t>(ray)];
    const ClassVec& kappa = S.kinks[static_cast<size_t>(ray)];
    int jm = S.prev(ray);

    RhoPresentation P;
    P.ray = ray;
    P.selfint = d;
    P.f_out = QTorusElement::one(N, rank, ray);
    P.f_in = QTorusElement::one(N, rank, ray);
    for (const auto& w : D.walls) {
        if (w.chart != ray || !w.on_ray()) continue;
        QTorusElement f = w.f.truncated(N);
        f.set_chart(ray);
        if (w.orient == WallOrientation::Outgoing)
            P.f_out = P.f_out * f;
        else
            P.f_in = P.f_in * f;
    }
    const V2 ex{1, 0};
    auto mono = [&](const V2& m, const ClassVec& c, const QScalar& k, int chart) {
        return QTorusElement::monomial({m, c}, k, N, chart);
    };
    ClassVec zero(rank, 0);

    // sigma_+ side
    QTorusElement Fp = q_shift(P.f_out, ex, -1) * P.f_in;
    QTorusElement Fm = P.f_out * q_shift(P.f_in, ex, 1);
    QTorusElement rhs_pm = mono({-d, 0}, kappa, QScalar::s_pow(d), ray) * Fp;
    QTorusElement rhs_mp = mono({-d, 0}, kappa, QScalar::s_pow(-d), ray) * Fm;

    std::vector<std::string> fails;
    {
        QTorusElement X = mono({1, 0}, zero, 1, ray), Xp = mono({0, 1}, zero, 1, ray);
        QTorusElement Xm = mono({-d, -1}, kappa, 1, ray) * Fp;
        if (X * Xp != (Xp * X).scaled(QScalar::q_pow(1))) fails.push_back("psi+: X X+ = q X+ X");
        if (X * Xm != (Xm * X).scaled(QScalar::q_pow(-1))) fails.push_back("psi+: X X- = q^{-1} X- X");
        if (Xp * Xm != rhs_pm) fails.push_back("psi+: X+ X-");
        if (Xm * Xp != rhs_mp) fails.push_back("psi+: X- X+");
    }
    {
        QTorusElement X = mono({0, 1}, zero, 1, jm), Xm = mono({1, 0}, zero, 1, jm);
        QTorusElement Fpm = to_prev_chart(S, q_shift(P.f_in, ex, 1), ray) * to_prev_chart(S, P.f_out, ray);
        QTorusElement Xp = mono({-1, -d}, kappa, 1, jm) * Fpm;
        QTorusElement pm = mono({0, -d}, kappa, QScalar::s_pow(d), jm) * to_prev_chart(S, Fp, ray);
        QTorusElement mp = mono({0, -d}, kappa, QScalar::s_pow(-d), jm) * to_prev_chart(S, Fm, ray);
        if (X * Xp != (Xp * X).scaled(QScalar::q_pow(1))) fails.push_back("psi-: X X+ = q X+ X");
        if (X * Xm != (Xm * X).scaled(QScalar::q_pow(-1))) fails.push_back("psi-: X X- = q^{-1} X- X");
        if (Xp * Xm != pm) fails.push_back("psi-: X+ X-");
        if (Xm * Xp != mp) fails.push_back("psi-: X- X+");
    }
    P.verified = fails.empty();
    if (!fails.empty()) P.failure = fails.front();
    P.relations = {"X*X+ = q*X+*X", "X*X- = q^{-1}*X-*X", "X+*X- = " + x_poly_str(rhs_pm, D.labels, false),
                   "X-*X+ = " + x_poly_str(rhs_mp, D.labels, false)};
    return P;
}

nlohmann::json to_json(const RhoPresentation& p, const std::vector<std::string>& labels) {
    return {{"ray", p.ray},
            {"selfint", p.selfint},
            {"f_out", to_json(p.f_out, labels)},
            {"f_in", to_json(p.f_in, labels)},
            {"relations", p.relations},
            {"verified", p.verified}};
}

}  // namespace qs
