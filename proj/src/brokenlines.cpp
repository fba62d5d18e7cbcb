// brokenlines.cpp - backward enumeration of quantum broken lines and theta products
#include "qscatter/brokenlines.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace qs {

namespace {

bool class_zero(const ClassVec& c) {
    return std::all_of(c.begin(), c.end(), [](int x) { return x == 0; });
}

bool diagram_classical(const ScatteringDiagram& D, const LineOptions& opt) {
    if (opt.classical) return *opt.classical;
    for (const auto& w : D.walls)
        if (w.f.classical()) return true;
    return false;
}

class LineEngine {
public:
    LineEngine(const ScatteringDiagram& D, int N, const LineOptions& opt)
        : D_(D), S_(*D.surface), N_(N), opt_(opt), classical_(diagram_classical(D, opt)) {
        if (!D.surface) throw Error(ErrorKind::InvalidInput, "broken lines need a surface");
        monoid_.resize(D.walls.size());
        for (size_t i = 0; i < D.walls.size(); ++i) monoid_[i] = wall_monoid(D.walls[i]);
        for (int c = 0; c < S_.r; ++c) {
            std::vector<size_t> inner, ray;
            for (size_t i = 0; i < D.walls.size(); ++i) {
                if (D.walls[i].chart != c) continue;
                (D.walls[i].on_ray() ? ray : inner).push_back(i);
            }
            interior_.push_back(inner);
            ray_walls_.push_back(ray);
        }
    }

    bool classical() const { return classical_; }
    const TropicalSurface& surface() const { return S_; }

    // exponents a line of charge p can carry inside each chart, ignoring geometry
    const std::vector<std::set<Exp>>& closure(const ChartVector& p) {
        ChartVector key = canonical_point(S_, p);
        auto it = closures_.find(key);
        if (it != closures_.end()) return it->second;
        std::vector<std::set<Exp>> seen(static_cast<size_t>(S_.r));
        std::vector<std::pair<int, Exp>> todo;
        auto push = [&](int c, const Exp& e) {
            if (e.degree() >= N_ || !class_effective(e.c)) return;
            if (seen[static_cast<size_t>(c)].insert(e).second) todo.emplace_back(c, e);
        };
        if (!(key.a == 0 && key.b == 0))
            for (const auto& rep : point_representations(S_, key)) push(rep.chart, {rep.v(), S_.zero_class()});
        size_t cap = 200000;
        while (!todo.empty()) {
            auto [c, e] = todo.back();
            todo.pop_back();
            if (--cap == 0) throw Error(ErrorKind::Degenerate, "broken line closure does not terminate");
            for (const auto* group : {&interior_[static_cast<size_t>(c)], &ray_walls_[static_cast<size_t>(c)]})
                for (size_t w : *group)
                    for (const auto& s : monoid_[w]) push(c, exp_add(e, s));
            if (e.m.x > 0) {
                auto [m, b] = transport_monomial(S_, {c, e.m.x, e.m.y}, e.c, S_.next(c), +1);
                push(m.chart, {m.v(), b});
            }
            if (e.m.y > 0) {
                auto [m, b] = transport_monomial(S_, {c, e.m.x, e.m.y}, e.c, c, -1);
                push(m.chart, {m.v(), b});
            }
        }
        return closures_.emplace(key, std::move(seen)).first->second;
    }

    std::vector<BrokenLine> lines(const ChartVector& p, const DevelopedPoint& Q) {
        if (Q.chart < 0 || Q.chart >= S_.r) throw Error(ErrorKind::InvalidInput, "endpoint chart out of range");
        if (Q.a <= 0 || Q.b <= 0) throw Error(ErrorKind::Degenerate, "endpoint must lie inside a cone");
        for (size_t w : interior_[static_cast<size_t>(Q.chart)]) {
            const V2& d = D_.walls[w].dir;
            if (Q.a * d.y - Q.b * d.x == 0) throw Error(ErrorKind::Degenerate, "endpoint lies on a wall");
        }
        target_ = canonical_point(S_, p);
        found_.clear();
        if (target_.a == 0 && target_.b == 0) {
            BrokenLine l;
            l.charge = target_;
            l.endpoint = Q;
            l.coeff = 1;
            l.cls = S_.zero_class();
            l.final_tangent = {0, 0};
            l.segments.push_back({Q.chart, Q.a, Q.b, {{0, 0}, S_.zero_class()}, 1});
            return {l};
        }
        Q_ = Q;
        for (const auto& e : closure(p)[static_cast<size_t>(Q.chart)]) {
            if (e.m.is_zero()) continue;
            path_.clear();
            Step st{Q.chart, Q.a, Q.b, e, 1, 0, 0};
            walk(st);
        }
        return found_;
    }

private:
    struct Step {
        int chart;
        mpq_class a, b;
        Exp e;
        QScalar factor;  // bend factor where this segment meets the one nearer Q
        int crossings;
        int bends = 0;
    };
    struct Recorded {
        LineSegment seg;
        QScalar factor;
        int bends;
    };

    std::vector<Exp> wall_monoid(const Wall& w) const {
        std::vector<Exp> gens;
        for (const auto& [e, c] : w.f.terms()) {
            if (e.m.is_zero()) continue;
            if (e.degree() < 1) throw Error(ErrorKind::InvalidInput, "wall term without a positive class");
            gens.push_back(e);
        }
        std::set<Exp> out;
        std::vector<Exp> todo = gens;
        while (!todo.empty()) {
            Exp e = todo.back();
            todo.pop_back();
            if (e.degree() >= N_ || !out.insert(e).second) continue;
            for (const auto& g : gens) todo.push_back(exp_add(e, g));
        }
        return {out.begin(), out.end()};
    }

    // coefficient of z^e in the wall-crossing of z^{e'}
    QScalar bend_factor(size_t w, const Exp& before, const Exp& after, int sign) {
        auto key = std::make_tuple(w, before, sign);
        auto it = crossed_.find(key);
        if (it == crossed_.end()) {
            const Wall& W = D_.walls[w];
            QTorusElement z = QTorusElement::monomial(before, 1, N_, W.chart, classical_);
            it = crossed_.emplace(key, wallcross_apply(W.f, W.m_hamiltonian(), z, sign)).first;
        }
        return it->second.coeff(after);
    }

    // undo the walls in `ws` one at a time, branching over bends
    void unbend(const std::vector<size_t>& ws, size_t i, const Step& st, const std::function<void(const Step&)>& k) {
        if (i == ws.size()) {
            k(st);
            return;
        }
        size_t w = ws[i];
        unbend(ws, i + 1, st, k);
        for (const auto& s : monoid_[w]) {
            Exp before{st.e.m - s.m, class_add(st.e.c, s.c, -1)};
            if (!class_effective(before.c) || before.m.is_zero()) continue;
            const Wall& W = D_.walls[w];
            if (det(W.m_hamiltonian(), before.m) == 0) continue;
            QScalar f = bend_factor(w, before, st.e, crossing_sign(W, -before.m));
            if (f.is_zero()) continue;
            Step nx = st;
            nx.e = before;
            nx.factor = nx.factor * f;
            ++nx.bends;
            unbend(ws, i + 1, nx, k);
        }
    }

    void record(const Step& st) {
        path_.push_back({{st.chart, st.a, st.b, st.e, 1}, st.factor, st.bends});
    }

    void walk(const Step& st) {
        record(st);
        const V2& u = st.e.m;
        ExitEvent ev = next_exit(st.a, st.b, u);
        std::optional<mpq_class> tmax;
        if (ev.kind != ExitEvent::Escape) tmax = ev.t;
        auto hits = segment_wall_hits(D_, st.chart, st.a, st.b, u.x, u.y, tmax);
        if (!hits.empty()) {
            const auto& h = hits.front();
            mpq_class xa = st.a + h.t * u.x, xb = st.b + h.t * u.y;
            Step at{st.chart, xa, xb, st.e, 1, st.crossings, st.bends};
            unbend({h.wall}, 0, at, [&](const Step& nx) { walk(nx); });
        } else if (ev.kind == ExitEvent::Escape) {
            accept(st);
        } else if (st.crossings < opt_.max_crossings) {
            if (ev.kind == ExitEvent::NextRay) {
                int c = S_.next(st.chart);
                auto [m, b] = transport_monomial(S_, {st.chart, u.x, u.y}, st.e.c, c, +1);
                if (class_effective(b)) {
                    Step at{c, ev.b, 0, {m.v(), b}, 1, st.crossings + 1, st.bends};
                    unbend(ray_walls_[static_cast<size_t>(c)], 0, at, [&](const Step& nx) { walk(nx); });
                }
            } else {
                int c = st.chart;
                Step at{c, ev.a, 0, st.e, 1, st.crossings + 1, st.bends};
                unbend(ray_walls_[static_cast<size_t>(c)], 0, at, [&](const Step& nx) {
                    auto [m, b] = transport_monomial(S_, {c, nx.e.m.x, nx.e.m.y}, nx.e.c, c, -1);
                    if (!class_effective(b)) return;
                    Step moved{S_.prev(c), 0, nx.a, {m.v(), b}, nx.factor, nx.crossings, nx.bends};
                    walk(moved);
                });
            }
        }
        path_.pop_back();
    }

    void accept(const Step& st) {
        if (!class_zero(st.e.c) || st.e.m.x < 0 || st.e.m.y < 0) return;
        if (!(canonical_point(S_, {st.chart, st.e.m.x, st.e.m.y}) == target_)) return;
        BrokenLine l;
        l.charge = target_;
        l.endpoint = Q_;
        // path_ runs from Q backwards; flip it and accumulate the bend factors
        QScalar c = 1;
        for (size_t i = path_.size(); i-- > 0;) {
            LineSegment seg = path_[i].seg;
            seg.coeff = c;
            c = c * path_[i].factor;
            l.segments.push_back(seg);
        }
        l.bends = path_.back().bends;
        const LineSegment& last = l.segments.back();
        l.coeff = last.coeff;
        l.cls = last.mono.c;
        l.final_tangent = last.mono.m;
        found_.push_back(l);
    }

    const ScatteringDiagram& D_;
    const TropicalSurface& S_;
    int N_;
    LineOptions opt_;
    bool classical_;
    std::vector<std::vector<Exp>> monoid_;
    std::vector<std::vector<size_t>> interior_, ray_walls_;
    std::map<ChartVector, std::vector<std::set<Exp>>> closures_;
    std::map<std::tuple<size_t, Exp, int>, QTorusElement> crossed_;
    ChartVector target_;
    DevelopedPoint Q_;
    std::vector<Recorded> path_;
    std::vector<BrokenLine> found_;
};

}  // namespace

std::vector<BrokenLine> enumerate_broken_lines(const ScatteringDiagram& D, const ChartVector& p,
                                               const DevelopedPoint& Q, int N, const LineOptions& opt) {
    DegreeGrading grading(D.degree_weights);
    LineEngine eng(D, N, opt);
    return eng.lines(p, Q);
}

namespace {

QTorusElement lines_to_lift(const std::vector<BrokenLine>& ls, int N, int chart, bool classical) {
    QTorusElement out(N, chart, classical);
    for (const auto& l : ls) out.add_term({l.final_tangent, l.cls}, l.coeff);
    return out;
}

}  // namespace

QTorusElement lift(const ScatteringDiagram& D, const DevelopedPoint& Q, const ChartVector& p, int N,
                   const LineOptions& opt) {
    DegreeGrading grading(D.degree_weights);
    LineEngine eng(D, N, opt);
    return lines_to_lift(eng.lines(p, Q), N, Q.chart, eng.classical());
}

DevelopedPoint point_near(const ScatteringDiagram& D, const ChartVector& p, int retry) {
    if (!D.surface) throw Error(ErrorKind::InvalidInput, "point_near needs a surface");
    ChartVector c = canonical_point(*D.surface, p);
    V2 off{3 + 2 * retry, 7 + retry};
    std::vector<V2> dirs;
    for (const auto& w : D.walls)
        if (w.chart == c.chart && !w.on_ray()) dirs.push_back(w.dir);
    mpq_class eps(1, 8);
    for (int it = 0; it < 64; ++it, eps /= 2) {
        mpq_class a = c.a + eps * off.x, b = c.b + eps * off.y;
        bool ok = true;
        for (const auto& w : dirs) {
            mpq_class dz = a * w.y - b * w.x;
            long dp = c.a * w.y - c.b * w.x;
            if (dz == 0 || (dp > 0 && dz < 0) || (dp < 0 && dz > 0)) {
                ok = false;
                break;
            }
        }
        if (ok) return {c.chart, a, b, 0};
    }
    throw Error(ErrorKind::Degenerate, "no generic point near " + std::to_string(c.a) + "," + std::to_string(c.b));
}

StructureRow structure_constants(const ScatteringDiagram& D, const ChartVector& p1, const ChartVector& p2, int N,
                                 const LineOptions& opt) {
    DegreeGrading grading(D.degree_weights);
    LineEngine eng(D, N, opt);
    const TropicalSurface& S = eng.surface();
    StructureRow row;
    row.p1 = canonical_point(S, p1);
    row.p2 = canonical_point(S, p2);
    auto is_origin = [](const ChartVector& v) { return v.a == 0 && v.b == 0; };
    if (is_origin(row.p1) || is_origin(row.p2)) {
        ChartVector p = is_origin(row.p1) ? row.p2 : row.p1;
        row.terms[p][S.zero_class()] = 1;
        return row;
    }

    std::set<ChartVector> candidates;
    const auto& c1 = eng.closure(row.p1);
    const auto& c2 = eng.closure(row.p2);
    for (int c = 0; c < S.r; ++c)
        for (const auto& e1 : c1[static_cast<size_t>(c)])
            for (const auto& e2 : c2[static_cast<size_t>(c)]) {
                if (e1.degree() + e2.degree() >= N) continue;
                V2 m = e1.m + e2.m;
                if (m.x < 0 || m.y < 0) continue;
                candidates.insert(canonical_point(S, {c, m.x, m.y}));
            }

    // the theta_0 coefficient is read in the cone next to p1 on the shorter arc towards p2
    int k = ((row.p2.chart - row.p1.chart) % S.r + S.r) % S.r;
    int origin_chart = (2 * k <= S.r || row.p1.b != 0) ? row.p1.chart : S.prev(row.p1.chart);

    for (const auto& p : candidates) {
        RCoeff coeff;
        for (int attempt = 0;; ++attempt) {
            try {
                DevelopedPoint z = point_near(D, p, opt.retry_seed + attempt);
                if (p.a == 0 && p.b == 0) z.chart = origin_chart;
                auto l1 = eng.lines(row.p1, z);
                auto l2 = eng.lines(row.p2, z);
                V2 target = p.v();
                coeff.clear();
                for (const auto& a : l1)
                    for (const auto& b : l2) {
                        if (a.final_tangent + b.final_tangent != target) continue;
                        ClassVec cls = class_add(a.cls, b.cls);
                        if (class_degree(cls) >= N) continue;
                        QScalar c = a.coeff * b.coeff;
                        if (!eng.classical()) c = c.shifted(static_cast<int>(det(a.final_tangent, b.final_tangent)));
                        coeff[cls] += c;
                    }
                break;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::Degenerate || attempt >= 8) throw;
            }
        }
        for (auto it = coeff.begin(); it != coeff.end();)
            it = it->second.is_zero() ? coeff.erase(it) : std::next(it);
        if (!coeff.empty()) row.terms[p] = coeff;
    }
    return row;
}

const StructureRow* StructureTable::find(const ChartVector& p1, const ChartVector& p2) const {
    for (const auto& r : rows)
        if (r.p1 == p1 && r.p2 == p2) return &r;
    return nullptr;
}

std::vector<PoissonEntry> poisson_table(const ScatteringDiagram& D, const std::vector<ChartVector>& charges, int N,
                                        const LineOptions& opt) {
    DegreeGrading grading(D.degree_weights);
    if (!D.surface) throw Error(ErrorKind::InvalidInput, "Poisson table needs a surface");
    std::vector<PoissonEntry> out;
    ScatteringDiagram Dc = classical_limit(D);
    LineOptions copt = opt;
    copt.classical = true;
    LineEngine qeng(D, N, opt), ceng(Dc, N, copt);
    for (size_t i = 0; i < charges.size(); ++i)
        for (size_t j = i + 1; j < charges.size(); ++j) {
            PoissonEntry pe;
            pe.p1 = canonical_point(*D.surface, charges[i]);
            pe.p2 = canonical_point(*D.surface, charges[j]);
            // first method: limit of the q-commutator
            StructureRow a = structure_constants(D, pe.p1, pe.p2, N, opt);
            StructureRow b = structure_constants(D, pe.p2, pe.p1, N, opt);
            std::set<ChartVector> ps;
            for (const auto& [p, c] : a.terms) ps.insert(p);
            for (const auto& [p, c] : b.terms) ps.insert(p);
            for (const auto& p : ps) {
                std::set<ClassVec> cls;
                for (const auto* r : {&a, &b}) {
                    auto it = r->terms.find(p);
                    if (it != r->terms.end())
                        for (const auto& [k, v] : it->second) cls.insert(k);
                }
                for (const auto& k : cls) {
                    auto get = [&](const StructureRow& r) -> QScalar {
                        auto it = r.terms.find(p);
                        if (it == r.terms.end()) return 0;
                        auto jt = it->second.find(k);
                        return jt == it->second.end() ? QScalar(0) : jt->second;
                    };
                    mpq_class v = poisson_extract(get(a), get(b));
                    if (v != 0) pe.bracket[p][k] = v;
                }
            }
            // second method: classical broken lines weighted by <s1, s2>
            PoissonRow direct;
            if (!(pe.p1.a == 0 && pe.p1.b == 0) && !(pe.p2.a == 0 && pe.p2.b == 0)) {
                for (const auto& p : ps) {
                    DevelopedPoint z = point_near(Dc, p, opt.retry_seed);
                    auto l1 = ceng.lines(pe.p1, z);
                    auto l2 = ceng.lines(pe.p2, z);
                    for (const auto& x : l1)
                        for (const auto& y : l2) {
                            if (x.final_tangent + y.final_tangent != p.v()) continue;
                            ClassVec k = class_add(x.cls, y.cls);
                            if (class_degree(k) >= N) continue;
                            direct[p][k] += classical_limit(x.coeff) * classical_limit(y.coeff) *
                                            det(x.final_tangent, y.final_tangent);
                        }
                }
            }
            for (auto it = direct.begin(); it != direct.end();) {
                for (auto jt = it->second.begin(); jt != it->second.end();)
                    jt = jt->second == 0 ? it->second.erase(jt) : std::next(jt);
                it = it->second.empty() ? direct.erase(it) : std::next(it);
            }
            if (direct != pe.bracket)
                throw Error(ErrorKind::Internal, "Poisson bracket methods disagree for " +
                                                     point_str(*D.surface, pe.p1) + ", " +
                                                     point_str(*D.surface, pe.p2));
            out.push_back(pe);
        }
    return out;
}

WeightReport weight_check(const StructureTable& table, const TropicalSurface& S) {
    WeightReport rep;
    auto add = [](std::vector<long> a, const std::vector<long>& b) {
        for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
        return a;
    };
    for (const auto& row : table.rows) {
        std::vector<long> lhs = add(weight(S, row.p1), weight(S, row.p2));
        for (const auto& [p, coeff] : row.terms)
            for (const auto& [cls, c] : coeff) {
                ++rep.checked;
                std::vector<long> rhs = add(weight(S, p), S.intersect(cls));
                if (rhs != lhs && rep.pass) {
                    rep.pass = false;
                    rep.first_failure = point_str(S, row.p1) + " * " + point_str(S, row.p2) + " -> z^{" +
                                        class_str(S, cls) + "} " + point_str(S, p);
                }
            }
    }
    return rep;
}

IntegralityReport q_integrality(const StructureTable& table) {
    IntegralityReport rep;
    for (const auto& row : table.rows)
        for (const auto& [p, coeff] : row.terms)
            for (const auto& [cls, c] : coeff) {
                ++rep.checked;
                bool ok = c.is_laurent();
                if (ok) {
                    QLaurent l = as_laurent(c);
                    for (const auto& [e, v] : l.coeffs())
                        if (v.get_den() != 1) ok = false;
                }
                if (!ok && rep.pass) {
                    rep.pass = false;
                    rep.first_failure = c.str();
                }
            }
    return rep;
}

std::string point_str(const TropicalSurface& S, const ChartVector& p) {
    ChartVector c = canonical_point(S, p);
    if (c.a == 0 && c.b == 0) return "0";
    auto term = [&](long k, int ray, bool far) {
        // with one ray the cone is bounded by both sides of it; the far side gets a prime
        std::string n = S.ray_name(ray) + (far && S.r == 1 ? "'" : "");
        return k == 1 ? n : std::to_string(k) + n;
    };
    if (c.b == 0) return term(c.a, c.chart, false);
    if (c.a == 0) return term(c.b, S.next(c.chart), true);
    return term(c.a, c.chart, false) + "+" + term(c.b, S.next(c.chart), true);
}

std::string rcoeff_str(const RCoeff& c, const std::vector<std::string>& labels) {
    if (c.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [cls, v] : c) {
        if (!first) os << " + ";
        first = false;
        std::string cs = v.str();
        bool compound = cs.find(' ') != std::string::npos;
        std::string z;
        for (size_t i = 0; i < cls.size(); ++i) {
            if (cls[i] == 0) continue;
            if (!z.empty()) z += "+";
            if (cls[i] != 1) z += std::to_string(cls[i]);
            z += labels.at(i);
        }
        if (z.empty()) {
            os << cs;
        } else {
            if (!v.is_one()) os << (compound ? "(" + cs + ")" : cs) << "*";
            os << "z^{" << z << "}";
        }
    }
    return os.str();
}

nlohmann::json to_json(const StructureRow& row, const TropicalSurface& S) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [p, coeff] : row.terms) {
        nlohmann::json cs = nlohmann::json::array();
        for (const auto& [cls, c] : coeff) cs.push_back({{"class", class_to_json(S, cls)}, {"coeff", to_json(c)}});
        terms.push_back({{"point", {p.chart, p.a, p.b}}, {"name", point_str(S, p)}, {"coefficient", cs}});
    }
    return {{"p1", {row.p1.chart, row.p1.a, row.p1.b}},
            {"p2", {row.p2.chart, row.p2.a, row.p2.b}},
            {"product", point_str(S, row.p1) + " * " + point_str(S, row.p2)},
            {"terms", terms}};
}

nlohmann::json to_json(const BrokenLine& l, const TropicalSurface& S) {
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& s : l.segments)
        segs.push_back({{"chart", s.chart},
                        {"end", {s.a.get_str(), s.b.get_str()}},
                        {"tangent", {s.mono.m.x, s.mono.m.y}},
                        {"class", class_to_json(S, s.mono.c)},
                        {"coeff", to_json(s.coeff)}});
    return {{"charge", point_str(S, l.charge)},
            {"coeff", to_json(l.coeff)},
            {"class", class_to_json(S, l.cls)},
            {"final_tangent", {l.final_tangent.x, l.final_tangent.y}},
            {"bends", l.bends},
            {"segments", segs}};
}

}  // namespace qs
