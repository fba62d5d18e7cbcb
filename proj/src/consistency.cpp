// consistency.cpp - numerical consistency of a diagram on B via lifts of theta functions
#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

#include "qscatter/brokenlines.hpp"

namespace qs {

namespace {

struct Chamber {
    mpq_class a, b;
};

// one sample point per chamber of cone c, ordered anticlockwise from rho_c
std::vector<Chamber> chambers(const ScatteringDiagram& D, int c, int retry) {
    std::vector<V2> dirs{{1, 0}};
    for (const auto& w : D.walls)
        if (w.chart == c && !w.on_ray()) dirs.push_back(w.dir);
    dirs.push_back({0, 1});
    std::sort(dirs.begin(), dirs.end(), angle_less);
    dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());
    std::vector<Chamber> out;
    for (size_t i = 0; i + 1 < dirs.size(); ++i) {
        // uneven weights keep the point off rational lines through small lattice points
        V2 m = dirs[i] * (5 + 2 * retry) + dirs[i + 1] * (7 + 3 * retry);
        out.push_back({mpq_class(m.x, 3), mpq_class(m.y, 3)});
    }
    return out;
}

std::string term_name(const TropicalSurface& S, const Exp& e) {
    std::ostringstream os;
    os << "z^{(" << e.m.x << "," << e.m.y << ")";
    std::string c = class_str(S, e.c);
    if (!c.empty() && c != "0") os << "+" << c;
    os << "}";
    return os.str();
}

// R_rho normal form: kind 0 is z^beta X^a X+^k, kind 1 is z^beta X-^k X^a (k >= 1)
using NormalKey = std::tuple<int, long, long, ClassVec>;
using NormalForm = std::map<NormalKey, QScalar>;

void add_to(NormalForm& Z, const NormalKey& k, const QScalar& c) {
    QScalar& slot = Z[k];
    slot += c;
    if (slot.is_zero()) Z.erase(k);
}

class RayNormalizer {
public:
    RayNormalizer(const ScatteringDiagram& D, int ray, int N, bool classical)
        : S_(*D.surface), ray_(ray), N_(N), classical_(classical), rank_(D.rank()) {
        d_ = S_.selfint[static_cast<size_t>(ray)];
        kappa_ = S_.kinks[static_cast<size_t>(ray)];
        kdeg_ = class_degree(kappa_);
        int big = N + 64 * std::max(kdeg_, 1);
        f_out_ = QTorusElement::one(big, rank_, ray, classical);
        f_in_ = QTorusElement::one(big, rank_, ray, classical);
        for (const auto& w : D.walls) {
            if (w.chart != ray || !w.on_ray()) continue;
            QTorusElement f(big, ray, classical);
            for (const auto& [e, c] : w.f.terms()) f.add_term(e, c);
            QTorusElement& slot = w.orient == WallOrientation::Outgoing ? f_out_ : f_in_;
            slot = slot * f;
        }
    }

    int kappa_degree() const { return kdeg_; }

    NormalForm plus_side(const QTorusElement& L) const {
        NormalForm Z;
        for (const auto& [e, c] : L.terms()) {
            long a = e.m.x, b = e.m.y;
            if (b >= 0) {
                add_to(Z, {0, b, a, e.c}, twist(c, -a * b));
                continue;
            }
            long k = -b;
            int ord = N_ + static_cast<int>(k) * kdeg_;
            // X- = z^g F(X) with g = ((-d,-1), kappa) and F = f_out(q^{-1} X) f_in(X)
            QTorusElement F = (q_shift(f_out_, {1, 0}, -1) * f_in_).truncated(ord);
            Exp g{{-d_, -1}, kappa_};
            QTorusElement P = mono(g, 1, ord, ray_) * F;
            QTorusElement H = mono(scale(g, -k), 1, ord, ray_) * power(P, k);
            QTorusElement W = mono(scale(g, -k), 1, ord, ray_) * mono(e, c, ord, ray_);
            QTorusElement Y = unit_inverse(H) * W;
            for (const auto& [ye, yc] : Y.terms()) add_to(Z, {1, k, ye.m.x, ye.c}, yc);
        }
        return Z;
    }

    NormalForm minus_side(const QTorusElement& L) const {
        NormalForm Z;
        int jm = S_.prev(ray_);
        for (const auto& [e, c] : L.terms()) {
            long k = e.m.x, a = e.m.y;
            if (k >= 0) {
                add_to(Z, {k == 0 ? 0 : 1, k, a, e.c}, twist(c, -k * a));
                continue;
            }
            k = -k;
            int ord = N_ + static_cast<int>(k) * kdeg_;
            // X+ = z^h F'(X) with h = ((-1,-d), kappa) and F' = f_in(q X) f_out(X)
            QTorusElement F = swap_axes((q_shift(f_in_, {1, 0}, 1) * f_out_).truncated(ord), jm);
            Exp h{{-1, -d_}, kappa_};
            QTorusElement P = mono(h, 1, ord, jm) * F;
            QTorusElement H = power(P, k) * mono(scale(h, -k), 1, ord, jm);
            QTorusElement W = mono(e, c, ord, jm) * mono(scale(h, -k), 1, ord, jm);
            QTorusElement Y = W * unit_inverse(H);
            for (const auto& [ye, yc] : Y.terms()) add_to(Z, {0, k, ye.m.y, ye.c}, yc);
        }
        return Z;
    }

    // both sides are exact on this entry
    bool reliable(const NormalKey& key) const {
        long k = std::get<1>(key);
        return class_degree(std::get<3>(key)) + k * kdeg_ < N_;
    }

private:
    QScalar twist(const QScalar& c, long e) const { return classical_ ? c : c.shifted(static_cast<int>(e)); }
    QTorusElement mono(const Exp& e, const QScalar& c, int ord, int chart) const {
        return QTorusElement::monomial(e, c, ord, chart, classical_);
    }
    static Exp scale(const Exp& e, long k) {
        ClassVec c = e.c;
        for (auto& x : c) x = static_cast<int>(x * k);
        return {e.m * k, c};
    }
    QTorusElement swap_axes(const QTorusElement& f, int chart) const {
        QTorusElement g(f.order(), chart, classical_);
        for (const auto& [e, c] : f.terms()) g.add_term({{e.m.y, e.m.x}, e.c}, c);
        return g;
    }

    const TropicalSurface& S_;
    int ray_, N_;
    bool classical_;
    size_t rank_;
    int d_ = 0, kdeg_ = 0;
    ClassVec kappa_;
    QTorusElement f_out_, f_in_;
};

}  // namespace

ConsistencyReport consistency_check_on_B(const ScatteringDiagram& D, const std::vector<ChartVector>& charges, int N) {
    DegreeGrading grading(D.degree_weights);
    if (!D.surface) throw Error(ErrorKind::InvalidInput, "consistency on B needs a surface");
    const TropicalSurface& S = *D.surface;
    ConsistencyReport rep;
    auto fail = [&](const std::string& why) {
        if (rep.pass) rep.first_failure = why;
        rep.pass = false;
    };
    bool classical = false;
    for (const auto& w : D.walls) classical = classical || w.f.classical();
    LineOptions opt;
    ClassReducer red(S);
    auto reduced = [&](const QTorusElement& a) {
        QTorusElement out(a.order(), a.chart(), a.classical());
        for (const auto& [e, c] : a.terms()) out.add_term({e.m, red.reduce(e.c)}, c);
        return out;
    };
    auto reduce_form = [&](const NormalForm& Z) {
        NormalForm out;
        for (const auto& [k, v] : Z)
            add_to(out, {std::get<0>(k), std::get<1>(k), std::get<2>(k), red.reduce(std::get<3>(k))}, v);
        return out;
    };

    // failures and comparison count for one charge, with chamber samples chosen by `retry`
    auto check_charge = [&](const ChartVector& p, int retry, std::vector<std::string>& fails) {
        int cmp = 0;
        std::vector<std::vector<Chamber>> ch;
        for (int c = 0; c < S.r; ++c) ch.push_back(chambers(D, c, retry));
        std::string pname = point_str(S, p);
        // across interior walls of each cone
        for (int c = 0; c < S.r; ++c) {
            const auto& cs = ch[static_cast<size_t>(c)];
            for (size_t i = 0; i + 1 < cs.size(); ++i) {
                QTorusElement L0 = lift(D, {c, cs[i].a, cs[i].b, 0}, p, N, opt);
                QTorusElement L1 = reduced(lift(D, {c, cs[i + 1].a, cs[i + 1].b, 0}, p, N, opt));
                QTorusElement moved =
                    reduced(cone_path_product(D, c, cs[i].a, cs[i].b, cs[i + 1].a, cs[i + 1].b, L0));
                ++cmp;
                if (moved != L1)
                    fails.push_back("theta_" + pname + " across a wall of cone " + std::to_string(c) + ": " +
                                    term_name(S, (moved - L1).terms().begin()->first));
            }
        }
        // across each ray, comparing the two lifts inside R_rho
        for (int j = 0; j < S.r; ++j) {
            int jm = S.prev(j);
            const Chamber& qp = ch[static_cast<size_t>(j)].front();
            const Chamber& qm = ch[static_cast<size_t>(jm)].back();
            QTorusElement Lp = lift(D, {j, qp.a, qp.b, 0}, p, N, opt);
            QTorusElement Lm = lift(D, {jm, qm.a, qm.b, 0}, p, N, opt);
            RayNormalizer R(D, j, N, classical);
            NormalForm Zp, Zm;
            ++cmp;
            try {
                Zp = reduce_form(R.plus_side(Lp));
                Zm = reduce_form(R.minus_side(Lm));
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::Degenerate) throw;
                fails.push_back("theta_" + pname + " at ray " + S.ray_name(j) + ": " + e.what());
                continue;
            }
            std::set<NormalKey> keys;
            for (const auto& [k, v] : Zp) keys.insert(k);
            for (const auto& [k, v] : Zm) keys.insert(k);
            for (const auto& k : keys) {
                if (!R.reliable(k)) continue;
                auto a = Zp.find(k), b = Zm.find(k);
                QScalar va = a == Zp.end() ? QScalar(0) : a->second;
                QScalar vb = b == Zm.end() ? QScalar(0) : b->second;
                if (va != vb) {
                    std::ostringstream os;
                    os << "theta_" << pname << " at ray " << S.ray_name(j) << ": "
                       << (std::get<0>(k) == 0 ? "X^" : "X-^") << std::get<2>(k) << " k=" << std::get<1>(k)
                       << " class " << class_str(S, std::get<3>(k)) << " has " << va.str() << " vs " << vb.str();
                    fails.push_back(os.str());
                    break;
                }
            }
        }
        return cmp;
    };

    for (const auto& p : charges) {
        for (int retry = 0;; ++retry) {
            std::vector<std::string> fails;
            try {
                rep.comparisons += check_charge(p, retry, fails);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::Degenerate || retry >= 8) throw;
                continue;
            }
            for (const auto& f : fails) fail(f);
            break;
        }
    }
    return rep;
}

}  // namespace qs
