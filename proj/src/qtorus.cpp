// qtorus.cpp - truncated quantum torus, wall-crossing, Hamiltonians and BPS factors
#include "qscatter/qtorus.hpp"

#include <algorithm>

namespace qs {

Exp exp_add(const Exp& a, const Exp& b) { return {a.m + b.m, class_add(a.c, b.c)}; }

QTorusElement QTorusElement::one(int order, size_t rank, int chart, bool classical) {
    return monomial(Exp{{0, 0}, ClassVec(rank, 0)}, QScalar(1), order, chart, classical);
}

QTorusElement QTorusElement::monomial(const Exp& e, const QScalar& c, int order, int chart, bool classical) {
    QTorusElement r(order, chart, classical);
    r.add_term(e, c);
    return r;
}

QScalar QTorusElement::coeff(const Exp& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? QScalar(0) : it->second;
}

void QTorusElement::add_term(const Exp& e, const QScalar& c) {
    if (c.is_zero() || !keeps(e)) return;
    auto [it, fresh] = terms_.try_emplace(e, c);
    if (fresh) return;
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

namespace {

void check_compatible(const QTorusElement& a, const QTorusElement& b) {
    if (a.classical() != b.classical()) throw Error(ErrorKind::OrderMismatch, "classical and quantum elements mixed");
}

}  // namespace

QTorusElement QTorusElement::operator+(const QTorusElement& o) const {
    check_compatible(*this, o);
    QTorusElement r = *this;
    r.order_ = std::min(order_, o.order_);
    if (r.order_ < order_) r = r.truncated(r.order_);
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

QTorusElement QTorusElement::operator-() const {
    QTorusElement r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

QTorusElement QTorusElement::operator-(const QTorusElement& o) const { return *this + (-o); }

QTorusElement QTorusElement::operator*(const QTorusElement& o) const {
    check_compatible(*this, o);
    QTorusElement r(std::min(order_, o.order_), chart_, classical_);
    for (const auto& [ea, ca] : terms_) {
        int da = ea.degree();
        for (const auto& [eb, cb] : o.terms_) {
            if (da + eb.degree() >= r.order_) continue;
            QScalar c = ca * cb;
            if (!classical_) c = c.shifted(static_cast<int>(det(ea.m, eb.m)));
            r.add_term(exp_add(ea, eb), c);
        }
    }
    return r;
}

QTorusElement QTorusElement::scaled(const QScalar& c) const {
    QTorusElement r(order_, chart_, classical_);
    for (const auto& [e, x] : terms_) r.add_term(e, x * c);
    return r;
}

QTorusElement QTorusElement::truncated(int order) const {
    QTorusElement r(std::min(order, order_), chart_, classical_);
    for (const auto& [e, c] : terms_) r.add_term(e, c);
    return r;
}

int QTorusElement::min_positive_degree() const {
    int best = INT_MAX;
    for (const auto& [e, c] : terms_) {
        bool constant = e.m.is_zero() && class_degree(e.c) == 0;
        if (!constant) best = std::min(best, e.degree());
    }
    return best;
}

std::string QTorusElement::str(const std::vector<std::string>& labels) const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [e, c] : terms_) {
        if (!out.empty()) out += " + ";
        bool constant = e.m.is_zero() && class_degree(e.c) == 0;
        std::string cs = c.str();
        bool compound = cs.find(' ') != std::string::npos;
        if (constant) {
            out += compound ? "(" + cs + ")" : cs;
            continue;
        }
        if (!c.is_one()) out += (compound ? "(" + cs + ")" : cs) + "*";
        std::string cls;
        for (size_t i = 0; i < e.c.size(); ++i) {
            if (e.c[i] == 0) continue;
            if (!cls.empty() && e.c[i] > 0) cls += "+";
            if (e.c[i] == -1)
                cls += "-";
            else if (e.c[i] != 1)
                cls += std::to_string(e.c[i]);
            cls += i < labels.size() ? labels[i] : "c" + std::to_string(i);
        }
        out += "z^[" + std::to_string(e.m.x) + "," + std::to_string(e.m.y) + (cls.empty() ? "" : "|" + cls) + "]";
    }
    return out;
}

QMonomial mono_mul(const QMonomial& a, const QMonomial& b, bool classical) {
    QScalar c = a.coeff * b.coeff;
    if (!classical) c = c.shifted(static_cast<int>(det(a.e.m, b.e.m)));
    return {exp_add(a.e, b.e), c};
}

QTorusElement elem_arith(const QTorusElement& a, const QTorusElement& b, ElemOp op) {
    if (a.order() != b.order()) throw Error(ErrorKind::OrderMismatch, "truncation orders differ");
    if (a.chart() != b.chart()) throw Error(ErrorKind::ChartMismatch, "elements live in different charts");
    return op == ElemOp::Add ? a + b : a * b;
}

QTorusElement unit_inverse(const QTorusElement& f) {
    if (f.order() == kUntruncated) throw Error(ErrorKind::MalformedWall, "inverse needs a finite truncation");
    size_t rank = f.terms().empty() ? 0 : f.terms().begin()->first.c.size();
    QTorusElement one = QTorusElement::one(f.order(), rank, f.chart(), f.classical());
    if (f.coeff(one.terms().begin()->first) != QScalar(1))
        throw Error(ErrorKind::MalformedWall, "constant term is not 1");
    QTorusElement g = f - one;
    if (g.min_positive_degree() < 1) throw Error(ErrorKind::MalformedWall, "nonconstant term of degree 0");
    QTorusElement minus_g = -g;
    QTorusElement result = one, pw = one;
    for (;;) {
        pw = pw * minus_g;
        if (pw.is_zero()) break;
        result = result + pw;
    }
    return result;
}

QTorusElement power(const QTorusElement& f, long k) {
    QTorusElement base = k < 0 ? unit_inverse(f) : f;
    size_t rank = f.terms().empty() ? 0 : f.terms().begin()->first.c.size();
    QTorusElement r = QTorusElement::one(f.order(), rank, f.chart(), f.classical());
    for (long i = 0; i < std::labs(k); ++i) r = r * base;
    return r;
}

long multiple_of(const V2& t, const V2& m_dir) {
    if (det(t, m_dir) != 0) throw Error(ErrorKind::MalformedWall, "term not parallel to the wall direction");
    if (m_dir.x != 0) {
        if (t.x % m_dir.x != 0) throw Error(ErrorKind::MalformedWall, "direction not primitive");
        return t.x / m_dir.x;
    }
    if (m_dir.y == 0) throw Error(ErrorKind::MalformedWall, "zero wall direction");
    if (t.y % m_dir.y != 0) throw Error(ErrorKind::MalformedWall, "direction not primitive");
    return t.y / m_dir.y;
}

QTorusElement q_shift(const QTorusElement& f, const V2& m_dir, int j) {
    if (f.classical() || j == 0) return f;
    QTorusElement r(f.order(), f.chart(), false);
    for (const auto& [e, c] : f.terms()) r.add_term(e, c.shifted(static_cast<int>(2 * multiple_of(e.m, m_dir) * j)));
    return r;
}

void validate_wall_function(const QTorusElement& f, const V2& m_dir) {
    if (!is_primitive(m_dir)) throw Error(ErrorKind::MalformedWall, "wall direction not primitive");
    bool has_one = false;
    for (const auto& [e, c] : f.terms()) {
        if (e.m.is_zero() && class_degree(e.c) == 0 && class_effective(e.c)) {
            if (c != QScalar(1)) throw Error(ErrorKind::MalformedWall, "constant term is not 1");
            has_one = true;
            continue;
        }
        if (e.m.is_zero()) throw Error(ErrorKind::MalformedWall, "term without tangent part");
        multiple_of(e.m, m_dir);
        if (e.degree() < 1) throw Error(ErrorKind::MalformedWall, "nonconstant term of degree 0");
    }
    if (!has_one) throw Error(ErrorKind::MalformedWall, "missing constant term");
}

QTorusElement wallcross_apply(const QTorusElement& f_in, const V2& m_dir, const QTorusElement& elem, int eps) {
    if (f_in.classical() != elem.classical()) throw Error(ErrorKind::OrderMismatch, "classical and quantum mixed");
    validate_wall_function(f_in, m_dir);
    QTorusElement f = f_in.truncated(elem.order());
    f.set_chart(elem.chart());
    QTorusElement g = eps > 0 ? f : unit_inverse(f);
    size_t rank = f.terms().begin()->first.c.size();
    QTorusElement one = QTorusElement::one(elem.order(), rank, elem.chart(), elem.classical());
    std::map<long, QTorusElement> cache;
    auto factor = [&](long n) -> const QTorusElement& {
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
        QTorusElement F = one;
        if (n > 0) {
            for (long j = 0; j < n; ++j) F = F * q_shift(g, m_dir, static_cast<int>(j));
        } else {
            for (long j = 0; j < -n; ++j) F = F * q_shift(g, m_dir, static_cast<int>(-j - 1));
            F = unit_inverse(F);
        }
        return cache.emplace(n, std::move(F)).first->second;
    };
    QTorusElement out(elem.order(), elem.chart(), elem.classical());
    for (const auto& [e, c] : elem.terms()) {
        long n = det(m_dir, e.m);
        if (n == 0) {
            out.add_term(e, c);
            continue;
        }
        QTorusElement term = QTorusElement::monomial(e, c, elem.order(), elem.chart(), elem.classical());
        out = out + term * factor(n);
    }
    return out;
}

QTorusElement hamiltonian_to_f(const std::vector<HamTerm>& H, const V2& m_dir, int order, size_t rank,
                               bool classical) {
    QTorusElement X(order);
    for (const auto& t : H) {
        if (t.p.m.is_zero()) throw Error(ErrorKind::SupportViolation, "Hamiltonian term without tangent");
        long l = 0;
        try {
            l = multiple_of(t.p.m, m_dir);
        } catch (const Error&) {
            throw Error(ErrorKind::SupportViolation, "Hamiltonian term not parallel to m(H)");
        }
        if (l >= 0) throw Error(ErrorKind::SupportViolation, "Hamiltonian term must be a negative multiple of m(H)");
        if (t.p.degree() < 1) throw Error(ErrorKind::SupportViolation, "Hamiltonian term of degree 0");
        X.add_term(t.p, t.h * (QScalar::q_pow(static_cast<int>(l)) - QScalar(1)));
    }
    QTorusElement one = QTorusElement::one(order, rank);
    QTorusElement f = one, pw = one;
    mpz_class fact = 1;
    for (long k = 1;; ++k) {
        pw = pw * X;
        if (pw.is_zero()) break;
        fact *= k;
        f = f + pw.scaled(QScalar(mpq_class(1, fact)));
    }
    return classical ? classical_limit(f) : f;
}

std::vector<HamTerm> f_to_hamiltonian(const QTorusElement& f, const V2& m_dir) {
    validate_wall_function(f, m_dir);
    size_t rank = f.terms().begin()->first.c.size();
    QTorusElement one = QTorusElement::one(f.order(), rank, f.chart(), f.classical());
    QTorusElement g = f - one;
    QTorusElement log(f.order(), f.chart(), f.classical());
    QTorusElement pw = one;
    for (long k = 1;; ++k) {
        pw = pw * g;
        if (pw.is_zero()) break;
        log = log + pw.scaled(QScalar(mpq_class(k % 2 == 1 ? 1 : -1, k)));
    }
    std::vector<HamTerm> out;
    for (const auto& [e, c] : log.terms()) {
        long l = multiple_of(e.m, m_dir);
        out.push_back({e, c / (QScalar::q_pow(static_cast<int>(l)) - QScalar(1))});
    }
    return out;
}

std::vector<BpsFactor> bps_factorize(const QTorusElement& f) {
    if (f.terms().empty()) throw Error(ErrorKind::MalformedWall, "zero wall function");
    size_t rank = f.terms().begin()->first.c.size();
    QTorusElement one = QTorusElement::one(f.order(), rank, f.chart(), f.classical());
    if (f.coeff(one.terms().begin()->first) != QScalar(1))
        throw Error(ErrorKind::MalformedWall, "constant term is not 1");
    std::vector<BpsFactor> out;
    QTorusElement cur = f;
    for (;;) {
        QTorusElement rest = cur - one;
        if (rest.is_zero()) break;
        int d = rest.min_positive_degree();
        if (d < 1) throw Error(ErrorKind::MalformedWall, "nonconstant term of degree 0");
        std::vector<BpsFactor> level;
        for (const auto& [e, c] : rest.terms()) {
            if (e.degree() != d) continue;
            if (!c.is_laurent()) throw Error(ErrorKind::NonIntegralExponent, c.str());
            QLaurent lc = as_laurent(c);
            for (const auto& [k, a] : lc.coeffs()) {
                if (a.get_den() != 1 || !a.get_num().fits_slong_p())
                    throw Error(ErrorKind::NonIntegralExponent, c.str());
                level.push_back({e, k + 1, a.get_num().get_si()});
            }
        }
        cur = cur * unit_inverse(bps_reconstruct(level, f.order(), rank, f.classical()));
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

QTorusElement bps_reconstruct(const std::vector<BpsFactor>& factors, int order, size_t rank, bool classical) {
    QTorusElement one = QTorusElement::one(order, rank, 0, classical);
    QTorusElement r = one;
    for (const auto& b : factors) {
        QScalar c = classical ? QScalar(1) : QScalar::s_pow(b.j - 1);
        QTorusElement base = one + QTorusElement::monomial(b.p, c, order, 0, classical);
        r = r * power(base, b.omega);
    }
    return r;
}

QTorusElement classical_limit(const QTorusElement& a) {
    QTorusElement r(a.order(), a.chart(), true);
    for (const auto& [e, c] : a.terms()) r.add_term(e, QScalar(classical_limit(c)));
    return r;
}

nlohmann::json to_json(const QTorusElement& a, const std::vector<std::string>& labels) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [e, c] : a.terms()) {
        nlohmann::json cls = nlohmann::json::object();
        for (size_t i = 0; i < e.c.size(); ++i)
            if (e.c[i] != 0) cls[labels.at(i)] = e.c[i];
        out.push_back({{"tangent", {e.m.x, e.m.y}}, {"chart", a.chart()}, {"class", cls}, {"coeff", to_json(c)}});
    }
    return out;
}

QTorusElement qtorus_from_json(const nlohmann::json& j, const std::vector<std::string>& labels, int order) {
    if (!j.is_array()) throw Error(ErrorKind::Parse, "torus element must be an array");
    QTorusElement r(order);
    bool chart_set = false;
    try {
        for (const auto& t : j) {
            Exp e;
            e.m = {t.at("tangent").at(0).get<long>(), t.at("tangent").at(1).get<long>()};
            e.c.assign(labels.size(), 0);
            nlohmann::json cls = t.value("class", nlohmann::json::object());
            for (const auto& [k, v] : cls.items()) {
                auto it = std::find(labels.begin(), labels.end(), k);
                if (it == labels.end()) throw Error(ErrorKind::Parse, "unknown class label " + k);
                e.c[static_cast<size_t>(it - labels.begin())] += v.get<int>();
            }
            int chart = t.value("chart", 0);
            if (chart_set && chart != r.chart()) throw Error(ErrorKind::ChartMismatch, "terms in different charts");
            r.set_chart(chart);
            chart_set = true;
            r.add_term(e, qscalar_from_json(t.at("coeff")));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("torus element: ") + e.what());
    }
    return r;
}

}  // namespace qs
