// qcoeff.cpp - Laurent polynomials and rational functions in s = q^{1/2}
#include "qscatter/qcoeff.hpp"

#include <algorithm>

namespace qs {

namespace {

const mpz_class kZero = 0;

using Vec = std::vector<mpz_class>;

void trim_back(Vec& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
}

// pseudo-remainder of a by b, both dense with constant term at index 0
Vec prem(Vec a, const Vec& b) {
    const mpz_class& lc = b.back();
    size_t m = b.size() - 1;
    trim_back(a);
    while (!a.empty() && a.size() - 1 >= m) {
        mpz_class top = a.back();
        size_t shift = a.size() - 1 - m;
        for (auto& x : a) x *= lc;
        for (size_t i = 0; i <= m; ++i) a[i + shift] -= top * b[i];
        trim_back(a);
    }
    return a;
}

mpz_class vec_content(const Vec& v) {
    mpz_class g = 0;
    for (const auto& x : v) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

Vec primitive(Vec v) {
    mpz_class g = vec_content(v);
    if (g == 0) return v;
    if (v.back() < 0) g = -g;
    for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    return v;
}

}  // namespace

LPoly::LPoly(long c) {
    if (c != 0) c_.push_back(mpz_class(c));
}

LPoly LPoly::monomial(const mpz_class& c, int exp) {
    if (c == 0) return LPoly();
    return LPoly(exp, Vec{c});
}

void LPoly::trim() {
    trim_back(c_);
    size_t k = 0;
    while (k < c_.size() && c_[k] == 0) ++k;
    if (k > 0) {
        c_.erase(c_.begin(), c_.begin() + static_cast<long>(k));
        low_ += static_cast<int>(k);
    }
    if (c_.empty()) low_ = 0;
}

bool LPoly::is_one() const { return low_ == 0 && c_.size() == 1 && c_[0] == 1; }

const mpz_class& LPoly::coeff_at(int e) const {
    if (c_.empty() || e < low_ || e > high()) return kZero;
    return c_[static_cast<size_t>(e - low_)];
}

LPoly LPoly::operator+(const LPoly& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    int lo = std::min(low_, o.low_);
    int hi = std::max(high(), o.high());
    Vec v(static_cast<size_t>(hi - lo + 1));
    for (size_t i = 0; i < c_.size(); ++i) v[i + static_cast<size_t>(low_ - lo)] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) v[i + static_cast<size_t>(o.low_ - lo)] += o.c_[i];
    return LPoly(lo, std::move(v));
}

LPoly LPoly::operator-() const {
    LPoly r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

LPoly LPoly::operator-(const LPoly& o) const { return *this + (-o); }

LPoly LPoly::operator*(const LPoly& o) const {
    if (is_zero() || o.is_zero()) return LPoly();
    Vec v(c_.size() + o.c_.size() - 1);
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) v[i + j] += c_[i] * o.c_[j];
    return LPoly(low_ + o.low_, std::move(v));
}

LPoly LPoly::shifted(int k) const {
    if (is_zero()) return *this;
    LPoly r = *this;
    r.low_ += k;
    return r;
}

LPoly LPoly::scaled(const mpz_class& k) const {
    if (k == 0) return LPoly();
    LPoly r = *this;
    for (auto& x : r.c_) x *= k;
    return r;
}

LPoly LPoly::bar() const {
    if (is_zero()) return *this;
    Vec v(c_.rbegin(), c_.rend());
    return LPoly(-high(), std::move(v));
}

mpz_class LPoly::eval_one() const {
    mpz_class s = 0;
    for (const auto& x : c_) s += x;
    return s;
}

mpz_class LPoly::content() const { return vec_content(c_); }

bool LPoly::operator<(const LPoly& o) const {
    if (low_ != o.low_) return low_ < o.low_;
    if (c_.size() != o.c_.size()) return c_.size() < o.c_.size();
    for (size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
    return false;
}

LPoly LPoly::gcd(const LPoly& a, const LPoly& b) {
    if (a.is_zero() && b.is_zero()) return LPoly();
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.content().get_mpz_t(), b.content().get_mpz_t());
    if (a.is_zero()) return LPoly(0, primitive(b.c_)).scaled(g);
    if (b.is_zero()) return LPoly(0, primitive(a.c_)).scaled(g);
    Vec x = primitive(a.c_), y = primitive(b.c_);
    if (x.size() < y.size()) std::swap(x, y);
    while (!y.empty()) {
        Vec r = prem(x, y);
        x = std::move(y);
        y = r.empty() ? r : primitive(std::move(r));
    }
    return LPoly(0, primitive(std::move(x))).scaled(g);
}

LPoly LPoly::divexact(const LPoly& a, const LPoly& b) {
    if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "polynomial division by zero");
    if (a.is_zero()) return a;
    Vec r = a.c_;
    const Vec& d = b.c_;
    if (r.size() < d.size()) throw Error(ErrorKind::Internal, "inexact polynomial division");
    Vec q(r.size() - d.size() + 1);
    for (size_t k = q.size(); k-- > 0;) {
        mpz_class t = r[k + d.size() - 1];
        if (t == 0) continue;
        if (!mpz_divisible_p(t.get_mpz_t(), d.back().get_mpz_t()))
            throw Error(ErrorKind::Internal, "inexact polynomial division");
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), d.back().get_mpz_t());
        q[k] = t;
        for (size_t i = 0; i < d.size(); ++i) r[k + i] -= t * d[i];
    }
    for (const auto& x : r)
        if (x != 0) throw Error(ErrorKind::Internal, "inexact polynomial division");
    return LPoly(a.low_ - b.low_, std::move(q));
}

LPoly LPoly::divexact(const mpz_class& k) const {
    LPoly r = *this;
    for (auto& x : r.c_) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), k.get_mpz_t());
    return r;
}

// ---------------------------------------------------------------- QScalar

QScalar::QScalar(const mpq_class& c) {
    mpq_class v = c;
    v.canonicalize();
    num_ = LPoly::monomial(v.get_num(), 0);
    den_ = LPoly::monomial(v.get_den(), 0);
    normalize();
}

QScalar::QScalar(const LPoly& num, const LPoly& den) : num_(num), den_(den) { normalize(); }

QScalar QScalar::s_pow(int k) {
    QScalar r;
    r.num_ = LPoly::monomial(1, k);
    return r;
}

void QScalar::normalize() {
    if (den_.is_zero()) throw Error(ErrorKind::DivisionByZero, "zero denominator");
    if (num_.is_zero()) {
        den_ = LPoly(1);
        return;
    }
    if (den_.is_one()) return;
    int shift = num_.low() - den_.low();
    LPoly n = num_.shifted(-num_.low());
    LPoly d = den_.shifted(-den_.low());
    if (d.high() == 0) {
        mpz_class c = d.lead();
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), n.content().get_mpz_t(), c.get_mpz_t());
        if (c < 0) g = -g;
        num_ = n.divexact(g).shifted(shift);
        den_ = d.divexact(g);
        return;
    }
    LPoly g = LPoly::gcd(n, d);
    if (!g.is_one()) {
        n = LPoly::divexact(n, g);
        d = LPoly::divexact(d, g);
    }
    if (d.lead() < 0) {
        n = -n;
        d = -d;
    }
    num_ = n.shifted(shift);
    den_ = d;
}

bool QScalar::is_laurent() const { return den_.high() == 0; }

QScalar QScalar::operator+(const QScalar& o) const {
    if (den_.is_one() && o.den_.is_one()) {
        QScalar r;
        r.num_ = num_ + o.num_;
        return r;
    }
    if (den_ == o.den_) return QScalar(num_ + o.num_, den_);
    return QScalar(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

QScalar QScalar::operator-() const {
    QScalar r = *this;
    r.num_ = -r.num_;
    return r;
}

QScalar QScalar::operator-(const QScalar& o) const { return *this + (-o); }

QScalar QScalar::operator*(const QScalar& o) const {
    if (is_zero() || o.is_zero()) return QScalar();
    if (den_.is_one() && o.den_.is_one()) {
        QScalar r;
        r.num_ = num_ * o.num_;
        return r;
    }
    return QScalar(num_ * o.num_, den_ * o.den_);
}

QScalar QScalar::operator/(const QScalar& o) const {
    if (o.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by zero QScalar");
    return QScalar(num_ * o.den_, den_ * o.num_);
}

QScalar QScalar::shifted(int k) const {
    QScalar r = *this;
    r.num_ = r.num_.shifted(k);
    return r;
}

QScalar QScalar::bar() const { return QScalar(num_.bar(), den_.bar()); }

bool QScalar::operator<(const QScalar& o) const {
    if (!(num_ == o.num_)) return num_ < o.num_;
    return den_ < o.den_;
}

namespace {

std::string lpoly_str(const LPoly& p) {
    std::map<int, mpq_class> m;
    for (int e = p.low(); !p.is_zero() && e <= p.high(); ++e)
        if (p.coeff_at(e) != 0) m[e] = mpq_class(p.coeff_at(e));
    return QLaurent(m).str();
}

}  // namespace

std::string QScalar::str() const {
    if (is_laurent()) return as_laurent(*this).str();
    return "(" + lpoly_str(num_) + ")/(" + lpoly_str(den_) + ")";
}

QScalar field_arith(const QScalar& a, const QScalar& b, ArithOp op) {
    switch (op) {
        case ArithOp::Add: return a + b;
        case ArithOp::Sub: return a - b;
        case ArithOp::Mul: return a * b;
        case ArithOp::Div: return a / b;
    }
    return a;
}

QScalar bar_involution(const QScalar& a) { return a.bar(); }

// ---------------------------------------------------------------- QLaurent

QLaurent::QLaurent(std::map<int, mpq_class> c) : c_(std::move(c)) {
    for (auto it = c_.begin(); it != c_.end();) {
        it->second.canonicalize();
        if (it->second == 0)
            it = c_.erase(it);
        else
            ++it;
    }
}

QScalar QLaurent::to_scalar() const {
    mpz_class l = 1;
    for (const auto& [e, c] : c_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    LPoly num;
    for (const auto& [e, c] : c_) num = num + LPoly::monomial(mpz_class(c * l), e);
    return QScalar(num, LPoly::monomial(l, 0));
}

std::string QLaurent::str() const {
    if (c_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        int e = it->first;
        mpq_class c = it->second;
        bool neg = c < 0;
        if (neg) c = -c;
        std::string mono = e == 0 ? "" : (e == 2 ? "q" : "q^{" + q_exponent_string(e) + "}");
        std::string term;
        if (mono.empty())
            term = c.get_str();
        else if (c == 1)
            term = mono;
        else
            term = c.get_str() + "*" + mono;
        if (first)
            out = neg ? "-" + term : term;
        else
            out += (neg ? " - " : " + ") + term;
        first = false;
    }
    return out;
}

QLaurent as_laurent(const QScalar& a) {
    if (!a.is_laurent()) throw Error(ErrorKind::NotLaurent, a.str());
    std::map<int, mpq_class> m;
    const mpz_class& d = a.den().lead();
    const LPoly& n = a.num();
    for (int e = n.low(); !n.is_zero() && e <= n.high(); ++e)
        if (n.coeff_at(e) != 0) m[e] = mpq_class(n.coeff_at(e), d);
    return QLaurent(m);
}

mpq_class classical_limit(const QScalar& a) {
    mpz_class d = a.den().eval_one();
    if (d == 0) throw Error(ErrorKind::PoleAtOne, a.str());
    mpq_class r(a.num().eval_one(), d);
    r.canonicalize();
    return r;
}

mpq_class poisson_extract(const QScalar& c12, const QScalar& c21) {
    QScalar d = c12 - c21;
    if (d.is_zero()) return 0;
    if (classical_limit(d) != 0)
        throw Error(ErrorKind::NonVanishingDifference, c12.str() + " vs " + c21.str());
    QScalar q_minus_1(LPoly::monomial(1, 2) - LPoly(1), LPoly(1));
    return classical_limit(d / q_minus_1);
}

// ---------------------------------------------------------------- JSON

std::string q_exponent_string(int s_exp) {
    if (s_exp % 2 == 0) return std::to_string(s_exp / 2);
    return std::to_string(s_exp) + "/2";
}

int parse_q_exponent(const std::string& txt) {
    mpq_class v;
    if (v.set_str(txt, 10) != 0) throw Error(ErrorKind::Parse, "bad exponent '" + txt + "'");
    v.canonicalize();
    mpq_class twice = v * 2;
    if (twice.get_den() != 1 || !twice.get_num().fits_sint_p())
        throw Error(ErrorKind::Parse, "exponent not a half-integer: '" + txt + "'");
    return static_cast<int>(twice.get_num().get_si());
}

nlohmann::json to_json(const QLaurent& a) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [e, c] : a.coeffs()) j[q_exponent_string(e)] = c.get_str();
    return j;
}

QLaurent qlaurent_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorKind::Parse, "QLaurent must be an object");
    std::map<int, mpq_class> m;
    for (const auto& [k, v] : j.items()) {
        mpq_class c;
        std::string txt = v.is_string() ? v.get<std::string>() : v.dump();
        if (c.set_str(txt, 10) != 0) throw Error(ErrorKind::Parse, "bad coefficient '" + txt + "'");
        c.canonicalize();
        m[parse_q_exponent(k)] += c;
    }
    return QLaurent(m);
}

nlohmann::json to_json(const QScalar& a) {
    auto side = [](const LPoly& p) {
        std::map<int, mpq_class> m;
        for (int e = p.low(); !p.is_zero() && e <= p.high(); ++e)
            if (p.coeff_at(e) != 0) m[e] = mpq_class(p.coeff_at(e));
        return to_json(QLaurent(m));
    };
    return {{"num", side(a.num())}, {"den", side(a.den())}};
}

QScalar qscalar_from_json(const nlohmann::json& j) {
    if (j.is_object() && j.contains("num")) {
        QScalar n = qlaurent_from_json(j.at("num")).to_scalar();
        QScalar d = j.contains("den") ? qlaurent_from_json(j.at("den")).to_scalar() : QScalar(1);
        return n / d;
    }
    return qlaurent_from_json(j).to_scalar();
}

}  // namespace qs
