// qcoeff.hpp - exact arithmetic in s = q^{1/2}
#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qscatter/error.hpp"

namespace qs {

// Integer Laurent polynomial sum c[i] s^(low+i), trimmed at both ends.
class LPoly {
public:
    LPoly() = default;
    explicit LPoly(long c);
    static LPoly monomial(const mpz_class& c, int exp);

    bool is_zero() const { return c_.empty(); }
    bool is_one() const;
    int low() const { return low_; }
    int high() const { return low_ + static_cast<int>(c_.size()) - 1; }
    const mpz_class& coeff_at(int e) const;  // zero outside the support
    const std::vector<mpz_class>& coeffs() const { return c_; }
    const mpz_class& lead() const { return c_.back(); }

    LPoly operator+(const LPoly& o) const;
    LPoly operator-(const LPoly& o) const;
    LPoly operator*(const LPoly& o) const;
    LPoly operator-() const;
    LPoly shifted(int k) const;
    LPoly scaled(const mpz_class& k) const;
    LPoly bar() const;
    mpz_class eval_one() const;
    mpz_class content() const;
    bool operator==(const LPoly& o) const { return low_ == o.low_ && c_ == o.c_; }
    bool operator<(const LPoly& o) const;

    // polynomial helpers on the s^low-stripped part
    static LPoly gcd(const LPoly& a, const LPoly& b);
    static LPoly divexact(const LPoly& a, const LPoly& b);
    LPoly divexact(const mpz_class& k) const;

private:
    LPoly(int low, std::vector<mpz_class> c) : low_(low), c_(std::move(c)) { trim(); }
    void trim();
    int low_ = 0;
    std::vector<mpz_class> c_;
};

class QLaurent;

// Reduced rational function num/den in s.
class QScalar {
public:
    QScalar() : num_(), den_(1) {}
    QScalar(long c) : num_(c), den_(1) {}  // NOLINT: implicit integer embedding
    QScalar(const mpq_class& c);          // NOLINT
    QScalar(const LPoly& num, const LPoly& den);
    static QScalar s_pow(int k);  // s^k
    static QScalar q_pow(int k) { return s_pow(2 * k); }

    const LPoly& num() const { return num_; }
    const LPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_laurent() const;

    QScalar operator+(const QScalar& o) const;
    QScalar operator-(const QScalar& o) const;
    QScalar operator*(const QScalar& o) const;
    QScalar operator/(const QScalar& o) const;
    QScalar operator-() const;
    QScalar& operator+=(const QScalar& o) { return *this = *this + o; }
    QScalar& operator-=(const QScalar& o) { return *this = *this - o; }
    QScalar& operator*=(const QScalar& o) { return *this = *this * o; }
    QScalar shifted(int k) const;  // multiply by s^k
    QScalar bar() const;

    bool operator==(const QScalar& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const QScalar& o) const { return !(*this == o); }
    bool operator<(const QScalar& o) const;

    std::string str() const;  // display in powers of q

private:
    void normalize();
    LPoly num_, den_;
};

enum class ArithOp { Add, Sub, Mul, Div };
QScalar field_arith(const QScalar& a, const QScalar& b, ArithOp op);
QScalar bar_involution(const QScalar& a);

// Laurent polynomial in s with rational coefficients, keyed by exponent of s.
class QLaurent {
public:
    QLaurent() = default;
    explicit QLaurent(std::map<int, mpq_class> c);
    const std::map<int, mpq_class>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    QScalar to_scalar() const;
    bool operator==(const QLaurent& o) const { return c_ == o.c_; }
    std::string str() const;

private:
    std::map<int, mpq_class> c_;
};

QLaurent as_laurent(const QScalar& a);
mpq_class classical_limit(const QScalar& a);
mpq_class poisson_extract(const QScalar& c12, const QScalar& c21);

// "k/2" style exponent of q for an exponent k of s
std::string q_exponent_string(int s_exp);
int parse_q_exponent(const std::string& txt);

nlohmann::json to_json(const QLaurent& a);
QLaurent qlaurent_from_json(const nlohmann::json& j);
nlohmann::json to_json(const QScalar& a);
QScalar qscalar_from_json(const nlohmann::json& j);

}  // namespace qs
