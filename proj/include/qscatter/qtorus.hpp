// qtorus.hpp - truncated quantum torus algebra and wall-crossing automorphisms
#pragma once

#include <climits>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qscatter/affine_base.hpp"
#include "qscatter/qcoeff.hpp"

namespace qs {

// Exponent (m, beta): tangent part in a fixed chart plus a curve class.
struct Exp {
    V2 m;
    ClassVec c;
    bool operator<(const Exp& o) const {
        if (m != o.m) return m < o.m;
        return c < o.c;
    }
    bool operator==(const Exp& o) const { return m == o.m && c == o.c; }
    int degree() const { return class_degree(c); }
};

Exp exp_add(const Exp& a, const Exp& b);

struct QMonomial {
    Exp e;
    QScalar coeff;
};

constexpr int kUntruncated = INT_MAX;

class QTorusElement {
public:
    QTorusElement() = default;
    QTorusElement(int order, int chart = 0, bool classical = false)
        : order_(order), chart_(chart), classical_(classical) {}
    static QTorusElement one(int order, size_t rank, int chart = 0, bool classical = false);
    static QTorusElement monomial(const Exp& e, const QScalar& c, int order, int chart = 0, bool classical = false);

    int order() const { return order_; }
    int chart() const { return chart_; }
    bool classical() const { return classical_; }
    void set_chart(int c) { chart_ = c; }
    const std::map<Exp, QScalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }
    QScalar coeff(const Exp& e) const;
    bool keeps(const Exp& e) const { return e.degree() < order_; }

    void add_term(const Exp& e, const QScalar& c);  // respects truncation
    QTorusElement operator+(const QTorusElement& o) const;
    QTorusElement operator-(const QTorusElement& o) const;
    QTorusElement operator*(const QTorusElement& o) const;
    QTorusElement operator-() const;
    QTorusElement scaled(const QScalar& c) const;
    QTorusElement truncated(int order) const;
    bool operator==(const QTorusElement& o) const { return terms_ == o.terms_; }
    bool operator!=(const QTorusElement& o) const { return !(*this == o); }
    // lowest class degree among nonconstant (nonzero tangent or nonzero class) terms
    int min_positive_degree() const;

    std::string str(const std::vector<std::string>& labels) const;

private:
    std::map<Exp, QScalar> terms_;
    int order_ = kUntruncated;
    int chart_ = 0;
    bool classical_ = false;
};

QMonomial mono_mul(const QMonomial& a, const QMonomial& b, bool classical = false);

enum class ElemOp { Add, Mul };
QTorusElement elem_arith(const QTorusElement& a, const QTorusElement& b, ElemOp op);

// Inverse of an element 1 + (terms of positive degree) by geometric series.
QTorusElement unit_inverse(const QTorusElement& f);
QTorusElement power(const QTorusElement& f, long k);

// f(q^j z): the term with tangent l * m_dir is rescaled by q^{l j}.
QTorusElement q_shift(const QTorusElement& f, const V2& m_dir, int j);
long multiple_of(const V2& t, const V2& m_dir);  // l with t = l * m_dir

void validate_wall_function(const QTorusElement& f, const V2& m_dir);

// Conjugation by the wall with function f and m(H) = m_dir; eps = -1 applies the inverse.
QTorusElement wallcross_apply(const QTorusElement& f, const V2& m_dir, const QTorusElement& elem, int eps = 1);

struct HamTerm {
    Exp p;
    QScalar h;
    bool operator==(const HamTerm& o) const { return p == o.p && h == o.h; }
};
QTorusElement hamiltonian_to_f(const std::vector<HamTerm>& H, const V2& m_dir, int order, size_t rank,
                               bool classical = false);
std::vector<HamTerm> f_to_hamiltonian(const QTorusElement& f, const V2& m_dir);

struct BpsFactor {
    Exp p;
    int j;     // factor (1 + q^{(j-1)/2} z^p)^omega
    long omega;
    bool operator==(const BpsFactor& o) const { return p == o.p && j == o.j && omega == o.omega; }
};
std::vector<BpsFactor> bps_factorize(const QTorusElement& f);
QTorusElement bps_reconstruct(const std::vector<BpsFactor>& factors, int order, size_t rank, bool classical = false);

// q -> 1 on every coefficient; the result multiplies commutatively
QTorusElement classical_limit(const QTorusElement& a);

nlohmann::json to_json(const QTorusElement& a, const std::vector<std::string>& labels);
QTorusElement qtorus_from_json(const nlohmann::json& j, const std::vector<std::string>& labels, int order);

}  // namespace qs
