// mirror_algebra.cpp - theta-basis multiplication, specialization and relation discovery
#include "qscatter/mirror_algebra.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace qs {

struct ThetaAlgebra::Cache {
    std::mutex mu;
    std::map<std::pair<ChartVector, ChartVector>, StructureRow> rows;
    LineOptions lines;
};

ThetaAlgebra::ThetaAlgebra(ScatteringDiagram D, int N) : D_(std::move(D)), N_(N), cache_(std::make_shared<Cache>()) {
    if (!D_.surface) throw Error(ErrorKind::InvalidInput, "the theta algebra needs a surface");
    if (N < 1) throw Error(ErrorKind::InvalidInput, "order must be at least 1");
    for (const auto& w : D_.walls) classical_ = classical_ || w.f.classical();
}

ThetaElement ThetaAlgebra::theta(const ChartVector& p) const {
    ThetaElement t;
    t[canonical_point(surface(), p)][surface().zero_class()] = 1;
    return t;
}

const StructureRow& ThetaAlgebra::row(const ChartVector& p1, const ChartVector& p2) const {
    auto key = std::make_pair(canonical_point(surface(), p1), canonical_point(surface(), p2));
    {
        std::lock_guard<std::mutex> lock(cache_->mu);
        auto it = cache_->rows.find(key);
        if (it != cache_->rows.end()) return it->second;
    }
    StructureRow r = structure_constants(D_, key.first, key.second, N_, cache_->lines);
    std::lock_guard<std::mutex> lock(cache_->mu);
    return cache_->rows.emplace(key, std::move(r)).first->second;
}

void ThetaAlgebra::remember(const StructureRow& r) const {
    std::lock_guard<std::mutex> lock(cache_->mu);
    cache_->rows.emplace(std::make_pair(r.p1, r.p2), r);
}

RCoeff ThetaAlgebra::specialize(const RCoeff& c) const {
    if (assignment_.empty()) return c;
    RCoeff out;
    for (const auto& [key, val0] : c) {
        ClassVec cls = key;
        QScalar v = val0;
        for (const auto& [i, val] : assignment_) {
            for (int k = 0; k < cls[i]; ++k) v *= val;
            for (int k = 0; k > cls[i]; --k) v = v / val;
            cls[i] = 0;
        }
        out[cls] += v;
    }
    for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

ThetaElement ThetaAlgebra::multiply(const ThetaElement& a, const ThetaElement& b) const {
    DegreeGrading grading(D_.degree_weights);
    ThetaElement out;
    for (const auto& [p1, c1] : a)
        for (const auto& [p2, c2] : b) {
            const StructureRow& r = row(p1, p2);
            for (const auto& [p, c] : r.terms) {
                RCoeff acc;
                for (const auto& [b1, v1] : c1)
                    for (const auto& [b2, v2] : c2)
                        for (const auto& [b3, v3] : c) {
                            ClassVec cls = class_add(class_add(b1, b2), b3);
                            if (class_degree(cls) >= N_) continue;
                            acc[cls] += v1 * v2 * v3;
                        }
                for (const auto& [cls, v] : specialize(acc)) {
                    QScalar& slot = out[p][cls];
                    slot += v;
                }
            }
        }
    for (auto it = out.begin(); it != out.end();) {
        auto& m = it->second;
        for (auto jt = m.begin(); jt != m.end();) jt = jt->second.is_zero() ? m.erase(jt) : std::next(jt);
        it = m.empty() ? out.erase(it) : std::next(it);
    }
    return out;
}

ThetaElement ThetaAlgebra::times_class(const ThetaElement& a, const ClassVec& beta, const QScalar& c) const {
    DegreeGrading grading(D_.degree_weights);
    ThetaElement out;
    if (c.is_zero()) return out;
    for (const auto& [p, coeff] : a)
        for (const auto& [cls, v] : coeff) {
            ClassVec s = class_add(cls, beta);
            if (class_degree(s) >= N_) continue;
            out[p][s] += v * c;
        }
    return add(out, {});
}

ThetaElement add(const ThetaElement& a, const ThetaElement& b, const QScalar& scale_b) {
    ThetaElement out = a;
    for (const auto& [p, coeff] : b)
        for (const auto& [cls, v] : coeff) out[p][cls] += v * scale_b;
    for (auto it = out.begin(); it != out.end();) {
        auto& m = it->second;
        for (auto jt = m.begin(); jt != m.end();) jt = jt->second.is_zero() ? m.erase(jt) : std::next(jt);
        it = m.empty() ? out.erase(it) : std::next(it);
    }
    return out;
}

bool is_zero(const ThetaElement& a) {
    for (const auto& [p, c] : a)
        for (const auto& [cls, v] : c)
            if (!v.is_zero()) return false;
    return true;
}

std::string theta_str(const ThetaElement& a, const TropicalSurface& S) {
    if (is_zero(a)) return "0";
    std::string out;
    for (const auto& [p, c] : a) {
        if (!out.empty()) out += " + ";
        out += "[" + rcoeff_str(c, S.labels) + "]*th_" + point_str(S, p);
    }
    return out;
}

// ---------------------------------------------------------------- construction

ThetaAlgebra build_algebra(const ScatteringDiagram& D, int N, const BuildOptions& opt) {
    ThetaAlgebra A(D, N);
    const TropicalSurface& S = A.surface();
    std::set<ChartVector> pts{{0, 0, 0}};
    for (int c = 0; c < S.r; ++c)
        for (long a = 0; a <= opt.charge_bound; ++a)
            for (long b = 0; b <= opt.charge_bound; ++b)
                if (a || b) pts.insert(canonical_point(S, {c, a, b}));
    A.basis.assign(pts.begin(), pts.end());

    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < A.basis.size(); ++i)
        for (size_t j = 0; j < A.basis.size(); ++j) pairs.emplace_back(i, j);
    std::vector<StructureRow> rows(pairs.size());
    std::atomic<size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr err;
    auto work = [&]() {
        for (size_t k; (k = next++) < pairs.size();) {
            try {
                rows[k] = structure_constants(D, A.basis[pairs[k].first], A.basis[pairs[k].second], N, opt.lines);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
            }
        }
    };
    unsigned n = opt.threads > 0 ? static_cast<unsigned>(opt.threads) : std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);

    for (const auto& r : rows) {
        A.remember(r);
        A.table.rows.push_back(r);
    }
    // theta_0 is the unit
    for (const auto& p : A.basis) {
        const StructureRow& u = A.row({0, 0, 0}, p);
        if (u.terms.size() != 1 || u.terms.begin()->first != p)
            throw Error(ErrorKind::Internal, "theta_0 is not the unit at " + point_str(S, p));
    }
    return A;
}

ThetaAlgebra specialize_classes(const ThetaAlgebra& A, const std::map<std::string, QScalar>& assignment) {
    ThetaAlgebra B = A;
    const TropicalSurface& S = A.surface();
    for (const auto& [name, v] : assignment) {
        int i = S.label_index(name);
        if (i < 0) throw Error(ErrorKind::InvalidInput, "unknown class label " + name);
        B.assign(static_cast<size_t>(i), v);
    }
    B.table.rows.clear();
    for (const auto& r : A.table.rows) {
        ThetaElement t = B.multiply(B.theta(r.p1), B.theta(r.p2));
        StructureRow s{r.p1, r.p2, {}};
        for (const auto& [p, c] : t) s.terms[p] = c;
        B.table.rows.push_back(std::move(s));
    }
    return B;
}

namespace {

ThetaElement reduce_classes(const ThetaElement& a, const ClassReducer& red) {
    ThetaElement out;
    for (const auto& [p, c] : a)
        for (const auto& [cls, v] : c) out[p][red.reduce(cls)] += v;
    return add(out, {});
}

long norm(const ChartVector& p) { return p.a + p.b; }

}  // namespace

AssociativityReport associativity_check(const ThetaAlgebra& A, int max_norm) {
    DegreeGrading grading(A.diagram().degree_weights);
    AssociativityReport rep;
    ClassReducer red(A.surface());
    std::vector<ChartVector> pts;
    for (const auto& p : A.basis)
        if (norm(p) > 0 && norm(p) <= max_norm) pts.push_back(p);
    for (const auto& a : pts)
        for (const auto& b : pts) {
            if (norm(a) + norm(b) > max_norm) continue;
            ThetaElement ab = A.multiply(A.theta(a), A.theta(b));
            for (const auto& c : pts) {
                if (norm(a) + norm(b) + norm(c) > max_norm) continue;
                ++rep.checked;
                ThetaElement left = reduce_classes(A.multiply(ab, A.theta(c)), red);
                ThetaElement right = reduce_classes(A.multiply(A.theta(a), A.multiply(A.theta(b), A.theta(c))), red);
                if (left != right && rep.pass) {
                    rep.pass = false;
                    const auto& S = A.surface();
                    rep.first_failure = "(" + point_str(S, a) + " * " + point_str(S, b) + ") * " + point_str(S, c) +
                                        ": " + theta_str(add(left, right, -1), S);
                }
            }
        }
    return rep;
}

// ---------------------------------------------------------------- relation discovery

namespace {

using Word = std::vector<int>;

// exponent vector of a normal-ordered word; the first generator is the largest variable
std::vector<int> exponents(const Word& w, size_t n) {
    std::vector<int> e(n, 0);
    for (int g : w) ++e[static_cast<size_t>(g)];
    return e;
}

// graded lex on words: length, then exponents with the first generator largest
bool word_less(const Word& a, const Word& b, size_t n) {
    if (a.size() != b.size()) return a.size() < b.size();
    return exponents(a, n) < exponents(b, n);
}

bool divides(const Word& a, const Word& b, size_t n) {
    auto ea = exponents(a, n), eb = exponents(b, n);
    for (size_t i = 0; i < n; ++i)
        if (ea[i] > eb[i]) return false;
    return true;
}

struct Column {
    Word word;
    ClassVec cls;
};

class Solver {
public:
    Solver(const ThetaAlgebra& A, const std::vector<Generator>& gens) : A_(A), n_(gens.size()) {
        for (const auto& g : gens) points_.push_back(canonical_point(A.surface(), g.point));
        const TropicalSurface& S = A.surface();
        // effective classes of degree below N over the labels that are still symbolic
        std::vector<size_t> free;
        for (size_t i = 0; i < S.labels.size(); ++i)
            if (!A.assignment().count(i)) free.push_back(i);
        DegreeGrading grading(A.diagram().degree_weights);
        std::set<ClassVec> seen{S.zero_class()};
        std::vector<ClassVec> cur{S.zero_class()};
        while (!cur.empty()) {
            std::vector<ClassVec> nxt;
            for (const auto& c : cur)
                for (size_t i : free) {
                    ClassVec e = c;
                    ++e[i];
                    if (class_degree(e) < A.order() && seen.insert(e).second) nxt.push_back(e);
                }
            cur = std::move(nxt);
        }
        classes_.assign(seen.begin(), seen.end());
        std::stable_sort(classes_.begin(), classes_.end(),
                         [](const ClassVec& a, const ClassVec& b) { return class_degree(a) < class_degree(b); });
        graded_ = A.assignment().empty();
    }

    size_t size() const { return n_; }
    const std::vector<ChartVector>& points() const { return points_; }

    const ThetaElement& eval(const Word& w) {
        auto it = words_.find(w);
        if (it != words_.end()) return it->second;
        ThetaElement v;
        if (w.empty())
            v = A_.theta({0, 0, 0});
        else {
            Word head(w.begin(), w.end() - 1);
            v = A_.multiply(eval(head), A_.theta(points_[static_cast<size_t>(w.back())]));
        }
        return words_.emplace(w, std::move(v)).first->second;
    }

    std::vector<long> weight_of(const Column& c) const {
        const TropicalSurface& S = A_.surface();
        std::vector<long> w = S.intersect(c.cls);
        for (int g : c.word) {
            auto gw = weight(S, points_[static_cast<size_t>(g)]);
            for (size_t i = 0; i < w.size(); ++i) w[i] += gw[i];
        }
        return w;
    }

    ThetaElement column_value(const Column& c) { return A_.times_class(eval(c.word), c.cls, 1); }

    // normal-ordered words of length <= len, ascending
    std::vector<Word> words_up_to(size_t len) const {
        std::vector<Word> out{{}}, layer{{}};
        for (size_t l = 1; l <= len; ++l) {
            std::vector<Word> nxt;
            for (const auto& w : layer)
                for (int g = w.empty() ? 0 : w.back(); g < static_cast<int>(n_); ++g) {
                    Word v = w;
                    v.push_back(g);
                    nxt.push_back(v);
                }
            out.insert(out.end(), nxt.begin(), nxt.end());
            layer = nxt;
        }
        std::stable_sort(out.begin(), out.end(), [&](const Word& a, const Word& b) { return word_less(a, b, n_); });
        return out;
    }

    // columns z^beta * w for the given words, sorted by (word, class degree, class)
    std::vector<Column> columns(const std::vector<Word>& ws, const std::optional<std::vector<long>>& wt) const {
        std::vector<Column> out;
        for (const auto& w : ws)
            for (const auto& c : classes_) {
                Column col{w, c};
                if (wt && graded_ && weight_of(col) != *wt) continue;
                out.push_back(col);
            }
        return out;
    }

    size_t gens() const { return n_; }

    // Reduced row echelon form of the columns; returns pivot flags and the reduced matrix.
    struct Echelon {
        std::vector<std::vector<QScalar>> rows;  // rows x (cols + extra)
        std::vector<int> pivot_row;              // per column, -1 if free
    };

    Echelon echelon(const std::vector<ThetaElement>& vals) const {
        std::map<std::pair<ChartVector, ClassVec>, size_t> index;
        for (const auto& v : vals)
            for (const auto& [p, c] : v)
                for (const auto& [cls, x] : c) index.emplace(std::make_pair(p, cls), index.size());
        Echelon E;
        E.rows.assign(index.size(), std::vector<QScalar>(vals.size()));
        for (size_t j = 0; j < vals.size(); ++j)
            for (const auto& [p, c] : vals[j])
                for (const auto& [cls, x] : c) E.rows[index.at({p, cls})][j] = x;
        E.pivot_row.assign(vals.size(), -1);
        size_t r = 0;
        for (size_t j = 0; j < vals.size() && r < E.rows.size(); ++j) {
            size_t piv = r;
            while (piv < E.rows.size() && E.rows[piv][j].is_zero()) ++piv;
            if (piv == E.rows.size()) continue;
            std::swap(E.rows[piv], E.rows[r]);
            QScalar inv = QScalar(1) / E.rows[r][j];
            for (auto& x : E.rows[r]) x *= inv;
            for (size_t i = 0; i < E.rows.size(); ++i) {
                if (i == r || E.rows[i][j].is_zero()) continue;
                QScalar f = E.rows[i][j];
                for (size_t k = j; k < vals.size(); ++k)
                    if (!E.rows[r][k].is_zero()) E.rows[i][k] -= f * E.rows[r][k];
            }
            E.pivot_row[j] = static_cast<int>(r);
            ++r;
        }
        return E;
    }

    // coefficients expressing target in the columns, using the smallest pivots; nullopt if impossible
    std::optional<std::vector<QScalar>> express(const std::vector<Column>& cols, const ThetaElement& target) {
        std::vector<ThetaElement> vals;
        for (const auto& c : cols) vals.push_back(column_value(c));
        vals.push_back(target);
        Echelon E = echelon(vals);
        size_t t = cols.size();
        if (E.pivot_row[t] >= 0) return std::nullopt;
        std::vector<QScalar> x(cols.size());
        for (size_t j = 0; j < cols.size(); ++j)
            if (E.pivot_row[j] >= 0) x[j] = E.rows[static_cast<size_t>(E.pivot_row[j])][t];
        return x;
    }

    // kernel vectors, one per free column, as (free column, coefficients of earlier pivots)
    std::vector<std::pair<size_t, std::vector<QScalar>>> kernel(const std::vector<Column>& cols) {
        std::vector<ThetaElement> vals;
        for (const auto& c : cols) vals.push_back(column_value(c));
        Echelon E = echelon(vals);
        std::vector<std::pair<size_t, std::vector<QScalar>>> out;
        for (size_t j = 0; j < cols.size(); ++j) {
            if (E.pivot_row[j] >= 0) continue;
            std::vector<QScalar> x(cols.size());
            for (size_t k = 0; k < j; ++k)
                if (E.pivot_row[k] >= 0) x[k] = E.rows[static_cast<size_t>(E.pivot_row[k])][j];
            out.emplace_back(j, std::move(x));
        }
        return out;
    }

private:
    const ThetaAlgebra& A_;
    size_t n_;
    std::vector<ChartVector> points_;
    std::vector<ClassVec> classes_;
    std::map<Word, ThetaElement> words_;
    bool graded_ = true;
};

std::vector<long> element_weight(const ThetaAlgebra& A, const ThetaElement& t) {
    const TropicalSurface& S = A.surface();
    for (const auto& [p, c] : t)
        for (const auto& [cls, v] : c) {
            auto w = weight(S, p), k = S.intersect(cls);
            for (size_t i = 0; i < w.size(); ++i) w[i] += k[i];
            return w;
        }
    return std::vector<long>(static_cast<size_t>(S.r), 0);
}

std::vector<NCTerm> terms_from(const std::vector<Column>& cols, const std::vector<QScalar>& x, const QScalar& scale) {
    std::vector<NCTerm> out;
    for (size_t j = 0; j < cols.size(); ++j)
        if (!x[j].is_zero()) out.push_back({x[j] * scale, cols[j].cls, cols[j].word});
    return out;
}

}  // namespace

ThetaElement evaluate(const ThetaAlgebra& A, const std::vector<NCTerm>& side, const std::vector<ChartVector>& gens) {
    ThetaElement out;
    for (const auto& t : side) {
        ThetaElement w = A.theta({0, 0, 0});
        for (int g : t.word) w = A.multiply(w, A.theta(gens.at(static_cast<size_t>(g))));
        out = add(out, A.times_class(w, t.cls, t.coeff));
    }
    return out;
}

Presentation derive_relations(const ThetaAlgebra& A, const std::vector<Generator>& gens, const RelationOptions& opt) {
    if (gens.empty()) throw Error(ErrorKind::InvalidInput, "no generators");
    DegreeGrading grading(A.diagram().degree_weights);
    const TropicalSurface& S = A.surface();
    Presentation P;
    P.generators = gens;
    P.labels = S.labels;
    Solver sol(A, gens);
    size_t n = sol.gens();
    std::vector<Word> all = sol.words_up_to(static_cast<size_t>(opt.max_degree));

    // every small basis element is reached by words
    for (const auto& p : A.basis) {
        if (norm(p) == 0 || norm(p) > opt.gen_norm) continue;
        ThetaElement t = A.theta(p);
        if (!sol.express(sol.columns(all, element_weight(A, t)), t))
            throw Error(ErrorKind::NonGenerating, "th_" + point_str(S, p) + " is not reached by words of length " +
                                                      std::to_string(opt.max_degree));
    }

    std::vector<Word> pair_words = sol.words_up_to(2);
    std::vector<Word> leads;
    const QScalar sp = QScalar::s_pow(1), sm = QScalar::s_pow(-1);
    for (int i = 0; i < static_cast<int>(n); ++i)
        for (int j = i + 1; j < static_cast<int>(n); ++j) {
            Word ab{i, j}, ba{j, i};
            std::vector<Word> smaller;
            for (const auto& w : pair_words)
                if (word_less(w, ab, n)) smaller.push_back(w);
            ThetaElement tab = sol.eval(ab), tba = sol.eval(ba);
            auto wt = element_weight(A, is_zero(tab) ? tba : tab);
            std::vector<Column> cols = sol.columns(smaller, wt);
            if (auto x = sol.express(cols, tab)) {
                auto y = sol.express(cols, tba);
                P.relations.push_back({NCRelation::Product, {{1, S.zero_class(), ab}}, terms_from(cols, *x, 1)});
                if (y) P.relations.push_back({NCRelation::Product, {{1, S.zero_class(), ba}}, terms_from(cols, *y, 1)});
                leads.push_back(ab);
                continue;
            }
            for (bool swap : {false, true}) {
                const Word& u = swap ? ba : ab;
                const Word& v = swap ? ab : ba;
                ThetaElement c = add(add({}, swap ? tba : tab, sp), swap ? tab : tba, -sm);
                if (auto x = sol.express(cols, c)) {
                    P.relations.push_back({NCRelation::Commutator,
                                           {{sp, S.zero_class(), u}, {-sm, S.zero_class(), v}},
                                           terms_from(cols, *x, 1)});
                    break;
                }
            }
        }

    // relations among normal-ordered words not implied by the product rules
    std::map<std::vector<long>, std::vector<Column>> groups;
    for (const auto& c : sol.columns(all, std::nullopt)) groups[sol.weight_of(c)].push_back(c);
    std::vector<std::pair<Column, NCRelation>> found;
    for (auto& [w, cols] : groups) {
        std::stable_sort(cols.begin(), cols.end(), [&](const Column& a, const Column& b) {
            if (a.word != b.word) return word_less(a.word, b.word, n);
            if (class_degree(a.cls) != class_degree(b.cls)) return class_degree(a.cls) < class_degree(b.cls);
            return a.cls < b.cls;
        });
        for (auto& [j, x] : sol.kernel(cols)) {
            const Column& lead = cols[j];
            bool implied = false;
            for (const auto& l : leads) implied = implied || divides(l, lead.word, n);
            for (const auto& [c, r] : found)
                implied = implied || (divides(c.word, lead.word, n) && class_effective(class_add(lead.cls, c.cls, -1)));
            if (implied) continue;
            NCRelation r{NCRelation::Kernel, {{1, lead.cls, lead.word}}, terms_from(cols, x, 1)};
            found.emplace_back(lead, std::move(r));
        }
    }
    std::stable_sort(found.begin(), found.end(), [&](const auto& a, const auto& b) {
        return word_less(a.first.word, b.first.word, n);
    });
    for (auto& [c, r] : found) P.relations.push_back(std::move(r));

    std::vector<ChartVector> pts = sol.points();
    ClassReducer red(S);
    for (auto& r : P.relations)
        r.verified = reduce_classes(evaluate(A, r.lhs, pts), red) == reduce_classes(evaluate(A, r.rhs, pts), red);
    return P;
}

// ---------------------------------------------------------------- rendering

namespace {

std::string class_part(const ClassVec& c, const std::vector<std::string>& labels) {
    std::string z;
    for (size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        if (!z.empty()) z += "+";
        if (c[i] != 1) z += std::to_string(c[i]);
        z += labels.at(i);
    }
    return z.empty() ? "" : "z^{" + z + "}";
}

std::string word_part(const std::vector<int>& w, const Presentation& P) {
    std::string out;
    for (size_t i = 0; i < w.size();) {
        size_t k = i;
        while (k < w.size() && w[k] == w[i]) ++k;
        if (!out.empty()) out += "*";
        out += P.generators.at(static_cast<size_t>(w[i])).name;
        if (k - i > 1) out += "^" + std::to_string(k - i);
        i = k;
    }
    return out;
}

// coefficient string and whether it is a single signed monomial
std::string side_text(const std::vector<NCTerm>& side, const Presentation& P, bool classical) {
    if (side.empty()) return "0";
    std::string out;
    for (const auto& t : side) {
        std::string cs = classical ? classical_limit(t.coeff).get_str() : t.coeff.str();
        bool neg = false;
        bool compound = cs.find(' ') != std::string::npos;
        if (!compound && cs[0] == '-') {
            neg = true;
            cs = cs.substr(1);
        }
        std::vector<std::string> parts;
        std::string cls = class_part(t.cls, P.labels), word = word_part(t.word, P);
        if (cs != "1" || (cls.empty() && word.empty())) parts.push_back(compound ? "(" + cs + ")" : cs);
        if (!cls.empty()) parts.push_back(cls);
        if (!word.empty()) parts.push_back(word);
        std::string s;
        for (size_t i = 0; i < parts.size(); ++i) s += (i ? "*" : "") + parts[i];
        if (out.empty())
            out = neg ? "-" + s : s;
        else
            out += (neg ? " - " : " + ") + s;
    }
    return out;
}

std::vector<NCTerm> drop_zero_classical(std::vector<NCTerm> side) {
    side.erase(std::remove_if(side.begin(), side.end(), [](const NCTerm& t) { return classical_limit(t.coeff) == 0; }),
               side.end());
    return side;
}

nlohmann::json side_json(const std::vector<NCTerm>& side, const Presentation& P) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : side) {
        nlohmann::json cls = nlohmann::json::object();
        for (size_t i = 0; i < t.cls.size(); ++i)
            if (t.cls[i]) cls[P.labels.at(i)] = t.cls[i];
        nlohmann::json word = nlohmann::json::array();
        for (int g : t.word) word.push_back(P.generators.at(static_cast<size_t>(g)).name);
        arr.push_back({{"coeff", to_json(as_laurent(t.coeff))}, {"class", cls}, {"word", word}});
    }
    return arr;
}

const char* kind_name(NCRelation::Kind k) {
    switch (k) {
        case NCRelation::Product: return "product";
        case NCRelation::Commutator: return "commutator";
        case NCRelation::Kernel: return "kernel";
    }
    return "";
}

}  // namespace

std::string relation_text(const NCRelation& r, const Presentation& P) {
    return side_text(r.lhs, P, false) + " = " + side_text(r.rhs, P, false);
}

std::string classical_text(const NCRelation& r, const Presentation& P) {
    return side_text(drop_zero_classical(r.lhs), P, true) + " = " + side_text(drop_zero_classical(r.rhs), P, true);
}

nlohmann::json to_json(const NCRelation& r, const Presentation& P) {
    return {{"kind", kind_name(r.kind)},
            {"text", relation_text(r, P)},
            {"lhs", side_json(r.lhs, P)},
            {"rhs", side_json(r.rhs, P)},
            {"verified", r.verified}};
}

nlohmann::json to_json(const Presentation& P) {
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : P.generators) gens.push_back({{"name", g.name}, {"point", {g.point.chart, g.point.a, g.point.b}}});
    nlohmann::json rels = nlohmann::json::array();
    for (const auto& r : P.relations) rels.push_back(to_json(r, P));
    return {{"generators", gens}, {"relations", rels}};
}

}  // namespace qs
