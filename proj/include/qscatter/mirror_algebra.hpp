// mirror_algebra.hpp - the quantum mirror algebra in the theta basis and its presentations
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qscatter/brokenlines.hpp"
#include "qscatter/fixtures.hpp"

namespace qs {

// sum over canonical points p of (element of R^q) * theta_p
using ThetaElement = std::map<ChartVector, RCoeff>;

class ThetaAlgebra {
public:
    ThetaAlgebra(ScatteringDiagram D, int N);

    const ScatteringDiagram& diagram() const { return D_; }
    const TropicalSurface& surface() const { return *D_.surface; }
    int order() const { return N_; }
    bool classical() const { return classical_; }

    std::vector<ChartVector> basis;  // charge set, canonical points
    StructureTable table;            // rows over basis x basis

    // label index -> value; these labels no longer appear in coefficients
    const std::map<size_t, QScalar>& assignment() const { return assignment_; }
    void assign(size_t label, const QScalar& v) { assignment_[label] = v; }

    ThetaElement theta(const ChartVector& p) const;
    // product row theta_p1 theta_p2, from the table or computed on demand
    const StructureRow& row(const ChartVector& p1, const ChartVector& p2) const;
    void remember(const StructureRow& r) const;
    ThetaElement multiply(const ThetaElement& a, const ThetaElement& b) const;
    ThetaElement times_class(const ThetaElement& a, const ClassVec& beta, const QScalar& c) const;

private:
    RCoeff specialize(const RCoeff& c) const;

    ScatteringDiagram D_;
    int N_;
    bool classical_ = false;
    std::map<size_t, QScalar> assignment_;
    struct Cache;
    std::shared_ptr<Cache> cache_;
};

ThetaElement add(const ThetaElement& a, const ThetaElement& b, const QScalar& scale_b = 1);
bool is_zero(const ThetaElement& a);
std::string theta_str(const ThetaElement& a, const TropicalSurface& S);

struct BuildOptions {
    int charge_bound = 4;  // chart coordinates 0..bound
    int threads = 0;       // 0: hardware concurrency
    LineOptions lines;
};

ThetaAlgebra build_algebra(const ScatteringDiagram& D, int N, const BuildOptions& opt = {});

// Labels missing from the assignment stay symbolic.
ThetaAlgebra specialize_classes(const ThetaAlgebra& A, const std::map<std::string, QScalar>& assignment);

struct AssociativityReport {
    bool pass = true;
    std::string first_failure;
    int checked = 0;
};
// triples of basis points with a1+b1 + a2+b2 + a3+b3 <= max_norm, compared modulo class relations
AssociativityReport associativity_check(const ThetaAlgebra& A, int max_norm);

// ---------------------------------------------------------------- presentations

struct NCTerm {
    QScalar coeff;
    ClassVec cls;
    std::vector<int> word;  // generator indices, left to right
};

struct NCRelation {
    enum Kind { Product, Commutator, Kernel } kind = Kernel;
    std::vector<NCTerm> lhs, rhs;
    bool verified = false;  // both sides agree in the algebra
};

struct RelationOptions {
    int max_degree = 3;  // longest word used by the kernel search
    int gen_norm = 3;    // basis points with a+b up to this must be reached by words
};

struct Presentation {
    std::vector<Generator> generators;
    std::vector<NCRelation> relations;
    std::vector<std::string> labels;
};

// throws NonGenerating when a basis element below the norm bound is not a combination of words
Presentation derive_relations(const ThetaAlgebra& A, const std::vector<Generator>& gens,
                              const RelationOptions& opt = {});

ThetaElement evaluate(const ThetaAlgebra& A, const std::vector<NCTerm>& side,
                      const std::vector<ChartVector>& gens);

std::string relation_text(const NCRelation& r, const Presentation& P);
nlohmann::json to_json(const NCRelation& r, const Presentation& P);
nlohmann::json to_json(const Presentation& P);
// relation with q set to 1
std::string classical_text(const NCRelation& r, const Presentation& P);

}  // namespace qs
