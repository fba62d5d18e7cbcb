// brokenlines.hpp - quantum broken lines, lifts and theta-function structure constants
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qscatter/scattering.hpp"

namespace qs {

// Element of R^q: finite sum of coeff * z^beta.
using RCoeff = std::map<ClassVec, QScalar>;

struct LineSegment {
    int chart = 0;
    mpq_class a, b;  // end point of the segment (towards Q), in chart coordinates
    Exp mono;        // attached monomial, exponent in the same chart
    QScalar coeff;
};

struct BrokenLine {
    ChartVector charge;
    DevelopedPoint endpoint;
    std::vector<LineSegment> segments;  // from the unbounded segment to the one ending at Q
    QScalar coeff;                      // c(gamma) without its class part
    ClassVec cls;
    V2 final_tangent;  // s(gamma), in the chart of Q
    int bends = 0;
};

struct LineOptions {
    int max_crossings = 64;
    int retry_seed = 0;
    std::optional<bool> classical;  // defaults to the flag of the diagram's walls
};

std::vector<BrokenLine> enumerate_broken_lines(const ScatteringDiagram& D, const ChartVector& p,
                                               const DevelopedPoint& Q, int N, const LineOptions& opt = {});
QTorusElement lift(const ScatteringDiagram& D, const DevelopedPoint& Q, const ChartVector& p, int N,
                   const LineOptions& opt = {});

// Row of the multiplication table: theta_{p1} theta_{p2} = sum_p C^p theta_p.
struct StructureRow {
    ChartVector p1, p2;
    std::map<ChartVector, RCoeff> terms;  // keyed by canonical points
};

// endpoint used for the coefficient of theta_p: p plus a small generic offset
DevelopedPoint point_near(const ScatteringDiagram& D, const ChartVector& p, int retry);

StructureRow structure_constants(const ScatteringDiagram& D, const ChartVector& p1, const ChartVector& p2, int N,
                                 const LineOptions& opt = {});

struct StructureTable {
    std::vector<StructureRow> rows;
    const StructureRow* find(const ChartVector& p1, const ChartVector& p2) const;
};

// Poisson bracket {theta_p1, theta_p2} = sum_p P^p theta_p with classical coefficients.
using PoissonRow = std::map<ChartVector, std::map<ClassVec, mpq_class>>;
struct PoissonEntry {
    ChartVector p1, p2;
    PoissonRow bracket;
};
// Computes each bracket twice (q-commutator limit and direct classical sum) and
// throws Internal if they disagree.
std::vector<PoissonEntry> poisson_table(const ScatteringDiagram& D, const std::vector<ChartVector>& charges, int N,
                                        const LineOptions& opt = {});

struct WeightReport {
    bool pass = true;
    std::string first_failure;
    int checked = 0;
};
WeightReport weight_check(const StructureTable& table, const TropicalSurface& S);

struct IntegralityReport {
    bool pass = true;
    std::string first_failure;
    int checked = 0;
};
IntegralityReport q_integrality(const StructureTable& table);

std::string point_str(const TropicalSurface& S, const ChartVector& p);
std::string rcoeff_str(const RCoeff& c, const std::vector<std::string>& labels);
nlohmann::json to_json(const StructureRow& row, const TropicalSurface& S);
nlohmann::json to_json(const BrokenLine& l, const TropicalSurface& S);

}  // namespace qs
