// affine_base.hpp - the tropical surface (B, Sigma): charts, transport, weights
#pragma once

#include <gmpxx.h>

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qscatter/error.hpp"

namespace qs {

struct V2 {
    long x = 0, y = 0;
    V2 operator+(const V2& o) const { return {x + o.x, y + o.y}; }
    V2 operator-(const V2& o) const { return {x - o.x, y - o.y}; }
    V2 operator-() const { return {-x, -y}; }
    V2 operator*(long k) const { return {x * k, y * k}; }
    bool operator==(const V2& o) const { return x == o.x && y == o.y; }
    bool operator!=(const V2& o) const { return !(*this == o); }
    bool operator<(const V2& o) const { return x != o.x ? x < o.x : y < o.y; }
    bool is_zero() const { return x == 0 && y == 0; }
};

inline long det(const V2& a, const V2& b) { return a.x * b.y - a.y * b.x; }
long gcd_content(const V2& v);
V2 primitive(const V2& v);
bool is_primitive(const V2& v);
// strict angular order on nonzero vectors, angle measured in [0, 2pi) from +x
bool angle_less(const V2& a, const V2& b);

using ClassVec = std::vector<int>;
// sum of coordinates, or a weighted sum while a DegreeGrading is active on this thread
int class_degree(const ClassVec& c);

class DegreeGrading {
public:
    explicit DegreeGrading(const std::vector<int>& weights);  // empty: plain sum
    ~DegreeGrading();
    DegreeGrading(const DegreeGrading&) = delete;
    DegreeGrading& operator=(const DegreeGrading&) = delete;

private:
    const std::vector<int>* prev_;
};
bool class_effective(const ClassVec& c);
ClassVec class_add(const ClassVec& a, const ClassVec& b, long scale_b = 1);

// Tangent vector or point a*v_j + b*v_{j+1} in cone sigma_j.
struct ChartVector {
    int chart = 0;
    long a = 0, b = 0;
    V2 v() const { return {a, b}; }
    bool operator==(const ChartVector& o) const { return chart == o.chart && a == o.a && b == o.b; }
    bool operator<(const ChartVector& o) const {
        if (chart != o.chart) return chart < o.chart;
        return V2{a, b} < V2{o.a, o.b};
    }
};

struct DevelopedPoint {
    int chart = 0;
    mpq_class a, b;
    int winding = 0;
};

struct TropicalSurface {
    int r = 0;
    std::vector<int> selfint;                       // d_j = D_j^2 for ray rho_j
    std::vector<ClassVec> kinks;                    // kappa_j
    std::vector<std::string> labels;                // curve class generators
    std::vector<std::vector<std::string>> exceptionals;  // labels meeting D_j
    std::vector<std::vector<long>> intersections;   // [label][ray] = label . D_j
    std::optional<std::vector<V2>> fan;             // toric model rays, if any
    std::vector<ClassVec> relations;                // linear relations among the labels, if given

    int class_rank() const { return static_cast<int>(labels.size()); }
    int next(int j) const { return (j + 1) % r; }
    int prev(int j) const { return (j + r - 1) % r; }
    int label_index(const std::string& name) const;
    std::string ray_name(int j) const { return "v" + std::to_string(j + 1); }

    // chart j -> chart j+1 across rho_{j+1}, and its inverse
    V2 to_next(int j, const V2& v) const;
    V2 to_prev(int j, const V2& v) const;
    std::array<long, 4> transition_matrix(int j) const;  // row-major, acting on columns
    std::array<long, 4> monodromy() const;

    ClassVec zero_class() const { return ClassVec(labels.size(), 0); }
    std::vector<long> intersect(const ClassVec& beta) const;  // beta . D_j for each j
};

// beta . (D_1 + ... + D_r) for each label; throws unless all are positive
std::vector<int> anticanonical_weights(const TropicalSurface& S);

TropicalSurface build_surface(const std::vector<int>& selfint, const std::vector<ClassVec>& kinks,
                              const std::vector<std::string>& labels,
                              const std::vector<std::vector<std::string>>& exceptionals = {});

// crossing ray rho_ray; direction +1 goes from chart ray-1 to chart ray
// Relations used to compare classes: the explicit ones, or else the degree-preserving
// classes that meet every D_j trivially (when every label has a known intersection row).
std::vector<ClassVec> class_relations(const TropicalSurface& S);

// Normal form of classes modulo a lattice of relations.
class ClassReducer {
public:
    ClassReducer() = default;
    explicit ClassReducer(const std::vector<ClassVec>& relations);
    explicit ClassReducer(const TropicalSurface& S) : ClassReducer(class_relations(S)) {}
    ClassVec reduce(const ClassVec& c) const;
    bool equivalent(const ClassVec& a, const ClassVec& b) const { return reduce(a) == reduce(b); }
    bool trivial() const { return rows_.empty(); }

private:
    std::vector<std::pair<size_t, ClassVec>> rows_;  // pivot column (entry 1) and row
};

ChartVector transport_tangent(const TropicalSurface& S, const ChartVector& v, int ray, int direction);
std::pair<ChartVector, ClassVec> transport_monomial(const TropicalSurface& S, const ChartVector& m,
                                                    const ClassVec& beta, int ray, int direction);

// coordinates in the psi_j chart where v_{j-1} = (1,0), v_j = (0,1)
V2 psi_coords(const TropicalSurface& S, int j, const ChartVector& v);

// canonical representative of a point of B: origin, or a > 0, b >= 0
ChartVector canonical_point(const TropicalSurface& S, const ChartVector& p);
// all representations of a point inside closed cones
std::vector<ChartVector> point_representations(const TropicalSurface& S, const ChartVector& p);

std::vector<long> weight(const TropicalSurface& S, const ChartVector& p);
V2 nu_pushforward(const TropicalSurface& S, const ChartVector& v);

enum class Orientation { Forward, Backward };

struct RayCrossing {
    int ray;
    DevelopedPoint point;  // in the destination chart
    V2 dir;                // direction in the destination chart
};

// First boundary event of the ray from (a,b) along u inside chart j.
struct ExitEvent {
    enum Kind { Escape, NextRay, PrevRay } kind = Escape;
    mpq_class t;
    mpq_class a, b;  // hit point in the source chart
};
ExitEvent next_exit(const mpq_class& a, const mpq_class& b, const V2& u);

std::vector<RayCrossing> develop_ray_crossings(const TropicalSurface& S, const DevelopedPoint& Q, const V2& dir,
                                               Orientation orient, int max_crossings);

nlohmann::json to_json(const TropicalSurface& S);
TropicalSurface surface_from_json(const nlohmann::json& j);

nlohmann::json class_to_json(const TropicalSurface& S, const ClassVec& c);
ClassVec class_from_json(const TropicalSurface& S, const nlohmann::json& j);
std::string class_str(const TropicalSurface& S, const ClassVec& c);

}  // namespace qs
