// scattering.hpp - scattering diagrams, path-ordered products and completion
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qscatter/affine_base.hpp"
#include "qscatter/qtorus.hpp"

namespace qs {

enum class WallOrientation { Ingoing, Outgoing };

struct Wall {
    int chart = 0;  // cone sigma_j on B; always 0 on R^2
    V2 dir;         // primitive direction of the support ray, in chart coordinates
    WallOrientation orient = WallOrientation::Outgoing;
    QTorusElement f;
    bool added = false;  // produced by completion

    V2 m_hamiltonian() const { return orient == WallOrientation::Outgoing ? dir : -dir; }
    bool on_ray() const { return dir == V2{1, 0}; }  // on B: the wall lies on rho_chart
};

struct ScatteringDiagram {
    std::optional<TropicalSurface> surface;  // empty for the smooth model R^2
    std::vector<std::string> labels;         // curve class generators
    std::vector<Wall> walls;
    int order = 1;
    std::vector<int> degree_weights;  // per label; empty means the plain label-sum degree

    size_t rank() const { return labels.size(); }
};

// Truncate by beta . (-K) instead of the label sum; wall terms of too high degree are dropped.
void use_anticanonical_grading(ScatteringDiagram& D);

// Validates and normalizes walls (direction (0,1) in chart j moves to the ray of chart j+1).
void normalize_walls(ScatteringDiagram& D);
void sort_walls(ScatteringDiagram& D);

// Sign of the crossing of wall w by a path with velocity v: sign(-<m(H), v>).
int crossing_sign(const Wall& w, const V2& velocity);

// R^2: walls met by the anticlockwise arc from direction `from` to `to`, in order.
// from == to means a full turn.
std::vector<size_t> arc_walls(const ScatteringDiagram& D, const V2& from, const V2& to);
QTorusElement path_ordered_product(const ScatteringDiagram& D, const V2& from, const V2& to,
                                   const QTorusElement& elem, bool anticlockwise = true);
// full anticlockwise loop based just past the positive x-axis
QTorusElement loop_product(const ScatteringDiagram& D, const QTorusElement& elem);

struct LoopReport {
    bool pass = true;
    int degree = -1;  // lowest degree of a discrepancy
    std::vector<std::string> terms;
};
LoopReport check_loop_identity(const ScatteringDiagram& D, int N);

ScatteringDiagram complete(const ScatteringDiagram& D, int N);
ScatteringDiagram classical_limit(const ScatteringDiagram& D);

// Straight segment inside one cone of B from P to P' (rational coordinates):
// interior walls crossed, ordered along the segment.
struct SegmentHit {
    size_t wall;
    mpq_class t;
};
std::vector<SegmentHit> segment_wall_hits(const ScatteringDiagram& D, int chart, const mpq_class& pa,
                                          const mpq_class& pb, const mpq_class& ua, const mpq_class& ub,
                                          const std::optional<mpq_class>& tmax);
int crossing_sign(const Wall& w, const mpq_class& va, const mpq_class& vb);
QTorusElement cone_path_product(const ScatteringDiagram& D, int chart, const mpq_class& a0, const mpq_class& b0,
                                const mpq_class& a1, const mpq_class& b1, const QTorusElement& elem);

struct ConsistencyReport {
    bool pass = true;
    std::string first_failure;
    int comparisons = 0;
};
// numerical consistency on B; implemented in consistency.cpp on top of broken lines
ConsistencyReport consistency_check_on_B(const ScatteringDiagram& D, const std::vector<ChartVector>& charges, int N);

nlohmann::json to_json(const ScatteringDiagram& D);
ScatteringDiagram diagram_from_json(const nlohmann::json& j);

}  // namespace qs
