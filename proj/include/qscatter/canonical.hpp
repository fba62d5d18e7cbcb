// canonical.hpp - seed data, the diagram D_m on R^2 and its pull-back to B
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qscatter/scattering.hpp"

namespace qs {

struct Blowup {
    V2 dir;             // seed vector m_j; the blown-up divisor sits on the fan ray -m_j
    std::string label;  // exceptional class E_j
};

struct Seed {
    std::vector<Blowup> blowups;
    std::vector<V2> extra_rays;

    std::vector<std::string> class_labels() const;
};

Seed seed_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Seed& s);

// One line R.m per distinct seed direction carrying prod_j (1 + q^{-1/2} z^{(-m, E_j)}).
ScatteringDiagram build_seed_diagram(const Seed& seed, int N);

// Toric model fan sorted by angle, with D_j^2 = dbar_j - (blow-ups on ray j) and kinks D_j.
TropicalSurface surface_from_seed(const Seed& seed);

enum class LabelMode {
    Keep,   // R^2 classes keep their exceptional labels
    Fresh,  // every wall on B gets its own class label
};

ScatteringDiagram canonical_diagram(const Seed& seed, int N, LabelMode mode = LabelMode::Keep);

struct RhoPresentation {
    int ray = 0;
    int selfint = 0;
    QTorusElement f_out, f_in;  // functions of X = z^{(1,0)} in chart ray
    std::vector<std::string> relations;
    bool verified = false;
    std::string failure;
};

RhoPresentation rho_presentation(const ScatteringDiagram& D, int ray);
nlohmann::json to_json(const RhoPresentation& p, const std::vector<std::string>& labels);

}  // namespace qs
