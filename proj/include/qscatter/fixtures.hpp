// fixtures.hpp - bundled example problems and the input document format
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qscatter/canonical.hpp"

namespace qs {

struct Generator {
    std::string name;
    ChartVector point;
};

// A seed (scattered on R^2, then pulled back to B) or a ready diagram on B.
struct Problem {
    std::string name;
    int order = 1;
    std::optional<Seed> seed;
    LabelMode mode = LabelMode::Keep;
    ScatteringDiagram diagram;  // on B when a surface is known
    std::vector<Generator> generators;
};

// `order` overrides the document's order when given.
Problem problem_from_json(const nlohmann::json& j, std::optional<int> order = std::nullopt);

std::vector<std::string> fixture_names();
const std::string& fixture_text(const std::string& name);
Problem load_fixture(const std::string& name, std::optional<int> order = std::nullopt);

// "0", a generator name, "[c,a,b]", or a sum like "2v1+v2" of multiples of two adjacent rays
// (with one ray the far side is written v1')
ChartVector parse_charge(const TropicalSurface& S, const std::string& text, const std::vector<Generator>& gens = {});
std::vector<ChartVector> parse_charges(const TropicalSurface& S, const std::string& list,
                                       const std::vector<Generator>& gens = {});

// "builtin:NAME" or a path to a JSON document
Problem load_problem(const std::string& source, std::optional<int> order = std::nullopt);

}  // namespace qs
