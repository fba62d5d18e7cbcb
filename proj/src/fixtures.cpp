// fixtures.cpp - bundled problems and input document parsing
#include "qscatter/fixtures.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace qs {

namespace detail {
const std::vector<std::pair<std::string, std::string>>& embedded_fixtures();
}

namespace {

bool looks_like_seed(const nlohmann::json& j) {
    return j.contains("seed_vectors") || j.contains("blowups") || j.contains("extra_rays");
}

LabelMode parse_mode(const std::string& m) {
    if (m == "keep") return LabelMode::Keep;
    if (m == "fresh") return LabelMode::Fresh;
    throw Error(ErrorKind::InvalidInput, "label_mode must be keep or fresh, got " + m);
}

ChartVector parse_point(const nlohmann::json& p) {
    if (!p.is_array() || p.size() != 3) throw Error(ErrorKind::Parse, "a point is [chart, a, b]");
    return {p.at(0).get<int>(), p.at(1).get<long>(), p.at(2).get<long>()};
}

}  // namespace

Problem problem_from_json(const nlohmann::json& j, std::optional<int> order) {
    Problem P;
    try {
        if (!j.is_object()) throw Error(ErrorKind::Parse, "input must be a JSON object");
        P.name = j.value("name", "");
        P.order = order ? *order : j.value("order", 3);
        if (P.order < 1) throw Error(ErrorKind::InvalidInput, "order must be at least 1");
        P.mode = parse_mode(j.value("label_mode", "keep"));

        nlohmann::json seed_doc, diag_doc;
        std::string kind = j.value("kind", "");
        if (kind == "seed" || (kind.empty() && j.contains("seed")))
            seed_doc = j.at("seed");
        else if (kind == "diagram" || (kind.empty() && j.contains("diagram")))
            diag_doc = j.at("diagram");
        else if (kind.empty() && looks_like_seed(j))
            seed_doc = j;
        else if (kind.empty() && (j.contains("walls") || j.contains("surface")))
            diag_doc = j;
        else
            throw Error(ErrorKind::InvalidInput, "input is neither a seed nor a diagram");

        if (!seed_doc.is_null()) {
            P.seed = seed_from_json(seed_doc);
            if (P.seed->extra_rays.empty())
                P.diagram = build_seed_diagram(*P.seed, P.order);
            else
                P.diagram = canonical_diagram(*P.seed, P.order, P.mode);
            std::string grading = j.value("grading", "sum");
            if (grading == "anticanonical" && P.diagram.surface)
                use_anticanonical_grading(P.diagram);
            else if (grading != "sum")
                throw Error(ErrorKind::InvalidInput, "grading must be sum or anticanonical, got " + grading);
        } else {
            diag_doc["order"] = P.order;
            P.diagram = diagram_from_json(diag_doc);
        }
        for (const auto& g : j.value("generators", nlohmann::json::array()))
            P.generators.push_back({g.at("name").get<std::string>(), parse_point(g.at("point"))});
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("problem: ") + e.what());
    }
    if (P.diagram.surface)
        for (const auto& g : P.generators)
            if (g.point.chart < 0 || g.point.chart >= P.diagram.surface->r || g.point.a < 0 || g.point.b < 0)
                throw Error(ErrorKind::InvalidInput, "generator " + g.name + " is not a point of B");
    return P;
}

ChartVector parse_charge(const TropicalSurface& S, const std::string& text, const std::vector<Generator>& gens) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw Error(ErrorKind::Parse, "empty charge");
    for (const auto& g : gens)
        if (g.name == s) return canonical_point(S, g.point);
    if (s == "0") return {0, 0, 0};
    if (s.front() == '[') {
        nlohmann::json j = nlohmann::json::parse(s, nullptr, false);
        if (j.is_discarded()) throw Error(ErrorKind::Parse, "bad charge " + text);
        ChartVector p = parse_point(j);
        if (p.chart < 0 || p.chart >= S.r || p.a < 0 || p.b < 0)
            throw Error(ErrorKind::InvalidInput, "charge " + text + " is not a point of B");
        return canonical_point(S, p);
    }
    // terms k v j, optionally primed
    struct Term {
        long k;
        int ray;
        bool prime;
    };
    std::vector<Term> terms;
    size_t i = 0;
    while (i < s.size()) {
        if (!terms.empty()) {
            if (s[i] != '+') throw Error(ErrorKind::Parse, "bad charge " + text);
            ++i;
        }
        size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        long k = j > i ? std::stol(s.substr(i, j - i)) : 1;
        if (j >= s.size() || s[j] != 'v') throw Error(ErrorKind::Parse, "bad charge " + text);
        size_t d = ++j;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        if (j == d) throw Error(ErrorKind::Parse, "bad charge " + text);
        int ray = std::stoi(s.substr(d, j - d)) - 1;
        bool prime = j < s.size() && s[j] == '\'';
        if (prime) ++j;
        if (ray < 0 || ray >= S.r) throw Error(ErrorKind::InvalidInput, "no ray v" + std::to_string(ray + 1));
        terms.push_back({k, ray, prime});
        i = j;
    }
    if (terms.size() == 1) {
        const Term& t = terms[0];
        return canonical_point(S, t.prime ? ChartVector{S.prev(t.ray), 0, t.k} : ChartVector{t.ray, t.k, 0});
    }
    if (terms.size() == 2) {
        const Term &a = terms[0], &b = terms[1];
        if (S.r == 1 && !a.prime && b.prime) return canonical_point(S, {0, a.k, b.k});
        if (S.r > 1 && !a.prime && !b.prime) {
            if (b.ray == S.next(a.ray)) return canonical_point(S, {a.ray, a.k, b.k});
            if (a.ray == S.next(b.ray)) return canonical_point(S, {b.ray, b.k, a.k});
        }
    }
    throw Error(ErrorKind::InvalidInput, "charge " + text + " does not lie in one cone");
}

std::vector<ChartVector> parse_charges(const TropicalSurface& S, const std::string& list,
                                       const std::vector<Generator>& gens) {
    std::vector<ChartVector> out;
    std::string cur;
    int depth = 0;
    for (char ch : list + ",") {
        if (ch == '[') ++depth;
        if (ch == ']') --depth;
        if (ch == ',' && depth == 0) {
            if (!cur.empty()) out.push_back(parse_charge(S, cur, gens));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    return out;
}

std::vector<std::string> fixture_names() {
    std::vector<std::string> out;
    for (const auto& [n, t] : detail::embedded_fixtures()) out.push_back(n);
    return out;
}

const std::string& fixture_text(const std::string& name) {
    for (const auto& [n, t] : detail::embedded_fixtures())
        if (n == name) return t;
    throw Error(ErrorKind::InvalidInput, "no bundled fixture named " + name);
}

Problem load_fixture(const std::string& name, std::optional<int> order) {
    return problem_from_json(nlohmann::json::parse(fixture_text(name)), order);
}

Problem load_problem(const std::string& source, std::optional<int> order) {
    const std::string prefix = "builtin:";
    if (source.rfind(prefix, 0) == 0) return load_fixture(source.substr(prefix.size()), order);
    std::ifstream in(source);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + source);
    std::stringstream ss;
    ss << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::Parse, source + ": " + e.what());
    }
    return problem_from_json(j, order);
}

}  // namespace qs
