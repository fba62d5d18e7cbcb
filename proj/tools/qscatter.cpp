// qscatter.cpp - command-line front end
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qscatter/mirror_algebra.hpp"

using nlohmann::json;

namespace {

constexpr int kDefaultMaxOrder = 10;

struct RunConfig {
    std::string command;
    std::string input;
    std::optional<int> order;
    std::string charges;
    std::string format = "json";
    std::string out;
    std::optional<std::string> q;
    int retry_seed = 0;
};

int max_order() {
    const char* env = std::getenv("QSCATTER_MAX_DEGREE");
    if (!env) return kDefaultMaxOrder;
    try {
        return std::stoi(env);
    } catch (const std::exception&) {
        throw qs::Error(qs::ErrorKind::InvalidInput, std::string("QSCATTER_MAX_DEGREE is not an integer: ") + env);
    }
}

json diagram_json(const qs::ScatteringDiagram& D) {
    json j = qs::to_json(D);
    for (size_t i = 0; i < D.walls.size(); ++i) j["walls"][i]["text"] = D.walls[i].f.str(D.labels);
    return j;
}

std::vector<qs::ChartVector> charges_of(const qs::Problem& P, const RunConfig& cfg) {
    const auto& S = *P.diagram.surface;
    if (!cfg.charges.empty()) return qs::parse_charges(S, cfg.charges, P.generators);
    std::vector<qs::ChartVector> out;
    if (!P.generators.empty())
        for (const auto& g : P.generators) out.push_back(qs::canonical_point(S, g.point));
    else
        for (int j = 0; j < S.r; ++j) out.push_back({j, 1, 0});
    return out;
}

const qs::TropicalSurface& need_surface(const qs::Problem& P) {
    if (!P.diagram.surface)
        throw qs::Error(qs::ErrorKind::InvalidInput, "this command needs a diagram on B (seed with extra_rays or a surface)");
    return *P.diagram.surface;
}

// ---------------------------------------------------------------- commands

json cmd_scatter(const qs::Problem& P) {
    qs::ScatteringDiagram D0;
    if (P.seed)
        D0 = qs::build_seed_diagram(*P.seed, P.order);
    else if (!P.diagram.surface)
        D0 = P.diagram;
    else
        throw qs::Error(qs::ErrorKind::InvalidInput, "scatter works on R^2; give a seed or a diagram without a surface");
    qs::ScatteringDiagram D = qs::complete(D0, P.order);
    auto loop = qs::check_loop_identity(D, P.order);
    int added = 0;
    for (const auto& w : D.walls) added += w.added;
    return {{"command", "scatter"},
            {"order", P.order},
            {"added_walls", added},
            {"diagram", diagram_json(D)},
            {"loop", {{"pass", loop.pass}, {"degree", loop.degree}, {"terms", loop.terms}}},
            {"pass", loop.pass}};
}

json cmd_canonical(const qs::Problem& P) {
    const auto& S = need_surface(P);
    json rho = json::array();
    bool ok = true;
    for (int j = 0; j < S.r; ++j) {
        auto rp = qs::rho_presentation(P.diagram, j);
        ok = ok && rp.verified;
        json jr = qs::to_json(rp, P.diagram.labels);
        if (!rp.failure.empty()) jr["failure"] = rp.failure;
        rho.push_back(jr);
    }
    return {{"command", "canonical"}, {"order", P.order}, {"diagram", diagram_json(P.diagram)}, {"rho", rho}, {"pass", ok}};
}

json cmd_theta(const qs::Problem& P, const RunConfig& cfg) {
    const auto& S = need_surface(P);
    auto charges = charges_of(P, cfg);
    qs::LineOptions lo;
    lo.retry_seed = cfg.retry_seed;
    json rows = json::array();
    for (const auto& p1 : charges)
        for (const auto& p2 : charges) {
            auto row = qs::structure_constants(P.diagram, p1, p2, P.order, lo);
            json jr = qs::to_json(row, S);
            json text = json::array();
            for (const auto& [p, c] : row.terms)
                text.push_back(qs::rcoeff_str(c, P.diagram.labels) + " * th_" + qs::point_str(S, p));
            jr["text"] = text;
            rows.push_back(jr);
        }
    return {{"command", "theta"}, {"order", P.order}, {"rows", rows}, {"pass", true}};
}

json cmd_relations(const qs::Problem& P) {
    need_surface(P);
    if (P.generators.empty()) throw qs::Error(qs::ErrorKind::InvalidInput, "input lists no generators");
    qs::ThetaAlgebra A = qs::build_algebra(P.diagram, P.order);
    qs::Presentation pres = qs::derive_relations(A, P.generators);
    bool ok = true;
    json classical = json::array();
    for (const auto& r : pres.relations) {
        ok = ok && r.verified;
        classical.push_back(qs::classical_text(r, pres));
    }
    json j = qs::to_json(pres);
    j["command"] = "relations";
    j["order"] = P.order;
    j["classical"] = classical;
    j["pass"] = ok;
    return j;
}

json cmd_check(const qs::Problem& P, const RunConfig& cfg) {
    const auto& S = need_surface(P);
    auto charges = charges_of(P, cfg);
    json j = {{"command", "check"}, {"order", P.order}};
    std::string first;

    auto cons = qs::consistency_check_on_B(P.diagram, charges, P.order);
    j["consistency"] = {{"pass", cons.pass}, {"comparisons", cons.comparisons}, {"first_failure", cons.first_failure}};
    if (!cons.pass && first.empty()) first = "consistency: " + cons.first_failure;

    qs::LineOptions lo;
    lo.retry_seed = cfg.retry_seed;
    qs::StructureTable table;
    for (const auto& p1 : charges)
        for (const auto& p2 : charges) table.rows.push_back(qs::structure_constants(P.diagram, p1, p2, P.order, lo));

    auto wr = qs::weight_check(table, S);
    j["weight"] = {{"pass", wr.pass}, {"checked", wr.checked}, {"first_failure", wr.first_failure}};
    if (!wr.pass && first.empty()) first = "weight: " + wr.first_failure;

    auto ir = qs::q_integrality(table);
    j["integrality"] = {{"pass", ir.pass}, {"checked", ir.checked}, {"first_failure", ir.first_failure}};
    if (!ir.pass && first.empty()) first = "integrality: " + ir.first_failure;

    j["pass"] = first.empty();
    j["first_failure"] = first;
    return j;
}

// ---------------------------------------------------------------- text rendering

std::optional<mpq_class> sqrt_rational(const mpq_class& q) {
    mpz_class n = q.get_num(), d = q.get_den(), rn, rd;
    if (n < 0) return std::nullopt;
    rn = sqrt(n);
    rd = sqrt(d);
    if (rn * rn != n || rd * rd != d) return std::nullopt;
    return mpq_class(rn, rd);
}

mpq_class eval_laurent(const json& j, const mpq_class& s) {
    mpq_class total = 0;
    for (const auto& [k, v] : j.items()) {
        int e = qs::parse_q_exponent(k);
        mpq_class c(v.get<std::string>());
        mpq_class p = 1;
        for (int i = 0; i < std::abs(e); ++i) p *= s;
        total += e >= 0 ? mpq_class(c * p) : mpq_class(c / p);
    }
    return total;
}

std::string render_text(const json& j, const std::optional<mpq_class>& s) {
    std::ostringstream os;
    const std::string cmd = j.at("command");
    os << cmd << " (order " << j.at("order").get<int>() << ")\n";
    if (cmd == "scatter" || cmd == "canonical") {
        for (const auto& w : j.at("diagram").at("walls")) {
            os << "  wall chart " << w.at("chart").get<int>() << " dir (" << w.at("direction")[0].get<long>() << ","
               << w.at("direction")[1].get<long>() << ") " << w.at("orientation").get<std::string>() << ": "
               << w.at("text").get<std::string>();
            if (w.value("added", false)) os << "  [added]";
            os << "\n";
        }
    }
    if (cmd == "scatter") {
        os << "added walls: " << j.at("added_walls").get<int>() << "\n";
        os << "loop identity: " << (j.at("loop").at("pass").get<bool>() ? "pass" : "FAIL") << "\n";
        for (const auto& t : j.at("loop").at("terms")) os << "  " << t.get<std::string>() << "\n";
    } else if (cmd == "canonical") {
        for (const auto& r : j.at("rho")) {
            os << "ray v" << r.at("ray").get<int>() + 1 << " (D^2 = " << r.at("selfint").get<int>() << ")"
               << (r.at("verified").get<bool>() ? "" : "  [unverified]") << "\n";
            for (const auto& t : r.at("relations")) os << "  " << t.get<std::string>() << "\n";
        }
    } else if (cmd == "theta") {
        for (const auto& r : j.at("rows")) {
            os << r.at("product").get<std::string>() << " =";
            if (r.at("text").empty()) os << " 0";
            bool firstterm = true;
            for (const auto& t : r.at("text")) {
                os << (firstterm ? " " : " + ") << "(" << t.get<std::string>().substr(0, t.get<std::string>().rfind(" * ")) << ")"
                   << t.get<std::string>().substr(t.get<std::string>().rfind(" * "));
                firstterm = false;
            }
            os << "\n";
            if (s)
                for (const auto& t : r.at("terms")) {
                    os << "    th_" << t.at("name").get<std::string>() << ":";
                    for (const auto& c : t.at("coefficient")) {
                        mpq_class v = eval_laurent(c.at("coeff").at("num"), *s) / eval_laurent(c.at("coeff").at("den"), *s);
                        os << " " << v.get_str() << "*z^" << c.at("class").dump();
                    }
                    os << "\n";
                }
        }
    } else if (cmd == "relations") {
        os << "generators:";
        for (const auto& g : j.at("generators")) os << " " << g.at("name").get<std::string>();
        os << "\n";
        for (const auto& r : j.at("relations"))
            os << "  " << r.at("text").get<std::string>() << (r.at("verified").get<bool>() ? "" : "  [unverified]") << "\n";
        os << "classical limit:\n";
        for (const auto& t : j.at("classical")) os << "  " << t.get<std::string>() << "\n";
    } else if (cmd == "check") {
        for (const char* key : {"consistency", "weight", "integrality"}) {
            const auto& r = j.at(key);
            os << key << ": " << (r.at("pass").get<bool>() ? "pass" : "FAIL");
            if (!r.at("pass").get<bool>()) os << " (" << r.at("first_failure").get<std::string>() << ")";
            os << "\n";
        }
    }
    os << "result: " << (j.at("pass").get<bool>() ? "pass" : "FAIL") << "\n";
    return os.str();
}

int run(const RunConfig& cfg) {
    if (cfg.order && *cfg.order < 1) throw qs::Error(qs::ErrorKind::InvalidInput, "--order must be at least 1");
    qs::Problem P = qs::load_problem(cfg.input, cfg.order);
    int cap = max_order();
    if (P.order > cap)
        throw qs::Error(qs::ErrorKind::InvalidInput, "order " + std::to_string(P.order) + " exceeds the cap " +
                                                         std::to_string(cap) + " (set QSCATTER_MAX_DEGREE)");
    std::optional<mpq_class> s;
    if (cfg.q) {
        mpq_class q;
        if (q.set_str(*cfg.q, 10) != 0) throw qs::Error(qs::ErrorKind::Parse, "bad --q value " + *cfg.q);
        q.canonicalize();
        s = sqrt_rational(q);
        if (!s) throw qs::Error(qs::ErrorKind::InvalidInput, "--q must be the square of a rational");
    }

    json report;
    if (cfg.command == "scatter")
        report = cmd_scatter(P);
    else if (cfg.command == "canonical")
        report = cmd_canonical(P);
    else if (cfg.command == "theta")
        report = cmd_theta(P, cfg);
    else if (cfg.command == "relations")
        report = cmd_relations(P);
    else
        report = cmd_check(P, cfg);

    std::string text = cfg.format == "json" ? report.dump(2) + "\n" : render_text(report, s);
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(cfg.out);
        if (!f) throw qs::Error(qs::ErrorKind::InvalidInput, "cannot write " + cfg.out);
        f << text;
    }
    if (!report.at("pass").get<bool>()) {
        if (report.contains("first_failure")) std::cerr << "first failure: " << report["first_failure"].get<std::string>() << "\n";
        return 1;
    }
    return 0;
}

bool input_error(qs::ErrorKind k) {
    switch (k) {
    case qs::ErrorKind::Parse:
    case qs::ErrorKind::InvalidInput:
    case qs::ErrorKind::MalformedWall:
    case qs::ErrorKind::NonPrimitive:
    case qs::ErrorKind::UngradedInput:
    case qs::ErrorKind::ChartMismatch:
    case qs::ErrorKind::OrderMismatch:
    case qs::ErrorKind::NonGenerating:
    case qs::ErrorKind::Degenerate:
        return true;
    default:
        return false;
    }
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"quantum scattering diagrams and mirror algebras"};
    app.require_subcommand(1, 1);
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("input", cfg.input, "input JSON file or builtin:NAME")->required();
        sub->add_option("--order", cfg.order, "truncation order N");
        sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "text"}));
        sub->add_option("--out", cfg.out, "write the report here");
        sub->add_option("--retry-seed", cfg.retry_seed, "perturbation seed for generic endpoints");
        sub->add_option("--q", cfg.q, "evaluate coefficients at this q in text output (a rational square)");
    };
    for (auto [name, help] : {std::pair{"scatter", "complete a seed diagram on R^2"},
                              std::pair{"canonical", "canonical diagram on B and its ray presentations"},
                              std::pair{"theta", "structure constants of theta functions"},
                              std::pair{"relations", "relations among the generators of the mirror algebra"},
                              std::pair{"check", "consistency, torus weights and q-integrality"}}) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(sub);
        if (std::string(name) == "theta" || std::string(name) == "check")
            sub->add_option("--charges", cfg.charges, "comma separated charges, e.g. \"v1,v2,v1+v2,0\"");
        sub->callback([&cfg, sub] { cfg.command = sub->get_name(); });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        return run(cfg);
    } catch (const qs::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return input_error(e.kind()) ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
