#pragma once

// Run configuration: JSON ingestion of the semigroup under analysis, the
// estimator settings and the output destinations.

#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "koenigs/dynamics.hpp"
#include "koenigs/semigroup.hpp"

namespace koenigs {

using json = nlohmann::json;

struct AnalysisSettings {
    double horizon = 50.0;
    GridSpec grid{};
    double rate_tolerance = 1e-4;   ///< classification threshold on c
    double step_tolerance = 1e-4;   ///< classification threshold on s_1
    double newton_tolerance = 1e-11;

    ClassifySettings classify_settings() const {
        ClassifySettings cfg;
        cfg.c_threshold = rate_tolerance;
        cfg.s_threshold = step_tolerance;
        cfg.rate_horizon = horizon;
        cfg.grid = grid;
        return cfg;
    }
};

struct OutputSettings {
    std::string report;     ///< report path; empty = stdout
    std::string plots;      ///< plot directory
    bool timings = false;   ///< include timing fields (breaks byte-determinism)
};

struct RunConfig {
    Semigroup semigroup = EllipticRotation{1.0};
    std::string kind;
    std::optional<HolomorphicMap> h;       ///< set for kind == "model"
    std::optional<HolomorphicMap> G_expr;  ///< set for kind == "generator"
    std::optional<BoundaryPoint> tau;
    AnalysisSettings analysis;
    OutputSettings output;
    json raw;
};

namespace detail {

inline Complex parse_point(const json& j, const char* what) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    throw domain_error(std::string(what) + " must be a number or a [re, im] pair");
}

inline ModelDomain parse_domain(const std::string& name, double rho) {
    if (name == "strip") return ModelDomain::strip(rho);
    if (name == "right-half-plane") return ModelDomain::right_half_plane();
    if (name == "left-half-plane") return ModelDomain::left_half_plane();
    if (name == "plane") return ModelDomain::full_plane();
    if (name == "disc") return ModelDomain::disc();
    throw domain_error("unknown model domain '" + name + "'");
}

} // namespace detail

inline RunConfig parse_config(const json& j) {
    RunConfig cfg;
    cfg.raw = j;
    if (!j.contains("semigroup") || !j["semigroup"].is_object())
        throw domain_error("config needs a 'semigroup' object");
    const json& sg = j["semigroup"];
    cfg.kind = sg.value("kind", "");

    if (sg.contains("tau")) cfg.tau = BoundaryPoint(detail::parse_point(sg["tau"], "semigroup.tau"));

    if (j.contains("analysis")) {
        const json& an = j["analysis"];
        cfg.analysis.horizon = an.value("horizon", cfg.analysis.horizon);
        if (an.contains("grid")) {
            const json& g = an["grid"];
            cfg.analysis.grid = GridSpec(g.value("radii", 64), g.value("angles", 128),
                                         g.value("r_max", 0.995));
        }
        if (an.contains("tolerances")) {
            const json& t = an["tolerances"];
            cfg.analysis.rate_tolerance = t.value("rate", cfg.analysis.rate_tolerance);
            cfg.analysis.step_tolerance = t.value("step", cfg.analysis.step_tolerance);
            cfg.analysis.newton_tolerance = t.value("newton", cfg.analysis.newton_tolerance);
        }
        if (!(cfg.analysis.horizon > 0.0) || !(cfg.analysis.rate_tolerance > 0.0) ||
            !(cfg.analysis.step_tolerance > 0.0) || !(cfg.analysis.newton_tolerance > 0.0))
            throw domain_error("analysis horizon and tolerances must be positive");
    }
    if (j.contains("output")) {
        const json& out = j["output"];
        cfg.output.report = out.value("report", "");
        cfg.output.plots = out.value("plots", "");
        cfg.output.timings = out.value("timings", false);
    }

    const BoundaryPoint tau = cfg.tau.value_or(BoundaryPoint(1.0, 0.0));
    if (cfg.kind == "hyperbolic-group") {
        const double lambda = sg.value("lambda", 0.0);
        if (!(lambda > 0.0)) throw domain_error("hyperbolic-group needs lambda > 0");
        cfg.semigroup = HyperbolicGroup{lambda, tau};
    } else if (cfg.kind == "parabolic-group") {
        int orientation = +1;
        if (sg.contains("model") && sg["model"].get<std::string>() == "left-half-plane")
            orientation = -1;
        cfg.semigroup = ParabolicGroup{orientation, tau};
    } else if (cfg.kind == "elliptic-rotation") {
        cfg.semigroup = EllipticRotation{sg.value("theta", 1.0)};
    } else if (cfg.kind == "elliptic-contraction") {
        const double lambda = sg.value("lambda", 0.0);
        if (!(lambda > 0.0)) throw domain_error("elliptic-contraction needs lambda > 0");
        DiscPoint x;
        if (sg.contains("x")) x = DiscPoint(detail::parse_point(sg["x"], "semigroup.x"));
        cfg.semigroup = EllipticContraction{lambda, x};
    } else if (cfg.kind == "model") {
        if (!sg.contains("h_expr")) throw domain_error("kind 'model' needs h_expr");
        cfg.h = HolomorphicMap::parse(sg["h_expr"].get<std::string>());
        ModelDomain domain = ModelDomain::full_plane();
        if (sg.contains("model")) {
            double rho = 0.0;
            if (sg["model"].get<std::string>() == "strip") {
                const double lambda = sg.value("lambda", 0.0);
                if (!(lambda > 0.0))
                    throw domain_error("a strip model needs lambda > 0 (width pi/lambda)");
                rho = M_PI / lambda;
            }
            domain = detail::parse_domain(sg["model"].get<std::string>(), rho);
        } else {
            domain = canonical_normalize(*cfg.h, range_bounds(*cfg.h, cfg.analysis.grid)).domain;
        }
        NewtonSettings ns;
        ns.rel_tol = cfg.analysis.newton_tolerance;
        cfg.semigroup = ModelSemigroup{*cfg.h, domain, ns};
    } else if (cfg.kind == "generator") {
        if (!sg.contains("G_expr")) throw domain_error("kind 'generator' needs G_expr");
        cfg.G_expr = HolomorphicMap::parse(sg["G_expr"].get<std::string>());
        cfg.semigroup = GeneratorSemigroup{*cfg.G_expr, OdeSettings{}};
    } else {
        throw domain_error("semigroup.kind must be one of hyperbolic-group, parabolic-group, "
                           "elliptic-rotation, elliptic-contraction, model, generator (got '" +
                           cfg.kind + "')");
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw domain_error("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

} // namespace koenigs
