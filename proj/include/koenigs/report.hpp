#pragma once

// Machine-readable analysis reports.  Every numeric estimate is serialized
// together with the method and horizon that produced it, and reports are
// byte-deterministic for a fixed config unless timings are requested.

#include <chrono>
#include <cstdint>
#include <random>
#include <string>

#include "koenigs/config.hpp"
#include "koenigs/generator.hpp"

namespace koenigs {

inline constexpr const char* kToolVersion = "0.1.0";

/// FNV-1a over the canonical dump of the config, recorded as provenance.
inline std::string config_hash(const json& j) {
    const std::string s = j.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "fnv1a:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const ModelDomain& d) {
    json j{{"kind", d.name()}};
    if (d.kind == ModelDomain::Kind::Strip) j["rho"] = d.rho;
    return j;
}

inline json to_json(const RateEstimate& r) {
    return json{{"value", r.value},
                {"method", r.method},
                {"horizon_used", r.horizon_used},
                {"spread", r.spread},
                {"limit_form", r.limit_form}};
}

inline json to_json(const StepEstimate& s) {
    return json{{"u", s.u},
                {"value", s.value},
                {"horizon_used", s.horizon_used},
                {"tail_length", s.tail.size()}};
}

inline json to_json(const DenjoyWolff& dw) {
    return json{{"point", to_json(dw.point)},
                {"interior", dw.interior},
                {"confidence", dw.confidence},
                {"horizon_used", dw.horizon_used},
                {"converged", dw.converged}};
}

inline json to_json(const RangeBounds& rb) {
    json j{{"a_infinite", rb.a_infinite},
           {"b_infinite", rb.b_infinite},
           {"divergence_threshold", rb.divergence_threshold},
           {"deepest_radius", rb.deepest_radius}};
    j["a"] = rb.a_infinite ? json() : json(rb.a);
    j["b"] = rb.b_infinite ? json() : json(rb.b);
    return j;
}

inline json to_json(const ClassificationReport& rep) {
    json j{{"type", type_name(rep.type)},
           {"inconclusive", rep.inconclusive},
           {"rate", to_json(rep.rate)},
           {"denjoy_wolff", to_json(rep.dw)},
           {"model", to_json(rep.model)},
           {"diagnostics", rep.diagnostics}};
    j["lambda"] = rep.lambda ? json(*rep.lambda) : json();
    j["step1"] = rep.step1 ? to_json(*rep.step1) : json();
    j["bounds"] = rep.bounds ? to_json(*rep.bounds) : json();
    return j;
}

inline json to_json(const StarlikeReport& st) {
    json j{{"min_q", st.min_q},
           {"max_q", st.max_q},
           {"argmin", to_json(st.argmin)},
           {"passed", st.passed},
           {"boundary_grazing", st.boundary_grazing},
           {"equality_case", st.equality_case}};
    if (st.equality_case) {
        j["fitted_a"] = to_json(st.fitted_a);
        j["fitted_c"] = to_json(st.fitted_c);
        j["fit_residual"] = st.fit_residual;
    }
    return j;
}

inline json to_json(const UnivalenceReport& u) {
    return json{{"min_separation_ratio", u.min_separation_ratio},
                {"collisions", u.collisions.size()},
                {"derivative_zeros", u.derivative_zeros.size()},
                {"passed", u.passed}};
}

namespace detail {

/// Deterministic sample set for the residual suite.
inline std::vector<LawSample> law_samples(int n, double t_max) {
    std::mt19937 rng(0x5eed5u);
    std::uniform_real_distribution<double> ut(0.0, t_max), ur(0.0, 0.6), ua(0.0, 2.0 * M_PI);
    std::vector<LawSample> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double r = ur(rng), a = ua(rng);
        out.push_back({ut(rng), ut(rng), Complex(r * std::cos(a), r * std::sin(a))});
    }
    return out;
}

} // namespace detail

/// The full classify run: classification, starlike/bounds data for models,
/// generator data when a Koenigs function is available, and a residual suite.
inline json build_classify_report(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    json rep;
    rep["schema"] = "koenigs-report-v1";
    rep["tool"] = {{"name", "koenigs"}, {"version", kToolVersion}};
    rep["config_hash"] = config_hash(cfg.raw);
    rep["settings"] = {{"horizon", cfg.analysis.horizon},
                       {"grid", {{"radii", cfg.analysis.grid.radial},
                                 {"angles", cfg.analysis.grid.angular},
                                 {"r_max", cfg.analysis.grid.r_max}}},
                       {"tolerances", {{"rate", cfg.analysis.rate_tolerance},
                                       {"step", cfg.analysis.step_tolerance},
                                       {"newton", cfg.analysis.newton_tolerance}}}};

    const ClassificationReport cls = classify(cfg.semigroup, cfg.analysis.classify_settings());
    rep["classification"] = to_json(cls);

    // Koenigs-side analysis when h is known: user-supplied models and the
    // closed forms of the built-in non-elliptic groups.
    rep["starlike"] = json();
    rep["generator"] = json();
    if (!cls.dw.interior) {
        std::optional<HolomorphicMap> h = cfg.h;
        std::optional<BoundaryPoint> tau = cfg.tau;
        if (const auto* hg = std::get_if<HyperbolicGroup>(&cfg.semigroup)) {
            h = hyperbolic_koenigs(hg->lambda, hg->tau);
            tau = hg->tau;
        } else if (const auto* pg = std::get_if<ParabolicGroup>(&cfg.semigroup)) {
            h = parabolic_koenigs(pg->tau, pg->orientation);
            tau = pg->tau;
        }
        try {
            if (h && !tau) tau = dw_from_koenigs(*h).sigma;
            if (h && tau) {
                rep["starlike"] = to_json(starlike_check(*h, *tau, cfg.analysis.grid));
                const GeneratorData gd = generator_from_koenigs(*h, *tau, cfg.analysis.grid);
                const BerksonPortaReport bp = berkson_porta_residual(gd, cfg.analysis.grid);
                rep["generator"] = {{"G", gd.G.str()},
                                    {"p", gd.p.str()},
                                    {"tau", to_json(gd.tau.value())},
                                    {"bp_residual", bp.max_residual},
                                    {"min_re_p", bp.min_re_p},
                                    {"equality", bp.equality}};
            }
        } catch (const error& e) {
            rep["classification"]["diagnostics"].push_back(
                std::string("koenigs-side analysis skipped: ") + e.what() +
                " (set semigroup.tau to pin the Denjoy-Wolff point)");
        }
    }

    json residuals;
    residuals["semigroup_law"] = {
        {"samples", 50},
        {"max", semigroup_law_residual(cfg.semigroup, detail::law_samples(50, 2.0))}};
    if (const auto* ms = std::get_if<ModelSemigroup>(&cfg.semigroup)) {
        std::vector<std::pair<double, Complex>> samples;
        std::mt19937 rng(0xfacadeu);
        std::uniform_real_distribution<double> ut(0.0, 3.0), ur(0.0, 0.6), ua(0.0, 2.0 * M_PI);
        for (int i = 0; i < 40; ++i) {
            const double r = ur(rng), a = ua(rng);
            samples.emplace_back(ut(rng), Complex(r * std::cos(a), r * std::sin(a)));
        }
        residuals["model_identity"] = {{"samples", samples.size()},
                                       {"max", model_identity_residual(*ms, samples)}};
    } else {
        residuals["model_identity"] = json();
    }
    rep["residuals"] = residuals;

    if (cfg.output.timings) {
        const auto t1 = std::chrono::steady_clock::now();
        rep["timings"] = {{"total_ms",
                           std::chrono::duration<double, std::milli>(t1 - t0).count()}};
    }
    return rep;
}

/// Koenigs-function verification report (the `koenigs-check` command).
inline json build_koenigs_report(const RunConfig& cfg) {
    if (!cfg.h)
        throw domain_error("koenigs-check needs semigroup.kind == \"model\" with h_expr");
    json rep;
    rep["schema"] = "koenigs-check-v1";
    rep["tool"] = {{"name", "koenigs"}, {"version", kToolVersion}};
    rep["config_hash"] = config_hash(cfg.raw);
    rep["h"] = cfg.h->str();
    const KoenigsFunction K = build_koenigs(*cfg.h, cfg.analysis.grid);
    rep["denjoy_wolff"] = to_json(K.dw_point.value());
    rep["starlike"] = to_json(K.starlike);
    rep["bounds"] = to_json(K.bounds);
    rep["model"] = to_json(K.model);
    rep["normalized_h"] = K.normalized.str();
    rep["univalence"] = to_json(K.univalence);
    return rep;
}

/// The Koenigs function behind a configured semigroup, when one is known in
/// closed form (user models and the non-elliptic built-in groups).
inline std::optional<std::pair<HolomorphicMap, BoundaryPoint>>
koenigs_of_config(const RunConfig& cfg) {
    if (cfg.h) {
        if (cfg.tau) return std::make_pair(*cfg.h, *cfg.tau);
        return std::make_pair(*cfg.h, dw_from_koenigs(*cfg.h).sigma);
    }
    if (const auto* hg = std::get_if<HyperbolicGroup>(&cfg.semigroup))
        return std::make_pair(hyperbolic_koenigs(hg->lambda, hg->tau), hg->tau);
    if (const auto* pg = std::get_if<ParabolicGroup>(&cfg.semigroup))
        return std::make_pair(parabolic_koenigs(pg->tau, pg->orientation), pg->tau);
    return std::nullopt;
}

/// Berkson-Porta data for a configured semigroup: from the Koenigs function
/// when available, else by splitting a supplied G at the estimated
/// Denjoy-Wolff point.
inline std::optional<GeneratorData> generator_data_for(const RunConfig& cfg) {
    if (cfg.G_expr) {
        const DenjoyWolff dw = denjoy_wolff(cfg.semigroup, cfg.analysis.horizon * 20.0);
        if (dw.interior) return std::nullopt;
        const BoundaryPoint t(dw.point);
        const HolomorphicMap factor = berkson_porta_factor(t);
        return GeneratorData{*cfg.G_expr, t,
                             HolomorphicMap(expr_div(cfg.G_expr->root(), factor.root()))};
    }
    if (auto k = koenigs_of_config(cfg))
        return generator_from_koenigs(k->first, k->second, cfg.analysis.grid);
    return std::nullopt;
}

/// Generator extraction report (the `generator` command).
inline json build_generator_report(const RunConfig& cfg) {
    json rep;
    rep["schema"] = "koenigs-generator-v1";
    rep["tool"] = {{"name", "koenigs"}, {"version", kToolVersion}};
    rep["config_hash"] = config_hash(cfg.raw);

    const std::optional<GeneratorData> gd_opt = generator_data_for(cfg);
    if (!gd_opt)
        throw domain_error("generator command needs a non-elliptic semigroup given by a Koenigs "
                           "function (kind model, hyperbolic-group, parabolic-group) or a G_expr");
    const GeneratorData& gd = *gd_opt;

    const BerksonPortaReport bp = berkson_porta_residual(gd, cfg.analysis.grid);
    rep["G"] = gd.G.str();
    rep["p"] = gd.p.str();
    rep["tau"] = to_json(gd.tau.value());
    rep["berkson_porta"] = {{"max_residual", bp.max_residual},
                            {"min_re_p", bp.min_re_p},
                            {"positive", bp.positive},
                            {"boundary_grazing", bp.boundary_grazing},
                            {"equality", bp.equality}};

    std::vector<std::pair<double, Complex>> samples;
    std::mt19937 rng(0x0de5eedu);
    std::uniform_real_distribution<double> ut(0.1, 2.5), ur(0.0, 0.55), ua(0.0, 2.0 * M_PI);
    for (int i = 0; i < 25; ++i) {
        const double r = ur(rng), a = ua(rng);
        samples.emplace_back(ut(rng), Complex(r * std::cos(a), r * std::sin(a)));
    }
    rep["ode_residual"] = ode_residual(cfg.semigroup, gd, samples);
    return rep;
}

/// Orbit table (the `orbit` command): t, re, im, |z|, omega(z0, phi_t z0) and,
/// for model semigroups, Im h(phi_t z0).  17 significant digits per cell.
inline std::string orbit_csv(const RunConfig& cfg, DiscPoint z0, double t_max, int n) {
    if (!(t_max > 0.0)) throw domain_error("orbit needs t_max > 0");
    if (n < 2) throw domain_error("orbit needs n >= 2 samples");
    const auto* ms = std::get_if<ModelSemigroup>(&cfg.semigroup);
    std::vector<double> grid;
    grid.reserve(n);
    for (int i = 0; i < n; ++i) grid.push_back(t_max * i / (n - 1));
    const OrbitSample orb = orbit(cfg.semigroup, z0.value(), grid);

    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::string csv = "t,re,im,abs,omega_from_start";
    if (ms) csv += ",im_h";
    csv += "\n";
    for (std::size_t i = 0; i < orb.size(); ++i) {
        const Complex z = orb.points[i];
        csv += fmt(orb.times[i]) + "," + fmt(z.real()) + "," + fmt(z.imag()) + "," +
               fmt(std::abs(z)) + "," + fmt(hyp_dist_disc(z0, DiscPoint(z)));
        if (ms) csv += "," + fmt(ms->h(z).imag());
        csv += "\n";
    }
    return csv;
}

} // namespace koenigs
