#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "koenigs/report.hpp"
#include "koenigs/svg.hpp"

using namespace koenigs;

namespace {

json strip_config() {
    return json{{"semigroup",
                 {{"kind", "model"},
                  {"h_expr", "(i/pi)*log((1+z)/(1-z)) + 1/2"},
                  {"model", "strip"},
                  {"lambda", M_PI},
                  {"tau", json::array({1.0, 0.0})}}},
                {"analysis", {{"horizon", 50.0}, {"grid", {{"radii", 24}, {"angles", 48}, {"r_max", 0.995}}}}}};
}

} // namespace

TEST_CASE("config parsing and validation", "[config]") {
    CHECK_THROWS_AS(parse_config(json::object()), domain_error);
    CHECK_THROWS_AS(parse_config(json{{"semigroup", {{"kind", "nonsense"}}}}), domain_error);
    CHECK_THROWS_AS(parse_config(json{{"semigroup", {{"kind", "hyperbolic-group"}}}}),
                    domain_error); // missing lambda
    CHECK_THROWS_AS(parse_config(json{{"semigroup", {{"kind", "model"}}}}), domain_error);
    CHECK_THROWS_AS(
        parse_config(json{{"semigroup", {{"kind", "elliptic-rotation"}}},
                          {"analysis", {{"tolerances", {{"rate", -1.0}}}}}}),
        domain_error);
    // expressions inside the config must parse
    CHECK_THROWS_AS(parse_config(json{{"semigroup", {{"kind", "model"}, {"h_expr", "1+"}}}}),
                    parse_error);

    const RunConfig cfg = parse_config(strip_config());
    CHECK(cfg.kind == "model");
    REQUIRE(std::holds_alternative<ModelSemigroup>(cfg.semigroup));
    CHECK(std::get<ModelSemigroup>(cfg.semigroup).domain.kind == ModelDomain::Kind::Strip);
    CHECK(cfg.analysis.grid.radial == 24);
}

TEST_CASE("model config without a declared domain infers it from bounds", "[config]") {
    const json j{{"semigroup", {{"kind", "model"}, {"h_expr", "i*((1+z)/(1-z))^2"}}}};
    const RunConfig cfg = parse_config(j);
    REQUIRE(std::holds_alternative<ModelSemigroup>(cfg.semigroup));
    CHECK(std::get<ModelSemigroup>(cfg.semigroup).domain.kind == ModelDomain::Kind::FullPlane);
}

TEST_CASE("classify report: content, round trip, determinism", "[report]") {
    const RunConfig cfg = parse_config(strip_config());
    const json rep = build_classify_report(cfg);

    CHECK(rep["classification"]["type"] == "hyperbolic");
    CHECK(std::abs(rep["classification"]["lambda"].get<double>() - M_PI) < 0.02);
    CHECK(rep["classification"]["model"]["kind"] == "strip");
    CHECK(std::abs(rep["classification"]["model"]["rho"].get<double>() - 1.0) < 1e-3);
    CHECK(rep["classification"]["rate"]["method"] == "inf-form");
    CHECK(rep["classification"]["rate"]["horizon_used"].get<double>() > 0.0);
    CHECK(rep["starlike"]["passed"].get<bool>());
    CHECK(rep["generator"]["bp_residual"].get<double>() < 1e-11);
    CHECK(rep["residuals"]["semigroup_law"]["max"].get<double>() < 1e-9);
    CHECK(rep["residuals"]["model_identity"]["max"].get<double>() < 1e-10);
    CHECK_FALSE(rep.contains("timings")); // deterministic by default

    // serialization round-trips to an equal value
    CHECK(json::parse(rep.dump()) == rep);

    // identical config => identical report bytes
    const json rep2 = build_classify_report(parse_config(strip_config()));
    CHECK(rep.dump() == rep2.dump());
}

TEST_CASE("classify report for a generator semigroup", "[report]") {
    const json j{{"semigroup", {{"kind", "generator"}, {"G_expr", "1-z^2"}}},
                 {"analysis", {{"horizon", 50.0}}}};
    const json rep = build_classify_report(parse_config(j));
    CHECK(rep["classification"]["type"] == "hyperbolic");
    CHECK(std::abs(rep["classification"]["lambda"].get<double>() - 2.0) < 0.02);
    CHECK(rep["starlike"].is_null());
}

TEST_CASE("timings appear only on request", "[report]") {
    json j = strip_config();
    j["output"] = {{"timings", true}};
    const json rep = build_classify_report(parse_config(j));
    CHECK(rep.contains("timings"));
}

TEST_CASE("koenigs-check report", "[report]") {
    const RunConfig cfg = parse_config(strip_config());
    const json rep = build_koenigs_report(cfg);
    CHECK(rep["model"]["kind"] == "strip");
    CHECK(rep["starlike"]["passed"].get<bool>());
    CHECK(rep["univalence"]["passed"].get<bool>());
    const auto dw = rep["denjoy_wolff"];
    CHECK(std::abs(dw[0].get<double>() - 1.0) < 1e-9);
}

TEST_CASE("generator report", "[report]") {
    const json j{{"semigroup", {{"kind", "hyperbolic-group"}, {"lambda", 2.0},
                                {"tau", json::array({1.0, 0.0})}}}};
    const json rep = build_generator_report(parse_config(j));
    CHECK(rep["berkson_porta"]["max_residual"].get<double>() < 1e-11);
    CHECK(rep["berkson_porta"]["min_re_p"].get<double>() >= -1e-9);
    CHECK(rep["ode_residual"].get<double>() < 1e-6);

    const json jg{{"semigroup", {{"kind", "generator"}, {"G_expr", "1-z^2"}}}};
    const json repg = build_generator_report(parse_config(jg));
    CHECK(std::abs(repg["tau"][0].get<double>() - 1.0) < 1e-4);
    CHECK(repg["ode_residual"].get<double>() < 1e-5);
}

TEST_CASE("orbit CSV columns and laws", "[report]") {
    const RunConfig cfg = parse_config(strip_config());
    const std::string csv = orbit_csv(cfg, DiscPoint(0, 0), 3.0, 31);

    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,re,im,abs,omega_from_start,im_h");

    const HolomorphicMap h = *cfg.h;
    const double im0 = h(Complex(0, 0)).imag();
    int rows = 0;
    double prev_abs = -1.0;
    std::string line;
    while (std::getline(in, line)) {
        REQUIRE(!line.empty());
        double t, re, im, ab, om, imh;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf", &t, &re, &im, &ab, &om,
                            &imh) == 6);
        CHECK(std::abs(imh - im0 - t) < 1e-9); // Im h(phi_t(0)) = Im h(0) + t
        CHECK(ab >= prev_abs - 1e-12);         // |z| grows toward the boundary point
        prev_abs = ab;
        ++rows;
    }
    CHECK(rows == 31);

    CHECK_THROWS_AS(orbit_csv(cfg, DiscPoint(0, 0), 0.0, 2), domain_error);
    CHECK_THROWS_AS(orbit_csv(cfg, DiscPoint(0, 0), 1.0, 1), domain_error);
}

TEST_CASE("orbit CSV uses 17 significant digits", "[report]") {
    const json j{{"semigroup",
                  {{"kind", "hyperbolic-group"}, {"lambda", 2.0}, {"tau", json::array({1.0, 0.0})}}}};
    const std::string csv = orbit_csv(parse_config(j), DiscPoint(0, 0), 1.0, 2);
    CHECK(csv.find("0.76159415595576485") != std::string::npos); // tanh(1) to 17 digits
}

TEST_CASE("svg renders: structure, containment, determinism", "[svg]") {
    const RunConfig cfg = parse_config(strip_config());

    const std::string phase = render_phase_portrait(cfg, {Complex(0.3, 0.0), Complex(0, -0.4)});
    CHECK(phase.find("<svg") == 0);
    CHECK(phase.find("class=\"orbit\"") != std::string::npos);
    CHECK(phase.find("class=\"dw\"") != std::string::npos);

    // empty orbit list still renders valid axes-only SVG
    const std::string empty = render_phase_portrait(cfg, {});
    CHECK(empty.find("<svg") == 0);
    CHECK(empty.find("class=\"orbit\"") == std::string::npos);
    CHECK(empty.find("</svg>") != std::string::npos);

    // image raster of the strip model stays inside 0 <= x <= rho
    const std::string image = render_image_domain(cfg);
    std::size_t pos = 0;
    int dots = 0;
    while ((pos = image.find("class=\"img\" cx=\"", pos)) != std::string::npos) {
        pos += 16;
        const double x = std::stod(image.substr(pos));
        CHECK(x >= -1e-9);
        CHECK(x <= 1.0 + 1e-9);
        ++dots;
    }
    CHECK(dots > 100);

    const std::string rep_map = render_re_p_map(cfg);
    CHECK(rep_map.find("class=\"rep\"") != std::string::npos);
    CHECK(rep_map.find("#d62728") == std::string::npos); // Re p never negative here

    // byte determinism
    CHECK(render_phase_portrait(cfg, {Complex(0.3, 0.0)}) ==
          render_phase_portrait(cfg, {Complex(0.3, 0.0)}));
    CHECK(render_image_domain(cfg) == render_image_domain(cfg));
    CHECK(render_re_p_map(cfg) == render_re_p_map(cfg));
}
