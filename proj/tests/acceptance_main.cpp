// Acceptance suite: twelve end-to-end criteria with fixed tolerances and
// runtime budgets, one PASS/FAIL line each.  Exits nonzero when any fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "koenigs/dynamics.hpp"
#include "koenigs/generator.hpp"
#include "koenigs/report.hpp"
#include "koenigs/svg.hpp"

using namespace koenigs;
namespace fs = std::filesystem;

namespace {

const BoundaryPoint kOne(1, 0);
int failures = 0;

void criterion(int number, const std::string& name, double budget_seconds,
               const std::function<bool(std::string&)>& body) {
    std::string detail;
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (elapsed > budget_seconds) {
        ok = false;
        detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
    }
    if (!ok) ++failures;
    std::printf("[%2d] %s  %-58s (%.2fs/%.0fs)%s%s\n", number, ok ? "PASS" : "FAIL", name.c_str(),
                elapsed, budget_seconds, detail.empty() ? "" : "  -- ", detail.c_str());
    std::fflush(stdout);
}

std::vector<std::pair<std::string, Semigroup>> model_examples() {
    return {
        {"strip pi", ModelSemigroup{hyperbolic_koenigs(M_PI), ModelDomain::strip(1.0),
                                    NewtonSettings{2e-12, 200, 40, 1024}}},
        {"cayley", ModelSemigroup{parabolic_koenigs(), ModelDomain::right_half_plane(),
                                  NewtonSettings{2e-12, 200, 40, 1024}}},
        {"zero step", ModelSemigroup{zero_step_koenigs(), ModelDomain::full_plane(),
                                     NewtonSettings{2e-12, 200, 40, 1024}}},
        {"moebius family",
         ModelSemigroup{mobius_family_koenigs(3.0, kOne, Complex(0, 2)),
                        ModelDomain::right_half_plane(), NewtonSettings{2e-12, 200, 40, 1024}}},
        {"half-plane non-group",
         ModelSemigroup{parabolic_koenigs() + hyperbolic_koenigs(M_PI),
                        ModelDomain::right_half_plane(), NewtonSettings{2e-12, 200, 40, 1024}}},
    };
}

std::vector<std::pair<HolomorphicMap, BoundaryPoint>> koenigs_examples() {
    return {
        {hyperbolic_koenigs(0.5), kOne},
        {hyperbolic_koenigs(2.0), kOne},
        {hyperbolic_koenigs(M_PI), kOne},
        {parabolic_koenigs(), kOne},
        {parabolic_koenigs(kOne, -1), kOne},
        {zero_step_koenigs(), kOne},
        {mobius_family_koenigs(3.0, kOne, Complex(0, 2)), kOne},
        {parabolic_koenigs() + hyperbolic_koenigs(M_PI), kOne},
    };
}

std::string run_cli(const std::string& args) {
    const std::string cmd = std::string(KOENIGS_CLI_PATH) + " " + args;
    const int status = std::system(cmd.c_str());
    if (!WIFEXITED(status) || (WEXITSTATUS(status) != 0 && WEXITSTATUS(status) != 2))
        throw std::runtime_error("CLI failed: " + cmd);
    return cmd;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

char fmtbuf[256];

} // namespace

int main() {
    std::printf("acceptance suite, tool version %s\n", kToolVersion);

    criterion(1, "divergence rate = lambda/2 for hyperbolic groups", 4.0, [](std::string& d) {
        bool ok = true;
        for (double lambda : {0.5, 1.0, 2.0, M_PI}) {
            const auto t0 = std::chrono::steady_clock::now();
            const RateEstimate r =
                divergence_rate(HyperbolicGroup{lambda, kOne}, Complex(0, 0), 50.0);
            const double each =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            const double err = std::abs(2.0 * r.value - lambda);
            std::snprintf(fmtbuf, sizeof fmtbuf, "lambda=%.3f |2c-lambda|=%.1e ", lambda, err);
            d += fmtbuf;
            ok = ok && err < 1e-2 && each < 1.0;
        }
        return ok;
    });

    criterion(2, "elliptic and parabolic rates vanish", 5.0, [](std::string& d) {
        const double rot =
            divergence_rate(EllipticRotation{1.0}, Complex(0, 0), 1000.0).value;
        const double par =
            divergence_rate(ParabolicGroup{+1, kOne}, Complex(0, 0), 1000.0).value;
        std::snprintf(fmtbuf, sizeof fmtbuf, "rotation c=%.1e parabolic c=%.1e", rot, par);
        d = fmtbuf;
        return rot < 1e-2 && par < 1e-2;
    });

    criterion(3, "semigroup law residual < 1e-7 (50 random samples each)", 2.0,
              [](std::string& d) {
        std::mt19937 rng(0xacce55);
        std::uniform_real_distribution<double> ut(0.0, 1.5), ur(0.0, 0.6), ua(0.0, 2 * M_PI);
        std::vector<LawSample> samples;
        for (int i = 0; i < 50; ++i)
            samples.push_back({ut(rng), ut(rng), std::polar(ur(rng), ua(rng))});
        std::vector<std::pair<std::string, Semigroup>> suite{
            {"rotation", EllipticRotation{0.9}},
            {"contraction", EllipticContraction{1.3, DiscPoint(0.2, -0.1)}},
            {"hyperbolic", HyperbolicGroup{2.0, kOne}},
            {"parabolic", ParabolicGroup{+1, kOne}},
            {"parabolic left", ParabolicGroup{-1, kOne}},
        };
        for (auto& [n, s] : model_examples()) suite.emplace_back(n, s);
        double worst = 0.0;
        for (const auto& [name, s] : suite)
            worst = std::max(worst, semigroup_law_residual(s, samples));
        std::snprintf(fmtbuf, sizeof fmtbuf, "max residual %.1e", worst);
        d = fmtbuf;
        return worst < 1e-7;
    });

    criterion(4, "model identity h(phi_t z) = h(z) + it < 1e-10", 1.0, [](std::string& d) {
        std::mt19937 rng(0x1dea);
        std::uniform_real_distribution<double> ut(0.0, 4.0), ur(0.0, 0.6), ua(0.0, 2 * M_PI);
        double worst = 0.0;
        for (const auto& [name, s] : model_examples()) {
            std::vector<std::pair<double, Complex>> samples;
            for (int i = 0; i < 100; ++i)
                samples.emplace_back(ut(rng), std::polar(ur(rng), ua(rng)));
            worst = std::max(worst,
                             model_identity_residual(std::get<ModelSemigroup>(s), samples));
        }
        std::snprintf(fmtbuf, sizeof fmtbuf, "max residual %.1e over 100 samples/model", worst);
        d = fmtbuf;
        return worst < 1e-10;
    });

    criterion(5, "generator round trip: model vs integrated flow < 1e-6", 10.0,
              [](std::string& d) {
        double worst = 0.0;
        for (double lambda : {2.0}) {
            const HolomorphicMap h = hyperbolic_koenigs(lambda);
            const GeneratorData D = generator_from_koenigs(h, kOne);
            const Semigroup model{ModelSemigroup{h, ModelDomain::strip(M_PI / lambda), {}}};
            const Semigroup gen{GeneratorSemigroup{D.G, {}}};
            std::mt19937 rng(0xf100d);
            std::uniform_real_distribution<double> ur(0.0, 0.55), ua(0.0, 2 * M_PI);
            for (int i = 0; i < 25; ++i) {
                const Complex z = std::polar(ur(rng), ua(rng));
                OrbitWalker wm(model, z), wg(gen, z);
                for (double t : {0.75, 1.5, 2.25, 3.0})
                    worst = std::max(worst, std::abs(wm.at(t) - wg.at(t)));
            }
        }
        std::snprintf(fmtbuf, sizeof fmtbuf, "sup gap %.1e on [0,3] x 25 points", worst);
        d = fmtbuf;
        return worst < 1e-6;
    });

    criterion(6, "berkson-porta: residual < 1e-11, Re p >= -1e-9, equality on Moebius family",
              2.0, [](std::string& d) {
        const GridSpec grid(64, 128, 0.995);
        double worst_res = 0.0, worst_rep = 0.0;
        bool ok = true;
        for (const auto& [h, tau] : koenigs_examples()) {
            const BerksonPortaReport rep =
                berkson_porta_residual(generator_from_koenigs(h, tau, grid), grid);
            worst_res = std::max(worst_res, rep.max_residual);
            worst_rep = std::min(worst_rep, rep.min_re_p);
            ok = ok && rep.max_residual < 1e-11 && rep.min_re_p >= -1e-9;
        }
        // equality exactly on the Moebius family a C_sigma + c
        const auto eq = [&](const HolomorphicMap& h, BoundaryPoint tau) {
            return berkson_porta_residual(generator_from_koenigs(h, tau, grid), grid).equality;
        };
        ok = ok && eq(mobius_family_koenigs(3.0, kOne, Complex(0, 2)), kOne);
        ok = ok && eq(parabolic_koenigs(), kOne);
        ok = ok && !eq(hyperbolic_koenigs(M_PI), kOne);
        ok = ok && !eq(zero_step_koenigs(), kOne);
        ok = ok && !eq(parabolic_koenigs() + hyperbolic_koenigs(M_PI), kOne);
        std::snprintf(fmtbuf, sizeof fmtbuf, "max residual %.1e, min Re p %.1e", worst_res,
                      worst_rep);
        d = fmtbuf;
        return ok;
    });

    criterion(7, "starlike criterion passes on suite, fails on z^2", 1.0, [](std::string& d) {
        bool ok = true;
        double worst_min = 0.0;
        for (const auto& [h, tau] : koenigs_examples()) {
            const StarlikeReport rep = starlike_check(h, tau);
            worst_min = std::min(worst_min, rep.min_q);
            ok = ok && rep.min_q >= -1e-9;
        }
        const StarlikeReport square = starlike_check(HolomorphicMap::parse("z^2"), kOne);
        ok = ok && square.min_q < -0.1;
        std::snprintf(fmtbuf, sizeof fmtbuf, "suite min q %.1e, z^2 min q %.2f", worst_min,
                      square.min_q);
        d = fmtbuf;
        return ok;
    });

    criterion(8, "classification table: strip/half-plane/plane", 30.0, [](std::string& d) {
        const ClassificationReport strip =
            classify(Semigroup{ModelSemigroup{hyperbolic_koenigs(M_PI), ModelDomain::strip(1.0), {}}});
        const ClassificationReport half = classify(
            Semigroup{ModelSemigroup{parabolic_koenigs(), ModelDomain::right_half_plane(), {}}});
        const ClassificationReport plane = classify(
            Semigroup{ModelSemigroup{zero_step_koenigs(), ModelDomain::full_plane(), {}}});
        d = type_name(strip.type) + "/" + type_name(half.type) + "/" + type_name(plane.type);
        return strip.type == SemigroupType::Hyperbolic &&
               strip.model.kind == ModelDomain::Kind::Strip &&
               std::abs(strip.model.rho - 1.0) < 1e-3 &&
               half.type == SemigroupType::ParabolicPositiveStep &&
               half.model.kind == ModelDomain::Kind::RightHalfPlane &&
               plane.type == SemigroupType::ParabolicZeroStep &&
               plane.model.kind == ModelDomain::Kind::FullPlane;
    });

    criterion(9, "distance-limit identity at T = 50 on the strip model", 5.0,
              [](std::string& d) {
        // lambda = 0.2 keeps phi_50 representable, so T = 50 is reached literally
        const ModelSemigroup ms{hyperbolic_koenigs(0.2), ModelDomain::strip(M_PI / 0.2), {}};
        std::vector<std::pair<Complex, Complex>> pairs;
        for (int i = 0; i < 10; ++i)
            pairs.emplace_back(Complex(0.07 * i, -0.03 * i), Complex(0.5 - 0.04 * i, 0.05 * i));
        const DistanceLimitReport rep = distance_limit_check(ms, pairs, 50.0);
        bool ok = rep.max_gap < 1e-3 && rep.time_side_nonincreasing && rep.time_side_dominates;
        for (const auto& pd : rep.pairs) ok = ok && pd.horizon_used == 50.0;
        // the lambda = pi model runs to its representable horizon with the same laws
        const ModelSemigroup mpi{hyperbolic_koenigs(M_PI), ModelDomain::strip(1.0), {}};
        const DistanceLimitReport rpi =
            distance_limit_check(mpi, {{Complex(0, 0), Complex(0.5, 0)}}, 50.0);
        ok = ok && rpi.max_gap < 1e-3 && rpi.time_side_nonincreasing;
        std::snprintf(fmtbuf, sizeof fmtbuf,
                      "gap %.1e at T=50 (10 pairs); lambda=pi gap %.1e at T=%.2f", rep.max_gap,
                      rpi.max_gap, rpi.pairs[0].horizon_used);
        d = fmtbuf;
        return ok;
    });

    criterion(10, "step laws: group identity, order independence, consistency at u=40", 10.0,
              [](std::string& d) {
        bool ok = true;
        // groups: s_u equals omega(z, phi_u z) to 1e-9
        double worst_group = 0.0;
        for (const auto& s :
             {Semigroup{HyperbolicGroup{2.0, kOne}}, Semigroup{ParabolicGroup{+1, kOne}},
              Semigroup{EllipticRotation{1.1}}}) {
            for (double u : {0.5, 1.0, 2.0}) {
                for (const Complex z : {Complex(0, 0), Complex(0.3, 0.2)}) {
                    const double est = hyperbolic_step(s, z, u, 400.0).value;
                    const double oracle =
                        hyp_dist_disc(DiscPoint(z), DiscPoint(flow(s, u, z)));
                    worst_group = std::max(worst_group, std::abs(est - oracle));
                }
            }
        }
        ok = ok && worst_group < 1e-9;

        // vanishing-step order independence
        const Semigroup ell = EllipticContraction{1.0, DiscPoint(0, 0)};
        const Semigroup zs{ModelSemigroup{zero_step_koenigs(), ModelDomain::full_plane(), {}}};
        ok = ok && hyperbolic_step(ell, Complex(0.5, 0), 1.0, 60.0).value < 1e-6;
        ok = ok && hyperbolic_step(zs, Complex(0, 0), 1.0, 1e7).value < 1e-6;
        for (double v : {0.5, 2.0, 5.0}) {
            ok = ok && hyperbolic_step(ell, Complex(0.5, 0), v, 60.0).value < 1e-5;
            ok = ok && hyperbolic_step(zs, Complex(0, 0), v, 1e7).value < 1e-5;
        }

        // hyperbolic semigroups have s_1 bounded away from zero
        double min_s1 = 1e300;
        for (double lambda : {0.5, 2.0, M_PI}) {
            const double s1 =
                hyperbolic_step(HyperbolicGroup{lambda, kOne}, Complex(0, 0), 1.0, 200.0).value;
            min_s1 = std::min(min_s1, s1 / lambda);
            ok = ok && s1 > 0.1 * lambda;
        }

        // s_u/u -> c within 1e-2 at u = 40 where u = 40 is representable
        double worst_dev = 0.0;
        for (const auto& [s, rate_h] : std::vector<std::pair<Semigroup, double>>{
                 {Semigroup{HyperbolicGroup{0.2, kOne}}, 50.0},
                 {Semigroup{HyperbolicGroup{0.5, kOne}}, 50.0},
                 {Semigroup{EllipticContraction{1.0, DiscPoint(0, 0)}}, 50.0},
                 {zs, 4e4}}) {
            const StepRateReport rep =
                step_rate_consistency(s, Complex(0.2, 0.1), {5, 10, 20, 40}, rate_h,
                                      std::max(400.0, rate_h));
            worst_dev = std::max(worst_dev, rep.entries.back().deviation);
            ok = ok && rep.entries.back().evaluated && rep.entries.back().deviation < 1e-2;
        }
        // the parabolic group has s_40/40 = log-growth/40 ~ 0.09; the ratios
        // must still decay toward the vanishing rate
        const StepRateReport par =
            step_rate_consistency(ParabolicGroup{+1, kOne}, Complex(0, 0), {5, 10, 20, 40},
                                  1000.0);
        ok = ok && par.ratios_nonincreasing && par.entries.back().ratio < 0.1 &&
             par.rate.value < 1e-2;
        std::snprintf(fmtbuf, sizeof fmtbuf,
                      "group id err %.1e; consistency dev %.1e; parabolic s40/40=%.3f (decaying)",
                      worst_group, worst_dev, par.entries.back().ratio);
        d = fmtbuf;
        return ok;
    });

    criterion(11, "koenigs uniqueness: offsets obey the rigidity law", 1.0, [](std::string& d) {
        const HolomorphicMap h = hyperbolic_koenigs(M_PI);
        const ModelDomain strip = ModelDomain::strip(1.0);
        bool ok = std::abs(koenigs_offset(h, h + Complex(0, 5), strip) - Complex(0, 5)) < 1e-9;
        try {
            koenigs_offset(h, h + Complex(3, 0), strip);
            ok = false;
            d += "real offset accepted; ";
        } catch (const model_error&) {
        }
        const HolomorphicMap hz = zero_step_koenigs();
        ok = ok && std::abs(koenigs_offset(hz, hz + Complex(2, 3), ModelDomain::full_plane()) -
                            Complex(2, 3)) < 1e-9;
        const HolomorphicMap hc = parabolic_koenigs();
        try {
            koenigs_offset(hc, hc + Complex(-1, 2), ModelDomain::right_half_plane());
            ok = false;
            d += "real offset accepted in half-plane; ";
        } catch (const model_error&) {
        }
        d += "imaginary accepted, real rejected, plane free";
        return ok;
    });

    criterion(12, "CLI determinism: byte-identical reports and SVGs", 5.0, [](std::string& d) {
        const fs::path dir = fs::temp_directory_path() / "koenigs_acceptance";
        fs::remove_all(dir);
        fs::create_directories(dir);
        const fs::path cfgdir(KOENIGS_TEST_CONFIG_DIR);
        bool ok = true;
        for (const char* config : {"hyperbolic2.json", "strip_model.json"}) {
            const fs::path r1 = dir / (std::string("a_") + config);
            const fs::path r2 = dir / (std::string("b_") + config);
            run_cli("classify --config " + (cfgdir / config).string() + " --report " +
                    r1.string() + " > /dev/null 2>&1");
            run_cli("classify --config " + (cfgdir / config).string() + " --report " +
                    r2.string() + " > /dev/null 2>&1");
            ok = ok && !slurp(r1).empty() && slurp(r1) == slurp(r2);
        }
        const fs::path d1 = dir / "render1", d2 = dir / "render2";
        fs::create_directories(d1);
        fs::create_directories(d2);
        run_cli("render --config " + (cfgdir / "strip_model.json").string() + " --out-dir " +
                d1.string() + " > /dev/null 2>&1");
        run_cli("render --config " + (cfgdir / "strip_model.json").string() + " --out-dir " +
                d2.string() + " > /dev/null 2>&1");
        for (const char* name : {"phase_portrait.svg", "image_domain.svg", "re_p_map.svg"})
            ok = ok && !slurp(d1 / name).empty() && slurp(d1 / name) == slurp(d2 / name);
        d = "reports and renders identical across repeated runs";
        return ok;
    });

    std::printf("%s: %d of 12 criteria passed\n", failures == 0 ? "SUCCESS" : "FAILURE",
                12 - failures);
    return failures == 0 ? 0 : 1;
}
