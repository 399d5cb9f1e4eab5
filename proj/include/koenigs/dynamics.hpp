#pragma once

// Dynamical analysis of semigroups: divergence rate, hyperbolic steps,
// Denjoy-Wolff location, classification into elliptic / hyperbolic /
// parabolic (positive or zero hyperbolic step), the distance-limit identity
// of canonical models, and rate monotonicity under semi-conjugation.
//
// Limits at t -> infinity are reported together with the horizon actually
// reached: estimators walk geometric ladders and stop where the orbit can no
// longer be represented strictly inside the disc, which is expected for
// hyperbolic semigroups whose orbits approach the boundary exponentially.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "koenigs/canonical.hpp"
#include "koenigs/semigroup.hpp"

namespace koenigs {

/// Estimate of the divergence rate c = lim k(z, phi_s z)/s = inf_s k(z, phi_s z)/s.
/// `value` is the inf-form over the sampled ladder (an upper bound of c by
/// subadditivity); `limit_form` is the quotient at the deepest usable time.
struct RateEstimate {
    double value = 0.0;        ///< inf-form estimate (the reported rate)
    std::string method = "inf-form";
    double horizon_used = 0.0; ///< deepest s actually evaluated
    double spread = 0.0;       ///< limit_form - value, the two-form gap
    double limit_form = 0.0;
    std::vector<std::pair<double, double>> quotients; ///< (s, k/s) ladder
};

inline RateEstimate divergence_rate(const Semigroup& S, Complex z, double horizon,
                                    int ladder = 48) {
    if (!(horizon > 0.0))
        throw domain_error("divergence_rate requires a positive horizon");
    const ModelDomain space = phase_space(S);
    RateEstimate est;
    const double s_min = std::min(0.25, horizon / 4096.0);
    const double g = std::pow(s_min / horizon, 1.0 / (ladder - 1));
    OrbitWalker walker(S, z);
    for (int k = ladder - 1; k >= 0; --k) {
        const double s = horizon * std::pow(g, k);
        double q;
        try {
            q = hyp_dist(space, z, walker.at(s)) / s;
        } catch (const error&) {
            break; // orbit left the representable part of the space
        }
        est.quotients.emplace_back(s, q);
        est.horizon_used = s;
        est.limit_form = q;
    }
    if (est.quotients.empty())
        throw convergence_error("divergence_rate: semigroup not evaluable at any ladder time");
    est.value = est.quotients.front().second;
    for (const auto& [s, q] : est.quotients) est.value = std::min(est.value, q);
    est.spread = est.limit_form - est.value;
    return est;
}

/// Estimate of the hyperbolic step s_u = lim_r k(phi_r z, phi_{r+u} z).
/// The tail is nonincreasing in r, so the last recorded value is an upper
/// bound of s_u; a tail that rises beyond the slack indicates the input is
/// not a semigroup and is rejected.
struct StepEstimate {
    double u = 0.0;
    double value = 0.0;
    double horizon_used = 0.0;
    std::vector<std::pair<double, double>> tail; ///< (r, k(phi_r z, phi_{r+u} z))
};

inline StepEstimate hyperbolic_step(const Semigroup& S, Complex z, double u, double horizon,
                                    int ladder = 40, double slack = 1e-9,
                                    double boundary_gap = 1e-5) {
    if (!(u >= 0.0))
        throw domain_error("hyperbolic_step requires u >= 0");
    StepEstimate est;
    est.u = u;
    if (u == 0.0) return est;
    if (!(horizon > u))
        throw domain_error("hyperbolic_step requires horizon > u");
    const ModelDomain space = phase_space(S);
    const bool disc = space.kind == ModelDomain::Kind::Disc;
    const double r_min = std::min(1.0, horizon / 4096.0);
    const double g = std::pow(r_min / horizon, 1.0 / (ladder - 1));
    OrbitWalker walker(S, z);
    for (int k = ladder - 1; k >= 0; --k) {
        const double r = horizon * std::pow(g, k);
        double v;
        try {
            const Complex zr = walker.at(r);
            const Complex zu = flow(S, u, zr);
            // distances between points this close to the circle carry noise
            // beyond the monotonicity slack; stop the tail there
            if (disc && (std::abs(zu) > 1.0 - boundary_gap || std::abs(zr) > 1.0 - boundary_gap))
                break;
            v = hyp_dist(space, zr, zu);
        } catch (const error&) {
            break;
        }
        if (!est.tail.empty() && v > est.tail.back().second + slack)
            throw model_error("hyperbolic_step: tail increased from " +
                              std::to_string(est.tail.back().second) + " to " + std::to_string(v) +
                              " at r = " + std::to_string(r) + "; not a semigroup trajectory");
        est.tail.emplace_back(r, v);
        est.horizon_used = r;
        est.value = v;
    }
    if (est.tail.empty())
        throw convergence_error("hyperbolic_step: semigroup not evaluable at any ladder time");
    return est;
}

/// Comparison of s_u / u against the divergence rate at a ladder of orders
/// (c = lim_u s_u / u).  Orders whose u-jump is not representable inside the
/// disc (the gap to the boundary shrinks like e^{-lambda u}) are reported as
/// skipped rather than failing the whole comparison.
struct StepRateReport {
    struct Entry {
        double u;
        double step;
        double ratio;     ///< s_u / u
        double deviation; ///< |s_u/u - c|
        bool evaluated = true;
    };
    std::vector<Entry> entries;
    RateEstimate rate;
    double max_deviation = 0.0;
    double final_deviation = 0.0;
    bool ratios_nonincreasing = true;
};

inline StepRateReport step_rate_consistency(const Semigroup& S, Complex z,
                                            const std::vector<double>& orders = {5, 10, 20, 40},
                                            double rate_horizon = 50.0,
                                            double step_horizon = 400.0) {
    StepRateReport rep;
    rep.rate = divergence_rate(S, z, rate_horizon);
    for (double u : orders) {
        // Relaxed boundary gap and slack: the comparison tolerances are far
        // coarser than the step-identity checks.
        try {
            const StepEstimate se =
                hyperbolic_step(S, z, u, std::max(step_horizon, 8.0 * u), 40, 1e-4, 1e-11);
            const double ratio = se.value / u;
            rep.entries.push_back({u, se.value, ratio, std::abs(ratio - rep.rate.value), true});
        } catch (const error&) {
            rep.entries.push_back({u, 0.0, 0.0, 0.0, false});
        }
    }
    const StepRateReport::Entry* prev = nullptr;
    bool any = false;
    for (const auto& e : rep.entries) {
        if (!e.evaluated) continue;
        any = true;
        rep.max_deviation = std::max(rep.max_deviation, e.deviation);
        rep.final_deviation = e.deviation;
        if (prev && e.ratio > prev->ratio + 1e-6) rep.ratios_nonincreasing = false;
        prev = &e;
    }
    if (!any)
        throw convergence_error("step_rate_consistency: no order was evaluable");
    return rep;
}

/// Denjoy-Wolff estimate: an interior fixed point when the orbit of 0
/// converges inside the disc, otherwise the boundary projection of the orbit
/// at the deepest evaluable time, with |phi_T(0)| as confidence.
struct DenjoyWolff {
    Complex point{};
    bool interior = false;
    double confidence = 0.0;
    double horizon_used = 0.0;
    bool converged = true;
};

inline DenjoyWolff denjoy_wolff(const Semigroup& S, double horizon = 1000.0) {
    if (!(horizon > 0.0))
        throw domain_error("denjoy_wolff requires a positive horizon");
    DenjoyWolff dw;
    std::vector<Complex> pts;
    std::vector<double> ts;
    {
        const int ladder = 24;
        const double t_min = std::min(1.0, horizon / 512.0);
        const double g = std::pow(t_min / horizon, 1.0 / (ladder - 1));
        std::vector<double> grid;
        for (int k = ladder - 1; k >= 0; --k) grid.push_back(horizon * std::pow(g, k));
        // evaluate point by point so a boundary escape keeps the prefix
        OrbitWalker walker(S, Complex(0.0));
        for (double t : grid) {
            try {
                pts.push_back(walker.at(t));
            } catch (const error&) {
                break;
            }
            ts.push_back(t);
        }
    }
    if (pts.empty())
        throw convergence_error("denjoy_wolff: orbit of 0 is not evaluable");
    const Complex last = pts.back();
    dw.horizon_used = ts.back();

    // Interior fixed point: the orbit tail must settle and the candidate must
    // actually be fixed.  |phi_1(x) - x| also vanishes near a boundary
    // Denjoy-Wolff point, so candidates close to the circle do not qualify.
    if (std::abs(last) <= 1.0 - 1e-6) {
        double residual = std::numeric_limits<double>::infinity();
        try {
            residual = std::abs(flow(S, 1.0, last) - last);
        } catch (const error&) {
        }
        if (residual < 1e-9) {
            dw.point = last;
            dw.interior = true;
            dw.confidence = 1.0;
            return dw;
        }
    }
    dw.point = last / std::abs(last);
    dw.interior = false;
    dw.confidence = std::abs(last);
    dw.converged = dw.confidence > 0.99;
    return dw;
}

enum class SemigroupType { Elliptic, Hyperbolic, ParabolicPositiveStep, ParabolicZeroStep };

inline std::string type_name(SemigroupType t) {
    switch (t) {
    case SemigroupType::Elliptic: return "elliptic";
    case SemigroupType::Hyperbolic: return "hyperbolic";
    case SemigroupType::ParabolicPositiveStep: return "parabolic-positive-step";
    case SemigroupType::ParabolicZeroStep: return "parabolic-zero-step";
    }
    return "?";
}

struct ClassifySettings {
    double c_threshold = 1e-4;
    double s_threshold = 1e-4;
    double band = 10.0;          ///< inconclusive band [thr/band, thr*band]
    double rate_horizon = 50.0;
    double step_horizon = 400.0;
    double dw_horizon = 1000.0;
    double max_horizon = 5e6;    ///< cap for adaptive deepening
    GridSpec grid{};             ///< sampling grid for the range-bounds route
};

struct ClassificationReport {
    SemigroupType type = SemigroupType::Elliptic;
    std::optional<double> lambda; ///< spectral value estimate (2c), absent for elliptic rotations
    RateEstimate rate;
    std::optional<StepEstimate> step1;
    DenjoyWolff dw;
    ModelDomain model = ModelDomain::disc();
    bool inconclusive = false;
    std::optional<RangeBounds> bounds; ///< model semigroups only
    std::vector<std::string> diagnostics;
};

namespace detail {

/// Ratio of the deepest ladder value to the value one decade earlier; close
/// to 1 means the estimate has settled, well below 1 means it is still
/// decaying and deserves a longer horizon.
inline double ladder_trend(const std::vector<std::pair<double, double>>& ladder) {
    if (ladder.size() < 2) return 1.0;
    const double s_last = ladder.back().first;
    const double v_last = ladder.back().second;
    double v_ref = ladder.front().second;
    for (const auto& [s, v] : ladder)
        if (s <= s_last / 8.0) v_ref = v;
    if (!(v_ref > 0.0)) return 1.0;
    return v_last / v_ref;
}

/// Deepen the horizon by factors of 8 while the estimate either sits inside
/// the threshold band or is still visibly decaying, until it stagnates, hits
/// the evaluability wall, or reaches the horizon cap.
template <typename Estimator, typename LadderOf>
auto deepen(Estimator est, LadderOf ladder_of, double horizon, double max_horizon, double thr,
            double band) {
    auto e = est(horizon);
    for (;;) {
        const bool in_band = e.value >= thr / band && e.value <= thr * band;
        const bool settling = ladder_trend(ladder_of(e)) > 0.75;
        if (!in_band && settling) break;
        if (e.horizon_used < 0.5 * horizon) break; // evaluability wall reached
        if (horizon >= max_horizon) break;
        horizon = std::min(horizon * 8.0, max_horizon);
        auto next = est(horizon);
        // a settled estimate that no longer moves will not leave the band
        const bool stagnant =
            settling && std::abs(next.value - e.value) <= 0.05 * std::max(e.value, 1e-300);
        e = std::move(next);
        if (stagnant) break;
    }
    return e;
}

} // namespace detail

/// Classify a disc semigroup.  Elliptic when an interior fixed point is
/// found; otherwise hyperbolic iff the rate exceeds c_threshold (lambda = 2c),
/// otherwise parabolic, split by the first hyperbolic step.  For model
/// semigroups the range bounds of Re h give the canonical base space exactly
/// (strip / half-plane / plane) and settle estimates that finite horizons
/// leave inside the threshold band.
inline ClassificationReport classify(const Semigroup& S, const ClassifySettings& cfg = {}) {
    if (phase_space(S).kind != ModelDomain::Kind::Disc)
        throw domain_error("classify applies to semigroups acting on the disc");
    ClassificationReport rep;
    rep.dw = denjoy_wolff(S, cfg.dw_horizon);

    if (rep.dw.interior) {
        rep.type = SemigroupType::Elliptic;
        rep.model = ModelDomain::disc();
        rep.rate = divergence_rate(S, Complex(0.0), std::min(cfg.rate_horizon, 50.0));
        if (const auto* ec = std::get_if<EllipticContraction>(&S))
            rep.lambda = ec->lambda;
        return rep;
    }

    rep.rate = detail::deepen([&](double h) { return divergence_rate(S, Complex(0.0), h); },
                              [](const RateEstimate& e) -> const auto& { return e.quotients; },
                              cfg.rate_horizon, cfg.max_horizon, cfg.c_threshold, cfg.band);
    const double c = rep.rate.value;
    const bool c_in_band = c >= cfg.c_threshold / cfg.band && c <= cfg.c_threshold * cfg.band;

    SemigroupType dyn_type;
    bool dyn_inconclusive = c_in_band;
    if (c > cfg.c_threshold) {
        dyn_type = SemigroupType::Hyperbolic;
    } else {
        rep.step1 = detail::deepen([&](double h) { return hyperbolic_step(S, Complex(0.0), 1.0, h); },
                                   [](const StepEstimate& e) -> const auto& { return e.tail; },
                                   cfg.step_horizon, cfg.max_horizon, cfg.s_threshold, cfg.band);
        const double s1 = rep.step1->value;
        dyn_type = s1 > cfg.s_threshold ? SemigroupType::ParabolicPositiveStep
                                        : SemigroupType::ParabolicZeroStep;
        if (s1 >= cfg.s_threshold / cfg.band && s1 <= cfg.s_threshold * cfg.band)
            dyn_inconclusive = true;
    }

    if (const auto* ms = std::get_if<ModelSemigroup>(&S)) {
        // Range bounds of Re h decide the canonical base space exactly.
        const RangeBounds rb = range_bounds(ms->h, cfg.grid);
        rep.bounds = rb;
        const CanonicalModel cm = canonical_normalize(ms->h, rb);
        SemigroupType bounds_type;
        switch (cm.domain.kind) {
        case ModelDomain::Kind::Strip: bounds_type = SemigroupType::Hyperbolic; break;
        case ModelDomain::Kind::FullPlane: bounds_type = SemigroupType::ParabolicZeroStep; break;
        default: bounds_type = SemigroupType::ParabolicPositiveStep; break;
        }
        rep.type = bounds_type;
        rep.model = cm.domain;
        if (bounds_type != dyn_type) {
            if (dyn_inconclusive) {
                rep.diagnostics.push_back("dynamical estimates inside the threshold band; type "
                                          "resolved by the range bounds of Re h");
            } else {
                rep.inconclusive = true;
                rep.diagnostics.push_back("range bounds contradict decisive dynamical estimates");
            }
        }
        if (bounds_type == SemigroupType::Hyperbolic) {
            rep.lambda = 2.0 * c;
            const double lambda_bounds = M_PI / cm.domain.rho;
            if (std::abs(2.0 * c - lambda_bounds) > 0.05 * lambda_bounds)
                rep.diagnostics.push_back("spectral value from rate (2c) and from strip width "
                                          "(pi/rho) differ beyond 5%");
        } else {
            rep.lambda = 2.0 * c; // vanishing estimate, reported with its horizon
        }
        return rep;
    }

    rep.type = dyn_type;
    rep.inconclusive = dyn_inconclusive;
    if (dyn_inconclusive)
        rep.diagnostics.push_back("estimate within 10x of the decision threshold at horizon " +
                                  std::to_string(rep.rate.horizon_used));
    rep.lambda = 2.0 * c;
    switch (rep.type) {
    case SemigroupType::Hyperbolic:
        rep.model = ModelDomain::strip(M_PI / (2.0 * c));
        break;
    case SemigroupType::ParabolicPositiveStep: {
        int orientation = +1;
        if (const auto* pg = std::get_if<ParabolicGroup>(&S)) orientation = pg->orientation;
        else rep.diagnostics.push_back("half-plane orientation defaulted to right");
        rep.model = orientation >= 0 ? ModelDomain::right_half_plane()
                                     : ModelDomain::left_half_plane();
        break;
    }
    case SemigroupType::ParabolicZeroStep:
        rep.model = ModelDomain::full_plane();
        break;
    case SemigroupType::Elliptic:
        break;
    }
    return rep;
}

/// Per-pair record of the distance-limit identity
/// k_Omega(h z, h w) = lim_t omega(phi_t z, phi_t w).
struct DistanceLimitReport {
    struct PairData {
        Complex z, w;
        double domain_side = 0.0; ///< k_Omega(h z, h w)
        std::vector<std::pair<double, double>> ladder; ///< (T, omega(phi_T z, phi_T w))
        double time_side = 0.0;   ///< value at the deepest T
        double gap = 0.0;         ///< time_side - domain_side at the deepest T
        double horizon_used = 0.0;
    };
    std::vector<PairData> pairs;
    double max_gap = 0.0;
    bool time_side_nonincreasing = true;
    bool time_side_dominates = true; ///< time side >= domain side - slack throughout
};

inline DistanceLimitReport distance_limit_check(const ModelSemigroup& ms,
                                                const std::vector<std::pair<Complex, Complex>>& pairs,
                                                double horizon = 50.0, int ladder = 10,
                                                double slack = 1e-9, double boundary_gap = 1e-5) {
    DistanceLimitReport rep;
    const Semigroup S = ms;
    for (const auto& [z, w] : pairs) {
        DistanceLimitReport::PairData pd;
        pd.z = z;
        pd.w = w;
        pd.domain_side = hyp_dist(ms.domain, ms.h(z), ms.h(w));
        const double t_min = std::min(1.0, horizon / 64.0);
        const double g = std::pow(t_min / horizon, 1.0 / (ladder - 1));
        OrbitWalker wz(S, z), ww(S, w);
        for (int k = ladder - 1; k >= 0; --k) {
            const double T = horizon * std::pow(g, k);
            double v;
            try {
                const Complex a = wz.at(T), b = ww.at(T);
                if (std::abs(a) > 1.0 - boundary_gap || std::abs(b) > 1.0 - boundary_gap)
                    break; // beyond this the distance noise would mask the limit
                v = hyp_dist_disc(DiscPoint(a), DiscPoint(b));
            } catch (const error&) {
                break;
            }
            if (!pd.ladder.empty() && v > pd.ladder.back().second + slack)
                rep.time_side_nonincreasing = false;
            if (v < pd.domain_side - slack) rep.time_side_dominates = false;
            pd.ladder.emplace_back(T, v);
            pd.time_side = v;
            pd.horizon_used = T;
        }
        if (pd.ladder.empty())
            throw convergence_error("distance_limit_check: orbit pair not evaluable");
        pd.gap = pd.time_side - pd.domain_side;
        rep.max_gap = std::max(rep.max_gap, std::abs(pd.gap));
        rep.pairs.push_back(std::move(pd));
    }
    return rep;
}

/// Rate comparison under a semi-conjugation g: if g ∘ phi_t = psi_t ∘ g then
/// c(phi) >= c(psi).  The conjugation residual is verified first.
struct SemiConjugationRateReport {
    double conjugation_residual = 0.0;
    RateEstimate rate_upstairs;   ///< rate of S (the disc semigroup)
    RateEstimate rate_downstairs; ///< rate of T
    bool ordered = false;         ///< rate(S) >= rate(T) - tol
};

inline SemiConjugationRateReport
rate_semiconjugation_check(const HolomorphicMap& g, const Semigroup& S, const Semigroup& T,
                           double horizon = 50.0, double tol = 1e-2) {
    SemiConjugationRateReport rep;
    std::vector<std::pair<double, Complex>> samples;
    for (double t : {0.3, 0.9, 1.7})
        for (Complex z : {Complex(0.0, 0.0), Complex(0.4, 0.0), Complex(0.0, -0.3),
                          Complex(0.2, 0.5)})
            samples.emplace_back(t, z);
    rep.conjugation_residual = semi_conjugation_residual(g, S, T, samples);
    if (rep.conjugation_residual > 1e-8)
        throw model_error("rate_semiconjugation_check: g does not semi-conjugate S to T "
                          "(residual " + std::to_string(rep.conjugation_residual) + ")");
    rep.rate_upstairs = divergence_rate(S, Complex(0.0), horizon);
    rep.rate_downstairs = divergence_rate(T, g(Complex(0.0)), horizon);
    rep.ordered = rep.rate_upstairs.value >= rep.rate_downstairs.value - tol;
    return rep;
}

} // namespace koenigs
