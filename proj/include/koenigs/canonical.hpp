#pragma once

// Koenigs functions and canonical models: the closed-form families, range
// bounds of Re h with boundary refinement, normalization onto the four
// canonical base spaces, the starlike-at-infinity criterion, location of the
// Denjoy-Wolff point from h, and uniqueness of h up to additive constants.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "koenigs/expression.hpp"
#include "koenigs/hyperbolic.hpp"
#include "koenigs/inverse.hpp"

namespace koenigs {

/// Biholomorphism f from the right half-plane onto the strip of width
/// pi/lambda satisfying f(e^{lambda t} w) = f(w) + it:
///     f(w) = (i/lambda) log w + pi/(2 lambda).
inline HolomorphicMap strip_transfer(double lambda) {
    if (!(lambda > 0.0))
        throw domain_error("strip_transfer requires lambda > 0");
    const ExprPtr f =
        expr_add(expr_mul(expr_const(Complex(0.0, 1.0 / lambda)), expr_log(expr_var())),
                 expr_const(M_PI / (2.0 * lambda)));
    return HolomorphicMap(f);
}

// Closed-form Koenigs functions of the built-in families.  These are grammar
// trees, so they print and re-parse to themselves.

/// Koenigs function of the hyperbolic group with spectral value lambda and
/// Denjoy-Wolff point tau; image is the full strip of width pi/lambda.
inline HolomorphicMap hyperbolic_koenigs(double lambda, BoundaryPoint tau = BoundaryPoint(1, 0)) {
    return strip_transfer(lambda).compose(cayley_expr(tau));
}

/// Koenigs function of the parabolic group: C_tau for the model on the right
/// half-plane, -C_tau for the model on the left half-plane.
inline HolomorphicMap parabolic_koenigs(BoundaryPoint tau = BoundaryPoint(1, 0),
                                        int orientation = +1) {
    const HolomorphicMap c = cayley_expr(tau);
    if (orientation >= 0) return c;
    return HolomorphicMap(expr_mul(expr_const(-1.0), c.root()));
}

/// i C_tau(z)^2: a parabolic semigroup of zero hyperbolic step whose image is
/// the plane minus a half-line.
inline HolomorphicMap zero_step_koenigs(BoundaryPoint tau = BoundaryPoint(1, 0)) {
    return HolomorphicMap(
        expr_mul(expr_const(Complex(0.0, 1.0)), expr_ipow(cayley_expr(tau).root(), 2)));
}

/// a C_sigma(z) + c with real a != 0: the Koenigs functions of the parabolic
/// automorphism groups (the equality case of the starlike criterion).
inline HolomorphicMap mobius_family_koenigs(double a, BoundaryPoint sigma, Complex c) {
    if (a == 0.0) throw domain_error("Moebius family requires a != 0");
    return HolomorphicMap(
        expr_add(expr_mul(expr_const(a), cayley_expr(sigma).root()), expr_const(c)));
}

// ---------------------------------------------------------------------------
// Range bounds of Re h

/// Estimates of a = inf Re h and b = sup Re h over the disc.  Grid extrema
/// are one-sided (a is an over-estimate of the true inf, b an under-estimate
/// of the true sup); extrema escaping past `divergence_threshold` are flagged
/// infinite instead of reported.
struct RangeBounds {
    double a = 0.0;
    double b = 0.0;
    bool a_infinite = false;
    bool b_infinite = false;
    double divergence_threshold = 1e6;
    double deepest_radius = 0.0;
};

namespace detail {

struct Extremum {
    double value;
    double theta;
};

/// Push the radius toward 1 around the extremal direction, tracking one side
/// (sign = +1 for the sup of Re h, -1 for the inf of -Re h ... i.e. inf).
inline void refine_extremum(const HolomorphicMap& h, Extremum ex, double sign, double theta_width,
                            double r_start, double threshold, int max_depth, double& out_value,
                            bool& out_infinite, double& deepest) {
    double best = ex.value;
    double theta = ex.theta;
    double width = theta_width;
    double one_minus_r = 1.0 - r_start;
    int stale_rounds = 0;
    for (int depth = 0; depth < max_depth; ++depth) {
        one_minus_r = std::max(one_minus_r * 0.25, 1e-12);
        const double r = 1.0 - one_minus_r;
        deepest = std::max(deepest, r);
        double round_best = -std::numeric_limits<double>::infinity();
        double round_theta = theta;
        const int samples = 17;
        for (int k = 0; k < samples; ++k) {
            const double th = theta - width + 2.0 * width * k / (samples - 1);
            double v;
            try {
                v = sign * h(Complex(r * std::cos(th), r * std::sin(th))).real();
            } catch (const error&) {
                continue;
            }
            if (v > round_best) {
                round_best = v;
                round_theta = th;
            }
        }
        width *= 0.5;
        theta = round_theta;
        if (round_best > best + 1e-8 * (1.0 + std::abs(best)))
            stale_rounds = 0;
        else
            ++stale_rounds;
        best = std::max(best, round_best);
        if (best > threshold) {
            out_infinite = true;
            out_value = sign * best;
            return;
        }
        if (stale_rounds >= 3) break;
        if (one_minus_r <= 1e-12) break;
    }
    out_infinite = false;
    out_value = sign * best;
}

} // namespace detail

inline RangeBounds range_bounds(const HolomorphicMap& h, const GridSpec& grid = GridSpec(),
                                double divergence_threshold = 1e6, int max_depth = 18) {
    RangeBounds rb;
    rb.divergence_threshold = divergence_threshold;

    detail::Extremum lo{std::numeric_limits<double>::infinity(), 0.0};
    detail::Extremum hi{-std::numeric_limits<double>::infinity(), 0.0};
    const double dtheta = 2.0 * M_PI / grid.angular;
    for (double r : grid.radii()) {
        for (int k = 0; k < grid.angular; ++k) {
            const double th = k * dtheta;
            double v;
            try {
                v = h(Complex(r * std::cos(th), r * std::sin(th))).real();
            } catch (const error&) {
                continue;
            }
            if (v < lo.value) lo = {v, th};
            if (v > hi.value) hi = {v, th};
        }
    }
    if (!std::isfinite(lo.value) || !std::isfinite(hi.value))
        throw evaluation_error("range_bounds: map not evaluable on the sampling grid");

    rb.deepest_radius = grid.r_max;
    detail::refine_extremum(h, {hi.value, hi.theta}, +1.0, dtheta, grid.r_max,
                            divergence_threshold, max_depth, rb.b, rb.b_infinite,
                            rb.deepest_radius);
    detail::refine_extremum(h, {-lo.value, lo.theta}, -1.0, dtheta, grid.r_max,
                            divergence_threshold, max_depth, rb.a, rb.a_infinite,
                            rb.deepest_radius);
    if (rb.a_infinite) rb.a = -std::numeric_limits<double>::infinity();
    if (rb.b_infinite) rb.b = std::numeric_limits<double>::infinity();
    return rb;
}

// ---------------------------------------------------------------------------
// Canonical normalization

struct CanonicalModel {
    ModelDomain domain;
    HolomorphicMap h; ///< normalized Koenigs function
};

/// Selects the canonical base space from the range bounds and shifts h onto
/// it: plane for (-inf, +inf), left half-plane via h - b for (-inf, b),
/// right half-plane via h - a for (a, +inf), strip of width b - a via h - a
/// (spectral value pi/(b - a)).
inline CanonicalModel canonical_normalize(const HolomorphicMap& h, const RangeBounds& bounds) {
    if (!bounds.a_infinite && !bounds.b_infinite && bounds.a > bounds.b)
        throw domain_error("inconsistent range bounds: a > b");
    if (bounds.a_infinite && bounds.b_infinite)
        return {ModelDomain::full_plane(), h};
    if (bounds.a_infinite)
        return {ModelDomain::left_half_plane(), h - Complex(bounds.b)};
    if (bounds.b_infinite)
        return {ModelDomain::right_half_plane(), h - Complex(bounds.a)};
    return {ModelDomain::strip(bounds.b - bounds.a), h - Complex(bounds.a)};
}

// ---------------------------------------------------------------------------
// Starlike-at-infinity criterion

/// Result of sampling q(z) = Im[conj(sigma) (sigma - z)^2 h'(z)] over a grid.
/// h is starlike at infinity with respect to sigma iff q >= 0 on the disc;
/// q identically zero characterizes h(z) = a (sigma+z)/(sigma-z) + c.
struct StarlikeReport {
    double min_q = 0.0;
    double max_q = 0.0;
    Complex argmin{};
    bool passed = false;
    bool boundary_grazing = false; ///< min_q in (-1e-9, 0)
    bool equality_case = false;
    Complex fitted_a{};
    Complex fitted_c{};
    double fit_residual = 0.0;
};

inline StarlikeReport starlike_check(const HolomorphicMap& h, BoundaryPoint sigma,
                                     const GridSpec& grid = GridSpec(), double tol = 1e-9) {
    StarlikeReport rep;
    const HolomorphicMap dh = h.derivative();
    const Complex s = sigma.value();
    rep.min_q = std::numeric_limits<double>::infinity();
    rep.max_q = -std::numeric_limits<double>::infinity();
    for (const Complex& z : grid.points()) {
        const Complex d = s - z;
        const double q = (std::conj(s) * d * d * dh(z)).imag();
        if (q < rep.min_q) {
            rep.min_q = q;
            rep.argmin = z;
        }
        rep.max_q = std::max(rep.max_q, q);
    }
    rep.passed = rep.min_q >= -tol;
    rep.boundary_grazing = rep.min_q >= -tol && rep.min_q < 0.0;
    rep.equality_case = rep.passed && rep.max_q <= tol;

    if (rep.equality_case) {
        // A Moebius form is pinned by two values: h(0) = a + c and h(z1).
        const Complex z1(0.4, 0.0);
        const Complex c1 = cayley(sigma, z1);
        const Complex a = (h(z1) - h(Complex(0.0))) / (c1 - 1.0);
        const Complex c = h(Complex(0.0)) - a;
        rep.fitted_a = a;
        rep.fitted_c = c;
        double worst = 0.0;
        for (const Complex& z : grid.points())
            worst = std::max(worst, std::abs(h(z) - (a * cayley(sigma, z) + c)));
        rep.fit_residual = worst;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Denjoy-Wolff point from the Koenigs function

struct DwReport {
    BoundaryPoint sigma;
    double radial_peak = 0.0;    ///< best max of Im h along a radius
    bool radial_decisive = false; ///< radial peak exceeded the divergence bar
    bool orbit_available = false;
    double orbit_confidence = 0.0; ///< |phi_T(0)| at the deepest evaluated T
    Complex orbit_endpoint{};
};

namespace detail {

inline double radial_im_peak(const HolomorphicMap& h, double theta, double bar) {
    double peak = -std::numeric_limits<double>::infinity();
    const Complex dir(std::cos(theta), std::sin(theta));
    for (double gap = 0.05; gap >= 0.9e-9; gap *= 0.2) {
        try {
            peak = std::max(peak, h((1.0 - gap) * dir).imag());
        } catch (const error&) {
            break;
        }
        if (peak > bar) break;
    }
    return peak;
}

} // namespace detail

/// Locates the Denjoy-Wolff point of the semigroup induced by a starlike-at-
/// infinity h.  Radial route: the direction maximizing Im h(r sigma), refined
/// twice around the best of `candidates` equispaced boundary points and
/// accepted when the peak passes the divergence bar.  Orbit route:
/// phi_t(0) = h^{-1}(h(0) + it) followed to large t and projected to the
/// circle.  The routes cross-validate each other; if neither shows divergence
/// the map is not a Koenigs function and an error is thrown.
inline DwReport dw_from_koenigs(const HolomorphicMap& h, int candidates = 360,
                                double divergence_bar = 1e4, double orbit_horizon = 1000.0) {
    DwReport rep{BoundaryPoint(1, 0)};

    // Radial scan with two refinement rounds.
    double best_theta = 0.0;
    double best_peak = -std::numeric_limits<double>::infinity();
    double spacing = 2.0 * M_PI / candidates;
    for (int k = 0; k < candidates; ++k) {
        const double th = k * spacing;
        const double p = detail::radial_im_peak(h, th, divergence_bar);
        if (p > best_peak) {
            best_peak = p;
            best_theta = th;
        }
    }
    for (int round = 0; round < 2; ++round) {
        const double center = best_theta;
        const double step = spacing / 10.0; // 21 samples across [center - spacing, center + spacing]
        for (int k = 0; k <= 20; ++k) {
            const double th = center - spacing + k * step;
            const double p = detail::radial_im_peak(h, th, divergence_bar);
            if (p > best_peak) {
                best_peak = p;
                best_theta = th;
            }
        }
        spacing = step;
    }
    rep.radial_peak = best_peak;
    rep.radial_decisive = best_peak > divergence_bar;

    // Orbit route with path continuation.  Inversions that land essentially
    // on the unit circle are not trusted: a genuine orbit approaches the
    // boundary only asymptotically, while maps whose image translation exits
    // the disc (h = z, say) produce pinned boundary points immediately.
    try {
        const Complex w0 = h(Complex(0.0));
        DiscPoint seed(0.0, 0.0);
        double t = 1.0;
        while (t <= orbit_horizon) {
            seed = numeric_inverse(h, w0 + Complex(0.0, t), seed);
            if (std::abs(seed.value()) > 1.0 - 1e-10) break;
            rep.orbit_available = true;
            rep.orbit_endpoint = seed.value();
            t *= 2.0;
        }
    } catch (const error&) {
        // keep the deepest successful point
    }
    if (rep.orbit_available) rep.orbit_confidence = std::abs(rep.orbit_endpoint);

    const bool orbit_decisive = rep.orbit_available && rep.orbit_confidence > 0.9;
    if (!rep.radial_decisive && !orbit_decisive)
        throw model_error("dw_from_koenigs: Im h diverges along no direction and the induced "
                          "orbit stays away from the boundary; not a Koenigs function");

    const Complex radial_sigma(std::cos(best_theta), std::sin(best_theta));
    if (rep.radial_decisive && orbit_decisive) {
        const Complex orbit_sigma = rep.orbit_endpoint / std::abs(rep.orbit_endpoint);
        if (std::abs(orbit_sigma - radial_sigma) > 0.05)
            throw model_error("dw_from_koenigs: radial and orbit routes disagree on the "
                              "Denjoy-Wolff point");
        rep.sigma = BoundaryPoint(radial_sigma);
    } else if (rep.radial_decisive) {
        rep.sigma = BoundaryPoint(radial_sigma);
    } else {
        rep.sigma = BoundaryPoint(rep.orbit_endpoint / std::abs(rep.orbit_endpoint));
    }

    // Moebius polish: for h = a (sigma+z)/(sigma-z) + c the criterion
    // q >= 0 holds with equality everywhere, so sigma must be exact, far
    // beyond what the scans resolve.  Such an h agrees with its 3-point
    // Moebius interpolant, whose pole is sigma.
    {
        const Complex z1(0.0, 0.0), z2(0.35, 0.0), z3(0.0, -0.3);
        try {
            const HolomorphicMap m = mobius_through(z1, z2, z3, h(z1), h(z2), h(z3));
            double dev = 0.0;
            double scale = 0.0;
            for (Complex p : {Complex(0.5, 0.2), Complex(-0.4, 0.3), Complex(0.1, 0.6),
                              Complex(-0.2, -0.5), Complex(0.66, 0.0)}) {
                dev = std::max(dev, std::abs(h(p) - m(p)));
                scale = std::max(scale, std::abs(h(p)));
            }
            const ExprPtr& root = m.root();
            if (dev <= 1e-10 * (1.0 + scale) && std::abs(root->mc) > 1e-12) {
                const Complex pole = -root->md / root->mc;
                if (std::abs(std::abs(pole) - 1.0) < 1e-6 &&
                    std::abs(pole / std::abs(pole) - rep.sigma.value()) < 0.05)
                    rep.sigma = BoundaryPoint(pole / std::abs(pole));
            }
        } catch (const error&) {
            // h is not Moebius-like on the probes; keep the scanned estimate
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Uniqueness of the Koenigs function

/// Estimates the constant h2 - h1 over a grid and enforces the uniqueness
/// law: the difference must be constant, purely imaginary when the canonical
/// model is rigid (strip or half-plane), arbitrary complex on the plane.
inline Complex koenigs_offset(const HolomorphicMap& h1, const HolomorphicMap& h2,
                              const ModelDomain& model, const GridSpec& grid = GridSpec(16, 32, 0.9)) {
    Complex sum = 0.0;
    const std::vector<Complex> pts = grid.points();
    std::vector<Complex> diffs;
    diffs.reserve(pts.size());
    for (const Complex& z : pts) {
        diffs.push_back(h2(z) - h1(z));
        sum += diffs.back();
    }
    const Complex mean = sum / static_cast<double>(diffs.size());
    double worst = 0.0;
    for (const Complex& d : diffs) worst = std::max(worst, std::abs(d - mean));
    if (worst > 1e-9 * (1.0 + std::abs(mean)))
        throw model_error("koenigs_offset: difference is not constant (maps do not intertwine "
                          "the same semigroup); deviation " + std::to_string(worst));
    const bool rigid = model.kind == ModelDomain::Kind::Strip ||
                       model.kind == ModelDomain::Kind::RightHalfPlane ||
                       model.kind == ModelDomain::Kind::LeftHalfPlane;
    if (rigid && std::abs(mean.real()) > 1e-9 * (1.0 + std::abs(mean)))
        throw model_error("koenigs_offset: offset " + to_string(mean) +
                          " has a real part, which the " + model.name() + " model forbids");
    return mean;
}

// ---------------------------------------------------------------------------

/// A validated Koenigs function: the map, its Denjoy-Wolff point, range
/// bounds, and the canonical model they determine.
struct KoenigsFunction {
    HolomorphicMap h;
    BoundaryPoint dw_point;
    RangeBounds bounds;
    ModelDomain model;
    HolomorphicMap normalized;
    StarlikeReport starlike;
    UnivalenceReport univalence;
};

/// Runs the full pipeline on a closed-form candidate h: Denjoy-Wolff
/// location, starlike criterion (must pass), range bounds, canonical
/// normalization and a univalence spot check.
inline KoenigsFunction build_koenigs(const HolomorphicMap& h, const GridSpec& grid = GridSpec()) {
    const DwReport dw = dw_from_koenigs(h);
    const StarlikeReport st = starlike_check(h, dw.sigma, grid);
    if (!st.passed)
        throw model_error("starlike criterion fails at z = " + to_string(st.argmin) +
                          " (min q = " + std::to_string(st.min_q) + "); not a Koenigs function");
    const RangeBounds rb = range_bounds(h, grid);
    CanonicalModel cm = canonical_normalize(h, rb);
    const UnivalenceReport uni = univalence_spot_check(h, GridSpec(24, 48, grid.r_max));
    return KoenigsFunction{h, dw.sigma, rb, cm.domain, cm.h, st, uni};
}

} // namespace koenigs
