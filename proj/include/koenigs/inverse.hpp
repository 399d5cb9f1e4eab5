#pragma once

// Numerical inversion of univalent maps of the disc by damped Newton
// iteration with path continuation, and a grid-based univalence spot check.

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "koenigs/expression.hpp"
#include "koenigs/types.hpp"

namespace koenigs {

struct NewtonSettings {
    double rel_tol = 1e-11;  ///< accept |h(z) - w| < rel_tol * (1 + |w|)
    int max_iter = 200;
    int max_halvings = 40;
    int max_stages = 1024;   ///< cap on path-continuation subdivisions
};

namespace detail {

/// One damped Newton run toward target w from the given seed.  Returns the
/// final iterate and whether the run converged; iterates are confined to
/// |z| <= 1 - kBoundaryMargin.
inline std::pair<Complex, bool> newton_run(const HolomorphicMap& h, const HolomorphicMap& dh,
                                           Complex w, Complex seed, const NewtonSettings& cfg) {
    const double tol = cfg.rel_tol * (1.0 + std::abs(w));
    const double rmax = 1.0 - kBoundaryMargin;
    Complex z = seed;
    Complex r;
    try {
        r = h(z) - w;
    } catch (const error&) {
        return {z, false};
    }
    for (int it = 0; it < cfg.max_iter; ++it) {
        if (std::abs(r) < tol) return {z, true};
        Complex step;
        try {
            const Complex d = dh(z);
            if (std::abs(d) < 1e-300) return {z, false};
            step = r / d;
        } catch (const error&) {
            return {z, false};
        }
        double alpha = 1.0;
        bool moved = false;
        for (int k = 0; k < cfg.max_halvings; ++k, alpha *= 0.5) {
            const Complex cand = z - alpha * step;
            if (std::abs(cand) > rmax) continue; // escaping the disc: damp harder
            Complex rc;
            try {
                rc = h(cand) - w;
            } catch (const error&) {
                continue;
            }
            if (std::abs(rc) < std::abs(r)) {
                z = cand;
                r = rc;
                moved = true;
                break;
            }
        }
        if (!moved) return {z, false};
    }
    return {z, std::abs(r) < tol};
}

} // namespace detail

/// Solve h(z) = w for z in the unit disc.  The seed should lie in the same
/// sheet as the solution; when the direct Newton run stalls or escapes toward
/// the boundary, the target is approached through intermediate points on the
/// segment [h(seed), w], re-seeding from each stage (path continuation).
/// Throws convergence_error when no stage converges, which in practice means
/// w is outside h(D).
inline DiscPoint numeric_inverse(const HolomorphicMap& h, Complex w, DiscPoint seed,
                                 const NewtonSettings& cfg = {}) {
    const HolomorphicMap dh = h.derivative();

    auto [z, ok] = detail::newton_run(h, dh, w, seed.value(), cfg);
    if (ok) return DiscPoint(z);

    Complex w0;
    try {
        w0 = h(seed.value());
    } catch (const error&) {
        throw convergence_error("numeric_inverse: seed is not evaluable");
    }
    for (int stages = 2; stages <= cfg.max_stages; stages *= 2) {
        Complex zs = seed.value();
        bool all_ok = true;
        for (int k = 1; k <= stages; ++k) {
            const Complex wk = w0 + (static_cast<double>(k) / stages) * (w - w0);
            auto [zk, okk] = detail::newton_run(h, dh, wk, zs, cfg);
            if (!okk) {
                all_ok = false;
                break;
            }
            zs = zk;
        }
        if (all_ok) return DiscPoint(zs);
    }
    throw convergence_error("numeric_inverse: no convergence toward " + to_string(w) +
                            "; the target may lie outside the image of the disc");
}

/// Report of a grid univalence check: smallest difference quotient over
/// distinct sample pairs and the detected near-collisions / critical points.
struct UnivalenceReport {
    double min_separation_ratio = 0.0; ///< min |h(z1)-h(z2)| / |z1-z2|
    std::vector<std::pair<Complex, Complex>> collisions; ///< ratio below threshold
    std::vector<Complex> derivative_zeros;               ///< |h'| below threshold on grid
    bool passed = true;
};

/// Spot check, not a proof: samples the grid and flags pairs whose image
/// separation ratio falls below `threshold` together with grid zeros of h'.
inline UnivalenceReport univalence_spot_check(const HolomorphicMap& h, const GridSpec& grid,
                                              double threshold = 1e-9) {
    UnivalenceReport rep;
    const std::vector<Complex> zs = grid.points();
    std::vector<Complex> vals(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) vals[i] = h(zs[i]);

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < zs.size(); ++i) {
        for (std::size_t j = i + 1; j < zs.size(); ++j) {
            const double dz = std::abs(zs[i] - zs[j]);
            if (dz < 1e-12) continue;
            const double ratio = std::abs(vals[i] - vals[j]) / dz;
            if (ratio < best) best = ratio;
            if (ratio < threshold && rep.collisions.size() < 16)
                rep.collisions.emplace_back(zs[i], zs[j]);
        }
    }
    rep.min_separation_ratio = best;

    const HolomorphicMap dh = h.derivative();
    for (const Complex& z : zs) {
        if (std::abs(dh(z)) < threshold && rep.derivative_zeros.size() < 16)
            rep.derivative_zeros.push_back(z);
    }
    rep.passed = rep.collisions.empty() && rep.derivative_zeros.empty();
    return rep;
}

} // namespace koenigs
