#pragma once

// Infinitesimal generators from Koenigs functions: G = i/h', the
// Berkson-Porta decomposition G(z) = (z - tau)(conj(tau) z - 1) p(z) with
// Re p >= 0, and residual checks of the flow ODE d phi_t / dt = G(phi_t).

#include <algorithm>
#include <limits>
#include <cmath>
#include <vector>

#include "koenigs/canonical.hpp"
#include "koenigs/semigroup.hpp"

namespace koenigs {

/// Generator of a non-elliptic semigroup together with its Berkson-Porta
/// data: G = (z - tau)(conj(tau) z - 1) p with Re p >= 0.
struct GeneratorData {
    HolomorphicMap G;
    BoundaryPoint tau;
    HolomorphicMap p;
};

/// (z - tau)(conj(tau) z - 1) as an expression tree.
inline HolomorphicMap berkson_porta_factor(BoundaryPoint tau) {
    const Complex t = tau.value();
    const ExprPtr left = expr_sub(expr_var(), expr_const(t));
    const ExprPtr right = expr_sub(expr_mul(expr_const(std::conj(t)), expr_var()), expr_const(1.0));
    return HolomorphicMap(expr_mul(left, right));
}

/// Build G = i/h' and p = i/(h' (z - tau)(conj(tau) z - 1)) from a Koenigs
/// function with Denjoy-Wolff point tau.  Verifies on the grid that h' does
/// not vanish and that Re p stays above -1e-6 (grazing values in (-1e-6,
/// -1e-9) are tolerated as boundary roundoff; anything lower signals a wrong
/// tau or a map that is not a Koenigs function).
inline GeneratorData generator_from_koenigs(const HolomorphicMap& h, BoundaryPoint tau,
                                            const GridSpec& grid = GridSpec()) {
    const HolomorphicMap dh = h.derivative();
    const ExprPtr i_const = expr_const(Complex(0.0, 1.0));
    const HolomorphicMap G(expr_div(i_const, dh.root()));
    const HolomorphicMap factor = berkson_porta_factor(tau);
    const HolomorphicMap p(expr_div(i_const, expr_mul(dh.root(), factor.root())));

    double min_abs_dh = std::numeric_limits<double>::infinity();
    double min_re_p = std::numeric_limits<double>::infinity();
    for (const Complex& z : grid.points()) {
        min_abs_dh = std::min(min_abs_dh, std::abs(dh(z)));
        min_re_p = std::min(min_re_p, p(z).real());
    }
    if (min_abs_dh < 1e-12)
        throw model_error("generator_from_koenigs: h' vanishes on the grid (|h'| = " +
                          std::to_string(min_abs_dh) + "); h is not univalent");
    if (min_re_p < -1e-6)
        throw model_error("generator_from_koenigs: min Re p = " + std::to_string(min_re_p) +
                          " < 0; tau is wrong or h is not a Koenigs function");
    return GeneratorData{G, tau, p};
}

inline GeneratorData generator_from_koenigs(const KoenigsFunction& K,
                                            const GridSpec& grid = GridSpec()) {
    return generator_from_koenigs(K.h, K.dw_point, grid);
}

/// Grid residuals of the Berkson-Porta identity.
struct BerksonPortaReport {
    double max_residual = 0.0; ///< max |G - (z - tau)(conj(tau) z - 1) p|
    double min_re_p = 0.0;
    bool positive = false;         ///< min Re p >= -1e-9
    bool boundary_grazing = false; ///< min Re p in [-1e-9, 0)
    bool equality = false;         ///< Re p == 0 across the grid (automorphism groups)
};

inline BerksonPortaReport berkson_porta_residual(const GeneratorData& D,
                                                 const GridSpec& grid = GridSpec()) {
    BerksonPortaReport rep;
    const HolomorphicMap factor = berkson_porta_factor(D.tau);
    rep.min_re_p = std::numeric_limits<double>::infinity();
    double max_re_p = -std::numeric_limits<double>::infinity();
    for (const Complex& z : grid.points()) {
        const Complex pv = D.p(z);
        rep.max_residual = std::max(rep.max_residual, std::abs(D.G(z) - factor(z) * pv));
        rep.min_re_p = std::min(rep.min_re_p, pv.real());
        max_re_p = std::max(max_re_p, pv.real());
    }
    rep.positive = rep.min_re_p >= -1e-9;
    rep.boundary_grazing = rep.positive && rep.min_re_p < 0.0;
    rep.equality = rep.positive && max_re_p <= 1e-9;
    return rep;
}

/// max over samples of |d phi_t(z)/dt - G(phi_t(z))| with the time derivative
/// by Richardson-extrapolated central differences (independent of how the
/// semigroup itself is evaluated).
inline double ode_residual(const Semigroup& S, const GeneratorData& D,
                           const std::vector<std::pair<double, Complex>>& samples,
                           double fd_step = 1e-5) {
    double worst = 0.0;
    for (const auto& [t, z] : samples) {
        if (!(t >= 2.0 * fd_step))
            throw domain_error("ode_residual samples need t >= 2 * fd_step");
        const Complex d1 =
            (flow(S, t + fd_step, z) - flow(S, t - fd_step, z)) / (2.0 * fd_step);
        const Complex d2 =
            (flow(S, t + 0.5 * fd_step, z) - flow(S, t - 0.5 * fd_step, z)) / fd_step;
        const Complex deriv = (4.0 * d2 - d1) / 3.0;
        worst = std::max(worst, std::abs(deriv - D.G(flow(S, t, z))));
    }
    return worst;
}

} // namespace koenigs
