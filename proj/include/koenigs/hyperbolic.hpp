#pragma once

// Hyperbolic distances on the five model domains, the Cayley transform,
// the strip uniformizer and horocycle queries.
//
// Normalization: the disc distance is
//     omega(z, w) = (1/2) log((1 + d)/(1 - d)),   d = |z - w| / |1 - conj(z) w|,
// so that omega(0, r) = (1/2) log((1+r)/(1-r)) and the divergence rate of a
// hyperbolic semigroup with spectral value lambda equals lambda / 2.
//
// Distances on the other domains are pullbacks through conformal maps onto
// the disc; the plane carries the identically-zero distance.

#include <cmath>
#include <complex>

#include "koenigs/types.hpp"

namespace koenigs {

namespace detail {

/// (1/2) log((1+d)/(1-d)) for d in [0, 1), accurate for small d.
inline double atanh_form(double d) {
    return 0.5 * (std::log1p(d) - std::log1p(-d));
}

/// a + b together with the exact rounding error of the sum (Knuth).
inline double two_sum(double a, double b, double& err) {
    const double s = a + b;
    const double bv = s - a;
    const double av = s - bv;
    err = (a - av) + (b - bv);
    return s;
}

/// 1 - conj(z) w with fma-compensated products and error-tracked sums, so
/// the result keeps full relative accuracy when both points sit next to the
/// unit circle and the naive expression would cancel to a few ulps.
inline Complex one_minus_conj_prod(Complex z, Complex w) {
    const double zr = z.real(), zi = z.imag(), wr = w.real(), wi = w.imag();
    const double p = zr * wr, ep = std::fma(zr, wr, -p);
    const double q = zi * wi, eq = std::fma(zi, wi, -q);
    double e1, e2;
    const double s1 = two_sum(1.0, -p, e1);
    const double s2 = two_sum(s1, -q, e2);
    const double re = s2 + (e1 + e2 - (ep + eq));
    const double t = zi * wr, et = std::fma(zi, wr, -t);
    const double u = zr * wi, eu = std::fma(zr, wi, -u);
    double e3;
    const double s3 = two_sum(t, -u, e3); // Im(1 - conj(z) w) = zi wr - zr wi
    const double im = s3 + (e3 + (et - eu));
    return Complex(re, im);
}

/// Stable distance from the pseudo-distance pair (num, den) = (|z-w|, |1-conj(z)w|)
/// and the exact product (1-|z|^2)(1-|w|^2) = den^2 - num^2.
inline double dist_from_pseudo(double num, double den, double gap_product) {
    const double d = num / den;
    if (d <= 0.0) return 0.0;
    if (d < 0.5) return atanh_form(d);
    // For d near 1 use (1 - d^2) = gap_product / den^2 to avoid cancellation.
    return std::log(den + num) - 0.5 * std::log(gap_product);
}

} // namespace detail

/// Hyperbolic distance on the unit disc.
inline double hyp_dist_disc(DiscPoint zp, DiscPoint wp) {
    const Complex z = zp.value(), w = wp.value();
    if (z == w) return 0.0;
    const double num = std::abs(z - w);
    const double den = std::abs(detail::one_minus_conj_prod(z, w));
    return detail::dist_from_pseudo(num, den, one_minus_norm_sq(z) * one_minus_norm_sq(w));
}

/// Distance on the right half-plane { Re > 0 }.
/// Uses |z + conj(w)|^2 - |z - w|^2 = 4 Re z Re w.
inline double hyp_dist_half_plane(Complex z, Complex w) {
    if (z == w) return 0.0;
    const double num = std::abs(z - w);
    const double den = std::abs(z + std::conj(w));
    return detail::dist_from_pseudo(num, den, 4.0 * z.real() * w.real());
}

/// Distance on the strip { 0 < Re < rho }.
///
/// The points are pushed to the upper half-plane by zeta -> exp(i pi zeta / rho)
/// and the half-plane pseudo-distance is evaluated on exponentials rescaled by
/// the larger modulus, so arbitrarily large |Im zeta| never overflows.
inline double hyp_dist_strip(double rho, Complex z, Complex w) {
    if (z == w) return 0.0;
    const Complex a = Complex(0.0, M_PI / rho) * z; // log of the UHP image of z
    const Complex b = Complex(0.0, M_PI / rho) * w;
    const double m = std::max(a.real(), b.real());
    const Complex ws = std::exp(a - m);
    const Complex vs = std::exp(b - m);
    const double num = std::abs(ws - vs);
    const double den = std::abs(ws - std::conj(vs));
    const double d = num / den;
    if (d < 0.5) return detail::atanh_form(d);
    // log-domain form of dist_from_pseudo: for UHP points,
    // |W - conj(V)|^2 - |W - V|^2 = 4 Im W Im V, and
    // log Im ws = (Re a - m) + log sin(Im a) with Im a = pi Re z / rho in (0, pi).
    const double log_im_ws = (a.real() - m) + std::log(std::sin(a.imag()));
    const double log_im_vs = (b.real() - m) + std::log(std::sin(b.imag()));
    return std::log(den + num) - 0.5 * (std::log(4.0) + log_im_ws + log_im_vs);
}

/// Hyperbolic distance k_Omega on a model domain.  The plane distance is
/// identically zero.  Throws domain_error naming the offending point when an
/// argument lies outside the domain.
inline double hyp_dist(const ModelDomain& domain, Complex z, Complex w) {
    auto check = [&](Complex p) {
        if (!domain.contains(p))
            throw domain_error("point " + to_string(p) + " lies outside " + domain.name());
    };
    check(z);
    check(w);
    switch (domain.kind) {
    case ModelDomain::Kind::Disc:
        return hyp_dist_disc(DiscPoint(z), DiscPoint(w));
    case ModelDomain::Kind::RightHalfPlane:
        return hyp_dist_half_plane(z, w);
    case ModelDomain::Kind::LeftHalfPlane:
        return hyp_dist_half_plane(-z, -w);
    case ModelDomain::Kind::Strip:
        return hyp_dist_strip(domain.rho, z, w);
    case ModelDomain::Kind::FullPlane:
        return 0.0;
    }
    return 0.0;
}

/// Cayley transform with respect to sigma: C_sigma(z) = (sigma + z)/(sigma - z),
/// a biholomorphism of the disc onto the right half-plane with C_sigma(0) = 1.
inline Complex cayley(BoundaryPoint sigma, Complex z) {
    const Complex s = sigma.value();
    return (s + z) / (s - z);
}

/// Inverse Cayley transform; rejects points outside the right half-plane.
inline DiscPoint cayley_inv(BoundaryPoint sigma, Complex w) {
    if (!(w.real() > 0.0))
        throw domain_error("cayley_inv requires Re w > 0, got " + to_string(w));
    const Complex s = sigma.value();
    return DiscPoint(s * (w - 1.0) / (w + 1.0));
}

/// Conformal equivalence between the strip { 0 < Re < rho } and the disc,
/// normalized so the center point rho/2 maps to 0.  Composition of
/// zeta -> exp(i pi zeta / rho) (strip to upper half-plane) with the Cayley
/// map u -> (u - i)/(u + i).
class StripUniformizer {
public:
    explicit StripUniformizer(double rho) : rho_(rho) {
        if (!(rho > 0.0))
            throw domain_error("strip width must be positive");
    }

    double rho() const { return rho_; }

    Complex to_disc(Complex zeta) const {
        const Complex u = std::exp(Complex(0.0, M_PI / rho_) * zeta);
        return (u - Complex(0.0, 1.0)) / (u + Complex(0.0, 1.0));
    }

    /// d/dzeta of to_disc.
    Complex to_disc_derivative(Complex zeta) const {
        const Complex c = Complex(0.0, M_PI / rho_);
        const Complex u = std::exp(c * zeta);
        const Complex den = u + Complex(0.0, 1.0);
        return c * u * Complex(0.0, 2.0) / (den * den);
    }

    Complex from_disc(Complex d) const {
        const Complex u = Complex(0.0, 1.0) * (1.0 + d) / (1.0 - d);
        return Complex(0.0, -rho_ / M_PI) * std::log(u);
    }

private:
    double rho_;
};

/// Membership test |tau - z|^2 / (1 - |z|^2) < R.  Points of the horocycle
/// boundary are not contained.
inline bool horocycle_contains(const Horocycle& E, DiscPoint zp) {
    const Complex z = zp.value();
    const Complex t = E.center.value();
    const double q = std::norm(t - z) / one_minus_norm_sq(z);
    return q < E.radius;
}

/// inf_{z in E(tau,R)} omega(0, z).  Equals -(1/2) log R for R <= 1 (attained
/// at the point tau (1-R)/(1+R)); for R > 1 the origin lies inside E and the
/// infimum is 0.
inline double horocycle_min_dist(const Horocycle& E) {
    if (E.radius >= 1.0) return 0.0;
    return -0.5 * std::log(E.radius);
}

} // namespace koenigs
