#pragma once

// Core value types: points of the unit disc and its boundary, canonical
// model domains, horocycles and sampling grids.

#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include "koenigs/errors.hpp"

namespace koenigs {

using Complex = std::complex<double>;

/// Points with |z| > 1 - kBoundaryMargin are treated as numerically on the
/// boundary and rejected rather than clamped.
inline constexpr double kBoundaryMargin = 1e-13;

inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline std::string to_string(Complex z) {
    std::ostringstream os;
    os.precision(17);
    os << z.real();
    if (z.imag() >= 0)
        os << "+" << z.imag() << "i";
    else
        os << "-" << -z.imag() << "i";
    return os.str();
}

/// 1 - |z|^2 without cancellation: 1 - x is exact for x in [1/2, 1]
/// (Sterbenz), so the product form keeps full relative accuracy for
/// points close to the unit circle.
inline double one_minus_norm_sq(Complex z) {
    const double x = std::abs(z.real());
    const double y = std::abs(z.imag());
    if (x >= y)
        return (1.0 - x) * (1.0 + x) - y * y;
    return (1.0 - y) * (1.0 + y) - x * x;
}

/// A point of the open unit disc, strictly inside the numerical boundary.
class DiscPoint {
public:
    DiscPoint() : z_(0.0, 0.0) {}

    explicit DiscPoint(Complex z) : z_(z) {
        if (!is_finite(z))
            throw domain_error("disc point must be finite, got " + to_string(z));
        if (std::abs(z) > 1.0 - kBoundaryMargin)
            throw domain_error("point " + to_string(z) + " is outside the unit disc (|z| > 1 - 1e-13)");
    }

    DiscPoint(double re, double im) : DiscPoint(Complex(re, im)) {}

    Complex value() const { return z_; }
    operator Complex() const { return z_; }

private:
    Complex z_;
};

/// A point of the unit circle; stored normalized to |sigma| = 1.
class BoundaryPoint {
public:
    BoundaryPoint() : sigma_(1.0, 0.0) {}

    explicit BoundaryPoint(Complex sigma) {
        if (!is_finite(sigma))
            throw domain_error("boundary point must be finite");
        const double r = std::abs(sigma);
        if (std::abs(r - 1.0) > 1e-12)
            throw domain_error("point " + to_string(sigma) + " is not on the unit circle");
        sigma_ = sigma / r;
    }

    BoundaryPoint(double re, double im) : BoundaryPoint(Complex(re, im)) {}

    static BoundaryPoint from_angle(double theta) {
        return BoundaryPoint(Complex(std::cos(theta), std::sin(theta)));
    }

    Complex value() const { return sigma_; }
    operator Complex() const { return sigma_; }

private:
    Complex sigma_;
};

/// One of the five base spaces used by canonical models of semigroups:
/// the disc itself, a vertical strip 0 < Re < rho, the two half-planes,
/// and the full plane.
struct ModelDomain {
    enum class Kind { Disc, Strip, RightHalfPlane, LeftHalfPlane, FullPlane };

    Kind kind = Kind::Disc;
    double rho = 0.0; ///< strip width, only meaningful for Kind::Strip

    static ModelDomain disc() { return {Kind::Disc, 0.0}; }
    static ModelDomain strip(double rho) {
        if (!(rho > 0.0))
            throw domain_error("strip width must be positive");
        return {Kind::Strip, rho};
    }
    static ModelDomain right_half_plane() { return {Kind::RightHalfPlane, 0.0}; }
    static ModelDomain left_half_plane() { return {Kind::LeftHalfPlane, 0.0}; }
    static ModelDomain full_plane() { return {Kind::FullPlane, 0.0}; }

    bool contains(Complex z) const {
        if (!is_finite(z)) return false;
        switch (kind) {
        case Kind::Disc: return std::abs(z) <= 1.0 - kBoundaryMargin;
        case Kind::Strip: return z.real() > 0.0 && z.real() < rho;
        case Kind::RightHalfPlane: return z.real() > 0.0;
        case Kind::LeftHalfPlane: return z.real() < 0.0;
        case Kind::FullPlane: return true;
        }
        return false;
    }

    std::string name() const {
        switch (kind) {
        case Kind::Disc: return "disc";
        case Kind::Strip: return "strip";
        case Kind::RightHalfPlane: return "right-half-plane";
        case Kind::LeftHalfPlane: return "left-half-plane";
        case Kind::FullPlane: return "plane";
        }
        return "?";
    }

    friend bool operator==(const ModelDomain& a, const ModelDomain& b) {
        if (a.kind != b.kind) return false;
        if (a.kind == Kind::Strip) return a.rho == b.rho;
        return true;
    }
};

/// Horocycle E(tau, R) = { z : |tau - z|^2 / (1 - |z|^2) < R }, the disc
/// internally tangent to the unit circle at tau.
struct Horocycle {
    BoundaryPoint center;
    double radius = 1.0;

    Horocycle(BoundaryPoint tau, double R) : center(tau), radius(R) {
        if (!(R > 0.0))
            throw domain_error("horocycle radius must be positive");
    }
};

/// Polar sampling grid of the disc.  Radii are spaced geometrically in
/// 1 - r so that samples accumulate at the boundary.
struct GridSpec {
    int radial = 64;
    int angular = 128;
    double r_max = 0.995;
    int refine_depth = 0;

    GridSpec() = default;
    GridSpec(int nr, int na, double rmax, int depth = 0)
        : radial(nr), angular(na), r_max(rmax), refine_depth(depth) {
        if (radial < 1 || angular < 1)
            throw domain_error("grid counts must be >= 1");
        if (!(r_max > 0.0 && r_max < 1.0))
            throw domain_error("grid r_max must lie in (0, 1)");
    }

    std::vector<double> radii() const {
        std::vector<double> rs;
        rs.reserve(radial);
        for (int j = 1; j <= radial; ++j) {
            const double frac = static_cast<double>(j) / radial;
            rs.push_back(1.0 - std::pow(1.0 - r_max, frac));
        }
        return rs;
    }

    std::vector<Complex> points() const {
        std::vector<Complex> pts;
        pts.reserve(static_cast<std::size_t>(radial) * angular);
        const double dtheta = 2.0 * M_PI / angular;
        for (double r : radii())
            for (int k = 0; k < angular; ++k)
                pts.emplace_back(r * std::cos(k * dtheta), r * std::sin(k * dtheta));
        return pts;
    }
};

} // namespace koenigs
