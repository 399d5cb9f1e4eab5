#pragma once

// One-parameter semigroups of holomorphic self-maps: evaluation from a
// canonical model (phi_t = h^{-1}(h + it)), from an infinitesimal generator
// (adaptive integration of dw/dt = G(w)), and the classical automorphism
// groups in closed form.  Closed forms act as oracles for everything else.

#include <array>
#include <cmath>
#include <optional>
#include <variant>
#include <vector>

#include "koenigs/expression.hpp"
#include "koenigs/hyperbolic.hpp"
#include "koenigs/inverse.hpp"
#include "koenigs/ode.hpp"

namespace koenigs {

/// phi_t(z) = h^{-1}(h(z) + it) for a univalent h whose image is starlike
/// at infinity.  `domain` is the base space of the canonical model.
struct ModelSemigroup {
    HolomorphicMap h;
    ModelDomain domain;
    NewtonSettings newton{};
};

/// Flow of dw/dt = G(w) for an infinitesimal generator G.
struct GeneratorSemigroup {
    HolomorphicMap generator;
    OdeSettings ode{};
};

/// phi_t(z) = e^{i theta t} z.
struct EllipticRotation {
    double theta = 1.0;
};

/// phi_t = m_x ∘ (e^{-lambda t} ·) ∘ m_x with the involution
/// m_x(z) = (x - z)/(1 - conj(x) z); fixes x, spectral value lambda.
struct EllipticContraction {
    double lambda = 1.0;
    DiscPoint fixed_point{};
};

/// Cayley conjugate of w -> e^{lambda t} w on the right half-plane;
/// Denjoy-Wolff point tau, spectral value lambda.
struct HyperbolicGroup {
    double lambda = 1.0;
    BoundaryPoint tau{};
};

/// Cayley conjugate of w -> w + i * orientation * t; Denjoy-Wolff point tau.
struct ParabolicGroup {
    int orientation = +1;
    BoundaryPoint tau{};
};

/// psi_t(w) = w + it acting on a model domain (the canonical automorphism
/// group every non-elliptic semigroup is conjugated to).
struct TranslationFlow {
    ModelDomain domain;
};

using Semigroup = std::variant<ModelSemigroup, GeneratorSemigroup, EllipticRotation,
                               EllipticContraction, HyperbolicGroup, ParabolicGroup,
                               TranslationFlow>;

inline ModelDomain phase_space(const Semigroup& s) {
    if (const auto* tf = std::get_if<TranslationFlow>(&s)) return tf->domain;
    return ModelDomain::disc();
}

namespace detail {

inline Complex involution(Complex x, Complex z) { return (x - z) / (1.0 - std::conj(x) * z); }

inline Complex flow_impl(const ModelSemigroup& s, double t, Complex z) {
    if (t == 0.0) return z;
    const Complex target = s.h(z) + Complex(0.0, t);
    return numeric_inverse(s.h, target, DiscPoint(z), s.newton).value();
}

inline Complex flow_impl(const GeneratorSemigroup& s, double t, Complex z) {
    if (t == 0.0) return z;
    DiscFlowIntegrator integ([&](Complex w) { return s.generator(w); }, z, s.ode);
    return integ.advance_to(t);
}

inline Complex flow_impl(const EllipticRotation& s, double t, Complex z) {
    return std::polar(1.0, s.theta * t) * z;
}

inline Complex flow_impl(const EllipticContraction& s, double t, Complex z) {
    const Complex x = s.fixed_point.value();
    return involution(x, std::exp(-s.lambda * t) * involution(x, z));
}

inline Complex flow_impl(const HyperbolicGroup& s, double t, Complex z) {
    const Complex w = cayley(s.tau, z);
    return cayley_inv(s.tau, std::exp(s.lambda * t) * w).value();
}

inline Complex flow_impl(const ParabolicGroup& s, double t, Complex z) {
    const Complex w = cayley(s.tau, z);
    return cayley_inv(s.tau, w + Complex(0.0, s.orientation * t)).value();
}

inline Complex flow_impl(const TranslationFlow&, double t, Complex z) {
    return z + Complex(0.0, t);
}

} // namespace detail

/// Evaluate phi_t(z) in the semigroup's phase space.  Requires t >= 0 and z
/// inside the phase space; throws when the result cannot be represented
/// strictly inside it (orbit numerically reaching the boundary).
inline Complex flow(const Semigroup& s, double t, Complex z) {
    if (!(t >= 0.0))
        throw domain_error("semigroup time must be nonnegative");
    const ModelDomain space = phase_space(s);
    if (!space.contains(z))
        throw domain_error("point " + to_string(z) + " lies outside " + space.name());
    if (t == 0.0) return z; // phi_0 is the identity
    const Complex r = std::visit([&](const auto& v) { return detail::flow_impl(v, t, z); }, s);
    if (!space.contains(r))
        throw domain_error("phi_t(z) = " + to_string(r) + " left " + space.name() +
                           " (t = " + std::to_string(t) + ")");
    return r;
}

/// Disc-semigroup evaluation with validated disc points.
inline DiscPoint evaluate(const Semigroup& s, double t, DiscPoint z) {
    return DiscPoint(flow(s, t, z.value()));
}

/// Sampled orbit t -> phi_t(z).
struct OrbitSample {
    std::vector<double> times;
    std::vector<Complex> points;

    std::size_t size() const { return times.size(); }
};

/// Evaluate the orbit of z over a strictly increasing nonnegative time grid.
/// Model semigroups re-seed each inversion at the previous orbit point;
/// generator semigroups run one continued integration with no restarts.
inline OrbitSample orbit(const Semigroup& s, Complex z, const std::vector<double>& t_grid) {
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] >= 0.0))
            throw domain_error("orbit times must be nonnegative");
        if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
            throw domain_error("orbit times must be strictly increasing");
    }
    OrbitSample out;
    out.times = t_grid;
    out.points.reserve(t_grid.size());

    if (const auto* gs = std::get_if<GeneratorSemigroup>(&s)) {
        DiscFlowIntegrator integ([&](Complex w) { return gs->generator(w); }, z, gs->ode);
        for (double t : t_grid) out.points.push_back(integ.advance_to(t));
        return out;
    }
    if (const auto* ms = std::get_if<ModelSemigroup>(&s)) {
        const Complex w0 = ms->h(z);
        Complex seed = z;
        for (double t : t_grid) {
            seed = numeric_inverse(ms->h, w0 + Complex(0.0, t), DiscPoint(seed), ms->newton).value();
            out.points.push_back(seed);
        }
        return out;
    }
    for (double t : t_grid) out.points.push_back(flow(s, t, z));
    return out;
}

/// Ascending-time orbit evaluator with continuation: model semigroups keep
/// exact absolute targets h(z0) + it but seed each inversion at the previous
/// orbit point, generator semigroups run one continued integration, closed
/// forms are stateless.
class OrbitWalker {
public:
    OrbitWalker(const Semigroup& s, Complex z0) : s_(s), z0_(z0), prev_(z0) {
        if (const auto* ms = std::get_if<ModelSemigroup>(&s_)) w0_ = ms->h(z0);
        if (const auto* gs = std::get_if<GeneratorSemigroup>(&s_))
            integ_.emplace([gen = gs->generator](Complex w) { return gen(w); }, z0, gs->ode);
    }

    /// phi_t(z0); t must not decrease between calls.
    Complex at(double t) {
        if (const auto* ms = std::get_if<ModelSemigroup>(&s_)) {
            prev_ = numeric_inverse(ms->h, w0_ + Complex(0.0, t), DiscPoint(prev_), ms->newton)
                        .value();
            return prev_;
        }
        if (integ_) return integ_->advance_to(t);
        return flow(s_, t, z0_);
    }

private:
    Semigroup s_;
    Complex z0_;
    Complex prev_;
    Complex w0_{};
    std::optional<DiscFlowIntegrator> integ_;
};

struct LawSample {
    double t = 0.0;
    double s = 0.0;
    Complex z{};
};

/// max over samples of |phi_{t+s}(z) - phi_t(phi_s(z))|.
inline double semigroup_law_residual(const Semigroup& sg, const std::vector<LawSample>& samples) {
    double worst = 0.0;
    for (const auto& smp : samples) {
        const Complex lhs = flow(sg, smp.t + smp.s, smp.z);
        const Complex rhs = flow(sg, smp.t, flow(sg, smp.s, smp.z));
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

/// max over samples of |h(phi_t(z)) - h(z) - it| for a model semigroup.
inline double model_identity_residual(const ModelSemigroup& ms,
                                      const std::vector<std::pair<double, Complex>>& samples) {
    double worst = 0.0;
    const Semigroup s = ms;
    for (const auto& [t, z] : samples) {
        const Complex img = ms.h(flow(s, t, z));
        worst = std::max(worst, std::abs(img - ms.h(z) - Complex(0.0, t)));
    }
    return worst;
}

/// max over samples of |g(phi_t(z)) - psi_t(g(z))| where (phi_t) = S acts on
/// the disc and (psi_t) = T acts on the phase space g maps into.
inline double semi_conjugation_residual(const HolomorphicMap& g, const Semigroup& S,
                                        const Semigroup& T,
                                        const std::vector<std::pair<double, Complex>>& samples) {
    double worst = 0.0;
    for (const auto& [t, z] : samples) {
        const Complex lhs = g(flow(S, t, z));
        const Complex rhs = flow(T, t, g(z));
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

/// True when every sampled phi_t agrees with a Moebius map to `tol`; for a
/// semigroup this detects groups of automorphisms of the disc.
inline bool is_automorphism_group(const Semigroup& s, double tol = 1e-9,
                                  const std::vector<double>& t_samples = {0.7, 1.3}) {
    const std::array<Complex, 3> base{Complex(0.0, 0.0), Complex(0.5, 0.0), Complex(0.0, -0.4)};
    const std::array<Complex, 5> probe{Complex(0.3, 0.2), Complex(-0.6, 0.1), Complex(0.1, 0.55),
                                       Complex(-0.25, -0.45), Complex(0.72, -0.1)};
    for (double t : t_samples) {
        std::array<Complex, 3> img;
        for (int i = 0; i < 3; ++i) img[i] = flow(s, t, base[i]);
        const HolomorphicMap m =
            mobius_through(base[0], base[1], base[2], img[0], img[1], img[2]);
        for (const Complex& p : probe) {
            if (std::abs(flow(s, t, p) - m(p)) > tol) return false;
        }
    }
    return true;
}

} // namespace koenigs
