#pragma once

// Adaptive Dormand-Prince 5(4) integrator for complex-valued flows
// dw/dt = G(w) confined to the unit disc.

#include <cmath>
#include <functional>

#include "koenigs/types.hpp"

namespace koenigs {

struct OdeSettings {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 1.0;
    long max_steps = 2000000;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw domain_error("ODE tolerances must be positive");
        if (!(max_step > 0.0) || max_steps <= 0)
            throw domain_error("ODE step limits must be positive");
    }
};

/// Integrates dw/dt = rhs(w) forward in t.  State stays strictly inside the
/// disc: a step whose result reaches |w| >= 1 - 1e-12 is rejected and, if the
/// step size cannot be reduced further, the trajectory is reported as
/// escaping (the right-hand side is then not an infinitesimal generator).
class DiscFlowIntegrator {
public:
    DiscFlowIntegrator(std::function<Complex(Complex)> rhs, Complex w0, OdeSettings settings = {})
        : rhs_(std::move(rhs)), settings_(settings), t_(0.0), w_(w0) {
        settings_.validate();
        if (std::abs(w0) >= 1.0 - kEscape)
            throw domain_error("initial point is not strictly inside the disc");
        dt_ = std::min(1e-3, settings_.max_step);
    }

    double t() const { return t_; }
    Complex state() const { return w_; }

    /// Advance the trajectory to t_target (>= current t).
    Complex advance_to(double t_target) {
        if (t_target < t_ - 1e-15)
            throw domain_error("ODE integration cannot go backward in time");
        long steps = 0;
        while (t_ < t_target) {
            // a state pressed against the escape guard cannot be integrated
            // further; report it instead of letting the orbit stall there
            if (std::abs(w_) >= 1.0 - 4.0 * kEscape)
                throw model_error("trajectory reached the numerical boundary of the disc at t = " +
                                  std::to_string(t_));
            if (++steps > settings_.max_steps)
                throw convergence_error("ODE step limit exceeded at t = " + std::to_string(t_));
            double h = std::min(dt_, t_target - t_);
            h = std::min(h, settings_.max_step);
            Complex w_new, err;
            if (!try_step(h, w_new, err)) {
                shrink(h);
                continue;
            }
            const double sc =
                settings_.abs_tol + settings_.rel_tol * std::max(std::abs(w_), std::abs(w_new));
            const double en = std::abs(err) / sc;
            if (en <= 1.0) {
                if (std::abs(w_new) >= 1.0 - kEscape) {
                    if (h <= min_step())
                        throw model_error("trajectory exits the unit disc at t = " +
                                          std::to_string(t_) +
                                          "; the field is not an infinitesimal generator");
                    shrink(h);
                    continue;
                }
                t_ += h;
                w_ = w_new;
                grow(en);
            } else {
                shrink_by_error(h, en);
            }
        }
        return w_;
    }

private:
    static constexpr double kEscape = 1e-12;

    double min_step() const { return 1e-14 * std::max(1.0, std::abs(t_)); }

    void shrink(double h) {
        dt_ = 0.5 * h;
        if (dt_ < min_step())
            throw convergence_error("ODE step underflow at t = " + std::to_string(t_));
    }

    void shrink_by_error(double h, double en) {
        const double f = std::max(0.2, 0.9 * std::pow(en, -0.2));
        dt_ = h * f;
        if (dt_ < min_step())
            throw convergence_error("ODE step underflow at t = " + std::to_string(t_));
    }

    void grow(double en) {
        const double f = en > 0.0 ? std::min(5.0, 0.9 * std::pow(en, -0.2)) : 5.0;
        dt_ = std::min(settings_.max_step, dt_ * std::max(1.0, f));
    }

    bool eval(Complex w, Complex& out) const {
        if (std::abs(w) >= 1.0) return false; // stage outside the closed disc
        try {
            out = rhs_(w);
        } catch (const error&) {
            return false;
        }
        return is_finite(out);
    }

    bool try_step(double h, Complex& w_new, Complex& err) const {
        // Dormand-Prince RK5(4)7M tableau.
        Complex k1, k2, k3, k4, k5, k6, k7;
        if (!eval(w_, k1)) return false;
        if (!eval(w_ + h * (0.2 * k1), k2)) return false;
        if (!eval(w_ + h * (3.0 / 40 * k1 + 9.0 / 40 * k2), k3)) return false;
        if (!eval(w_ + h * (44.0 / 45 * k1 - 56.0 / 15 * k2 + 32.0 / 9 * k3), k4)) return false;
        if (!eval(w_ + h * (19372.0 / 6561 * k1 - 25360.0 / 2187 * k2 + 64448.0 / 6561 * k3 -
                            212.0 / 729 * k4),
                  k5))
            return false;
        if (!eval(w_ + h * (9017.0 / 3168 * k1 - 355.0 / 33 * k2 + 46732.0 / 5247 * k3 +
                            49.0 / 176 * k4 - 5103.0 / 18656 * k5),
                  k6))
            return false;
        w_new = w_ + h * (35.0 / 384 * k1 + 500.0 / 1113 * k3 + 125.0 / 192 * k4 -
                          2187.0 / 6784 * k5 + 11.0 / 84 * k6);
        if (!is_finite(w_new)) return false;
        if (!eval(w_new, k7)) return false;
        err = h * (71.0 / 57600 * k1 - 71.0 / 16695 * k3 + 71.0 / 1920 * k4 -
                   17253.0 / 339200 * k5 + 22.0 / 525 * k6 - 1.0 / 40 * k7);
        return is_finite(err);
    }

    std::function<Complex(Complex)> rhs_;
    OdeSettings settings_;
    double t_;
    Complex w_;
    double dt_ = 1e-3;
};

} // namespace koenigs
