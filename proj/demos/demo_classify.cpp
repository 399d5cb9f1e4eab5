// Classify a few semigroups and print the essentials of each report.

#include <cstdio>

#include "koenigs/dynamics.hpp"

using namespace koenigs;

int main() {
    const std::vector<std::pair<const char*, Semigroup>> suite{
        {"hyperbolic group, lambda = 2", HyperbolicGroup{2.0, BoundaryPoint(1, 0)}},
        {"parabolic group", ParabolicGroup{+1, BoundaryPoint(1, 0)}},
        {"rotation group", EllipticRotation{0.8}},
        {"strip model, lambda = pi",
         ModelSemigroup{hyperbolic_koenigs(M_PI), ModelDomain::strip(1.0), {}}},
        {"plane model, h = i C(z)^2",
         ModelSemigroup{zero_step_koenigs(), ModelDomain::full_plane(), {}}},
    };
    for (const auto& [name, S] : suite) {
        const ClassificationReport rep = classify(S);
        std::printf("%-28s -> %-24s model=%-16s", name, type_name(rep.type).c_str(),
                    rep.model.name().c_str());
        if (rep.lambda)
            std::printf(" lambda=%.6f", *rep.lambda);
        std::printf("  c=%.3e (horizon %.3g)\n", rep.rate.value, rep.rate.horizon_used);
    }
    return 0;
}
