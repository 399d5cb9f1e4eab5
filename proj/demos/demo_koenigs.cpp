// Build a Koenigs function from an expression, verify the starlike
// criterion, and extract the infinitesimal generator.

#include <cstdio>

#include "koenigs/generator.hpp"

using namespace koenigs;

int main() {
    const HolomorphicMap h = HolomorphicMap::parse("(i/pi)*log((1+z)/(1-z)) + 1/2");
    const KoenigsFunction K = build_koenigs(h);
    std::printf("h            = %s\n", h.str().c_str());
    std::printf("Denjoy-Wolff = %s\n", to_string(K.dw_point.value()).c_str());
    std::printf("model        = %s (rho = %.9f)\n", K.model.name().c_str(), K.model.rho);
    std::printf("starlike     : min q = %.3e (passed: %s)\n", K.starlike.min_q,
                K.starlike.passed ? "yes" : "no");

    const GeneratorData D = generator_from_koenigs(K);
    const BerksonPortaReport bp = berkson_porta_residual(D);
    std::printf("G            = %s\n", D.G.str().c_str());
    std::printf("G(0) = %s, p(0) = %s\n", to_string(D.G(Complex(0, 0))).c_str(),
                to_string(D.p(Complex(0, 0))).c_str());
    std::printf("Berkson-Porta residual %.2e, min Re p = %.3e\n", bp.max_residual, bp.min_re_p);
    return 0;
}
