#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "koenigs/canonical.hpp"
#include "koenigs/expression.hpp"
#include "koenigs/inverse.hpp"

using namespace koenigs;

namespace {

Complex random_interior(std::mt19937& rng, double r_max = 0.9) {
    std::uniform_real_distribution<double> ur(0.0, 1.0), ua(0.0, 2.0 * M_PI);
    const double r = r_max * std::sqrt(ur(rng));
    return std::polar(r, ua(rng));
}

/// Richardson-extrapolated central difference, the independent oracle for
/// the symbolic derivative.
Complex fd_derivative(const HolomorphicMap& f, Complex z, double h = 1e-6) {
    const Complex d1 = (f(z + h) - f(z - h)) / (2.0 * h);
    const Complex d2 = (f(z + 0.5 * h) - f(z - 0.5 * h)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

std::vector<std::pair<std::string, HolomorphicMap>> builtin_suite() {
    return {
        {"hyperbolic lambda=0.5", hyperbolic_koenigs(0.5)},
        {"hyperbolic lambda=1", hyperbolic_koenigs(1.0)},
        {"hyperbolic lambda=2", hyperbolic_koenigs(2.0)},
        {"hyperbolic lambda=pi", hyperbolic_koenigs(M_PI)},
        {"parabolic right", parabolic_koenigs()},
        {"parabolic left", parabolic_koenigs(BoundaryPoint(1, 0), -1)},
        {"zero step", zero_step_koenigs()},
        {"moebius family", mobius_family_koenigs(3.0, BoundaryPoint(1, 0), Complex(0, 2))},
        {"half-plane non-group", parabolic_koenigs() + hyperbolic_koenigs(M_PI)},
    };
}

} // namespace

TEST_CASE("parse golden examples", "[expression]") {
    CHECK(HolomorphicMap::parse("z").same_tree(identity_map()));
    CHECK(HolomorphicMap::parse("(1+z)/(1-z)").same_tree(cayley_expr(BoundaryPoint(1, 0))));

    const HolomorphicMap h = HolomorphicMap::parse("(i/pi)*log((1+z)/(1-z)) + 1/2");
    CHECK(std::abs(h(Complex(0, 0)) - Complex(0.5, 0)) < 1e-15);
    CHECK(h.same_tree(hyperbolic_koenigs(M_PI)));
}

TEST_CASE("parse errors carry position and expectation", "[expression]") {
    auto expect_error = [](const std::string& text, std::size_t line, std::size_t col,
                           const std::string& needle) {
        try {
            HolomorphicMap::parse(text);
            FAIL("expected parse_error for: " << text);
        } catch (const parse_error& e) {
            INFO(e.what());
            CHECK(e.line() == line);
            CHECK(e.column() == col);
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_error("z +", 1, 4, "expected");
    expect_error("(1+z", 1, 5, "')'");
    expect_error("foo(z)", 1, 1, "unknown identifier 'foo'");
    expect_error("exp(z, 1)", 1, 6, "exactly one argument");
    expect_error("2 $ 3", 1, 3, "unexpected character");
    expect_error("1 +\nlog(q)", 2, 5, "unknown identifier 'q'");
    expect_error("z^w", 1, 3, "numeric exponent");
}

TEST_CASE("derivative golden values", "[expression]") {
    const HolomorphicMap c1 = HolomorphicMap::parse("(1+z)/(1-z)");
    CHECK(std::abs(c1.derivative()(Complex(0, 0)) - Complex(2, 0)) < 1e-15);

    const HolomorphicMap konst = HolomorphicMap::parse("3+2*i");
    CHECK(konst.derivative()(Complex(0.3, 0.4)) == Complex(0, 0));

    for (double lambda : {0.5, 2.0, M_PI}) {
        const HolomorphicMap h = hyperbolic_koenigs(lambda);
        CHECK(std::abs(h.derivative()(Complex(0, 0)) - Complex(0, 2.0 / lambda)) < 1e-14);
    }
}

TEST_CASE("symbolic derivative matches finite differences", "[expression]") {
    auto rng = std::mt19937(8201);
    for (const auto& [name, f] : builtin_suite()) {
        INFO(name);
        const HolomorphicMap df = f.derivative();
        for (int k = 0; k < 200; ++k) {
            const Complex z = random_interior(rng, 0.85);
            const Complex sym = df(z);
            const Complex num = fd_derivative(f, z);
            CHECK(std::abs(sym - num) <= 1e-7 * (1.0 + std::abs(sym)));
        }
    }
}

TEST_CASE("derivative is linear", "[expression]") {
    const HolomorphicMap f = HolomorphicMap::parse("exp(z-1)");
    const HolomorphicMap g = HolomorphicMap::parse("z^3 + 0.25*z");
    const Complex alpha(0.7, -0.2), beta(-1.1, 0.4);
    const HolomorphicMap combo = alpha * f + beta * g;
    const HolomorphicMap dcombo = combo.derivative();
    const HolomorphicMap df = f.derivative(), dg = g.derivative();
    auto rng = std::mt19937(8202);
    for (int k = 0; k < 100; ++k) {
        const Complex z = random_interior(rng);
        CHECK(std::abs(dcombo(z) - (alpha * df(z) + beta * dg(z))) < 1e-12);
    }
}

TEST_CASE("print then parse reproduces every built-in tree", "[expression]") {
    for (const auto& [name, f] : builtin_suite()) {
        INFO(name << ": " << f.str());
        CHECK(HolomorphicMap::parse(f.str()).same_tree(f));
    }
    for (const char* text : {"z", "1-z^2", "(1+z)/(1-z)", "z^(-2)", "z^0.5",
                             "exp(log(1+z))", "-z+2", "(0.25-0.5*i)*z^3"}) {
        const HolomorphicMap f = HolomorphicMap::parse(text);
        CHECK(HolomorphicMap::parse(f.str()).same_tree(f));
    }
}

namespace {

/// Random depth-limited expression tree over the grammar's node set.
ExprPtr random_tree(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> kind(0, depth <= 0 ? 1 : 9);
    std::uniform_real_distribution<double> uc(-3.0, 3.0);
    switch (kind(rng)) {
    case 0: {
        // real or complex constant
        if (rng() & 1) return expr_const(Complex(uc(rng), 0.0));
        return expr_const(Complex(uc(rng), uc(rng)));
    }
    case 1: return expr_var();
    case 2: return expr_add(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    case 3: return expr_sub(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    case 4: return expr_mul(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    case 5: return expr_div(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    case 6: {
        std::uniform_int_distribution<int> n(-3, 3);
        return expr_ipow(random_tree(rng, depth - 1), n(rng));
    }
    case 7: {
        const double exps[] = {0.5, 1.5, -0.5, 2.25};
        return expr_rpow(random_tree(rng, depth - 1), exps[rng() % 4]);
    }
    case 8: return expr_exp(random_tree(rng, depth - 1));
    default: return expr_log(random_tree(rng, depth - 1));
    }
}

} // namespace

TEST_CASE("print then parse round-trips random trees", "[expression]") {
    std::mt19937 rng(8206);
    for (int k = 0; k < 300; ++k) {
        const HolomorphicMap f(random_tree(rng, 4));
        INFO(f.str());
        CHECK(HolomorphicMap::parse(f.str()).same_tree(f));
    }
}

TEST_CASE("moebius node: evaluation, derivative, composition", "[expression]") {
    const HolomorphicMap m = mobius_map(Complex(2, 0), Complex(0, 1), Complex(1, 0), Complex(3, 0));
    auto rng = std::mt19937(8203);
    for (int k = 0; k < 50; ++k) {
        const Complex z = random_interior(rng);
        CHECK(std::abs(m(z) - (2.0 * z + Complex(0, 1)) / (z + 3.0)) < 1e-14);
        CHECK(std::abs(m.derivative()(z) - fd_derivative(m, z)) < 1e-8);
    }
    CHECK_THROWS_AS(mobius_map(Complex(1, 0), Complex(2, 0), Complex(2, 0), Complex(4, 0)),
                    domain_error); // ad - bc = 0
    // printing is expanded but evaluates identically after a re-parse
    const HolomorphicMap reparsed = HolomorphicMap::parse(m.str());
    for (int k = 0; k < 20; ++k) {
        const Complex z = random_interior(rng);
        CHECK(std::abs(m(z) - reparsed(z)) < 1e-14);
    }
}

TEST_CASE("moebius interpolation through three points", "[expression]") {
    const HolomorphicMap target = mobius_map(Complex(1, 1), Complex(0.5, 0), Complex(0.2, 0),
                                             Complex(1, -0.5));
    const Complex z1(0, 0), z2(0.4, 0), z3(0, 0.5);
    const HolomorphicMap fit = mobius_through(z1, z2, z3, target(z1), target(z2), target(z3));
    auto rng = std::mt19937(8204);
    for (int k = 0; k < 50; ++k) {
        const Complex z = random_interior(rng);
        CHECK(std::abs(fit(z) - target(z)) < 1e-12);
    }
}

TEST_CASE("evaluation errors: poles, branch cuts, overflow", "[expression]") {
    CHECK_THROWS_AS(HolomorphicMap::parse("1/(z-0.5)")(Complex(0.5, 0)), evaluation_error);
    CHECK_THROWS_AS(HolomorphicMap::parse("log(z)")(Complex(0, 0)), evaluation_error);
    CHECK_THROWS_AS(HolomorphicMap::parse("log(z)")(Complex(-0.5, 0)), evaluation_error);
    CHECK_THROWS_AS(HolomorphicMap::parse("z^0.5")(Complex(-0.5, 0)), evaluation_error);
    CHECK_NOTHROW(HolomorphicMap::parse("log(z)")(Complex(-0.5, 1e-8)));
    CHECK_THROWS_AS(HolomorphicMap::parse("exp(1/(1-z))")(Complex(1.0 - 1e-6, 0)),
                    evaluation_error);
}

TEST_CASE("numeric inverse golden cases", "[inverse]") {
    // identity
    const DiscPoint w0 = numeric_inverse(identity_map(), Complex(0.3, 0.1), DiscPoint(0, 0));
    CHECK(std::abs(w0.value() - Complex(0.3, 0.1)) < 1e-12);

    // C_1(i) = i is a fixed value of the Cayley transform
    const HolomorphicMap c1 = cayley_expr(BoundaryPoint(1, 0));
    const DiscPoint wi = numeric_inverse(c1, Complex(0, 1), DiscPoint(0, 0));
    CHECK(std::abs(wi.value() - Complex(0, 1)) < 1e-9);
    CHECK(std::abs(c1(wi.value()) - Complex(0, 1)) < 1e-11 * 2.0);

    // Koenigs function of the strip model: verify by forward evaluation
    const HolomorphicMap h = hyperbolic_koenigs(M_PI);
    const Complex target = h(Complex(0, 0)) + Complex(0, 0.7);
    const DiscPoint z = numeric_inverse(h, target, DiscPoint(0, 0));
    CHECK(std::abs(h(z.value()) - target) < 1e-11 * (1.0 + std::abs(target)));
}

TEST_CASE("numeric inverse composed with evaluation is the identity", "[inverse]") {
    auto rng = std::mt19937(8205);
    for (const auto& [name, f] : builtin_suite()) {
        INFO(name);
        double worst = 0.0;
        for (int k = 0; k < 25; ++k) {
            const Complex z = random_interior(rng, 0.7);
            const DiscPoint back = numeric_inverse(f, f(z), DiscPoint(0.9 * z));
            worst = std::max(worst, std::abs(back.value() - z));
        }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("numeric inverse detects targets outside the image", "[inverse]") {
    // C_1 maps the disc onto the right half-plane; -1 is not in the image.
    NewtonSettings quick;
    quick.max_stages = 64;
    CHECK_THROWS_AS(
        numeric_inverse(cayley_expr(BoundaryPoint(1, 0)), Complex(-1.0, 0.0), DiscPoint(0, 0), quick),
        convergence_error);
}

TEST_CASE("univalence spot check", "[inverse]") {
    const GridSpec grid(16, 32, 0.9);

    const UnivalenceReport square = univalence_spot_check(HolomorphicMap::parse("z^2"), grid);
    CHECK_FALSE(square.passed);
    CHECK_FALSE(square.collisions.empty()); // h(r) = h(-r)

    const UnivalenceReport cay = univalence_spot_check(cayley_expr(BoundaryPoint(1, 0)), grid);
    CHECK(cay.passed);

    const UnivalenceReport fam = univalence_spot_check(
        mobius_family_koenigs(3.0, BoundaryPoint(1, 0), Complex(0, 2)), grid);
    CHECK(fam.passed);
}

TEST_CASE("grid spec validation", "[types]") {
    CHECK_THROWS_AS(GridSpec(0, 16, 0.9), domain_error);
    CHECK_THROWS_AS(GridSpec(8, 16, 1.0), domain_error);
    const GridSpec g(8, 16, 0.9);
    CHECK(g.points().size() == 8 * 16);
    for (const Complex& z : g.points()) CHECK(std::abs(z) <= 0.9 + 1e-12);
}
