#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "killdiff/quadrature.hpp"
#include "killdiff/special.hpp"

using namespace killdiff;

TEST_CASE("norm_cdf matches erfc identity and tabled values", "[special]") {
    CHECK(norm_cdf(0.0) == Catch::Approx(0.5).epsilon(1e-15));
    CHECK(norm_cdf(-1.0) == Catch::Approx(0.15865525393145705).epsilon(1e-13));
    CHECK(norm_cdf(1.0) + norm_cdf(-1.0) == Catch::Approx(1.0).epsilon(1e-15));
    CHECK(norm_cdf(-40.0) == 0.0);
}

TEST_CASE("erfcx agrees with the direct product at moderate arguments", "[special]") {
    for (double x : {0.0, 0.3, 1.0, 4.0, 10.0, 24.9}) {
        const double direct = std::exp(x * x) * std::erfc(x);
        CHECK(erfcx(x) == Catch::Approx(direct).epsilon(1e-13));
    }
    // negative branch: erfcx(-x) = 2 exp(x^2) - erfcx(x)
    for (double x : {0.5, 2.0}) {
        const double ref = 2.0 * std::exp(x * x) - erfcx(x);
        CHECK(erfcx(-x) == Catch::Approx(ref).epsilon(1e-13));
    }
}

TEST_CASE("erfcx asymptotic branch is accurate across the switch", "[special]") {
    // reference values computed at 30 significant digits
    CHECK(erfcx(24.999999) == Catch::Approx(0.022549573333186858324).epsilon(1e-13));
    CHECK(erfcx(25.000001) == Catch::Approx(0.022549571532095931435).epsilon(1e-13));
    CHECK(erfcx(30.0) == Catch::Approx(0.018795888861416751497).epsilon(1e-13));
    CHECK(erfcx(100.0) == Catch::Approx(0.0056416137829894329036).epsilon(1e-13));
}

TEST_CASE("exp_phi reproduces exp(L)*Phi(-m) and survives huge exponents", "[special]") {
    // moderate regime: compare against the naive product
    for (double m : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
        const double e_red = -1.3;
        const double naive = std::exp(e_red + 0.5 * m * m) * norm_cdf(-m);
        CHECK(exp_phi(e_red, m) == Catch::Approx(naive).epsilon(1e-13));
    }
    // strong-killing regime: L = m^2/2 - 1 with m = 4000; naive overflows,
    // the product must equal erfcx(m/sqrt2)/2 * e^{-1}
    const double m = 4000.0;
    const double expect = 0.5 * erfcx(m / sqrt_two) * std::exp(-1.0);
    CHECK(exp_phi(-1.0, m) == Catch::Approx(expect).epsilon(1e-13));
    CHECK(std::isfinite(exp_phi(-1.0, m)));
}

TEST_CASE("quadrature wrappers integrate a Gaussian to 1", "[special]") {
    auto g = [](double x) { return std::exp(-0.5 * x * x) / sqrt_two_pi; };
    CHECK(integrate(g, -10.0, 10.0, 1e-12) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(integrate_half_line(g, 0.0) == Catch::Approx(0.5).epsilon(1e-9));
}
