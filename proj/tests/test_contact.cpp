#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "killdiff/contact.hpp"
#include "killdiff/special.hpp"

using namespace killdiff;
using namespace killdiff::contact;

namespace {

// test-side transcription of the fuzzy-initial-condition survival formula
// in its fully expanded printed form, used to re-verify the time/space
// shift identity implemented in the library
double fuzzy_expanded_pd(double t, double x0, double a, double D, double kc,
                         double tau_d) {
    const double sd = std::sqrt(2.0 * D * (t + tau_d));
    const double t1 = norm_cdf(-(x0 + a * t) / sd);
    const double t2 = kc / (kc + a) * std::exp(-a / D * (x0 - a * tau_d)) *
                      norm_cdf(-(x0 - a * (t + 2.0 * tau_d)) / sd);
    const double t3 = (2.0 * kc + a) / (kc + a) *
                      std::exp((x0 + a * t + kc * (t + tau_d)) * kc / D) *
                      norm_cdf(-(x0 + a * t + 2.0 * kc * (t + tau_d)) / sd);
    return t1 + t2 - t3;
}

// inverse-Gaussian first-hitting density of a drifted diffusion
double hitting_density(double t, double x0, double a, double D) {
    return x0 / std::sqrt(4.0 * M_PI * D * t * t * t) *
           std::exp(-(x0 + a * t) * (x0 + a * t) / (4.0 * D * t));
}

}  // namespace

TEST_CASE("ebc_pd_sharp trivial limits", "[contact]") {
    ContactParams p{1.0, -0.1, 0.5, 0.0, 0.0};
    for (double t : {0.1, 1.0, 10.0}) CHECK(ebc_pd_sharp(t, p) == 0.0);
    p.kc = 0.3;
    CHECK(ebc_pd_sharp(0.0, p) == 0.0);
}

TEST_CASE("ebc_pd_sharp strong-killing limit reproduces the barrier formula",
          "[contact]") {
    // mu = 0 margin case a = -D together with kc -> inf is the classic
    // barrier-model cumulative PD
    const double x0 = 1.0, D = 0.5, a = -D, t = 2.0;
    ContactParams p{x0, a, D, 1e6, 0.0};
    const double expect = norm_cdf(-(x0 + a * t) / std::sqrt(2.0 * D * t)) +
                          std::exp(-a * x0 / D) *
                              norm_cdf(-(x0 - a * t) / std::sqrt(2.0 * D * t));
    CHECK(ebc_pd_sharp(t, p) == Catch::Approx(expect).margin(1e-4));
    CHECK(ebc_pd_sharp(t, p) == Catch::Approx(first_passage_pd(t, x0, a, D)).margin(1e-4));
}

TEST_CASE("ebc_pd_sharp handles the removable kc + a = 0 pole", "[contact]") {
    const double x0 = 0.9, D = 0.5, kc = 0.3, t = 3.0;
    const double exact = ebc_pd_sharp(t, {x0, -kc, D, kc, 0.0});
    // Richardson average around the pole cancels the O(eps) drift in the
    // regular-formula values
    const double eps = 1e-6;
    const double up = ebc_pd_sharp(t, {x0, -kc + eps, D, kc, 0.0});
    const double dn = ebc_pd_sharp(t, {x0, -kc - eps, D, kc, 0.0});
    CHECK(exact == Catch::Approx(0.5 * (up + dn)).margin(1e-9));
    CHECK(std::isfinite(exact));
    CHECK(exact > 0.0);
    CHECK(exact < 1.0);
}

TEST_CASE("ebc_intensity_sharp equals dP/dt", "[contact]") {
    ContactParams p{1.0, -0.1, 0.5, 0.3, 0.0};
    const double h = 1e-4;
    for (double t = 0.1; t <= 10.0; t += 0.55) {
        const double dpdt =
            (ebc_pd_sharp(t + h, p) - ebc_pd_sharp(t - h, p)) / (2.0 * h);
        CHECK(std::abs(ebc_intensity_sharp(t, p) - dpdt) < 1e-6);
    }
    p.kc = 0.0;
    CHECK(ebc_intensity_sharp(1.0, p) == 0.0);
    p.kc = 0.3;
    CHECK(ebc_intensity_sharp(0.0, p) == 0.0);
}

TEST_CASE("ebc_intensity_sharp strong-killing limit is the hitting density",
          "[contact]") {
    const double x0 = 1.0, a = -0.1, D = 0.5;
    ContactParams p{x0, a, D, 1e5, 0.0};
    for (double t : {0.1, 0.5, 1.0, 3.0, 10.0}) {
        const double ig = hitting_density(t, x0, a, D);
        CHECK(std::abs(ebc_intensity_sharp(t, p) - ig) / ig < 1e-3);
    }
}

TEST_CASE("ebc_pd_fuzzy limits and identities", "[contact]") {
    ContactParams p{1.0, -0.1, 0.5, 0.3, 0.4};

    SECTION("delta = 0 falls back to the sharp curve") {
        ContactParams s = p;
        s.delta = 0.0;
        for (double t : {0.5, 2.0, 8.0})
            CHECK(ebc_pd_fuzzy(t, s) == Catch::Approx(ebc_pd_sharp(t, s)).margin(1e-14));
    }
    SECTION("exactly zero at t = 0") { CHECK(ebc_pd_fuzzy(0.0, p) == 0.0); }
    SECTION("shift identity against the expanded printed form") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> ux(0.5, 2.0), ua(-0.3, 0.1),
            uk(0.05, 0.8), ud(0.1, 0.5), ut(0.2, 6.0);
        for (int i = 0; i < 30; ++i) {
            ContactParams q{ux(rng), ua(rng), 0.5, uk(rng), ud(rng)};
            const double t = ut(rng);
            const double tau = q.tau_delta();
            ContactParams s = q;
            s.x0 = q.x0 - q.a * tau;
            s.delta = 0.0;
            const double lhs = fuzzy_expanded_pd(t, q.x0, q.a, q.D, q.kc, tau);
            const double rhs = ebc_pd_sharp(t + tau, s);
            CHECK(lhs == Catch::Approx(rhs).margin(1e-12));
        }
    }
}

TEST_CASE("ebc_hazard_fuzzy short-time behaviour", "[contact]") {
    ContactParams p{1.0, -0.1, 0.5, 0.3, 0.4};
    CHECK(ebc_hazard_fuzzy(0.0, p) > 0.0);

    ContactParams sharp = p;
    sharp.delta = 0.0;
    CHECK(ebc_hazard_fuzzy(1e-4, sharp) < 1e-12);

    SECTION("consistency with the fuzzy curve") {
        const double h = 1e-4;
        for (double t = 0.2; t <= 6.0; t += 0.45) {
            const double dpdt =
                (ebc_pd_fuzzy(t + h, p) - ebc_pd_fuzzy(t - h, p)) / (2.0 * h);
            const double hz = dpdt / (1.0 - ebc_pd_fuzzy(t, p));
            CHECK(std::abs(ebc_hazard_fuzzy(t, p) - hz) < 1e-6);
        }
    }
}

TEST_CASE("first_passage_pd classical values", "[contact]") {
    // reflection principle at zero drift
    CHECK(first_passage_pd(1.0, 1.0, 0.0, 0.5) ==
          Catch::Approx(2.0 * norm_cdf(-1.0)).epsilon(1e-12));
    // start at the barrier
    CHECK(first_passage_pd(0.5, 0.0, 0.1, 0.5) == 1.0);
    // ultimate hitting probability
    CHECK(first_passage_pd(1e5, 1.0, 0.2, 0.5) ==
          Catch::Approx(std::exp(-0.2 * 1.0 / 0.5)).margin(1e-6));
    CHECK(first_passage_pd(1e6, 1.0, -0.2, 0.5) == Catch::Approx(1.0).margin(1e-9));
    CHECK(first_passage_pd(1e7, 1.0, 0.0, 0.5) == Catch::Approx(1.0).margin(1e-3));
}

TEST_CASE("contact monotonicity and ordering", "[contact]") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ux(0.3, 2.5), ua(-0.4, 0.4), uk(0.01, 2.0);
    for (int i = 0; i < 20; ++i) {
        ContactParams p{ux(rng), ua(rng), 0.5, uk(rng), 0.0};
        double prev = 0.0;
        for (double t = 0.25; t <= 8.0; t += 0.25) {
            const double v = ebc_pd_sharp(t, p);
            CHECK(v >= prev - 1e-12);
            CHECK(v <= first_passage_pd(t, p.x0, p.a, p.D) + 1e-12);
            prev = v;
        }
        // increasing kc increases the PD, increasing x0 decreases it
        ContactParams hi = p;
        hi.kc = p.kc * 1.5;
        CHECK(ebc_pd_sharp(2.0, hi) >= ebc_pd_sharp(2.0, p) - 1e-13);
        ContactParams far = p;
        far.x0 = p.x0 * 1.5;
        CHECK(ebc_pd_sharp(2.0, far) <= ebc_pd_sharp(2.0, p) + 1e-13);
    }
}

TEST_CASE("short-time suppression of the sharp contact model", "[contact]") {
    ContactParams p{1.0, -0.1, 0.5, 0.3, 0.0};
    CHECK(ebc_pd_sharp(0.01, p) < 1e-8);
}

TEST_CASE("fuzzy start too wide is rejected", "[contact]") {
    // a > 0 with a large delta pushes the shifted start below the wall
    ContactParams p{0.1, 2.0, 0.5, 0.3, 1.0};
    CHECK_THROWS_AS(ebc_pd_fuzzy(1.0, p), std::domain_error);
}
