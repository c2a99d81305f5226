#pragma once

// Stable special-function kernels shared by the closed-form modules.

#include <cmath>
#include <limits>

namespace killdiff {

inline constexpr double sqrt_pi = 1.7724538509055160273;
inline constexpr double sqrt_two = 1.4142135623730950488;
inline constexpr double sqrt_two_pi = 2.5066282746310005024;

// Standard normal density.
inline double norm_pdf(double z) { return std::exp(-0.5 * z * z) / sqrt_two_pi; }

// Standard normal CDF, Phi(z) = erfc(-z/sqrt(2))/2.
inline double norm_cdf(double z) { return 0.5 * std::erfc(-z / sqrt_two); }

// Scaled complementary error function, erfcx(x) = exp(x^2) erfc(x).
// Direct product up to x = 25 (both factors stay normal), asymptotic
// series beyond, reflection for negative arguments.
inline double erfcx(double x) {
    if (x < 0.0) {
        if (x < -26.0) return std::numeric_limits<double>::infinity();
        return 2.0 * std::exp(x * x) - erfcx(-x);
    }
    if (x <= 25.0) return std::exp(x * x) * std::erfc(x);
    const double ix2 = 1.0 / (2.0 * x * x);
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 8; ++k) {
        term *= -(2 * k - 1) * ix2;
        sum += term;
    }
    return sum / (x * sqrt_pi);
}

// exp(L) * Phi(-m) evaluated through the reduced exponent E = L - m^2/2.
// The callers supply E in analytically cancelled form, so the product
// stays finite even where exp(L) alone would overflow.
inline double exp_phi(double reduced_exponent, double m) {
    if (m >= 0.0)
        return std::exp(reduced_exponent) * 0.5 * erfcx(m / sqrt_two);
    return std::exp(reduced_exponent + 0.5 * m * m) * norm_cdf(-m);
}

}  // namespace killdiff
