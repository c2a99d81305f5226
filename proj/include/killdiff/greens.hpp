#pragma once

// Analytic Green functions of the constant-coefficient drift-diffusion
// problem on [xm, inf) with a reflecting wall, in the time and Laplace
// domains, and their radiation-boundary (contact-killing) extensions.
//
// G(x, y, t) is the transition density observed at x for a source at y;
// all closed forms below shift the wall to the origin internally, so
// callers pass physical coordinates together with xm.
//
// Every exp * Phi product is evaluated through its analytically reduced
// exponent (see special.hpp), which keeps the expressions finite deep in
// the strong-killing / long-horizon regime where the naive factors
// overflow.

#include <cmath>
#include <stdexcept>

#include "killdiff/special.hpp"

namespace killdiff::greens {

namespace detail {

inline void check_time_domain(double x, double y, double t, double D) {
    if (!(t > 0.0)) throw std::domain_error("greens: t must be positive");
    if (!(D > 0.0)) throw std::domain_error("greens: D must be positive");
    if (x < 0.0 || y < 0.0)
        throw std::domain_error("greens: x and y must lie above the boundary");
}

}  // namespace detail

// Reflecting-wall transition density with drift a and diffusion D
// (Smoluchowski's constant-drift solution): a direct and an image
// Gaussian plus the drift-induced wall correction.
inline double g0_reflecting(double x, double y, double t, double a, double D,
                            double xm = 0.0) {
    x -= xm;
    y -= xm;
    detail::check_time_domain(x, y, t, D);
    const double c = 1.0 / (2.0 * std::sqrt(M_PI * D * t));
    const double e_direct = -(x - y - a * t) * (x - y - a * t) / (4.0 * D * t);
    const double e_image = a * (x - y) / (2.0 * D) - a * a * t / (4.0 * D) -
                           (x + y) * (x + y) / (4.0 * D * t);
    const double m = (a * t + x + y) / std::sqrt(2.0 * D * t);
    return c * (std::exp(e_direct) + std::exp(e_image)) -
           (a / D) * exp_phi(e_image, m);
}

// Transition density with contact killing of strength kc at the wall
// (radiation boundary). kc = 0 recovers g0_reflecting; kc -> inf the
// absorbing problem.
inline double g_contact_time(double x, double y, double t, double a, double D,
                             double kc, double xm = 0.0) {
    x -= xm;
    y -= xm;
    detail::check_time_domain(x, y, t, D);
    if (kc < 0.0) throw std::domain_error("greens: kc must be non-negative");
    const double c = 1.0 / (2.0 * std::sqrt(M_PI * D * t));
    const double e_direct = -(x - y - a * t) * (x - y - a * t) / (4.0 * D * t);
    const double e_image = a * (x - y) / (2.0 * D) - a * a * t / (4.0 * D) -
                           (x + y) * (x + y) / (4.0 * D * t);
    const double m = ((a + 2.0 * kc) * t + x + y) / std::sqrt(2.0 * D * t);
    return c * (std::exp(e_direct) + std::exp(e_image)) -
           ((a + 2.0 * kc) / D) * exp_phi(e_image, m);
}

namespace detail {

// Laplace transform of the drift-removed reflecting density, evaluated at
// the shifted frequency s' = s + a^2/(4D).
inline double g0_laplace_shifted(double x, double y, double sp, double a, double D) {
    const double rs = std::sqrt(sp);
    const double rD = std::sqrt(D);
    const double beta = rs + a / (2.0 * rD);
    const double direct = std::exp(-std::abs(x - y) * rs / rD) / (2.0 * rs * rD);
    const double image = std::exp(-(x + y) * rs / rD);
    return direct + image / (2.0 * rs * rD) -
           a * image / (2.0 * D * rs * beta);
}

inline void check_laplace_domain(double x, double y, double s, double D) {
    if (!(s > 0.0)) throw std::domain_error("greens: s must be positive");
    if (!(D > 0.0)) throw std::domain_error("greens: D must be positive");
    if (x < 0.0 || y < 0.0)
        throw std::domain_error("greens: x and y must lie above the boundary");
}

}  // namespace detail

// Laplace transform (over t) of g0_reflecting.
inline double g0_laplace(double x, double y, double s, double a, double D,
                         double xm = 0.0) {
    x -= xm;
    y -= xm;
    detail::check_laplace_domain(x, y, s, D);
    const double sp = s + a * a / (4.0 * D);
    return std::exp(a * (x - y) / (2.0 * D)) *
           detail::g0_laplace_shifted(x, y, sp, a, D);
}

// Laplace transform of g_contact_time: the reflecting transform minus the
// killing correction, which is algebraic in sqrt(s).
inline double g_contact_laplace(double x, double y, double s, double a, double D,
                                double kc, double xm = 0.0) {
    x -= xm;
    y -= xm;
    detail::check_laplace_domain(x, y, s, D);
    if (kc < 0.0) throw std::domain_error("greens: kc must be non-negative");
    const double sp = s + a * a / (4.0 * D);
    const double rs = std::sqrt(sp);
    const double rD = std::sqrt(D);
    const double beta = rs + a / (2.0 * rD);
    const double correction = std::exp(-(x + y) * rs / rD) / rD *
                              (1.0 / beta - 1.0 / (beta + kc / rD));
    return std::exp(a * (x - y) / (2.0 * D)) *
           (detail::g0_laplace_shifted(x, y, sp, a, D) - correction);
}

}  // namespace killdiff::greens
