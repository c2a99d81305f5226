#pragma once

// Closed-form default curves of the contact-killing (extended Black-Cox)
// model: a reflecting wall at the maximal-leverage point with a finite
// local default rate kc, plus the classic first-passage limit kc -> inf.
//
// All three normal-CDF terms of the survival formula share one reduced
// exponent, -(x0 + a t)^2 / (4 D t); evaluating them through exp_phi keeps
// the expressions stable for arbitrarily large kc * t.

#include <cmath>
#include <limits>
#include <stdexcept>

#include "killdiff/model.hpp"
#include "killdiff/special.hpp"

namespace killdiff::contact {

struct ContactParams {
    double x0 = 1.0;    // initial distance above the wall (wall shifted to 0)
    double a = 0.0;     // drift, yr^(-1)
    double D = 0.5;     // diffusion, yr^(-1)
    double kc = 0.0;    // contact killing strength
    double delta = 0.0; // st.dev. of the initial distribution

    // Tilde-unit parameters (sigma = 1, so D = 1/2, wall at 0).
    static ContactParams tilde(double x0t, double kct, double at, double deltat = 0.0) {
        return {x0t, at, 0.5, kct, deltat};
    }

    static ContactParams physical(const ModelParams& p, double kc) {
        p.validate();
        return {p.x0 - p.xm, p.drift(), p.diffusion(), kc, p.delta};
    }

    void validate() const {
        if (!(D > 0.0)) throw std::domain_error("contact: D must be positive");
        if (kc < 0.0) throw std::domain_error("contact: kc must be non-negative");
        if (x0 < 0.0) throw std::domain_error("contact: x0 must lie above the wall");
        if (delta < 0.0) throw std::domain_error("contact: delta must be non-negative");
    }

    double tau_delta() const { return delta * delta / (2.0 * D); }
};

// Cumulative default probability for the sharp initial condition
// (delta = 0). The kc/(kc + a) pole is removable; for |kc + a| below
// 1e-10 * sigma^2 the analytic limit is used.
inline double ebc_pd_sharp(double t, const ContactParams& p) {
    p.validate();
    if (t < 0.0) throw std::domain_error("contact: t must be non-negative");
    if (t == 0.0 || p.kc == 0.0) return 0.0;

    const double sd = std::sqrt(2.0 * p.D * t);
    const double m1 = (p.x0 + p.a * t) / sd;
    const double e_red = -(p.x0 + p.a * t) * (p.x0 + p.a * t) / (4.0 * p.D * t);

    if (std::abs(p.kc + p.a) < 1e-10 * 2.0 * p.D) {
        // a = -kc: the two singular terms collapse to their joint limit.
        const double M = (p.x0 + p.kc * t) / sd;
        const double e_lim = -(p.x0 - p.kc * t) * (p.x0 - p.kc * t) / (4.0 * p.D * t);
        const double c = 1.0 + p.kc * p.x0 / p.D + p.kc * p.kc * t / p.D;
        return norm_cdf(-m1) +
               2.0 * p.kc * std::sqrt(t / (2.0 * p.D)) * std::exp(e_lim) / sqrt_two_pi -
               c * exp_phi(e_lim, M);
    }

    const double m2 = (p.x0 - p.a * t) / sd;
    const double m3 = (p.x0 + (p.a + 2.0 * p.kc) * t) / sd;
    return norm_cdf(-m1) + p.kc / (p.kc + p.a) * exp_phi(e_red, m2) -
           (2.0 * p.kc + p.a) / (p.kc + p.a) * exp_phi(e_red, m3);
}

// Default intensity lambda = dP/dt for the sharp initial condition.
inline double ebc_intensity_sharp(double t, const ContactParams& p) {
    p.validate();
    if (t < 0.0) throw std::domain_error("contact: t must be non-negative");
    if (t == 0.0) {
        if (p.x0 > 0.0) return 0.0;
        return p.kc > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    if (p.kc == 0.0) return 0.0;
    const double sd = std::sqrt(2.0 * p.D * t);
    const double e_red = -(p.x0 + p.a * t) * (p.x0 + p.a * t) / (4.0 * p.D * t);
    const double m3 = (p.x0 + (p.a + 2.0 * p.kc) * t) / sd;
    return p.kc * (std::exp(e_red) / std::sqrt(M_PI * p.D * t) -
                   (2.0 * p.kc + p.a) / p.D * exp_phi(e_red, m3));
}

namespace detail {

// A Gaussian initial spread delta is equivalent to starting the sharp
// problem a time tau_delta = delta^2/(2D) earlier at x0 - a*tau_delta and
// conditioning on survival of that warm-up interval.
inline ContactParams shifted_sharp(const ContactParams& p) {
    ContactParams s = p;
    s.x0 = p.x0 - p.a * p.tau_delta();
    s.delta = 0.0;
    if (s.x0 < 0.0)
        throw std::domain_error(
            "contact: initial spread too wide, the shifted start falls below the wall");
    return s;
}

}  // namespace detail

// Cumulative default probability with a Gaussian initial condition of
// width delta; exactly zero at t = 0.
inline double ebc_pd_fuzzy(double t, const ContactParams& p) {
    p.validate();
    if (t < 0.0) throw std::domain_error("contact: t must be non-negative");
    if (p.delta == 0.0) return ebc_pd_sharp(t, p);
    const double tau = p.tau_delta();
    const ContactParams s = detail::shifted_sharp(p);
    const double p_warm = ebc_pd_sharp(tau, s);
    return (ebc_pd_sharp(t + tau, s) - p_warm) / (1.0 - p_warm);
}

// Hazard rate with a Gaussian initial condition; strictly positive at
// t = 0 whenever delta > 0.
inline double ebc_hazard_fuzzy(double t, const ContactParams& p) {
    p.validate();
    if (t < 0.0) throw std::domain_error("contact: t must be non-negative");
    const double tau = p.tau_delta();
    const ContactParams s = p.delta == 0.0 ? p : detail::shifted_sharp(p);
    const double omega = 1.0 - ebc_pd_sharp(t + tau, s);
    return ebc_intensity_sharp(t + tau, s) / omega;
}

// First-passage (absorbing-barrier) cumulative default probability; the
// kc -> inf limit of ebc_pd_sharp, kept separate as a stable baseline.
inline double first_passage_pd(double t, double x0, double a, double D) {
    if (!(D > 0.0)) throw std::domain_error("contact: D must be positive");
    if (t < 0.0) throw std::domain_error("contact: t must be non-negative");
    if (x0 < 0.0) throw std::domain_error("contact: x0 must lie above the wall");
    if (t == 0.0) return x0 == 0.0 ? 1.0 : 0.0;
    const double sd = std::sqrt(2.0 * D * t);
    const double m1 = (x0 + a * t) / sd;
    const double m2 = (x0 - a * t) / sd;
    const double e_red = -(x0 + a * t) * (x0 + a * t) / (4.0 * D * t);
    return norm_cdf(-m1) + exp_phi(e_red, m2);
}

}  // namespace killdiff::contact
