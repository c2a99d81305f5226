#pragma once

// Weak-killing machinery: the static (zero-transport) limit, first-order
// perturbation intensities for arbitrary killing profiles, the
// Gaussian-killing closed forms, and the iterated-kernel (Neumann) series
// for the Green function of the killed problem.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "killdiff/greens.hpp"
#include "killdiff/model.hpp"
#include "killdiff/quadrature.hpp"
#include "killdiff/special.hpp"

namespace killdiff::perturb {

using DensityFn = std::function<double(double x, double t)>;   // p0(x, t)
using GreenFn = std::function<double(double x, double y, double t)>;

// Non-dissipative reflecting density for a sharp start at x0.
inline DensityFn reflecting_density(double x0, double a, double D, double xm = 0.0) {
    return [=](double x, double t) {
        return greens::g0_reflecting(x, x0, t, a, D, xm);
    };
}

// Same with a Gaussian start of width delta, truncated to the domain and
// renormalized; evaluated by quadrature over the source point.
inline DensityFn reflecting_density_fuzzy(double x0, double delta, double a,
                                          double D, double xm = 0.0) {
    if (delta == 0.0) return reflecting_density(x0, a, D, xm);
    const double norm = 1.0 - norm_cdf((xm - x0) / delta);
    return [=](double x, double t) {
        auto f = [&](double y) {
            return greens::g0_reflecting(x, y, t, a, D, xm) *
                   norm_pdf((y - x0) / delta) / delta;
        };
        const double hi = x0 + 10.0 * delta;
        return integrate(f, xm, hi, 1e-10) / norm;
    };
}

namespace detail {

inline double truncated_gaussian_norm(double x0, double delta, double xm) {
    return 1.0 - norm_cdf((xm - x0) / delta);
}

inline double max_rate(const KillingMeasure& k, double xm) {
    if (auto* g = std::get_if<GaussianKilling>(&k.profile))
        return g->rate(xm, xm);
    if (auto* tb = std::get_if<TabulatedKilling>(&k.profile)) {
        double m = 0.0;
        for (const auto& [x, v] : tb->points) m = std::max(m, v);
        return m;
    }
    return 0.0;
}

inline double bulk_upper_bound(const KillingMeasure& k, double x0, double delta,
                               double xm) {
    double hi = std::max(x0 + 10.0 * delta, xm + 1.0);
    if (auto* g = std::get_if<GaussianKilling>(&k.profile))
        hi = std::max(hi, xm + 12.0 * g->width);
    if (auto* tb = std::get_if<TabulatedKilling>(&k.profile))
        if (!tb->points.empty()) hi = std::max(hi, tb->points.back().first);
    return hi;
}

}  // namespace detail

// Default intensity in the static limit D = a = 0: each initial position
// decays at its local rate, lambda(t) = int phi(x - x0) k(x) exp(-k(x) t) dx.
// A sharp start reduces to k(x0) exp(-k(x0) t).
inline double static_intensity(double t, const KillingMeasure& k, double x0,
                               double delta = 0.0, double xm = 0.0) {
    if (t < 0.0) throw std::domain_error("static_intensity: t must be non-negative");
    if (k.is_dirac())
        throw std::domain_error(
            "static_intensity: a point killing measure needs transport; "
            "use a narrow Gaussian profile instead");
    if (k.is_none()) return 0.0;
    if (delta == 0.0) {
        const double kx = k.rate(x0, xm);
        return kx * std::exp(-kx * t);
    }
    const double norm = detail::truncated_gaussian_norm(x0, delta, xm);
    auto f = [&](double x) {
        const double kx = k.rate(x, xm);
        return norm_pdf((x - x0) / delta) / delta * kx * std::exp(-kx * t);
    };
    const double hi = detail::bulk_upper_bound(k, x0, delta, xm);
    return integrate(f, xm, hi, 1e-11) / norm;
}

struct IntensityResult {
    double value = 0.0;
    // set when the weak-killing premise max(k) * t <= 0.2 is violated
    bool weak_killing_warning = false;

    operator double() const { return value; }
};

// First-order weak-killing intensity: the killing profile sampled against
// the unperturbed density, lambda ~ int k(x) p0(x, t) dx. A point profile
// at the wall reduces to kc * p0(xm, t).
inline IntensityResult first_order_intensity(double t, const KillingMeasure& k,
                                             const DensityFn& p0, double xm = 0.0) {
    if (t < 0.0)
        throw std::domain_error("first_order_intensity: t must be non-negative");
    IntensityResult r;
    if (k.is_none()) return r;
    if (auto* d = std::get_if<DiracKilling>(&k.profile)) {
        r.value = d->kc * p0(xm, t);
        r.weak_killing_warning = d->kc * t > 0.2;
        return r;
    }
    auto f = [&](double x) { return k.rate(x, xm) * p0(x, t); };
    // integrate over the profile's own support so narrow layers are
    // resolved regardless of where the density mass sits
    double lo = xm, hi = xm + 1.0;
    if (auto* g = std::get_if<GaussianKilling>(&k.profile))
        hi = xm + 12.0 * g->width;
    if (auto* tb = std::get_if<TabulatedKilling>(&k.profile)) {
        lo = std::max(xm, tb->points.front().first);
        hi = std::max(lo + 1e-12, tb->points.back().first);
    }
    r.value = integrate(f, lo, hi, 1e-9);
    r.weak_killing_warning = detail::max_rate(k, xm) * t > 0.2;
    return r;
}

// Contact-killing weak-killing intensity with a fuzzy start: a spreading
// Gaussian arrival term plus the drift-induced wall correction. With
// far_field_only the correction is dropped, valid when D t << (x0 + a t)^2.
inline double contact_asymptotic_intensity(double t, double x0, double a, double D,
                                           double kc, double delta,
                                           bool far_field_only = false) {
    if (!(D > 0.0))
        throw std::domain_error("contact_asymptotic_intensity: D must be positive");
    if (t < 0.0)
        throw std::domain_error("contact_asymptotic_intensity: t must be non-negative");
    const double u = t + delta * delta / (2.0 * D);
    const double z = x0 + a * t;
    const double arrival =
        std::exp(-z * z / (4.0 * D * u)) / std::sqrt(M_PI * D * u);
    if (far_field_only) return kc * arrival;
    const double wall = -(a / D) * norm_cdf(-z / std::sqrt(2.0 * D * u));
    return kc * (arrival + wall);
}

// Far-field weak-killing intensity of the Gaussian risky-layer model; the
// initial spread delta and the layer width enter only through the time
// shift tau = (delta^2 + width^2) / (2 D).
inline double gaussian_intensity(double t, double x0, double a, double D, double kc,
                                 double delta, double width) {
    if (!(D > 0.0)) throw std::domain_error("gaussian_intensity: D must be positive");
    if (t < 0.0) throw std::domain_error("gaussian_intensity: t must be non-negative");
    const double u = t + (delta * delta + width * width) / (2.0 * D);
    const double z = x0 + a * t;
    return kc / std::sqrt(M_PI * D * u) * std::exp(-z * z / (4.0 * D * u));
}

// Cumulative default probability of the Gaussian risky-layer model in
// tilde units (sigma = 1, a = 0), the exact time integral of
// gaussian_intensity:
//
//   P(t) = 2 kct / sqrt(pi/2) * [F(t + tau) - F(tau)]
//   F(u) = sqrt(u) exp(-z^2 / (2u)) + sqrt(2 pi) z Phi(z / sqrt(u)), z = x0t - xmt
//
// so that dP/dt recovers gaussian_intensity identically.
inline double gaussian_pd(double t, double x0t, double kct, double tau,
                          double xmt = 0.0) {
    if (t < 0.0) throw std::domain_error("gaussian_pd: t must be non-negative");
    if (tau < 0.0) throw std::domain_error("gaussian_pd: tau must be non-negative");
    const double z = x0t - xmt;
    if (z < 0.0) throw std::domain_error("gaussian_pd: x0t must lie above xmt");
    auto F = [&](double u) {
        if (u <= 0.0) return sqrt_two_pi * z;  // limit u -> 0+
        return std::sqrt(u) * std::exp(-z * z / (2.0 * u)) +
               sqrt_two_pi * z * norm_cdf(z / std::sqrt(u));
    };
    return 2.0 * kct / std::sqrt(M_PI / 2.0) * (F(t + tau) - F(tau));
}

// Spatial grid and quadrature resolution for the iterated-kernel series.
struct QuadratureSpec {
    double x_lo = 0.0;
    double x_hi = 6.0;
    int nx = 400;   // spatial nodes
    int nt = 16;    // time nodes per integral
    double rel_tol = 1e-6;

    void validate() const {
        if (!(x_hi > x_lo)) throw std::invalid_argument("QuadratureSpec: empty domain");
        if (nx < 8 || nt < 2) throw std::invalid_argument("QuadratureSpec: grid too coarse");
        if (!(rel_tol > 0.0)) throw std::invalid_argument("QuadratureSpec: bad tolerance");
    }
};

struct NeumannResult {
    std::vector<double> x;  // spatial nodes
    std::vector<double> g;  // G(x_i, y, t)
    double error_estimate = 0.0;
};

namespace detail {

// trapezoid weights on a uniform grid
inline std::vector<double> trapezoid_weights(int n, double dx) {
    std::vector<double> w(n, dx);
    w.front() = w.back() = 0.5 * dx;
    return w;
}

// single-kill correction for a point profile at the wall, time integral
// with the square-root substitution that removes the endpoint kernels
inline double dirac_order1(const GreenFn& g0, double x, double y, double t,
                           double xm, double kc, int nt) {
    // T1 = kc * int_0^t G0(x, xm, t - u) G0(xm, y, u) du, u = t - v^2
    const double vmax = std::sqrt(t);
    const double dv = vmax / nt;
    double sum = 0.0;
    for (int i = 0; i < nt; ++i) {
        const double v = (i + 0.5) * dv;
        sum += 2.0 * v * g0(x, xm, v * v) * g0(xm, y, t - v * v);
    }
    return kc * sum * dv;
}

inline double dirac_order2(const GreenFn& g0, double x, double y, double t,
                           double xm, double kc, int nt) {
    // T2 = kc^2 * int_0^t dtau G0(x, xm, t - tau)
    //              int_0^tau dnu G0(xm, xm, tau - nu) G0(xm, y, nu)
    // with t - tau = v^2 and tau - nu = w^2
    const double vmax = std::sqrt(t);
    const double dv = vmax / nt;
    double outer = 0.0;
    for (int i = 0; i < nt; ++i) {
        const double v = (i + 0.5) * dv;
        const double tau = t - v * v;
        const double wmax = std::sqrt(tau);
        const double dw = wmax / nt;
        double inner = 0.0;
        for (int j = 0; j < nt; ++j) {
            const double w = (j + 0.5) * dw;
            inner += 2.0 * w * g0(xm, xm, w * w) * g0(xm, y, tau - w * w);
        }
        outer += 2.0 * v * g0(x, xm, v * v) * inner * dw;
    }
    return kc * kc * outer * dv;
}

struct NeumannGrids {
    std::vector<double> x, kx, w;
    double dx = 0.0;
};

inline NeumannGrids make_grids(const KillingMeasure& k, const QuadratureSpec& spec,
                               double xm, bool check_resolution) {
    NeumannGrids g;
    g.dx = (spec.x_hi - spec.x_lo) / (spec.nx - 1);
    g.x.resize(spec.nx);
    g.kx.resize(spec.nx);
    for (int i = 0; i < spec.nx; ++i) {
        g.x[i] = spec.x_lo + i * g.dx;
        g.kx[i] = k.rate(g.x[i], xm);
    }
    g.w = trapezoid_weights(spec.nx, g.dx);
    if (!check_resolution) return g;
    double kmax = 0.0;
    for (double v : g.kx) kmax = std::max(kmax, v);
    for (int i = 0; i + 1 < spec.nx; ++i) {
        const double a = g.kx[i], b = g.kx[i + 1];
        const double big = std::max(a, b);
        if (big > 1e-2 * kmax && std::abs(a - b) > 0.1 * big)
            throw std::invalid_argument(
                "neumann_green: killing profile varies by more than 10% between "
                "nodes; refine nx");
    }
    return g;
}

inline std::vector<double> neumann_pass(const KillingMeasure& k, const GreenFn& g0,
                                        int order, const QuadratureSpec& spec,
                                        double y, double t, double xm,
                                        bool check_resolution) {
    if (k.is_dirac()) {
        const double kc = std::get<DiracKilling>(k.profile).kc;
        std::vector<double> out(spec.nx);
        const double dx = (spec.x_hi - spec.x_lo) / (spec.nx - 1);
        for (int i = 0; i < spec.nx; ++i) {
            const double x = spec.x_lo + i * dx;
            double v = g0(x, y, t);
            if (order >= 1) v -= dirac_order1(g0, x, y, t, xm, kc, spec.nt);
            if (order >= 2) v += dirac_order2(g0, x, y, t, xm, kc, spec.nt);
            out[i] = v;
        }
        return out;
    }

    const auto grids = make_grids(k, spec, xm, check_resolution);
    const int nx = spec.nx, nt = spec.nt;
    std::vector<double> out(nx);
    for (int i = 0; i < nx; ++i) out[i] = g0(grids.x[i], y, t);
    if (order == 0 || k.is_none()) return out;

    const double ht = t / nt;
    // first-order term on the tensor grid, midpoint in time
    std::vector<double> corr1(nx, 0.0);
    for (int m = 0; m < nt; ++m) {
        const double tau = (m + 0.5) * ht;
        for (int j = 0; j < nx; ++j) {
            if (grids.kx[j] == 0.0) continue;
            const double src = grids.w[j] * grids.kx[j] * g0(grids.x[j], y, tau);
            if (src == 0.0) continue;
            for (int i = 0; i < nx; ++i)
                corr1[i] += src * g0(grids.x[i], grids.x[j], t - tau);
        }
    }
    for (int i = 0; i < nx; ++i) out[i] -= corr1[i] * ht;
    if (order == 1) return out;

    // second-order term: the single-kill correction of the inner
    // propagator, re-propagated through the killing profile
    std::vector<double> corr2(nx, 0.0);
    for (int m = 0; m < nt; ++m) {
        const double tau = (m + 0.5) * ht;
        const double hn = tau / nt;
        // B(z, tau) = int_0^tau dnu int dz1 G0(z, z1, tau - nu) k(z1) G0(z1, y, nu)
        std::vector<double> B(nx, 0.0);
        for (int l = 0; l < nt; ++l) {
            const double nu = (l + 0.5) * hn;
            for (int j1 = 0; j1 < nx; ++j1) {
                if (grids.kx[j1] == 0.0) continue;
                const double src = grids.w[j1] * grids.kx[j1] * g0(grids.x[j1], y, nu);
                if (src == 0.0) continue;
                for (int j = 0; j < nx; ++j)
                    B[j] += src * g0(grids.x[j], grids.x[j1], tau - nu);
            }
        }
        for (int j = 0; j < nx; ++j) {
            if (grids.kx[j] == 0.0 || B[j] == 0.0) continue;
            const double src = grids.w[j] * grids.kx[j] * B[j] * hn;
            for (int i = 0; i < nx; ++i)
                corr2[i] += src * g0(grids.x[i], grids.x[j], t - tau);
        }
    }
    for (int i = 0; i < nx; ++i) out[i] += corr2[i] * ht;
    return out;
}

}  // namespace detail

// Iterated-kernel approximation of the killed Green function G(x, y, t)
// on a fixed grid: order 0 is the unperturbed density, order 1 subtracts
// the single-kill term, order 2 adds the double-kill term. The returned
// error estimate is the max-norm change under halving both resolutions.
inline NeumannResult neumann_green(const KillingMeasure& k, const GreenFn& g0,
                                   int order, const QuadratureSpec& spec, double y,
                                   double t, double xm = 0.0) {
    spec.validate();
    if (order < 0 || order > 2)
        throw std::invalid_argument("neumann_green: order must be 0, 1 or 2");
    if (!(t > 0.0)) throw std::domain_error("neumann_green: t must be positive");

    NeumannResult res;
    res.g = detail::neumann_pass(k, g0, order, spec, y, t, xm, true);
    res.x.resize(spec.nx);
    const double dx = (spec.x_hi - spec.x_lo) / (spec.nx - 1);
    for (int i = 0; i < spec.nx; ++i) res.x[i] = spec.x_lo + i * dx;

    if (order >= 1) {
        QuadratureSpec coarse = spec;
        coarse.nx = spec.nx / 2 + 1;
        coarse.nt = std::max(2, spec.nt / 2);
        // half-resolution diagnostic pass, resolution guard off
        const auto cg = detail::neumann_pass(k, g0, order, coarse, y, t, xm, false);
        double err = 0.0;
        for (int i = 0; i < coarse.nx; ++i) {
            const double xc = spec.x_lo + i * (spec.x_hi - spec.x_lo) / (coarse.nx - 1);
            const int j = static_cast<int>(std::lround((xc - spec.x_lo) / dx));
            if (j >= 0 && j < spec.nx) err = std::max(err, std::abs(cg[i] - res.g[j]));
        }
        res.error_estimate = err;
    }
    return res;
}

}  // namespace killdiff::perturb
