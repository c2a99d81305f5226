#pragma once

// Cross-validation suite: the closed forms are checked against the
// independent routes (finite-difference solver, Monte Carlo, quadrature
// oracles) at pinned tolerances, one criterion per check. The CLI
// `validate` subcommand and the acceptance test binary both run these.

#include <chrono>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "killdiff/calib.hpp"
#include "killdiff/contact.hpp"
#include "killdiff/greens.hpp"
#include "killdiff/mc.hpp"
#include "killdiff/model.hpp"
#include "killdiff/pde.hpp"
#include "killdiff/perturb.hpp"
#include "killdiff/quadrature.hpp"

namespace killdiff::validate {

enum class Status { pass, fail, skip };

struct CheckResult {
    int id = 0;
    std::string name;
    Status status = Status::pass;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct CheckOptions {
    bool skip_mc = false;
    bool skip_pde = false;
    int pde_nx = 0;            // 0 = default per check
    std::size_t mc_paths = 0;  // 0 = default per check
    double mc_dt = 0.0;        // 0 = default per check
    std::uint64_t seed = 2024;
    unsigned n_threads = 0;
};

namespace detail {

struct Tuple {
    double x0t, kct, at;
};

// ten contact-model parameter tuples spanning the fitted-table ranges
inline std::vector<Tuple> triangle_tuples() {
    return {{0.24, 0.42, 0.34}, {1.15, 0.29, 0.35}, {1.85, 0.18, 0.32},
            {2.46, 0.05, 0.38}, {3.34, 0.03, 0.21}, {0.50, 0.35, 0.30},
            {0.80, 0.25, 0.25}, {1.50, 0.12, 0.30}, {2.00, 0.08, 0.35},
            {3.00, 0.04, 0.25}};
}

inline ModelParams tilde_model(double x0t, double at, double deltat = 0.0) {
    ModelParams p;
    p.sigma = 1.0;
    p.mu = at + 0.5;
    p.x0 = x0t;
    p.delta = deltat;
    return p;
}

inline CheckResult make(int id, std::string name, bool ok, double measured,
                        double threshold, std::string detail = "") {
    CheckResult r;
    r.id = id;
    r.name = std::move(name);
    r.status = ok ? Status::pass : Status::fail;
    r.measured = measured;
    r.threshold = threshold;
    r.detail = std::move(detail);
    return r;
}

inline CheckResult skipped(int id, std::string name, std::string why) {
    CheckResult r;
    r.id = id;
    r.name = std::move(name);
    r.status = Status::skip;
    r.detail = std::move(why);
    return r;
}

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

}  // namespace detail

// 1. Closed form vs PDE vs MC for contact killing across the fitted
//    parameter range: PDE relative error < 1e-3 wherever P > 1e-4 and MC
//    within 3 stderr at >= 95% of checked tenors, under 5 minutes.
inline CheckResult criterion_triangle(const CheckOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> tenors{0.5, 1.0, 2.0, 5.0};
    double worst_rel = 0.0;
    int mc_checked = 0, mc_inside = 0;
    const std::size_t n_paths = opt.mc_paths ? opt.mc_paths : 1000000;

    for (const auto& tp : detail::triangle_tuples()) {
        auto params = detail::tilde_model(tp.x0t, tp.at);
        if (!opt.skip_pde) {
            auto grid = pde::PdeGrid::for_params(params, 5.0, opt.pde_nx ? opt.pde_nx : 2000,
                                                 1e-3);
            grid.output_tenors = tenors;
            auto sol = pde::solve(params, KillingMeasure::none(),
                                  pde::Boundary::radiation(tp.kct), grid);
            for (std::size_t i = 0; i < sol.tenors.size(); ++i) {
                const double ref = contact::ebc_pd_sharp(
                    sol.tenors[i], contact::ContactParams::tilde(tp.x0t, tp.kct, tp.at));
                if (ref > 1e-4)
                    worst_rel = std::max(worst_rel,
                                         std::abs((1.0 - sol.survival[i]) - ref) / ref);
            }
        }
        if (!opt.skip_mc) {
            mc::McConfig cfg;
            cfg.n_paths = n_paths;
            cfg.dt = opt.mc_dt > 0.0 ? opt.mc_dt : 0.01;
            cfg.t_max = 5.0;
            cfg.seed = opt.seed;
            cfg.tenors = tenors;
            cfg.n_threads = opt.n_threads;
            auto ts = mc::simulate(params, KillingMeasure::dirac(tp.kct),
                                   pde::Boundary::reflecting(), cfg);
            for (std::size_t i = 0; i < ts.size(); ++i) {
                const double ref = contact::ebc_pd_sharp(
                    ts.tenors[i], contact::ContactParams::tilde(tp.x0t, tp.kct, tp.at));
                const double se =
                    std::sqrt(std::max(ref * (1.0 - ref), 1e-16) / double(n_paths));
                ++mc_checked;
                if (std::abs(ts.pd[i] - ref) <= 3.0 * se) ++mc_inside;
            }
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (opt.skip_pde && opt.skip_mc)
        return detail::skipped(1, "triangle_contact", "pde and mc skipped");

    const double mc_frac = mc_checked ? double(mc_inside) / mc_checked : 1.0;
    const bool pde_ok = opt.skip_pde || worst_rel < 1e-3;
    const bool mc_ok = opt.skip_mc || mc_frac >= 0.95;
    const bool time_ok = secs < 300.0;
    std::string det = "pde_worst_rel=" + detail::fmt(worst_rel) +
                      " mc_within_3se=" + std::to_string(mc_inside) + "/" +
                      std::to_string(mc_checked) + " runtime_s=" + detail::fmt(secs);
    if (opt.skip_mc) det += " (mc skipped)";
    if (opt.skip_pde) det += " (pde skipped)";
    return detail::make(1, "triangle_contact", pde_ok && mc_ok && time_ok,
                        opt.skip_pde ? mc_frac : worst_rel,
                        opt.skip_pde ? 0.95 : 1e-3, det);
}

// 2. Strong-killing limit: kc = 100 sigma reproduces the first-passage
//    curve to 1e-3, including the mu = 0 (a = -D) barrier-formula case.
inline CheckResult criterion_first_passage_limit(const CheckOptions&) {
    // Known-red at the pinned kc = 100 sigma: whenever the passage becomes
    // likely inside the horizon, the finite-kc gap scales like
    // sqrt(2D/t)/kc ~ 2e-3..4e-3, above the 1e-3 bar for every x0 once
    // a = -D is included. The same sweep at kc = 1e6 (reported in the
    // detail) confirms the limit itself.
    double worst100 = 0.0, worst_large = 0.0;
    const double D = 0.5;
    for (auto [x0, a] : std::vector<std::pair<double, double>>{
             {1.0, -0.5}, {2.0, -0.5}, {1.0, -0.1}, {2.0, 0.2}, {3.34, 0.21}}) {
        for (double t = 0.1; t <= 30.0 + 1e-9; t += 0.1) {
            const double fp = contact::first_passage_pd(t, x0, a, D);
            worst100 = std::max(
                worst100,
                std::abs(contact::ebc_pd_sharp(t, {x0, a, D, 100.0, 0.0}) - fp));
            worst_large = std::max(
                worst_large,
                std::abs(contact::ebc_pd_sharp(t, {x0, a, D, 1e6, 0.0}) - fp));
        }
    }
    return detail::make(2, "first_passage_limit", worst100 < 1e-3, worst100, 1e-3,
                        "at kc=1e6 the same sweep gives " + detail::fmt(worst_large));
}

// 3. The strong-killing intensity approaches the inverse-Gaussian
//    first-hitting density.
inline CheckResult criterion_hitting_density_limit(const CheckOptions&) {
    const double x0 = 1.0, a = -0.1, D = 0.5, kc = 1e5;
    double worst = 0.0;
    for (double t = 0.1; t <= 10.0 + 1e-9; t += 0.1) {
        const double lam = contact::ebc_intensity_sharp(t, {x0, a, D, kc, 0.0});
        const double ig = x0 / std::sqrt(4.0 * M_PI * D * t * t * t) *
                          std::exp(-(x0 + a * t) * (x0 + a * t) / (4.0 * D * t));
        worst = std::max(worst, std::abs(lam - ig) / ig);
    }
    return detail::make(3, "hitting_density_limit", worst < 1e-3, worst, 1e-3);
}

// 4. Weak-killing perturbation vs the PDE, with the second series order
//    strictly reducing the error and the error shrinking with the killing
//    action at the expected rates.
inline CheckResult criterion_weak_killing(const CheckOptions& opt) {
    if (opt.skip_pde) return detail::skipped(4, "weak_killing_orders", "pde skipped");
    // investment-grade geometry (start well above the layer): the
    // accumulated killing action stays below the nominal kc * t and the
    // first-order intensity meets the 2% bar; nearer starts accumulate
    // more action and the same bound needs kc * t <~ 0.02
    const double x0 = 2.35, a = -0.1, D = 0.5, width = 0.5, t = 1.0;

    auto g0 = [&](double x, double y, double tt) {
        return greens::g0_reflecting(x, y, tt, a, D);
    };
    auto p0 = perturb::reflecting_density(x0, a, D);

    auto lambda_pde = [&](double kc) {
        auto params = detail::tilde_model(x0, a);
        auto grid = pde::PdeGrid::for_params(params, t, opt.pde_nx ? opt.pde_nx : 2000,
                                             5e-4);
        grid.output_tenors = {t};
        auto sol = pde::solve(params, KillingMeasure::gaussian(kc, width),
                              pde::Boundary::reflecting(), grid);
        return sol.boundary_rate.back() + sol.bulk_rate.back();
    };
    auto lambda_orders = [&](double kc) {
        auto k = KillingMeasure::gaussian(kc, width);
        const double l1 = perturb::first_order_intensity(t, k, p0).value;
        perturb::QuadratureSpec spec;
        spec.x_hi = x0 + 7.0 * std::sqrt(2.0 * D * t) + 1.0;
        spec.nx = 801;
        spec.nt = 16;
        auto res = perturb::neumann_green(k, g0, 1, spec, x0, t);
        double l2 = 0.0;
        const double dx = res.x[1] - res.x[0];
        for (std::size_t i = 0; i < res.x.size(); ++i)
            l2 += k.rate(res.x[i], 0.0) * res.g[i] * dx *
                  (i == 0 || i + 1 == res.x.size() ? 0.5 : 1.0);
        return std::pair{l1, l2};
    };

    // killing action kc * t = 0.05 and half of it
    double e1[2], e2[2];
    int idx = 0;
    for (double kc : {0.05, 0.025}) {
        const double ref = lambda_pde(kc);
        auto [l1, l2] = lambda_orders(kc);
        e1[idx] = std::abs(l1 - ref) / ref;
        e2[idx] = std::abs(l2 - ref) / ref;
        ++idx;
    }
    const bool small = e1[0] <= 0.02;
    const bool reduces = e2[0] < e1[0] && e2[1] < e1[1];

    // Scaling is measured nearer the wall where both series errors sit
    // well above the solver/quadrature floors: relative error of the
    // first-order intensity scales like kc * t, of the second order like
    // (kc t)^2, so halving the action shrinks them by about 2 and 4.
    double f1[2], f2[2];
    idx = 0;
    {
        const double x0n = 1.0, wn = 0.4;
        auto p0n = perturb::reflecting_density(x0n, a, D);
        for (double kc : {0.05, 0.025}) {
            auto k = KillingMeasure::gaussian(kc, wn);
            auto params = detail::tilde_model(x0n, a);
            auto grid = pde::PdeGrid::for_params(params, t,
                                                 opt.pde_nx ? opt.pde_nx : 2000, 5e-4);
            grid.output_tenors = {t};
            auto sol = pde::solve(params, k, pde::Boundary::reflecting(), grid);
            const double ref = sol.boundary_rate.back() + sol.bulk_rate.back();
            const double l1 = perturb::first_order_intensity(t, k, p0n).value;
            perturb::QuadratureSpec spec;
            spec.x_hi = x0n + 7.0 * std::sqrt(2.0 * D * t) + 1.0;
            spec.nx = 801;
            spec.nt = 16;
            auto res = perturb::neumann_green(k, g0, 1, spec, x0n, t);
            double l2 = 0.0;
            const double dx = res.x[1] - res.x[0];
            for (std::size_t i = 0; i < res.x.size(); ++i)
                l2 += k.rate(res.x[i], 0.0) * res.g[i] * dx *
                      (i == 0 || i + 1 == res.x.size() ? 0.5 : 1.0);
            f1[idx] = std::abs(l1 - ref) / ref;
            f2[idx] = std::abs(l2 - ref) / ref;
            ++idx;
        }
    }
    const double r1 = f1[1] / f1[0], r2 = f2[1] / f2[0];
    const bool scaling = r1 > 0.35 && r1 < 0.65 && r2 > 0.1 && r2 < 0.4;
    std::string det = "e1=" + detail::fmt(e1[0]) + " e2=" + detail::fmt(e2[0]) +
                      " half-action ratios r1=" + detail::fmt(r1) +
                      " r2=" + detail::fmt(r2);
    return detail::make(4, "weak_killing_orders", small && reduces && scaling, e1[0],
                        0.02, det);
}

// 5. Static limit: zero transport decays at the local killing rate, in
//    closed form exactly and in MC within 3 stderr.
inline CheckResult criterion_static_limit(const CheckOptions& opt) {
    const double kx = 0.5, x0 = 1.0;
    auto k = KillingMeasure::tabulated({{0.0, kx}, {2.0, kx}});
    double worst_exact = 0.0;
    for (double t : {0.5, 1.0, 2.0, 4.0})
        worst_exact = std::max(
            worst_exact,
            std::abs(perturb::static_intensity(t, k, x0) - kx * std::exp(-kx * t)));
    if (worst_exact >= 1e-12)
        return detail::make(5, "static_limit", false, worst_exact, 1e-12,
                            "closed form mismatch");
    if (opt.skip_mc)
        return detail::skipped(5, "static_limit", "mc skipped (closed form passed)");

    ModelParams p;
    p.sigma = 0.0;
    p.mu = 0.0;
    p.x0 = x0;
    mc::McConfig cfg;
    cfg.n_paths = opt.mc_paths ? opt.mc_paths : 100000;
    cfg.dt = opt.mc_dt > 0.0 ? opt.mc_dt : 0.01;
    cfg.t_max = 3.0;
    cfg.seed = opt.seed;
    cfg.tenors = {0.5, 1.0, 2.0, 3.0};
    cfg.n_threads = opt.n_threads;
    auto ts = mc::simulate(p, k, pde::Boundary::reflecting(), cfg);
    double worst_z = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double ref = 1.0 - std::exp(-kx * ts.tenors[i]);
        const double se = std::sqrt(ref * (1.0 - ref) / double(cfg.n_paths));
        worst_z = std::max(worst_z, std::abs(ts.pd[i] - ref) / se);
    }
    return detail::make(5, "static_limit", worst_z < 3.0, worst_z, 3.0,
                        "worst |z|; closed form exact to 1e-12");
}

// 6. Contact vs Gaussian-killing fitted curves at the investment-grade
//    Table row: the two model curves within 0.005 of each other over
//    t in [1, 30]. Known-red: at the published parameters the two fitted
//    shapes genuinely differ beyond the data horizon under every constant
//    normalization of the Gaussian curve (see the repository notes).
inline CheckResult criterion_model_convergence(const CheckOptions&) {
    double worst = 0.0, worst_half = 0.0;
    for (double t = 1.0; t <= 30.0 + 1e-9; t += 0.25) {
        const double pe =
            contact::ebc_pd_sharp(t, contact::ContactParams::tilde(3.34, 0.03, 0.21));
        const double pg = perturb::gaussian_pd(t, 3.38, 0.04, 0.77);
        worst = std::max(worst, std::abs(pe - pg));
        worst_half = std::max(worst_half, std::abs(pe - 0.5 * pg));
    }
    return detail::make(6, "contact_gaussian_convergence", worst < 0.005, worst, 0.005,
                        "under the halved (antiderivative-form) normalization the gap is " +
                            detail::fmt(worst_half));
}

// 7. Normalization convention: the curve is the exact integral of the
//    intensity, and the antiderivative form as usually printed
//    differentiates to HALF the intensity (the documented discrepancy,
//    reproduced rather than hidden).
inline CheckResult criterion_normalization(const CheckOptions&) {
    const double x0t = 2.35, kct = 0.06, tau = 0.63;
    const double width = std::sqrt(2.0 * 0.5 * tau);
    auto lam = [&](double u) {
        return perturb::gaussian_intensity(u, x0t, 0.0, 0.5, kct, 0.0, width);
    };
    const double q = integrate(lam, 0.0, 30.0, 1e-12);
    const double diff_int = std::abs(q - perturb::gaussian_pd(30.0, x0t, kct, tau));

    // literal antiderivative form with the kct / sqrt(pi/2) prefactor
    auto lit = [&](double t) {
        auto F = [&](double u) {
            return std::sqrt(u) * std::exp(-x0t * x0t / (2.0 * u)) +
                   sqrt_two_pi * x0t * norm_cdf(x0t / std::sqrt(u));
        };
        return kct / std::sqrt(M_PI / 2.0) * (F(t + tau) - F(tau));
    };
    const double h = 1e-5;
    const double dlit = (lit(5.0 + h) - lit(5.0 - h)) / (2.0 * h);
    const double factor = lam(5.0) / dlit;
    const bool ok = diff_int < 1e-8 && std::abs(factor - 2.0) < 1e-6;
    return detail::make(7, "normalization_convention", ok, diff_int, 1e-8,
                        "intensity/d(literal)/dt = " + detail::fmt(factor) +
                            " (factor-2 discrepancy reproduced)");
}

// 8. Identities on every produced term structure and the discrete solver
//    ledger: survival = exp(-H), intensity = hazard * survival, per-step
//    balance < 1e-6, mass conservation 1e-10 without killing.
inline CheckResult criterion_identities(const CheckOptions& opt) {
    if (opt.skip_pde) return detail::skipped(8, "identities_everywhere", "pde skipped");
    double worst_ident = 0.0;
    auto check_ts = [&](const TermStructure& ts) {
        for (std::size_t i = 0; i < ts.size(); ++i) {
            worst_ident = std::max(
                worst_ident, std::abs(ts.survival[i] - std::exp(-ts.cum_hazard[i])));
            worst_ident = std::max(
                worst_ident,
                std::abs(ts.intensity[i] - ts.hazard[i] * ts.survival[i]));
        }
    };

    auto params = detail::tilde_model(0.8, -0.05);
    auto grid = pde::PdeGrid::for_params(params, 1.0, opt.pde_nx ? opt.pde_nx : 400, 1e-3);
    grid.output_tenors.clear();
    for (int j = 10; j <= 1000; ++j) grid.output_tenors.push_back(j * 1e-3);
    auto sol = pde::solve(params, KillingMeasure::gaussian(0.2, 0.3),
                          pde::Boundary::radiation(0.1), grid);
    check_ts(pde::observables(sol));

    double worst_balance = 0.0;
    for (std::size_t i = 1; i < sol.tenors.size(); ++i) {
        const double dpdt =
            (sol.survival[i - 1] - sol.survival[i]) / (sol.tenors[i] - sol.tenors[i - 1]);
        worst_balance = std::max(
            worst_balance,
            std::abs(dpdt - (sol.boundary_rate[i] + sol.bulk_rate[i])));
    }

    auto grid2 = pde::PdeGrid::for_params(params, 1.0, 600, 1e-3);
    auto sol2 = pde::solve(params, KillingMeasure::none(), pde::Boundary::reflecting(),
                           grid2);
    double worst_mass = 0.0;
    for (double s : sol2.survival) worst_mass = std::max(worst_mass, std::abs(s - 1.0));

    check_ts(curve_from_pd({1.0, 2.0, 3.0}, {0.01, 0.03, 0.05}));

    const bool ok = worst_ident < 1e-12 && worst_balance < 1e-6 && worst_mass < 1e-10;
    return detail::make(8, "identities_everywhere", ok,
                        std::max({worst_ident, worst_balance, worst_mass}), 1e-6,
                        "ident=" + detail::fmt(worst_ident) +
                            " balance=" + detail::fmt(worst_balance) +
                            " mass=" + detail::fmt(worst_mass));
}

// 9. Calibration round-trip over every fitted-table column: noiseless
//    synthetic data refit to 5% per parameter, strictly decreasing trace,
//    under a minute per fit. Known-red for the ill-conditioned columns:
//    the parameter triples are near-degenerate along a curved valley and
//    the accept-if-lower search deadlocks there (see the repository
//    notes); the well-conditioned columns do recover.
inline CheckResult criterion_calibration(const CheckOptions& opt) {
    struct Column {
        FitModel kind;
        double z0, z1, z2;
        const char* name;
    };
    const std::vector<Column> cols{
        {FitModel::gaussian_killing, 0.01, 0.20, 0.0, "gauss_ccc"},
        {FitModel::gaussian_killing, 0.05, 0.12, 0.01, "gauss_b"},
        {FitModel::gaussian_killing, 0.97, 0.10, 0.09, "gauss_bb"},
        {FitModel::gaussian_killing, 2.35, 0.06, 0.63, "gauss_bbb"},
        {FitModel::gaussian_killing, 3.38, 0.04, 0.77, "gauss_a"},
        {FitModel::ebc, 0.24, 0.42, 0.34, "ebc_ccc"},
        {FitModel::ebc, 1.15, 0.29, 0.35, "ebc_b"},
        {FitModel::ebc, 1.85, 0.18, 0.32, "ebc_bb"},
        {FitModel::ebc, 2.46, 0.05, 0.38, "ebc_bbb"},
        {FitModel::ebc, 3.34, 0.03, 0.21, "ebc_a"},
    };
    int recovered = 0;
    std::string failures;
    double worst_secs = 0.0;
    bool trace_ok = true, time_ok = true;
    for (const auto& c : cols) {
        DefaultCurve data;
        data.label = c.name;
        for (double t = 0.25; t <= 30.0 + 1e-9; t += 0.25) {
            const double p =
                c.kind == FitModel::ebc
                    ? contact::ebc_pd_sharp(t, contact::ContactParams::tilde(c.z0, c.z1, c.z2))
                    : perturb::gaussian_pd(t, c.z0, c.z1, c.z2);
            if (p >= 0.9) break;
            data.points.emplace_back(t, p);
        }
        calib::SearchConfig cfg;
        cfg.seed = opt.seed;
        const auto t0 = std::chrono::steady_clock::now();
        auto res = calib::fit(c.kind, data, cfg);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        worst_secs = std::max(worst_secs, secs);
        if (secs >= 60.0) time_ok = false;

        double prev = std::numeric_limits<double>::infinity();
        for (const auto& e : res.trace) {
            if (!(e.rho < prev)) trace_ok = false;
            prev = e.rho;
        }
        auto rel = [](double got, double truth) {
            return truth != 0.0 ? std::abs(got - truth) / std::abs(truth)
                                : std::abs(got);
        };
        const bool ok = rel(res.params[0].second, c.z0) < 0.05 &&
                        rel(res.params[1].second, c.z1) < 0.05 &&
                        rel(res.params[2].second, c.z2) < 0.05;
        if (ok)
            ++recovered;
        else
            failures += std::string(failures.empty() ? "" : ",") + c.name;
    }
    const bool all = recovered == static_cast<int>(cols.size()) && trace_ok && time_ok;
    std::string det = "recovered=" + std::to_string(recovered) + "/10";
    if (!failures.empty()) det += " beyond 5%: " + failures;
    det += trace_ok ? "; trace strictly decreasing" : "; TRACE NOT DECREASING";
    return detail::make(9, "calibration_round_trip", all, recovered, 10.0, det);
}

// 10. Closed-form Laplace transforms vs numerical transforms of the
//     time-domain densities on random tuples.
inline CheckResult criterion_laplace(const CheckOptions& opt) {
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> ux(0.1, 2.0), ua(-0.5, 0.5), uk(0.0, 2.0),
        us(0.3, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double x = ux(rng), y = ux(rng), a = ua(rng), D = 0.2 + 0.5 * ux(rng),
                     kc = uk(rng), s = us(rng);
        auto g = [&](double t) { return greens::g_contact_time(x, y, t, a, D, kc); };
        auto f = [&](double t) { return std::exp(-s * t) * g(t); };
        const double split = 20.0 / s;
        const double numeric =
            integrate(f, 1e-12, split, 1e-12) + integrate_half_line(f, split, 1e-10);
        worst = std::max(worst,
                         std::abs(numeric - greens::g_contact_laplace(x, y, s, a, D, kc)));
    }
    return detail::make(10, "laplace_cross_check", worst < 1e-7, worst, 1e-7);
}

inline std::vector<CheckResult> run(const std::vector<int>& criteria,
                                    const CheckOptions& opt) {
    std::vector<CheckResult> out;
    for (int id : criteria) {
        switch (id) {
            case 1: out.push_back(criterion_triangle(opt)); break;
            case 2: out.push_back(criterion_first_passage_limit(opt)); break;
            case 3: out.push_back(criterion_hitting_density_limit(opt)); break;
            case 4: out.push_back(criterion_weak_killing(opt)); break;
            case 5: out.push_back(criterion_static_limit(opt)); break;
            case 6: out.push_back(criterion_model_convergence(opt)); break;
            case 7: out.push_back(criterion_normalization(opt)); break;
            case 8: out.push_back(criterion_identities(opt)); break;
            case 9: out.push_back(criterion_calibration(opt)); break;
            case 10: out.push_back(criterion_laplace(opt)); break;
            default: throw std::invalid_argument("validate: unknown criterion id");
        }
    }
    return out;
}

inline std::vector<int> all_criteria() { return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}; }

inline std::string to_line(const CheckResult& r) {
    const char* st = r.status == Status::pass ? "PASS"
                     : r.status == Status::fail ? "FAIL"
                                                : "SKIP";
    char head[160];
    std::snprintf(head, sizeof(head), "%s %02d %-28s measured=%.6g threshold=%.6g", st,
                  r.id, r.name.c_str(), r.measured, r.threshold);
    std::string line = head;
    if (!r.detail.empty()) line += "  [" + r.detail + "]";
    return line;
}

}  // namespace killdiff::validate
