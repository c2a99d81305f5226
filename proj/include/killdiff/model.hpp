#pragma once

// Domain types shared by all modules, plus the model-independent
// relations between the cumulative default probability P, survival
// Omega, cumulative hazard H, hazard rate h and default intensity
// lambda:
//
//   Omega = 1 - P,  H = -ln Omega,  lambda = dP/dt,  h = lambda/Omega.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace killdiff {

namespace detail {

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace detail

// Transport coefficients and initial condition of the log-inverse-leverage
// diffusion dx = a dt + sigma dW, a = mu - sigma^2/2, restricted to
// x >= xm by a reflecting wall.
struct ModelParams {
    double sigma = 1.0;  // asset volatility, yr^(-1/2)
    double mu = 0.0;     // expected rate of change of leverage, yr^(-1)
    double x0 = 1.0;     // mean initial log-inverse-leverage
    double delta = 0.0;  // st.dev. of the initial distribution of x
    double xm = 0.0;     // reflecting-boundary location

    double drift() const { return mu - 0.5 * sigma * sigma; }
    double diffusion() const { return 0.5 * sigma * sigma; }

    void validate() const {
        detail::require(sigma >= 0.0, "ModelParams: sigma must be non-negative");
        detail::require(delta >= 0.0, "ModelParams: delta must be non-negative");
        detail::require(x0 >= xm, "ModelParams: x0 must lie above the boundary xm");
        detail::require(std::isfinite(sigma) && std::isfinite(mu) &&
                            std::isfinite(x0) && std::isfinite(delta) &&
                            std::isfinite(xm),
                        "ModelParams: parameters must be finite");
    }
};

// Spatial killing profile k(x), constant in time.
struct NoKilling {};

struct DiracKilling {
    double kc = 0.0;  // local default rate at the wall, (log-leverage)/yr
};

struct GaussianKilling {
    // Half-Gaussian risky layer against the reflecting wall, folded so the
    // full weight kc lies on the physical side: int_{xm}^inf k dx = kc.
    // This makes the narrow-width limit coincide with the radiation
    // boundary of strength kc.
    double kc = 0.0;     // integral of k over the physical domain
    double width = 1.0;  // layer width Delta, dimensionless

    double rate(double x, double xm) const {
        const double z = (x - xm) / width;
        return kc / (width * 1.2533141373155002512) * std::exp(-0.5 * z * z);
    }
};

struct TabulatedKilling {
    // (x, k(x)) pairs, piecewise-linear in x, zero outside the table.
    std::vector<std::pair<double, double>> points;

    double rate(double x) const {
        if (points.empty()) return 0.0;
        if (x <= points.front().first || x >= points.back().first) {
            if (x == points.front().first) return points.front().second;
            if (x == points.back().first) return points.back().second;
            return 0.0;
        }
        auto it = std::upper_bound(
            points.begin(), points.end(), x,
            [](double v, const auto& p) { return v < p.first; });
        const auto& [x1, k1] = *it;
        const auto& [x0p, k0] = *(it - 1);
        const double w = (x - x0p) / (x1 - x0p);
        return k0 + w * (k1 - k0);
    }
};

struct KillingMeasure {
    std::variant<NoKilling, DiracKilling, GaussianKilling, TabulatedKilling> profile;

    static KillingMeasure none() { return {NoKilling{}}; }
    static KillingMeasure dirac(double kc) {
        detail::require(kc >= 0.0, "KillingMeasure: kc must be non-negative");
        return {DiracKilling{kc}};
    }
    static KillingMeasure gaussian(double kc, double width) {
        detail::require(kc >= 0.0, "KillingMeasure: kc must be non-negative");
        detail::require(width > 0.0, "KillingMeasure: width must be positive");
        return {GaussianKilling{kc, width}};
    }
    static KillingMeasure tabulated(std::vector<std::pair<double, double>> pts) {
        for (std::size_t i = 0; i < pts.size(); ++i) {
            detail::require(std::isfinite(pts[i].second) && pts[i].second >= 0.0,
                            "KillingMeasure: tabulated rates must be finite and >= 0");
            if (i) detail::require(pts[i].first > pts[i - 1].first,
                                   "KillingMeasure: tabulated grid must be increasing");
        }
        return {TabulatedKilling{std::move(pts)}};
    }

    bool is_none() const { return std::holds_alternative<NoKilling>(profile); }
    bool is_dirac() const { return std::holds_alternative<DiracKilling>(profile); }

    // Bulk rate k(x); not defined for the Dirac profile.
    double rate(double x, double xm = 0.0) const {
        if (auto* g = std::get_if<GaussianKilling>(&profile)) return g->rate(x, xm);
        if (auto* t = std::get_if<TabulatedKilling>(&profile)) return t->rate(x);
        if (std::holds_alternative<DiracKilling>(profile))
            throw std::domain_error("KillingMeasure: Dirac profile has no pointwise rate");
        return 0.0;
    }
};

// Tenor grid with the default-curve columns.
struct TermStructure {
    std::vector<double> tenors;       // years, strictly increasing
    std::vector<double> pd;           // cumulative default probability P(t)
    std::vector<double> survival;     // Omega = 1 - P
    std::vector<double> cum_hazard;   // H = -ln Omega
    std::vector<double> hazard;       // h = lambda / Omega, yr^(-1)
    std::vector<double> intensity;    // lambda = dP/dt, yr^(-1)
    std::optional<std::vector<double>> stderr_pd;

    std::size_t size() const { return tenors.size(); }
};

// Empirical (tenor, cumulative PD) observations for one rating bucket.
struct DefaultCurve {
    std::string label;
    std::vector<std::pair<double, double>> points;

    void validate() const {
        for (std::size_t i = 0; i < points.size(); ++i) {
            detail::require(points[i].second >= 0.0 && points[i].second <= 1.0,
                            "DefaultCurve: pd values must lie in [0, 1]");
            if (i) {
                detail::require(points[i].first > points[i - 1].first,
                                "DefaultCurve: tenors must be strictly increasing");
                detail::require(points[i].second >= points[i - 1].second,
                                "DefaultCurve: pd values must be non-decreasing");
            }
        }
    }
};

// Outcome of a calibration run, in tilde units.
enum class FitModel { ebc, gaussian_killing };

struct FitTraceEntry {
    std::size_t trial = 0;
    std::vector<double> params;
    double rho = 0.0;
};

struct FitResult {
    FitModel model_kind = FitModel::ebc;
    std::vector<std::pair<std::string, double>> params;
    double objective = 0.0;
    std::vector<FitTraceEntry> trace;  // accepted steps, rho strictly decreasing
    bool degenerate = false;           // flagged when the fitted kct collapses to ~0
};

namespace detail {

// First-derivative weights of the quadratic through (t0,t1,t2), evaluated
// at te. Second order on non-uniform grids; used centered in the interior
// and one-sided at the ends so every module shares one convention.
struct Stencil3 {
    double w0, w1, w2;
};

inline Stencil3 d1_weights(double t0, double t1, double t2, double te) {
    Stencil3 s;
    s.w0 = (2.0 * te - t1 - t2) / ((t0 - t1) * (t0 - t2));
    s.w1 = (2.0 * te - t0 - t2) / ((t1 - t0) * (t1 - t2));
    s.w2 = (2.0 * te - t0 - t1) / ((t2 - t0) * (t2 - t1));
    return s;
}

// d/dt of f on an arbitrary strictly increasing grid.
inline std::vector<double> differentiate(const std::vector<double>& t,
                                         const std::vector<double>& f) {
    const std::size_t n = t.size();
    std::vector<double> df(n, 0.0);
    if (n == 1) return df;
    if (n == 2) {
        const double s = (f[1] - f[0]) / (t[1] - t[0]);
        df[0] = df[1] = s;
        return df;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i == 0) ? 0 : (i == n - 1) ? n - 3 : i - 1;
        const auto w = d1_weights(t[j], t[j + 1], t[j + 2], t[i]);
        df[i] = w.w0 * f[j] + w.w1 * f[j + 1] + w.w2 * f[j + 2];
    }
    return df;
}

}  // namespace detail

// Build the full term structure from a cumulative-default curve.
// Rejects P = 1 anywhere (the cumulative hazard diverges).
inline TermStructure curve_from_pd(std::vector<double> tenors,
                                   std::vector<double> pd) {
    detail::require(tenors.size() == pd.size() && !tenors.empty(),
                    "curve_from_pd: tenors and pd must be non-empty and equal-sized");
    for (std::size_t i = 0; i < tenors.size(); ++i) {
        detail::require(std::isfinite(tenors[i]) && tenors[i] >= 0.0,
                        "curve_from_pd: tenors must be finite and non-negative");
        if (i) detail::require(tenors[i] > tenors[i - 1],
                               "curve_from_pd: tenors must be strictly increasing");
        detail::require(pd[i] >= 0.0 && pd[i] <= 1.0,
                        "curve_from_pd: pd must lie in [0, 1]");
        if (i) detail::require(pd[i] >= pd[i - 1],
                               "curve_from_pd: pd must be non-decreasing");
        if (pd[i] >= 1.0)
            throw std::domain_error("curve_from_pd: P = 1 at tenor " +
                                    std::to_string(tenors[i]) +
                                    " (cumulative hazard diverges)");
    }

    TermStructure ts;
    ts.tenors = std::move(tenors);
    ts.pd = std::move(pd);
    const std::size_t n = ts.tenors.size();
    ts.survival.resize(n);
    ts.cum_hazard.resize(n);
    ts.hazard.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        ts.survival[i] = 1.0 - ts.pd[i];
        ts.cum_hazard[i] = -std::log(ts.survival[i]);
    }
    ts.intensity = detail::differentiate(ts.tenors, ts.pd);
    for (std::size_t i = 0; i < n; ++i) ts.hazard[i] = ts.intensity[i] / ts.survival[i];
    return ts;
}

// Max residual of dOmega/dt + h*Omega over the grid, using the same
// stencil as curve_from_pd. Zero up to round-off for curves built by
// curve_from_pd; a self-consistency gauge for external curves.
inline double survival_ode_residual(const TermStructure& ts) {
    detail::require(ts.tenors.size() == ts.survival.size() &&
                        ts.tenors.size() == ts.hazard.size() && ts.size() > 1,
                    "survival_ode_residual: incomplete term structure");
    const auto ds = detail::differentiate(ts.tenors, ts.survival);
    double r = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i)
        r = std::max(r, std::abs(ds[i] + ts.hazard[i] * ts.survival[i]));
    return r;
}

// Parameters rescaled by the asset volatility (sigma = 1 gauge); the
// identifiable set for calibration. Time is unchanged.
struct TildeParams {
    double x0t = 0.0;
    double xmt = 0.0;
    double at = 0.0;
    double deltat = 0.0;
    double kct = 0.0;    // kc / sigma
    double widtht = 0.0; // Delta / sigma (Gaussian profile only)
    double tau = 0.0;    // deltat^2 + widtht^2
};

inline TildeParams to_tilde(const ModelParams& p, const KillingMeasure& k) {
    detail::require(p.sigma > 0.0, "to_tilde: sigma must be positive");
    TildeParams t;
    t.x0t = p.x0 / p.sigma;
    t.xmt = p.xm / p.sigma;
    t.at = p.drift() / p.sigma;
    t.deltat = p.delta / p.sigma;
    if (auto* d = std::get_if<DiracKilling>(&k.profile)) t.kct = d->kc / p.sigma;
    if (auto* g = std::get_if<GaussianKilling>(&k.profile)) {
        t.kct = g->kc / p.sigma;
        t.widtht = g->width / p.sigma;
    }
    t.tau = t.deltat * t.deltat + t.widtht * t.widtht;
    return t;
}

// Inverse map; the killing profile kind must be supplied. Round-trips
// with to_tilde to machine precision.
inline std::pair<ModelParams, KillingMeasure> from_tilde(const TildeParams& t,
                                                         double sigma,
                                                         const KillingMeasure& kind) {
    detail::require(sigma > 0.0, "from_tilde: sigma must be positive");
    ModelParams p;
    p.sigma = sigma;
    p.mu = t.at * sigma + 0.5 * sigma * sigma;
    p.x0 = t.x0t * sigma;
    p.xm = t.xmt * sigma;
    p.delta = t.deltat * sigma;
    KillingMeasure k = kind;
    if (auto* d = std::get_if<DiracKilling>(&k.profile)) d->kc = t.kct * sigma;
    if (auto* g = std::get_if<GaussianKilling>(&k.profile)) {
        g->kc = t.kct * sigma;
        g->width = t.widtht * sigma;
    }
    return {p, k};
}

}  // namespace killdiff
