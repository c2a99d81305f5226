#pragma once

// Calibration of the contact (extended Black-Cox) and Gaussian-killing
// curves to empirical cumulative-default data: RMSD objective, the
// multiplicative random-search accept-if-lower loop, and a deterministic
// coarse log-grid scan for the initial guess.

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "killdiff/contact.hpp"
#include "killdiff/model.hpp"
#include "killdiff/perturb.hpp"

namespace killdiff::calib {

struct SearchConfig {
    double q = 0.9;                // shrink factor of the proposal interval
    std::size_t n_trials = 10000;
    std::uint64_t seed = 1;
    std::vector<double> lower, upper;  // optional per-parameter clamps

    void validate() const {
        if (!(q > 0.0 && q < 1.0))
            throw std::invalid_argument("SearchConfig: q must lie in (0, 1)");
    }
};

// Root-mean-square deviation between a model curve and the observations.
inline double rmsd(const std::function<double(double)>& model_curve,
                   const DefaultCurve& data) {
    if (data.points.empty()) throw std::invalid_argument("rmsd: empty data");
    double acc = 0.0;
    for (const auto& [t, p] : data.points) {
        const double d = model_curve(t) - p;
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(data.points.size()));
}

struct SearchOutcome {
    std::vector<double> params;
    double rho = 0.0;
    std::vector<FitTraceEntry> trace;  // accepted steps only
};

// Accept-if-strictly-lower random search: every trial resamples each
// parameter uniformly in [z q, z / q] around the incumbent (interval
// endpoints ordered to cover negative values; an exactly-zero parameter
// stays zero). Non-finite objective values reject the proposal.
inline SearchOutcome random_search(
    const std::function<double(const std::vector<double>&)>& objective,
    std::vector<double> init, const SearchConfig& cfg) {
    cfg.validate();
    const std::size_t np = init.size();
    if (!cfg.lower.empty() && cfg.lower.size() != np)
        throw std::invalid_argument("random_search: bound size mismatch");
    if (!cfg.upper.empty() && cfg.upper.size() != np)
        throw std::invalid_argument("random_search: bound size mismatch");

    auto safe_eval = [&](const std::vector<double>& z) {
        try {
            const double v = objective(z);
            return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
        } catch (const std::exception&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    SearchOutcome out;
    out.params = std::move(init);
    out.rho = safe_eval(out.params);
    if (!std::isfinite(out.rho))
        throw std::invalid_argument("random_search: objective not finite at init");

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> prop(np);
    for (std::size_t trial = 1; trial <= cfg.n_trials; ++trial) {
        for (std::size_t j = 0; j < np; ++j) {
            const double z = out.params[j];
            double lo = z * cfg.q, hi = z / cfg.q;
            if (lo > hi) std::swap(lo, hi);
            double v = lo + (hi - lo) * unif(rng);
            if (!cfg.lower.empty()) v = std::max(v, cfg.lower[j]);
            if (!cfg.upper.empty()) v = std::min(v, cfg.upper[j]);
            prop[j] = v;
        }
        const double r = safe_eval(prop);
        if (r < out.rho) {
            out.params = prop;
            out.rho = r;
            out.trace.push_back({trial, prop, r});
        }
    }
    return out;
}

namespace detail {

inline std::function<double(double)> model_curve(FitModel kind,
                                                 const std::vector<double>& z) {
    if (kind == FitModel::ebc)
        return [z](double t) {
            return contact::ebc_pd_sharp(t, contact::ContactParams::tilde(z[0], z[1], z[2]));
        };
    return [z](double t) { return perturb::gaussian_pd(t, z[0], z[1], z[2]); };
}

inline std::vector<double> log_space(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return v;
}

}  // namespace detail

// Fit a model curve to one rating bucket: deterministic 10x10x10 log-grid
// scan for the start, then the random search. Parameters are in tilde
// units with the wall at 0 (the identifiable set; a physical sigma cannot
// be recovered from a PD curve alone).
inline FitResult fit(FitModel kind, const DefaultCurve& data, SearchConfig cfg = {}) {
    if (data.points.empty()) throw std::invalid_argument("fit: empty data");
    data.validate();
    cfg.validate();

    auto objective = [&](const std::vector<double>& z) {
        return rmsd(detail::model_curve(kind, z), data);
    };

    const auto x0s = detail::log_space(0.05, 8.0, 10);
    const auto kcs = detail::log_space(5e-3, 1.5, 10);
    const auto thirds = kind == FitModel::ebc ? detail::log_space(0.02, 1.2, 10)
                                              : detail::log_space(1e-3, 5.0, 10);
    std::vector<double> best;
    double best_rho = std::numeric_limits<double>::infinity();
    for (double x0 : x0s)
        for (double kc : kcs)
            for (double th : thirds) {
                const std::vector<double> z{x0, kc, th};
                double r;
                try {
                    r = objective(z);
                } catch (const std::exception&) {
                    continue;
                }
                if (std::isfinite(r) && r < best_rho) {
                    best_rho = r;
                    best = z;
                }
            }

    if (cfg.lower.empty()) cfg.lower = {1e-4, 1e-8, kind == FitModel::ebc ? -5.0 : 1e-8};
    if (cfg.upper.empty()) cfg.upper = {25.0, 5.0, kind == FitModel::ebc ? 5.0 : 60.0};

    auto search = random_search(objective, best, cfg);

    FitResult res;
    res.model_kind = kind;
    res.objective = search.rho;
    res.trace = std::move(search.trace);
    res.params = {{"x0t", search.params[0]},
                  {"kct", search.params[1]},
                  {kind == FitModel::ebc ? "at" : "tau", search.params[2]}};
    res.degenerate = search.params[1] < 1e-4;
    return res;
}

}  // namespace killdiff::calib
