// killdiff - default-curve toolkit for diffusing leverage with
// position-dependent killing.
//
// Subcommands:
//   curve     evaluate a model default curve on a tenor grid (CSV)
//   fit       calibrate a model to an empirical cumulative-default curve
//   validate  run the cross-validation suite (closed form / PDE / MC)
//   sweep     evaluate P(t) over a Cartesian parameter grid (long CSV)

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "killdiff/calib.hpp"
#include "killdiff/contact.hpp"
#include "killdiff/io.hpp"
#include "killdiff/model.hpp"
#include "killdiff/perturb.hpp"
#include "killdiff/validate.hpp"

namespace {

using namespace killdiff;

struct CurveSpec {
    std::string model = "ebc";
    double x0t = 1.0, kct = 0.1, at = 0.0, tau = 0.0, deltat = 0.0;
    // physical-unit entry: active when sigma > 0
    double sigma = 0.0, x0 = 0.0, kc = 0.0, mu = 0.0, delta = 0.0, width = 0.0;
};

std::vector<double> parse_tenors(const std::string& spec) {
    // start:stop:step, inclusive of stop up to rounding
    const auto c1 = spec.find(':');
    const auto c2 = spec.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw std::invalid_argument("tenors: expected start:stop:step");
    const double start = std::stod(spec.substr(0, c1));
    const double stop = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    const double step = std::stod(spec.substr(c2 + 1));
    if (!(step > 0.0) || stop < start)
        throw std::invalid_argument("tenors: need start <= stop and step > 0");
    std::vector<double> out;
    const int n = static_cast<int>(std::floor((stop - start) / step + 1e-9));
    for (int i = 0; i <= n; ++i) out.push_back(start + i * step);
    if (out.size() > 1000000) throw std::invalid_argument("tenors: grid too large");
    return out;
}

std::vector<double> parse_list(const std::string& s) {
    if (s.find(':') != std::string::npos) return parse_tenors(s);
    std::vector<double> out;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',') {
            if (!cur.empty()) out.push_back(std::stod(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

void to_tilde_units(CurveSpec& cs) {
    if (cs.sigma <= 0.0) return;
    ModelParams p;
    p.sigma = cs.sigma;
    p.mu = cs.mu;
    p.x0 = cs.x0;
    p.delta = cs.delta;
    auto k = cs.model == "gauss" && cs.width > 0.0
                 ? KillingMeasure::gaussian(cs.kc, cs.width)
                 : KillingMeasure::dirac(cs.kc);
    auto t = to_tilde(p, k);
    cs.x0t = t.x0t;
    cs.kct = t.kct;
    cs.at = t.at;
    cs.deltat = t.deltat;
    cs.tau = t.tau;
}

// analytic curve columns for one model
TermStructure eval_curve(const CurveSpec& cs, const std::vector<double>& tenors) {
    TermStructure ts;
    ts.tenors = tenors;
    const std::size_t n = tenors.size();
    ts.pd.resize(n);
    ts.survival.resize(n);
    ts.cum_hazard.resize(n);
    ts.hazard.resize(n);
    ts.intensity.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = tenors[i];
        double p, lam;
        if (cs.model == "ebc") {
            auto cp = contact::ContactParams::tilde(cs.x0t, cs.kct, cs.at, cs.deltat);
            p = contact::ebc_pd_fuzzy(t, cp);
            lam = contact::ebc_hazard_fuzzy(t, cp) * (1.0 - p);
        } else {
            p = perturb::gaussian_pd(t, cs.x0t, cs.kct, cs.tau);
            lam = perturb::gaussian_intensity(t, cs.x0t, 0.0, 0.5, cs.kct, 0.0,
                                              std::sqrt(cs.tau));
        }
        if (p >= 1.0)
            throw std::domain_error("curve: P reached 1 at tenor " + std::to_string(t) +
                                    "; shorten the horizon");
        ts.pd[i] = p;
        ts.survival[i] = 1.0 - p;
        ts.cum_hazard[i] = -std::log1p(-p);
        ts.intensity[i] = lam;
        ts.hazard[i] = lam / (1.0 - p);
    }
    return ts;
}

void apply_config_overrides(const std::string& path, CurveSpec& cs,
                            calib::SearchConfig& sc) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    for (auto& [key, value] : read_key_values(in)) {
        if (key == "x0t") cs.x0t = value;
        else if (key == "kct") cs.kct = value;
        else if (key == "at") cs.at = value;
        else if (key == "tau") cs.tau = value;
        else if (key == "deltat") cs.deltat = value;
        else if (key == "sigma") cs.sigma = value;
        else if (key == "x0") cs.x0 = value;
        else if (key == "kc") cs.kc = value;
        else if (key == "mu") cs.mu = value;
        else if (key == "delta") cs.delta = value;
        else if (key == "width") cs.width = value;
        else if (key == "trials") sc.n_trials = static_cast<std::size_t>(value);
        else if (key == "q") sc.q = value;
        else if (key == "seed") sc.seed = static_cast<std::uint64_t>(value);
        else throw std::runtime_error("config: unknown key '" + key + "'");
    }
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file " + path);
    return file;
}

int cmd_curve(const CurveSpec& spec_in, const std::string& tenor_spec,
              const std::string& out_path) {
    CurveSpec cs = spec_in;
    to_tilde_units(cs);
    auto ts = eval_curve(cs, parse_tenors(tenor_spec));
    std::ofstream f;
    write_term_structure(open_output(f, out_path), ts);
    return 0;
}

int cmd_fit(const std::string& model, const std::string& data_path,
            const calib::SearchConfig& sc, const std::string& out_prefix) {
    std::ifstream in(data_path);
    if (!in) throw std::runtime_error("fit: cannot open " + data_path);
    auto curve = read_default_curve(in, data_path);

    const auto kind = model == "ebc" ? FitModel::ebc : FitModel::gaussian_killing;
    auto res = calib::fit(kind, curve, sc);

    std::printf("rho=%.10g\n", res.objective);
    if (res.degenerate) std::printf("degenerate=1\n");
    for (const auto& [k, v] : res.params) std::printf("%s=%.10g\n", k.c_str(), v);

    if (!out_prefix.empty()) {
        {
            std::ofstream f(out_prefix + ".params");
            std::vector<std::pair<std::string, double>> kv = res.params;
            kv.emplace_back("rho", res.objective);
            kv.emplace_back("degenerate", res.degenerate ? 1.0 : 0.0);
            write_key_values(f, kv);
        }
        {
            std::ofstream f(out_prefix + ".trace.csv");
            f << "trial,";
            for (std::size_t j = 0; j < res.params.size(); ++j)
                f << res.params[j].first << ',';
            f << "rho\n";
            for (const auto& e : res.trace) {
                f << e.trial << ',';
                for (double v : e.params) f << detail::format_double(v) << ',';
                f << detail::format_double(e.rho) << "\n";
            }
        }
        {
            CurveSpec cs;
            cs.model = model;
            cs.x0t = res.params[0].second;
            cs.kct = res.params[1].second;
            (model == "ebc" ? cs.at : cs.tau) = res.params[2].second;
            std::vector<double> tenors;
            for (const auto& [t, p] : curve.points) tenors.push_back(t);
            std::ofstream f(out_prefix + ".curve.csv");
            write_term_structure(f, eval_curve(cs, tenors));
        }
    }
    return 0;
}

int cmd_validate(const std::vector<int>& criteria, const validate::CheckOptions& opt) {
    using namespace killdiff::validate;
    bool any_fail = false;
    for (const auto& r : run(criteria.empty() ? all_criteria() : criteria, opt)) {
        std::puts(to_line(r).c_str());
        if (r.status == Status::fail) any_fail = true;
    }
    return any_fail ? 1 : 0;
}

int cmd_sweep(const std::string& model, const std::string& x0s, const std::string& kcs,
              const std::string& thirds, const std::string& tenor_spec,
              const std::string& out_path) {
    const auto xv = parse_list(x0s);
    const auto kv = parse_list(kcs);
    const auto tv = parse_list(thirds);
    const auto tenors = parse_tenors(tenor_spec);
    const std::size_t rows = xv.size() * kv.size() * tv.size() * tenors.size();
    if (rows > 1000000)
        throw std::invalid_argument("sweep: " + std::to_string(rows) +
                                    " rows exceed the 1e6 limit");
    std::ofstream f;
    auto& os = open_output(f, out_path);
    const char* third_name = model == "ebc" ? "at" : "tau";
    os << "x0t,kct," << third_name << ",tenor_years,pd\n";
    for (double x0 : xv)
        for (double kc : kv)
            for (double th : tv) {
                CurveSpec cs;
                cs.model = model;
                cs.x0t = x0;
                cs.kct = kc;
                (model == "ebc" ? cs.at : cs.tau) = th;
                auto ts = eval_curve(cs, tenors);
                for (std::size_t i = 0; i < ts.size(); ++i)
                    os << detail::format_double(x0) << ',' << detail::format_double(kc)
                       << ',' << detail::format_double(th) << ','
                       << detail::format_double(ts.tenors[i]) << ','
                       << detail::format_double(ts.pd[i]) << "\n";
            }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"default curves of a killed leverage diffusion"};
    app.require_subcommand(1);

    CurveSpec cs;
    calib::SearchConfig sc;
    std::string tenor_spec = "1:10:1", out_path, data_path, out_prefix, config_path;
    std::string x0_list = "1", kc_list = "0.1", third_list = "0";
    std::vector<int> criteria;
    std::vector<std::string> skips;
    validate::CheckOptions vopt;

    auto add_model_flags = [&](CLI::App* c) {
        c->add_option("--model", cs.model, "ebc or gauss")
            ->check(CLI::IsMember({"ebc", "gauss"}));
        c->add_option("--config", config_path,
                      "key=value file; entries override the flags");
    };
    auto add_param_flags = [&](CLI::App* c) {
        c->add_option("--x0t", cs.x0t, "initial log-inverse-leverage / sigma");
        c->add_option("--kct", cs.kct, "killing strength / sigma");
        c->add_option("--at", cs.at, "drift / sigma (ebc)");
        c->add_option("--tau", cs.tau, "combined width time shift (gauss)");
        c->add_option("--deltat", cs.deltat, "initial spread / sigma (ebc)");
        c->add_option("--sigma", cs.sigma,
                      "asset volatility; activates the physical-unit flags");
        c->add_option("--x0", cs.x0, "physical initial log-inverse-leverage");
        c->add_option("--kc", cs.kc, "physical killing strength");
        c->add_option("--mu", cs.mu, "physical leverage growth rate");
        c->add_option("--delta", cs.delta, "physical initial spread");
        c->add_option("--width", cs.width, "physical risky-layer width (gauss)");
    };

    auto* curve = app.add_subcommand("curve", "evaluate a model default curve");
    add_model_flags(curve);
    add_param_flags(curve);
    curve->add_option("--tenors", tenor_spec, "start:stop:step in years");
    curve->add_option("--out", out_path, "output CSV (default stdout)");

    auto* fit = app.add_subcommand("fit", "calibrate to a cumulative-default curve");
    add_model_flags(fit);
    fit->add_option("--data", data_path, "input CSV (tenor_years,pd)")->required();
    fit->add_option("--trials", sc.n_trials, "random-search trials");
    fit->add_option("--q", sc.q, "proposal shrink factor");
    fit->add_option("--seed", sc.seed, "search seed");
    fit->add_option("--out-prefix", out_prefix,
                    "write <prefix>.params, .trace.csv, .curve.csv");

    auto* val = app.add_subcommand("validate", "run the cross-validation suite");
    val->add_option("--criteria", criteria, "criterion ids (default: all)");
    val->add_option("--skip", skips, "skip a route: mc or pde")
        ->check(CLI::IsMember({"mc", "pde"}));
    val->add_option("--pde-nx", vopt.pde_nx, "override the solver node count");
    val->add_option("--paths", vopt.mc_paths, "override the MC path count");
    val->add_option("--mc-dt", vopt.mc_dt, "override the MC time step, yr");
    val->add_option("--seed", vopt.seed, "seed for the stochastic checks");

    auto* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep, long CSV");
    add_model_flags(sweep);
    sweep->add_option("--x0t", x0_list, "comma list or start:stop:step");
    sweep->add_option("--kct", kc_list, "comma list or start:stop:step");
    sweep->add_option("--at", third_list, "comma list (ebc)");
    sweep->add_option("--tau", third_list, "comma list (gauss)");
    sweep->add_option("--tenors", tenor_spec, "start:stop:step in years");
    sweep->add_option("--out", out_path, "output CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!config_path.empty()) apply_config_overrides(config_path, cs, sc);
        if (curve->parsed()) return cmd_curve(cs, tenor_spec, out_path);
        if (fit->parsed()) return cmd_fit(cs.model, data_path, sc, out_prefix);
        if (val->parsed()) {
            for (const auto& s : skips) {
                if (s == "mc") vopt.skip_mc = true;
                if (s == "pde") vopt.skip_pde = true;
            }
            return cmd_validate(criteria, vopt);
        }
        if (sweep->parsed())
            return cmd_sweep(cs.model, x0_list, kc_list, third_list, tenor_spec, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
