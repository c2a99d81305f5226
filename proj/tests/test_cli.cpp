#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "killdiff/contact.hpp"
#include "killdiff/io.hpp"
#include "killdiff/perturb.hpp"

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string out_file = "/tmp/killdiff_cli_out.txt";
    const std::string cmd =
        std::string(KILLDIFF_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
    const int rc = std::system(cmd.c_str());
    std::ifstream f(out_file);
    std::stringstream ss;
    ss << f.rdbuf();
    return {WEXITSTATUS(rc), ss.str()};
}

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("curve subcommand emits the contact-model CSV", "[cli]") {
    auto r = run_cli("curve --model ebc --x0t 3.34 --kct 0.03 --at 0.21 --tenors 1:30:1");
    REQUIRE(r.exit_code == 0);
    CHECK(count_lines(r.out) == 31);  // header + 30 rows

    std::stringstream ss(r.out);
    auto ts = killdiff::read_term_structure(ss);
    REQUIRE(ts.size() == 30);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double ref = killdiff::contact::ebc_pd_sharp(
            ts.tenors[i], killdiff::contact::ContactParams::tilde(3.34, 0.03, 0.21));
        CHECK(ts.pd[i] == Catch::Approx(ref).margin(1e-11));
    }
}

TEST_CASE("curve with zero killing is identically zero", "[cli]") {
    auto r = run_cli("curve --model ebc --x0t 1 --kct 0 --at 0.2 --tenors 1:5:1");
    REQUIRE(r.exit_code == 0);
    std::stringstream ss(r.out);
    auto ts = killdiff::read_term_structure(ss);
    for (double p : ts.pd) CHECK(p == 0.0);
}

TEST_CASE("curve gauss matches the closed form", "[cli]") {
    auto r = run_cli("curve --model gauss --x0t 2.35 --kct 0.06 --tau 0.63 --tenors 1:30:1");
    REQUIRE(r.exit_code == 0);
    std::stringstream ss(r.out);
    auto ts = killdiff::read_term_structure(ss);
    for (std::size_t i = 0; i < ts.size(); ++i)
        CHECK(ts.pd[i] ==
              Catch::Approx(killdiff::perturb::gaussian_pd(ts.tenors[i], 2.35, 0.06, 0.63))
                  .margin(1e-11));
}

TEST_CASE("physical-unit flags rescale through sigma", "[cli]") {
    auto tld = run_cli("curve --model ebc --x0t 3.34 --kct 0.03 --at 0.21 --tenors 1:5:1");
    auto phy = run_cli(
        "curve --model ebc --sigma 0.5 --x0 1.67 --kc 0.015 --mu 0.23 --tenors 1:5:1");
    REQUIRE(phy.exit_code == 0);
    CHECK(tld.out == phy.out);
}

TEST_CASE("curve output is byte-identical across runs", "[cli]") {
    const std::string args =
        "curve --model gauss --x0t 1.2 --kct 0.1 --tau 0.2 --tenors 0.5:20:0.5";
    auto a = run_cli(args);
    auto b = run_cli(args);
    CHECK(a.out == b.out);
}

TEST_CASE("curve rejects bad flags with exit 2", "[cli]") {
    CHECK(run_cli("curve --model nosuch").exit_code == 2);
    CHECK(run_cli("curve --model ebc --tenors 5:1:1").exit_code == 2);
    CHECK(run_cli("nosuchcommand").exit_code == 2);
}

TEST_CASE("config file overrides flags", "[cli]") {
    {
        std::ofstream f("/tmp/killdiff_cfg.txt");
        f << "x0t=2.0\n";
    }
    auto with_cfg = run_cli(
        "curve --model ebc --x0t 1 --kct 0.1 --at 0.1 --tenors 1:3:1 "
        "--config /tmp/killdiff_cfg.txt");
    auto direct = run_cli("curve --model ebc --x0t 2 --kct 0.1 --at 0.1 --tenors 1:3:1");
    REQUIRE(with_cfg.exit_code == 0);
    CHECK(with_cfg.out == direct.out);
}

TEST_CASE("fit round-trips a synthetic lowest-grade curve", "[cli]") {
    {
        killdiff::DefaultCurve c;
        c.label = "ccc";
        for (double t = 0.25; t <= 30.0 + 1e-9; t += 0.25)
            c.points.emplace_back(
                t, killdiff::contact::ebc_pd_sharp(
                       t, killdiff::contact::ContactParams::tilde(0.24, 0.42, 0.34)));
        std::ofstream f("/tmp/killdiff_fit_data.csv");
        killdiff::write_default_curve(f, c);
    }
    auto r = run_cli(
        "fit --model ebc --data /tmp/killdiff_fit_data.csv --seed 1 "
        "--out-prefix /tmp/killdiff_fit");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("rho=") != std::string::npos);

    std::ifstream pf("/tmp/killdiff_fit.params");
    REQUIRE(pf.good());
    auto kv = killdiff::read_key_values(pf);
    double x0t = 0, kct = 0, at = 0;
    for (auto& [k, v] : kv) {
        if (k == "x0t") x0t = v;
        if (k == "kct") kct = v;
        if (k == "at") at = v;
    }
    CHECK(std::abs(x0t - 0.24) / 0.24 < 0.05);
    CHECK(std::abs(kct - 0.42) / 0.42 < 0.05);
    CHECK(std::abs(at - 0.34) / 0.34 < 0.05);

    std::ifstream tf("/tmp/killdiff_fit.trace.csv");
    REQUIRE(tf.good());
    std::ifstream cf("/tmp/killdiff_fit.curve.csv");
    REQUIRE(cf.good());
    auto fitted = killdiff::read_term_structure(cf);
    CHECK(fitted.size() == 120);
}

TEST_CASE("fit with zero trials echoes the grid-scan start", "[cli]") {
    auto r = run_cli("fit --model ebc --data /tmp/killdiff_fit_data.csv --trials 0");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("x0t=") != std::string::npos);
}

TEST_CASE("fit fails cleanly on bad input", "[cli]") {
    { std::ofstream f("/tmp/killdiff_empty.csv"); }
    CHECK(run_cli("fit --model ebc --data /tmp/killdiff_empty.csv").exit_code == 2);
    {
        std::ofstream f("/tmp/killdiff_bad.csv");
        f << "tenor_years,pd\n1,0.1\noops\n";
    }
    auto r = run_cli("fit --model ebc --data /tmp/killdiff_bad.csv");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("line 3") != std::string::npos);
    CHECK(run_cli("fit --model ebc --data /tmp/no_such_file.csv").exit_code == 2);
}

TEST_CASE("sweep produces the long-format Cartesian table", "[cli]") {
    auto r = run_cli("sweep --model ebc --x0t 1,3 --kct 0.03,0.3 --at 0.2 --tenors 1:10:1");
    REQUIRE(r.exit_code == 0);
    CHECK(count_lines(r.out) == 41);  // header + 2*2*1*10

    SECTION("pd is non-decreasing in the killing strength") {
        std::stringstream ss(r.out);
        std::string line;
        std::getline(ss, line);  // header
        std::map<std::pair<double, double>, double> by_key_weak, by_key_strong;
        while (std::getline(ss, line)) {
            double x0, kc, at, t, p;
            std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &x0, &kc, &at, &t, &p);
            auto& slot = kc < 0.1 ? by_key_weak : by_key_strong;
            slot[{x0, t}] = p;
        }
        for (auto& [key, weak_p] : by_key_weak)
            CHECK(by_key_strong.at(key) >= weak_p);
    }
}

TEST_CASE("single-point sweep equals the curve row", "[cli]") {
    auto sw = run_cli("sweep --model ebc --x0t 1.5 --kct 0.2 --at 0.3 --tenors 2:2:1");
    auto cv = run_cli("curve --model ebc --x0t 1.5 --kct 0.2 --at 0.3 --tenors 2:2:1");
    std::stringstream s1(sw.out), s2(cv.out);
    std::string l1, l2;
    std::getline(s1, l1);
    std::getline(s1, l1);  // first data row of sweep
    std::getline(s2, l2);
    std::getline(s2, l2);  // first data row of curve
    const auto p_sweep = l1.substr(l1.rfind(',') + 1);
    std::stringstream cs(cv.out);
    auto ts = killdiff::read_term_structure(cs);
    CHECK(std::stod(p_sweep) == Catch::Approx(ts.pd[0]).epsilon(1e-12));
}

TEST_CASE("sweep rejects oversized grids", "[cli]") {
    CHECK(run_cli("sweep --model ebc --x0t 0.1:10:0.01 --kct 0.01:1:0.01 "
                  "--at 0.2 --tenors 1:30:1")
              .exit_code == 2);
}

TEST_CASE("validate subcommand reports and sets exit codes", "[cli]") {
    auto ok = run_cli("validate --criteria 7");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("PASS 07") != std::string::npos);

    SECTION("documented-red criterion fails with exit 1") {
        auto bad = run_cli("validate --criteria 6");
        CHECK(bad.exit_code == 1);
        CHECK(bad.out.find("FAIL 06") != std::string::npos);
    }
    SECTION("skipping the mc route reports SKIP and passes") {
        auto sk = run_cli("validate --criteria 5 --skip mc");
        CHECK(sk.exit_code == 0);
        CHECK(sk.out.find("SKIP") != std::string::npos);
    }
    SECTION("a deliberately coarse solver grid fails the triangle") {
        auto coarse = run_cli("validate --criteria 1 --pde-nx 250 --skip mc");
        CHECK(coarse.exit_code == 1);
        CHECK(coarse.out.find("FAIL 01") != std::string::npos);
    }
}
