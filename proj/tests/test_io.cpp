#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "killdiff/io.hpp"

using namespace killdiff;

TEST_CASE("term structure round-trips through CSV", "[io]") {
    std::vector<double> t, p;
    for (int i = 1; i <= 12; ++i) {
        t.push_back(0.5 * i);
        p.push_back(1.0 - std::exp(-0.07 * 0.5 * i));
    }
    auto ts = curve_from_pd(t, p);
    ts.stderr_pd = std::vector<double>(ts.size(), 1e-4);

    std::stringstream ss;
    write_term_structure(ss, ts);
    auto back = read_term_structure(ss);

    REQUIRE(back.size() == ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        CHECK(back.tenors[i] == Catch::Approx(ts.tenors[i]).epsilon(1e-12));
        CHECK(back.pd[i] == Catch::Approx(ts.pd[i]).epsilon(1e-11));
        CHECK(back.hazard[i] == Catch::Approx(ts.hazard[i]).epsilon(1e-11));
    }
    REQUIRE(back.stderr_pd.has_value());

    SECTION("byte-identical on rewrite") {
        std::stringstream s2;
        write_term_structure(s2, back);
        std::stringstream s1;
        write_term_structure(s1, ts);
        CHECK(s1.str() == s2.str());
    }
}

TEST_CASE("minimal two-column CSV rebuilds derived columns", "[io]") {
    std::stringstream ss("tenor_years,pd\n1,0\n2,0.01\n3,0.02\n");
    auto ts = read_term_structure(ss);
    CHECK(ts.survival[1] == Catch::Approx(0.99));
    CHECK(ts.cum_hazard.size() == 3);
}

TEST_CASE("default curve CSV keeps the label", "[io]") {
    DefaultCurve c;
    c.label = "BBB";
    c.points = {{1.0, 0.002}, {2.0, 0.006}, {5.0, 0.02}};
    std::stringstream ss;
    write_default_curve(ss, c);
    auto back = read_default_curve(ss);
    CHECK(back.label == "BBB");
    REQUIRE(back.points.size() == 3);
    CHECK(back.points[2].second == Catch::Approx(0.02));
}

TEST_CASE("CSV readers report the offending line", "[io]") {
    std::stringstream bad("tenor_years,pd\n1,0.1\nnot,a,number\n");
    CHECK_THROWS_WITH(read_default_curve(bad), Catch::Matchers::ContainsSubstring("line 3"));
    std::stringstream empty("");
    CHECK_THROWS_AS(read_default_curve(empty), std::runtime_error);
    std::stringstream wrong_header("time,pd\n1,0\n");
    CHECK_THROWS_AS(read_term_structure(wrong_header), std::runtime_error);
}

TEST_CASE("key=value block round-trips", "[io]") {
    std::vector<std::pair<std::string, double>> kv = {
        {"x0t", 3.34}, {"kct", 0.03}, {"at", 0.21}};
    std::stringstream ss;
    write_key_values(ss, kv);
    auto back = read_key_values(ss);
    REQUIRE(back.size() == 3);
    CHECK(back[0].first == "x0t");
    CHECK(back[0].second == 3.34);
    CHECK(back[2].second == 0.21);

    std::stringstream bad("x0t 3.34\n");
    CHECK_THROWS_WITH(read_key_values(bad), Catch::Matchers::ContainsSubstring("line 1"));
}
