#include <doctest.h>

#include <cmath>
#include <sstream>

#include "support.hpp"
#include "tistop/report_io.hpp"

using namespace tistop;

TEST_CASE("number formatting") {
    CHECK(fmt(0.1) == "0.1");
    CHECK(fmt(1e-20) == "1e-20");
    CHECK(fmt(kInf) == "inf");
    CHECK(num(std::nan("")).is_null());
    CHECK(end_json(-kInf) == "-inf");
    CHECK(end_json(2.0) == 2.0);
}

TEST_CASE("report JSON carries the stable fields") {
    const ProblemInstance p(DiffusionSpec::geometric(0.05, 0.3), DiscountSpec::hyperbolic(0.1), PayoffSpec::put(1.0));
    const ValueEvaluator e(p, testing::region({testing::positive_to(0.5)}, p.state_space()));
    const nlohmann::json j = to_json(classify(e));
    for (const char* k : {"region", "verdicts", "witnesses", "smooth_fit", "fraktur_S", "tolerances", "notes"})
        CHECK(j.contains(k));
    CHECK(j["verdicts"]["is_mild"] == false);
    CHECK(j["region"]["pieces"][0]["lo"] == 0.0);
    CHECK(j["region"]["pieces"][0]["hi"] == 0.5);
    CHECK(j["region"]["state_space"]["hi"] == "+inf");
    CHECK(j["smooth_fit"][0]["x"] == 0.5);
    CHECK(j["tolerances"]["tol_eq"] == 1e-7);
}

TEST_CASE("profile CSV layout") {
    const ProblemInstance p(DiffusionSpec::geometric(0.05, 0.3), DiscountSpec::hyperbolic(0.1), PayoffSpec::put(1.0));
    const ValueEvaluator e(p, testing::region({testing::positive_to(0.5)}, p.state_space()));
    const std::string csv = profile_csv(e, 20);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,f,J,gap,vx_left,vx_right,lv_left,lv_right");
    int rows = 0;
    bool has_boundary = false;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 7);
        if (line.rfind("0.5,", 0) == 0) has_boundary = true;
    }
    CHECK(rows >= 20);
    CHECK(has_boundary);
    CHECK(csv.find('\r') == std::string::npos);
    CHECK(csv == profile_csv(e, 20));
}

TEST_CASE("Monte Carlo estimates serialise") {
    McEstimate m;
    m.mean = 0.25;
    m.std_error = 0.01;
    m.n = 100;
    m.target = "J";
    const nlohmann::json j = to_json(m);
    CHECK(j["mean"] == 0.25);
    CHECK(j["n"] == 100);
    CHECK(j["target"] == "J");
}
