#include <doctest.h>

#include "tistop/config.hpp"
#include "tistop/errors.hpp"

using namespace tistop;
using nlohmann::json;

namespace {

json base() {
    return json::parse(R"({
        "diffusion": {"kind": "gbm", "mu": 0.05, "sigma": 0.3},
        "discount": {"kind": "hyperbolic", "params": {"beta": 0.1}},
        "payoff": {"kind": "put", "params": {"K": 1.0}},
        "region": {"pieces": ["(0,0.5]"]}
    })");
}

}  // namespace

TEST_CASE("a complete configuration parses") {
    const Config c = parse_config(base());
    REQUIRE(c.instance.has_value());
    CHECK(c.instance->diffusion().kind() == DiffusionKind::GeometricBrownianMotion);
    REQUIRE(c.region.has_value());
    CHECK((*c.region)[0] == Interval{0.0, 0.5, false, true});
    CHECK(c.mc.sim.paths == SimConfig{}.paths);
}

TEST_CASE("missing and unknown keys are config errors") {
    json j = base();
    j.erase("discount");
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = base();
    j["colour"] = "blue";
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = base();
    j["mc"] = {{"pathz", 10}};
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = base();
    j["discount"]["params"]["beta"] = "fast";
    CHECK_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("overrides set nested keys") {
    json j = base();
    apply_override(j, "mc.paths=1234");
    apply_override(j, "label=run one");
    apply_override(j, "discount.params.beta=0.2");
    const Config c = parse_config(j);
    CHECK(c.mc.sim.paths == 1234);
    CHECK(c.instance->label() == "run one");
    CHECK(c.instance->discount().delta(1.0) == doctest::Approx(1.0 / 1.2));
    CHECK_THROWS_AS(apply_override(j, "no-equals-sign"), ConfigError);
}

TEST_CASE("interval syntaxes") {
    const Interval X = Interval::real_line();
    CHECK(parse_interval("[1, 2]", X, "p") == Interval::closed(1, 2));
    CHECK(parse_interval("[3,+inf)", X, "p") == Interval{3.0, kInf, true, false});
    CHECK(parse_interval(json::array({1.0, 2.0}), X, "p") == Interval::closed(1, 2));
    CHECK(parse_interval(json::array({"-inf", 0.0}), X, "p") == Interval{-kInf, 0.0, false, true});
    CHECK(parse_interval(json{{"lo", 0.0}, {"hi", 1.0}, {"lo_closed", false}, {"hi_closed", true}}, X, "p") ==
          Interval{0.0, 1.0, false, true});
    CHECK_THROWS_AS(parse_interval("1..2", X, "p"), ConfigError);
    CHECK(parse_extended("+inf", "v") == kInf);
    CHECK(parse_extended(json(2.5), "v") == 2.5);
}

TEST_CASE("custom diffusion coefficients") {
    json j = base();
    j["diffusion"] = json::parse(R"({"kind": "custom", "mu": {"kind": "poly", "coeffs": [0, -0.5]},
                                     "sigma": {"kind": "sin", "amp": 0.1, "freq": 1, "phase": 0, "offset": 1},
                                     "domain": ["-inf", "+inf"]})");
    j["region"]["pieces"] = json::array({"[0,1]"});
    const Config c = parse_config(j);
    CHECK(c.instance->diffusion().kind() == DiffusionKind::Custom);
    CHECK(c.instance->diffusion().mu(2.0) == doctest::Approx(-1.0));
    CHECK(c.instance->diffusion().sigma(0.0) == doctest::Approx(1.0));
}

TEST_CASE("threshold and mc sections") {
    json j = base();
    j["threshold"] = {{"family", "two_point"}, {"anchor", 1.05}, {"bracket", {0.5, 0.9}}};
    j["mc"] = {{"paths", 500}, {"checks", {"J", "local_time"}}, {"eps", {1e-3}}, {"scheme", "euler"}, {"seed", 9}};
    const Config c = parse_config(j);
    REQUIRE(c.threshold.has_value());
    CHECK(c.threshold->family == ThresholdFamily::TwoPoint);
    CHECK(*c.threshold->options.anchor == 1.05);
    CHECK(c.mc.checks.size() == 2);
    CHECK(c.mc.sim.scheme == Scheme::EulerMaruyama);
    CHECK(c.mc.sim.seed == 9);
    j["mc"]["checks"] = {"telepathy"};
    CHECK_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("unreadable files") {
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}
