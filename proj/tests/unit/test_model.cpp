#include <doctest.h>

#include <cmath>

#include "tistop/errors.hpp"
#include "tistop/problem.hpp"

using namespace tistop;

TEST_CASE("put and capped identity payoffs") {
    const PayoffSpec put = PayoffSpec::put(2.0);
    CHECK(put(1.5) == doctest::Approx(0.5));
    CHECK(put(3.0) == 0.0);
    CHECK(put.d1(2.0, Side::Left) == -1.0);
    CHECK(put.d1(2.0, Side::Right) == 0.0);
    CHECK(put.is_kink(2.0));
    const PayoffSpec cap = PayoffSpec::capped_identity(1.0);
    CHECK(cap(0.3) == doctest::Approx(0.3));
    CHECK(cap(4.0) == doctest::Approx(1.0));
    CHECK(cap.d1(1.0, Side::Left) == 1.0);
    CHECK(cap.d1(1.0, Side::Right) == 0.0);
    CHECK_THROWS_AS(PayoffSpec::put(0.0), ParameterError);
}

TEST_CASE("table payoffs interpolate and restart at kinks") {
    const PayoffSpec t = PayoffSpec::table({0.0, 1.0, 2.0, 3.0}, {0.0, 1.0, 1.0, 0.5}, {1.0});
    CHECK(t(0.0) == doctest::Approx(0.0));
    CHECK(t(1.0) == doctest::Approx(1.0));
    CHECK(t(3.0) == doctest::Approx(0.5));
    CHECK(t.is_kink(1.0));
    CHECK(t(10.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(PayoffSpec::table({0.0, 1.0}, {0.0, -1.0}, {}), ParameterError);
    CHECK_THROWS_AS(PayoffSpec::table({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0}, {0.5}), ParameterError);
}

TEST_CASE("negative payoffs fail validation") {
    const PayoffSpec neg = PayoffSpec::custom([](double x) { return x; }, [](double, Side) { return 1.0; },
                                              [](double, Side) { return 0.0; }, {});
    CHECK_THROWS_AS(neg.validate(Interval::real_line()), ParameterError);
    CHECK_NOTHROW(neg.validate(Interval::positive_half_line()));
}

TEST_CASE("diffusion families") {
    const DiffusionSpec bm = DiffusionSpec::brownian(0.2, 1.5);
    CHECK(bm.kind() == DiffusionKind::BrownianMotion);
    CHECK(bm.mu(7.0) == 0.2);
    CHECK(bm.sigma(-3.0) == 1.5);
    CHECK(bm.state_space() == Interval::real_line());
    const DiffusionSpec gbm = DiffusionSpec::geometric(0.05, 0.3);
    CHECK(gbm.mu(2.0) == doctest::Approx(0.1));
    CHECK(gbm.sigma(2.0) == doctest::Approx(0.6));
    CHECK(gbm.state_space() == Interval::positive_half_line());
    CHECK(gbm.as_custom().kind() == DiffusionKind::Custom);
    CHECK(gbm.as_custom().sigma(2.0) == doctest::Approx(0.6));
    CHECK_THROWS_AS(DiffusionSpec::brownian(0.0, 0.0), ParameterError);
    CHECK_THROWS_AS(DiffusionSpec::custom([](double) { return 0.0; }, [](double) { return 0.0; }, Interval::real_line())
                        .validate(),
                    ParameterError);
}

TEST_CASE("sample grids stay inside the open state space") {
    for (const Interval& X : {Interval::real_line(), Interval::positive_half_line(), Interval::open(-1.0, 2.0)}) {
        const auto g = sample_grid(X, 50);
        CHECK(g.size() >= 50);
        for (double x : g) CHECK(X.interior_contains(x));
        CHECK(std::is_sorted(g.begin(), g.end()));
    }
}

TEST_CASE("problem instances combine the parts") {
    const ProblemInstance p(DiffusionSpec::geometric(0.05, 0.3), DiscountSpec::hyperbolic(0.1), PayoffSpec::put(1.0),
                            "put");
    CHECK(p.label() == "put");
    CHECK(p.state_space() == Interval::positive_half_line());
    CHECK(p.with_custom_diffusion().diffusion().kind() == DiffusionKind::Custom);
    CHECK(p.with_discount(DiscountSpec::exponential(0.1)).discount().kind_name() == "exponential");
}
