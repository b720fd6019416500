#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tistop/errors.hpp"
#include "tistop/valuation.hpp"

using namespace tistop;
using testing::region;

TEST_CASE("J equals the payoff on S and mixes the resolvent outside") {
    const ProblemInstance bm(DiffusionSpec::brownian(0.0, 1.0), DiscountSpec::exponential(0.5), PayoffSpec::put(2.0));
    const ValueEvaluator e(bm, region({Interval::point(1.0)}, bm.state_space()));
    CHECK(e.J(1.0) == doctest::Approx(1.0));
    // exponential discount: J = f(1) exp(-|x - 1|)
    for (double x : {-1.0, 0.5, 3.0}) CHECK(e.J(x) == doctest::Approx(std::exp(-std::fabs(x - 1.0))).epsilon(1e-12));
    CHECK(e.gap(3.0) == doctest::Approx(std::exp(-2.0)));
}

TEST_CASE("V(t, x) scales the payoff on S by delta(t)") {
    const ProblemInstance p(DiffusionSpec::geometric(0.05, 0.3), DiscountSpec::hyperbolic(0.1), PayoffSpec::put(1.0));
    const ValueEvaluator e(p, region({testing::positive_to(0.5)}, p.state_space()));
    CHECK(e.V(2.0, 0.3) == doctest::Approx(0.7 / 1.2));
    CHECK(e.V(0.0, 0.3) == doctest::Approx(0.7));
    CHECK_THROWS_AS(e.V(-1.0, 0.3), DomainError);
}

TEST_CASE("generator vanishes in the continuation region") {
    const ProblemInstance p(DiffusionSpec::geometric(0.05, 0.3), DiscountSpec::hyperbolic(0.1), PayoffSpec::put(1.0));
    const ValueEvaluator e(p, region({testing::positive_to(0.5)}, p.state_space()));
    for (double x : {0.6, 1.0, 2.0}) CHECK(std::fabs(e.LV(x, Side::Left)) <= 1e-8);
}

TEST_CASE("generator on S is delta'(0) f + L f") {
    const double beta = 0.1, mu = 0.05, s = 0.3;
    const ProblemInstance p(DiffusionSpec::geometric(mu, s), DiscountSpec::hyperbolic(beta), PayoffSpec::put(1.0));
    const ValueEvaluator e(p, region({testing::positive_to(0.5)}, p.state_space()));
    const double x = 0.3;
    CHECK(e.LV(x, Side::Left) == doctest::Approx(-beta * (1.0 - x) - mu * x).epsilon(1e-12));
}

TEST_CASE("one-sided derivatives on S come from the payoff") {
    const ProblemInstance p(DiffusionSpec::geometric(0.05, 0.3), DiscountSpec::hyperbolic(0.1), PayoffSpec::put(1.0));
    const ValueEvaluator e(p, region({testing::positive_to(0.5)}, p.state_space()));
    CHECK(e.vx(0.5, Side::Left) == -1.0);
    CHECK(e.vx(0.5, Side::Right) < 0.0);
    CHECK(e.max_residual() == 0.0);
}
