#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tistop/chebyshev.hpp"
#include "tistop/errors.hpp"
#include "tistop/resolvent.hpp"

using namespace tistop;
using testing::region;

namespace {

PayoffSpec quadratic() {
    return PayoffSpec::custom([](double x) { return 1.0 + x * x; }, [](double x, Side) { return 2.0 * x; },
                              [](double, Side) { return 2.0; }, {});
}

}  // namespace

TEST_CASE("collocation solves u'' = u") {
    const auto s = cheb::solve([](double) { return cheb::Coefficients{1.0, 0.0, -1.0}; }, 0.0, 1.0,
                               {cheb::BoundaryCondition::Dirichlet, 1.0},
                               {cheb::BoundaryCondition::Dirichlet, std::exp(1.0)}, {});
    for (double y : {0.1, 0.5, 0.9}) {
        CHECK(s.value(y) == doctest::Approx(std::exp(y)).epsilon(1e-12));
        CHECK(s.derivative(y) == doctest::Approx(std::exp(y)).epsilon(1e-10));
    }
    CHECK(s.residual() <= 1e-8);
}

TEST_CASE("collocation reports failure when the node budget is too small") {
    CHECK_THROWS_AS(cheb::solve([](double) { return cheb::Coefficients{1e-4, 1.0, 0.0}; }, 0.0, 1.0,
                                {cheb::BoundaryCondition::Dirichlet, 0.0}, {cheb::BoundaryCondition::Dirichlet, 1.0},
                                {8, 16, 1e-12}),
                    SolverError);
}

TEST_CASE("Brownian one-point resolvent") {
    const ProblemInstance bm(DiffusionSpec::brownian(0.0, 1.0), DiscountSpec::hyperbolic(0.5), PayoffSpec::put(2.0));
    const ResolventKernel k(bm, region({Interval::point(1.0)}, bm.state_space()));
    for (double r : {0.0, 0.3, 4.0})
        for (double x : {-2.0, 0.5, 1.0, 3.0}) {
            const double expect = std::exp(-std::fabs(x - 1.0) * std::sqrt(2.0 * r));
            CHECK(k.value(x, r) == doctest::Approx(expect).epsilon(1e-12));
        }
    CHECK(k.dx(1.0, Side::Left, 0.5) == doctest::Approx(1.0));
    CHECK(k.dx(1.0, Side::Right, 0.5) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(k.value(0.0, -1.0), ParameterError);
}

TEST_CASE("geometric Brownian hitting transform") {
    // E^x[e^{-r tau_a}] = (x / a)^{-p} for x > a with p the positive root.
    const double mu = 0.05, s = 0.3, r = 0.2, a = 0.5;
    const ProblemInstance gbm(DiffusionSpec::geometric(mu, s), DiscountSpec::hyperbolic(0.1), PayoffSpec::put(1.5));
    const ResolventKernel k(gbm, region({testing::positive_to(a)}, gbm.state_space()));
    const double nu = mu / (s * s) - 0.5;
    const double p = nu + std::sqrt(nu * nu + 2.0 * r / (s * s));
    for (double x : {0.6, 1.0, 3.0}) CHECK(k.value(x, r) == doctest::Approx(std::pow(x / a, -p)).epsilon(1e-12));
}

TEST_CASE("numerical resolvent matches the closed forms") {
    const ProblemInstance bm(DiffusionSpec::brownian(-0.2, 0.8), DiscountSpec::hyperbolic(0.5), quadratic());
    const StoppingRegion S = region({Interval::closed(-1.0, 0.0), Interval::closed(1.0, 1.5)}, bm.state_space());
    const ResolventKernel cf(bm, S), num(bm.with_custom_diffusion(), S);
    CHECK(cf.uses_closed_form());
    CHECK_FALSE(num.uses_closed_form());
    for (double r : {0.0, 0.1, 5.0})
        for (double x : {-4.0, -1.5, 0.3, 0.7, 2.0, 6.0}) {
            CHECK(num.value(x, r) == doctest::Approx(cf.value(x, r)).epsilon(1e-9));
            CHECK(num.dx(x, Side::Left, r) == doctest::Approx(cf.dx(x, Side::Left, r)).epsilon(1e-7));
        }
}

TEST_CASE("resolvent is continuous at boundary points") {
    const ProblemInstance p(DiffusionSpec::custom([](double x) { return -0.5 * x; }, [](double) { return 1.0; },
                                                  Interval::real_line()),
                            DiscountSpec::hyperbolic(0.3), quadratic());
    const StoppingRegion S = region({Interval::closed(-1.0, -0.5), Interval::point(1.0)}, p.state_space());
    const ResolventKernel k(p, S);
    for (const BoundaryPoint& b : S.boundary())
        for (double h : {-1e-9, 1e-9}) CHECK(k.value(b.x + h, 0.4) == doctest::Approx(1.0 + b.x * b.x).epsilon(1e-7));
}

TEST_CASE("components without stopping ends carry zero value") {
    const ProblemInstance bm(DiffusionSpec::brownian(0.0, 1.0), DiscountSpec::hyperbolic(0.5), PayoffSpec::put(1.0));
    const ResolventKernel k(bm, StoppingRegion::empty(bm.state_space()));
    CHECK(k.value(0.3, 0.1) == 0.0);
}
