#include <doctest.h>

#include <cmath>

#include "tistop/discount.hpp"
#include "tistop/errors.hpp"

using namespace tistop;

TEST_CASE("closed-form discount values") {
    CHECK(DiscountSpec::exponential(0.2).delta(3.0) == doctest::Approx(std::exp(-0.6)).epsilon(1e-15));
    CHECK(DiscountSpec::hyperbolic(0.5).delta(2.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(DiscountSpec::generalized_hyperbolic(1.0, 2.0).delta(1.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(DiscountSpec::hyperbolic(0.5).delta_prime0() == doctest::Approx(-0.5));
    CHECK(DiscountSpec::exponential(0.2).delta_prime(1.0) == doctest::Approx(-0.2 * std::exp(-0.2)));
}

TEST_CASE("mixture discretisation reproduces the hyperbolic discount") {
    for (double beta : {0.05, 0.5, 3.0}) {
        const DiscountSpec d = DiscountSpec::hyperbolic(beta);
        double wsum = 0.0;
        for (const MixtureNode& n : d.mixture()) wsum += n.weight;
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
        for (double t : {0.0, 1e-4, 0.3, 5.0, 60.0})
            CHECK(std::fabs(d.mixture_delta(t) - d.delta(t)) <= 1e-10 * d.delta(t));
    }
}

TEST_CASE("mixture of the generalized hyperbolic discount") {
    const DiscountSpec d = DiscountSpec::generalized_hyperbolic(0.7, 3.0);
    for (double t : {0.0, 0.01, 1.0, 30.0}) CHECK(std::fabs(d.mixture_delta(t) - d.delta(t)) <= 1e-10 * d.delta(t));
}

TEST_CASE("explicit mixtures keep their nodes") {
    const DiscountSpec d(PseudoExponential{{0.25, 0.75}, {0.1, 2.0}});
    CHECK(d.mixture().size() == 2);
    CHECK(d.delta(1.0) == doctest::Approx(0.25 * std::exp(-0.1) + 0.75 * std::exp(-2.0)));
    CHECK(d.delta_prime0() == doctest::Approx(-(0.25 * 0.1 + 0.75 * 2.0)));
}

TEST_CASE("invalid discount parameters raise") {
    CHECK_THROWS_AS(DiscountSpec::hyperbolic(-1.0), ParameterError);
    CHECK_THROWS_AS(DiscountSpec(PseudoExponential{{0.5, 0.4}, {0.1, 1.0}}), ParameterError);
    CHECK_THROWS_AS(DiscountSpec(PseudoExponential{{0.5}, {0.1, 1.0}}), ParameterError);
}

TEST_CASE("log sub-additivity and derivative inequalities hold for the families") {
    std::vector<double> grid{0.0, 1e-3, 0.1, 1.0, 10.0, 100.0};
    std::vector<std::pair<double, double>> pairs;
    for (double a : grid)
        for (double b : grid) pairs.emplace_back(a, b);
    for (const DiscountSpec& d : {DiscountSpec::exponential(0.3), DiscountSpec::hyperbolic(1.0),
                                  DiscountSpec::generalized_hyperbolic(0.5, 2.0)}) {
        const SubadditivityReport s = discount_check_log_subadditive(d, pairs);
        CHECK(s.holds);
        CHECK(s.min_gap >= -1e-12);
        CHECK(discount_derivative_inequalities(d, grid).holds);
    }
}

TEST_CASE("gamma mixture nodes integrate e^{-rt}") {
    // Gamma(2, 1): E[e^{-r t}] = (1 + t)^{-2}
    const auto nodes = gamma_mixture_nodes(2.0, 1.0, MixtureOptions{});
    for (double t : {0.0, 0.5, 4.0}) {
        double s = 0.0;
        for (const MixtureNode& n : nodes) s += n.weight * std::exp(-n.rate * t);
        CHECK(s == doctest::Approx(1.0 / ((1.0 + t) * (1.0 + t))).epsilon(1e-10));
    }
}
