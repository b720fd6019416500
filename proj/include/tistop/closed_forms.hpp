#pragma once

#include "tistop/problem.hpp"

namespace tistop {

struct LambdaNu {
    double lambda;
    double nu;
};

/// nu = mu / sigma^2 - 1/2 and lambda = int_0^inf e^{-s} (sqrt(nu^2 + 2 beta s / sigma^2) + nu) ds.
LambdaNu lambda_nu(double mu, double sigma, double beta);

/// J'(a+, (0,a] U [b,inf)) + 1 for the GBM put problem with hyperbolic discount;
/// the region is mild iff the value is >= 0. b = +inf gives the one-ray case.
double type2_mild_condition(double mu, double sigma, double beta, double K, double a, double b);
/// Same, reading mu, sigma, beta, K from a GBM / hyperbolic / put instance.
double type2_mild_condition(const ProblemInstance& inst, double a, double b);

struct AbcdCheck {
    double lhs;
    double ratio;  // c / d
    double rhs;
    bool satisfied;  // lhs < c/d < rhs
};

/// Two-sided bound on c/d for the Brownian two-point example with delta = 1/(1+beta t).
AbcdCheck check_condition_abcd(double beta, double a, double b, double c, double d);

}  // namespace tistop
