#pragma once

#include <functional>
#include <vector>

namespace tistop::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
Rule gauss_legendre(std::size_t n);

/// Adaptive Gauss-Kronrod integral on [a, b]; either end may be infinite.
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12,
                 double* error_estimate = nullptr);

/// Integral of e^{-s} g(s) over [0, inf), split at s = 1 and mapped so that a
/// sqrt-type singularity at s = 0 is resolved (s = u^2 on [0, 1]).
double integrate_exp_weight(const std::function<double(double)>& g, double rel_tol = 1e-12);

}  // namespace tistop::quad
