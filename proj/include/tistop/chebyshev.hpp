#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace tistop::cheb {

/// Coefficients of a2(y) u'' + a1(y) u' + a0(y) u = 0 at y.
struct Coefficients {
    double a2, a1, a0;
};
using OdeCoefficients = std::function<Coefficients(double)>;

/// u = value (Dirichlet) or u' = value * u (Robin).
struct BoundaryCondition {
    enum Kind { Dirichlet, Robin } kind;
    double value;
};

struct BvpOptions {
    std::size_t nodes = 16;
    std::size_t max_nodes = 1024;
    double tol = 1e-8;
};

/// Polynomial collocation solution on [lo, hi].
class Solution {
public:
    Solution() = default;
    Solution(double lo, double hi, std::vector<double> y, std::vector<double> u, std::vector<double> du, double residual);

    double value(double y) const { return interpolate(u_, y); }
    double derivative(double y) const { return interpolate(du_, y); }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    std::size_t size() const { return y_.size(); }
    /// Largest relative equation residual at the midpoints between nodes.
    double residual() const { return residual_; }

private:
    double interpolate(const std::vector<double>& data, double y) const;

    double lo_ = 0.0, hi_ = 1.0;
    std::vector<double> y_, t_, u_, du_;
    double residual_ = 0.0;
};

/// Chebyshev-Lobatto collocation with node doubling until the midpoint residual
/// drops below opts.tol. Throws SolverError when max_nodes is reached first.
Solution solve(const OdeCoefficients& ode, double lo, double hi, BoundaryCondition left, BoundaryCondition right,
               const BvpOptions& opts);

}  // namespace tistop::cheb
