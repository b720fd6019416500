#pragma once

#include <cstddef>
#include <vector>

#include "tistop/resolvent.hpp"

namespace tistop {

struct ValuationOptions {
    /// Points per complement component for the mildness sweep.
    std::size_t grid_points = 257;
    /// Points per piece of S for the generator sweep.
    std::size_t interior_points = 129;
    /// "x >= 0" passes when x >= -tol_eq * (1 + |f|).
    double tol_eq = 1e-7;
    /// "x > 0" needs x > tol_strict.
    double tol_strict = 1e-6;
};

/// J(x,S), V(t,x,S) and their one-sided derivatives from the weighted resolvent.
class ValueEvaluator {
public:
    ValueEvaluator(ProblemInstance inst, StoppingRegion region, ResolventOptions ropts = {},
                   ValuationOptions vopts = {});

    const ProblemInstance& instance() const { return kernel_.instance(); }
    const StoppingRegion& region() const { return kernel_.region(); }
    const ResolventKernel& kernel() const { return kernel_; }
    const ValuationOptions& options() const { return vopts_; }

    double J(double x) const { return V(0.0, x); }
    double V(double t, double x) const;
    /// V_x(0, x-) or V_x(0, x+).
    double vx(double x, Side side) const { return vx_at(0.0, x, side); }
    double vx_at(double t, double x, Side side) const;
    /// One-sided second derivative of J (from the resolvent equation on continuation sides).
    double vxx(double x, Side side) const;
    /// LV(0, x-) or LV(0, x+) with L = d/dt + mu d/dx + sigma^2/2 d^2/dx^2.
    double LV(double x, Side side) const;
    /// J(x) - f(x).
    double gap(double x) const { return J(x) - instance().payoff()(x); }

    /// Largest collocation residual among the component solutions (0 for closed forms).
    double max_residual() const;

private:
    double mix(std::size_t c, double t, double x, int order) const;

    ResolventKernel kernel_;
    ValuationOptions vopts_;
    std::vector<MixtureNode> nodes_;
    std::vector<std::vector<ComponentSolution>> sols_;  // [component][node]
};

}  // namespace tistop
