#pragma once

#include <cstddef>
#include <memory>

#include "tistop/chebyshev.hpp"
#include "tistop/problem.hpp"
#include "tistop/region.hpp"

namespace tistop {

struct ResolventOptions {
    double tol = 1e-8;
    std::size_t nodes = 16;
    std::size_t max_nodes = 1024;
    /// Separation (e-folds) between the decaying and growing solutions at which a
    /// one-sided component is truncated.
    double decay_efolds = 745.0;
    /// Largest extent of the mapped coordinate on an unbounded component.
    double max_mapped_extent = 30.0;
};

/// v(., r, S) restricted to one complement component (lo, hi).
class ComponentSolution {
public:
    double value(double x) const;
    double dx(double x) const;
    /// True when the value comes from a closed form rather than a numerical solve.
    bool closed_form() const { return mode_ == Mode::ClosedForm; }
    /// Collocation residual (0 for closed forms and one-sided components).
    double residual() const { return cheb_ ? cheb_->residual() : 0.0; }

    static ComponentSolution zero();

private:
    friend class ResolventKernel;
    friend ComponentSolution solve_component_bvp(const ProblemInstance&, const Component&, double, double, double,
                                                 const ResolventOptions&);

    enum class Mode { Zero, ClosedForm, Collocation, LogDerivative };
    enum class Map { Identity, Log };            // closed form: y = x or y = ln x
    enum class Stretch { Affine, Outward, Inward };  // collocation coordinate

    double closed_u(double y, double* du) const;
    double colloc_y(double x) const;
    double colloc_dxdy(double y) const;
    /// log(u / u(stop)) and its y-derivative from the stored log-derivative track.
    void track_at(double y, double& L, double& W) const;

    struct Track;

    Mode mode_ = Mode::Zero;
    // closed form
    Map map_ = Map::Identity;
    double yl_ = 0.0, yu_ = 0.0, fl_ = 0.0, fu_ = 0.0, alpha_ = 0.0, kappa_ = 0.0, lam_minus_ = 0.0, lam_plus_ = 0.0;
    bool has_l_ = false, has_u_ = false;
    // collocation
    Stretch stretch_ = Stretch::Affine;
    double anchor_ = 0.0, width_ = 1.0, sgn_ = 1.0, y_trunc_ = 0.0, k_trunc_ = 0.0;
    std::shared_ptr<const cheb::Solution> cheb_;
    // one-sided components: u = stop value * exp(L(y))
    double stop_value_ = 0.0;
    std::shared_ptr<const Track> track_;
};

/// Solve the elliptic resolvent equation on a complement component with the given
/// stopping values at stopping ends (ignored at open ends, where the decaying
/// solution is selected). Two stopping ends use Chebyshev collocation; one stopping
/// end integrates the Riccati equation of u'/u inward from the far field.
ComponentSolution solve_component_bvp(const ProblemInstance& inst, const Component& comp, double v_l, double v_r,
                                      double r, const ResolventOptions& opts = {});

/// Evaluator of v(x, r, S) = E^x[exp(-r rho_S) f(X_{rho_S})].
class ResolventKernel {
public:
    ResolventKernel(ProblemInstance inst, StoppingRegion region, ResolventOptions opts = {});

    const ProblemInstance& instance() const { return inst_; }
    const StoppingRegion& region() const { return region_; }
    const ResolventOptions& options() const { return opts_; }
    /// True when BM/GBM closed forms are in use.
    bool uses_closed_form() const;

    ComponentSolution solve_component(std::size_t c, double r) const;

    double value(double x, double r) const;
    double dx(double x, Side side, double r) const;

private:
    ProblemInstance inst_;
    StoppingRegion region_;
    ResolventOptions opts_;
};

}  // namespace tistop
