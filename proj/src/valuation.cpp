#include "tistop/valuation.hpp"

#include <cmath>

#include "tistop/errors.hpp"

namespace tistop {

ValueEvaluator::ValueEvaluator(ProblemInstance inst, StoppingRegion region, ResolventOptions ropts,
                               ValuationOptions vopts)
    : kernel_(std::move(inst), std::move(region), ropts), vopts_(vopts) {
    nodes_ = kernel_.instance().discount().mixture();
    const auto& comps = kernel_.region().complement();
    sols_.resize(comps.size());
    for (std::size_t c = 0; c < comps.size(); ++c) {
        sols_[c].reserve(nodes_.size());
        for (const auto& n : nodes_) sols_[c].push_back(kernel_.solve_component(c, n.rate));
    }
}

double ValueEvaluator::mix(std::size_t c, double t, double x, int order) const {
    const DiffusionSpec& d = instance().diffusion();
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const double w = nodes_[i].weight * (t == 0.0 ? 1.0 : std::exp(-nodes_[i].rate * t));
        if (w == 0.0) continue;
        const ComponentSolution& s = sols_[c][i];
        if (order == 0) {
            acc += w * s.value(x);
        } else if (order == 1) {
            acc += w * s.dx(x);
        } else {
            const double sg = d.sigma(x);
            acc += w * 2.0 * (nodes_[i].rate * s.value(x) - d.mu(x) * s.dx(x)) / (sg * sg);
        }
    }
    return acc;
}

double ValueEvaluator::V(double t, double x) const {
    if (!(t >= 0.0)) throw DomainError("V needs t >= 0");
    const StoppingRegion& S = region();
    if (S.contains(x) != Membership::InComplement) return instance().discount().delta(t) * instance().payoff()(x);
    return mix(*S.component_containing(x), t, x, 0);
}

double ValueEvaluator::vx_at(double t, double x, Side side) const {
    if (!(t >= 0.0)) throw DomainError("V_x needs t >= 0");
    const StoppingRegion& S = region();
    S.contains(x);
    if (S.side_in_region(x, side)) return instance().discount().delta(t) * instance().payoff().d1(x, side);
    return mix(*S.component_at(x, side), t, x, 1);
}

double ValueEvaluator::vxx(double x, Side side) const {
    const StoppingRegion& S = region();
    S.contains(x);
    if (S.side_in_region(x, side)) return instance().payoff().d2(x, side);
    return mix(*S.component_at(x, side), 0.0, x, 2);
}

double ValueEvaluator::LV(double x, Side side) const {
    const StoppingRegion& S = region();
    S.contains(x);
    if (!S.side_in_region(x, side)) return 0.0;
    const ProblemInstance& p = instance();
    const double sg = p.diffusion().sigma(x);
    return p.discount().delta_prime0() * p.payoff()(x) + p.diffusion().mu(x) * p.payoff().d1(x, side) +
           0.5 * sg * sg * p.payoff().d2(x, side);
}

double ValueEvaluator::max_residual() const {
    double r = 0.0;
    for (const auto& row : sols_)
        for (const auto& s : row) r = std::max(r, s.residual());
    return r;
}

}  // namespace tistop
