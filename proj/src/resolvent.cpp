#include "tistop/resolvent.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "tistop/errors.hpp"

namespace tistop {

namespace {

// sinh(k a) / sinh(k L) = exp(-k (L - a)) * R(a), and
// k cosh(k a) / sinh(k L) = exp(-k (L - a)) * Q(a).
double ratio_r(double a, double L, double k) {
    if (k * L < 1e-9) return a / L;
    return std::expm1(-2.0 * k * a) / std::expm1(-2.0 * k * L);
}

double ratio_q(double a, double L, double k) {
    if (k * L < 1e-9) return 1.0 / L;
    return -k * (1.0 + std::exp(-2.0 * k * a)) / std::expm1(-2.0 * k * L);
}

void check_rate(double r) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw ParameterError("resolvent rate must be finite and >= 0");
}

}  // namespace

struct ComponentSolution::Track {
    std::function<cheb::Coefficients(double)> ode;
    std::vector<double> y, L, W;  // ascending y, L(0) = 0
};

namespace {

using RiccatiState = std::array<double, 2>;  // {W, L}

// W = u'/u satisfies a2 (W' + W^2) + a1 W + a0 = 0; L' = W.
RiccatiState riccati_rhs(const std::function<cheb::Coefficients(double)>& ode, const RiccatiState& s, double y) {
    const cheb::Coefficients c = ode(y);
    return {-s[0] * s[0] - (c.a1 * s[0] + c.a0) / c.a2, s[0]};
}

}  // namespace

ComponentSolution ComponentSolution::zero() { return ComponentSolution{}; }

void ComponentSolution::track_at(double y, double& L, double& W) const {
    const Track& t = *track_;
    auto it = std::lower_bound(t.y.begin(), t.y.end(), y);
    if (it == t.y.end()) it = std::prev(it);
    const std::size_t i = static_cast<std::size_t>(it - t.y.begin());
    RiccatiState s{t.W[i], t.L[i]};
    if (t.y[i] != y) {
        // march from the node above, the stable direction for the decaying solution
        const int n = 8;
        const double h = (y - t.y[i]) / n;
        double z = t.y[i];
        for (int k = 0; k < n; ++k) {
            auto add = [](const RiccatiState& a, const RiccatiState& b, double f) {
                return RiccatiState{a[0] + f * b[0], a[1] + f * b[1]};
            };
            const RiccatiState k1 = riccati_rhs(t.ode, s, z);
            const RiccatiState k2 = riccati_rhs(t.ode, add(s, k1, 0.5 * h), z + 0.5 * h);
            const RiccatiState k3 = riccati_rhs(t.ode, add(s, k2, 0.5 * h), z + 0.5 * h);
            const RiccatiState k4 = riccati_rhs(t.ode, add(s, k3, h), z + h);
            for (int j = 0; j < 2; ++j) s[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            z += h;
        }
    }
    W = s[0];
    L = s[1];
}

double ComponentSolution::closed_u(double y, double* du) const {
    if (has_l_ && has_u_) {
        const double L = yu_ - yl_;
        const double a1 = std::min(std::max(y - yl_, 0.0), L), a2 = L - a1;
        const double el = fl_ == 0.0 ? 0.0 : fl_ * std::exp(lam_minus_ * a1);
        const double eu = fu_ == 0.0 ? 0.0 : fu_ * std::exp(-lam_plus_ * a2);
        const double r2 = ratio_r(a2, L, kappa_), r1 = ratio_r(a1, L, kappa_);
        if (du) *du = el * (alpha_ * r2 - ratio_q(a2, L, kappa_)) + eu * (alpha_ * r1 + ratio_q(a1, L, kappa_));
        return el * r2 + eu * r1;
    }
    if (has_l_) {
        const double u = fl_ * std::exp(lam_minus_ * (y - yl_));
        if (du) *du = lam_minus_ * u;
        return u;
    }
    const double u = fu_ * std::exp(lam_plus_ * (y - yu_));
    if (du) *du = lam_plus_ * u;
    return u;
}

double ComponentSolution::colloc_y(double x) const {
    switch (stretch_) {
        case Stretch::Affine: return x;
        case Stretch::Outward: return std::log1p(sgn_ * (x - anchor_) / width_);
        case Stretch::Inward: return -std::log((x - anchor_) / width_);
    }
    return x;
}

double ComponentSolution::colloc_dxdy(double y) const {
    switch (stretch_) {
        case Stretch::Affine: return 1.0;
        case Stretch::Outward: return sgn_ * width_ * std::exp(y);
        case Stretch::Inward: return -width_ * std::exp(-y);
    }
    return 1.0;
}

double ComponentSolution::value(double x) const {
    switch (mode_) {
        case Mode::Zero: return 0.0;
        case Mode::ClosedForm: return closed_u(map_ == Map::Log ? std::log(x) : x, nullptr);
        case Mode::Collocation: {
            const double y = colloc_y(x);
            if (stretch_ != Stretch::Affine && y > y_trunc_)
                return cheb_->value(y_trunc_) * std::exp(k_trunc_ * (y - y_trunc_));
            return cheb_->value(y);
        }
        case Mode::LogDerivative: {
            if (stop_value_ == 0.0) return 0.0;
            const double y = colloc_y(x);
            double L, W;
            if (y > y_trunc_) {
                track_at(y_trunc_, L, W);
                L += k_trunc_ * (y - y_trunc_);
            } else {
                track_at(std::max(y, 0.0), L, W);
            }
            return stop_value_ * std::exp(L);
        }
    }
    return 0.0;
}

double ComponentSolution::dx(double x) const {
    switch (mode_) {
        case Mode::Zero: return 0.0;
        case Mode::ClosedForm: {
            double du = 0.0;
            if (map_ == Map::Log) {
                closed_u(std::log(x), &du);
                return du / x;
            }
            closed_u(x, &du);
            return du;
        }
        case Mode::Collocation: {
            const double y = colloc_y(x);
            double du;
            if (stretch_ != Stretch::Affine && y > y_trunc_)
                du = k_trunc_ * cheb_->value(y_trunc_) * std::exp(k_trunc_ * (y - y_trunc_));
            else
                du = cheb_->derivative(y);
            return du / colloc_dxdy(y);
        }
        case Mode::LogDerivative: {
            if (stop_value_ == 0.0) return 0.0;
            const double y = colloc_y(x);
            double L, W;
            if (y > y_trunc_) {
                track_at(y_trunc_, L, W);
                L += k_trunc_ * (y - y_trunc_);
                W = k_trunc_;
            } else {
                track_at(std::max(y, 0.0), L, W);
            }
            return stop_value_ * std::exp(L) * W / colloc_dxdy(std::max(y, 0.0));
        }
    }
    return 0.0;
}

ComponentSolution solve_component_bvp(const ProblemInstance& inst, const Component& comp, double v_l, double v_r,
                                      double r, const ResolventOptions& opts) {
    check_rate(r);
    const DiffusionSpec& d = inst.diffusion();
    const cheb::BvpOptions bopts{opts.nodes, opts.max_nodes, opts.tol};
    ComponentSolution s;
    if (!comp.lo_is_stop && !comp.hi_is_stop) return s;
    s.mode_ = ComponentSolution::Mode::Collocation;

    if (comp.lo_is_stop && comp.hi_is_stop) {
        s.stretch_ = ComponentSolution::Stretch::Affine;
        auto ode = [&d, r](double x) {
            const double sg = d.sigma(x);
            return cheb::Coefficients{0.5 * sg * sg, d.mu(x), -r};
        };
        s.cheb_ = std::make_shared<const cheb::Solution>(
            cheb::solve(ode, comp.lo, comp.hi, {cheb::BoundaryCondition::Dirichlet, v_l},
                        {cheb::BoundaryCondition::Dirichlet, v_r}, bopts));
        return s;
    }

    const bool open_right = comp.lo_is_stop;
    const double stop = open_right ? comp.lo : comp.hi;
    const double stop_value = open_right ? v_l : v_r;
    const double open_end = open_right ? comp.hi : comp.lo;
    double x2x1;  // X''/X'
    if (std::isfinite(open_end)) {
        s.stretch_ = ComponentSolution::Stretch::Inward;
        s.anchor_ = open_end;
        s.width_ = stop - open_end;
        x2x1 = -1.0;
    } else {
        s.stretch_ = ComponentSolution::Stretch::Outward;
        s.anchor_ = stop;
        s.sgn_ = open_right ? 1.0 : -1.0;
        const double sg = d.sigma(stop), m = d.mu(stop);
        const double scale = 1.0 + std::fabs(stop);
        double w = sg * sg / (std::fabs(m) + std::sqrt(m * m + 2.0 * r * sg * sg));
        if (!std::isfinite(w) || !(w > 0.0)) w = scale;
        s.width_ = std::min(std::max(w, 1e-8 * scale), 1e8 * scale);
        x2x1 = 1.0;
    }

    s.mode_ = ComponentSolution::Mode::LogDerivative;
    s.stop_value_ = stop_value;
    const ComponentSolution::Stretch stretch = s.stretch_;
    const double anchor = s.anchor_, width = s.width_, sgn = s.sgn_;
    std::function<cheb::Coefficients(double)> ode = [d, stretch, anchor, width, sgn, r, x2x1](double y) {
        double x, xp;
        if (stretch == ComponentSolution::Stretch::Inward) {
            x = anchor + width * std::exp(-y);
            xp = -width * std::exp(-y);
        } else {
            x = anchor + sgn * width * std::expm1(y);
            xp = sgn * width * std::exp(y);
        }
        const double sg = d.sigma(x);
        return cheb::Coefficients{0.5 * sg * sg, d.mu(x) * xp - 0.5 * sg * sg * x2x1, -r * xp * xp};
    };
    auto decay_root = [&ode](double y) {
        const cheb::Coefficients c = ode(y);
        return (-c.a1 - std::sqrt(c.a1 * c.a1 - 4.0 * c.a2 * c.a0)) / (2.0 * c.a2);
    };
    // e-folds separating the decaying and growing solutions
    auto split = [&ode](double y) {
        const cheb::Coefficients c = ode(y);
        return std::sqrt(std::max(c.a1 * c.a1 - 4.0 * c.a2 * c.a0, 0.0)) / c.a2;
    };

    double y = 0.0, acc = 0.0;
    const double dy = 0.05;
    double sprev = split(0.0);
    while (acc < opts.decay_efolds && y < opts.max_mapped_extent) {
        const double snext = split(y + dy);
        acc += 0.5 * dy * (sprev + snext);
        sprev = snext;
        y += dy;
    }
    s.y_trunc_ = std::max(y, 1.0);
    s.k_trunc_ = decay_root(s.y_trunc_);

    auto track = std::make_shared<ComponentSolution::Track>();
    track->ode = ode;
    namespace odeint = boost::numeric::odeint;
    RiccatiState state{s.k_trunc_, 0.0};
    std::vector<double> ys, Ws, Ls;
    // forward in t = y_trunc - y
    const double yt = s.y_trunc_;
    auto sys = [&ode, yt](const RiccatiState& st, RiccatiState& dst, double t) {
        const RiccatiState g = riccati_rhs(ode, st, yt - t);
        dst = {-g[0], -g[1]};
    };
    auto obs = [&](const RiccatiState& st, double t) {
        ys.push_back(yt - t);
        Ws.push_back(st[0]);
        Ls.push_back(st[1]);
    };
    const double tol = std::min(opts.tol, 1e-10) * 1e-2;
    odeint::integrate_adaptive(odeint::make_controlled(tol, tol, 0.05, odeint::runge_kutta_dopri5<RiccatiState>()), sys,
                               state, 0.0, yt, 0.01, obs);
    for (double w : Ws)
        if (!std::isfinite(w)) throw SolverError("log-derivative integration diverged", kInf);
    const double L0 = Ls.back();
    track->y.assign(ys.rbegin(), ys.rend());
    track->W.assign(Ws.rbegin(), Ws.rend());
    track->L.resize(Ls.size());
    std::transform(Ls.rbegin(), Ls.rend(), track->L.begin(), [L0](double v) { return v - L0; });
    track->y.front() = 0.0;
    s.track_ = std::move(track);
    return s;
}

ResolventKernel::ResolventKernel(ProblemInstance inst, StoppingRegion region, ResolventOptions opts)
    : inst_(std::move(inst)), region_(std::move(region)), opts_(opts) {
    if (!(region_.state_space() == inst_.state_space()))
        throw DomainError("stopping region and diffusion live on different state spaces");
    if (region_.admissibility() != Admissibility::Admissible)
        throw InadmissibleRegion("stopping region " + region_.describe() + " is not admissible");
}

bool ResolventKernel::uses_closed_form() const { return inst_.diffusion().kind() != DiffusionKind::Custom; }

ComponentSolution ResolventKernel::solve_component(std::size_t c, double r) const {
    check_rate(r);
    const Component& comp = region_.complement().at(c);
    const PayoffSpec& f = inst_.payoff();
    const double fl = comp.lo_is_stop ? f(comp.lo) : 0.0;
    const double fu = comp.hi_is_stop ? f(comp.hi) : 0.0;
    if (!comp.lo_is_stop && !comp.hi_is_stop) return ComponentSolution::zero();
    if (!uses_closed_form()) return solve_component_bvp(inst_, comp, fl, fu, r, opts_);

    const DiffusionSpec& d = inst_.diffusion();
    ComponentSolution s;
    s.mode_ = ComponentSolution::Mode::ClosedForm;
    const bool log_map = d.kind() == DiffusionKind::GeometricBrownianMotion;
    s.map_ = log_map ? ComponentSolution::Map::Log : ComponentSolution::Map::Identity;
    const double sg = d.sigma_param();
    const double m = log_map ? d.mu_param() - 0.5 * sg * sg : d.mu_param();
    const double s2 = sg * sg;
    s.alpha_ = -m / s2;
    s.kappa_ = std::sqrt(m * m + 2.0 * r * s2) / s2;
    const double q = 2.0 * r / s2;
    s.lam_minus_ = s.alpha_ > 0.0 ? -q / (s.alpha_ + s.kappa_) : s.alpha_ - s.kappa_;
    s.lam_plus_ = s.alpha_ < 0.0 ? q / (s.kappa_ - s.alpha_) : s.alpha_ + s.kappa_;
    s.has_l_ = comp.lo_is_stop;
    s.has_u_ = comp.hi_is_stop;
    if (s.has_l_) s.yl_ = log_map ? std::log(comp.lo) : comp.lo;
    if (s.has_u_) s.yu_ = log_map ? std::log(comp.hi) : comp.hi;
    s.fl_ = fl;
    s.fu_ = fu;
    return s;
}

double ResolventKernel::value(double x, double r) const {
    check_rate(r);
    if (region_.contains(x) != Membership::InComplement) return inst_.payoff()(x);
    const auto c = region_.component_containing(x);
    return solve_component(*c, r).value(x);
}

double ResolventKernel::dx(double x, Side side, double r) const {
    check_rate(r);
    region_.contains(x);
    if (region_.side_in_region(x, side)) return inst_.payoff().d1(x, side);
    const auto c = region_.component_at(x, side);
    return solve_component(*c, r).dx(x);
}

}  // namespace tistop
