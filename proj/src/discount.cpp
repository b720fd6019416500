#include "tistop/discount.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "tistop/errors.hpp"
#include "tistop/quadrature.hpp"

namespace tistop {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<MixtureNode> checked_nodes(std::vector<MixtureNode> nodes) {
    if (nodes.empty()) throw ParameterError("mixture needs at least one node");
    double total = 0.0;
    bool positive_rate = false;
    for (const auto& n : nodes) {
        if (!(n.weight >= 0.0) || !(n.rate >= 0.0) || !std::isfinite(n.rate) || !std::isfinite(n.weight))
            throw ParameterError("mixture nodes need finite non-negative rates and weights");
        total += n.weight;
        positive_rate = positive_rate || (n.rate > 0.0 && n.weight > 0.0);
    }
    if (std::fabs(total - 1.0) > 1e-9) {
        std::ostringstream os;
        os << "mixture weights must sum to 1 (got " << total << ")";
        throw ParameterError(os.str());
    }
    if (!positive_rate) throw ParameterError("mixture needs positive mass at a positive rate");
    for (auto& n : nodes) n.weight /= total;
    return nodes;
}

}  // namespace

std::vector<MixtureNode> gamma_mixture_nodes(double shape, double scale, const MixtureOptions& opts) {
    if (!(shape > 0.0) || !(scale > 0.0)) throw ParameterError("Gamma mixing law needs shape, scale > 0");
    if (opts.points_per_panel < 1 || !(opts.min_scale > 0.0) || !(opts.grading > 1.0) ||
        !(opts.efolds_per_panel > 0.0) || !(opts.max_time >= 0.0))
        throw ParameterError("invalid mixture options");
    using boost::math::gamma_p;
    using boost::math::gamma_q_inv;
    const double log_norm = -std::lgamma(shape);
    auto density = [&](double s) { return std::exp((shape - 1.0) * std::log(s) - s + log_norm); };

    std::vector<MixtureNode> nodes;
    const double s0 = opts.min_scale;
    nodes.push_back({scale * s0 * shape / (shape + 1.0), gamma_p(shape, s0)});

    // Panels of bounded e-fold content; beyond s ~ cutoff / u the exp(-s u)
    // factor is negligible, so larger t only constrains small s.
    const double s_max = std::max(gamma_q_inv(shape, 1e-18), 2.0);
    const double u_max = 1.0 + scale * opts.max_time;
    const double cutoff = 40.0 + 2.0 * shape;
    std::vector<double> edges{s0};
    while (edges.back() < s_max) {
        const double s = edges.back();
        const double rate = std::fabs(shape - 1.0) / s + std::min(u_max, std::max(1.0, cutoff / s));
        const double w = std::min(opts.efolds_per_panel / rate, (opts.grading - 1.0) * s);
        edges.push_back(std::min(s + w, s_max));
    }

    const quad::Rule gl = quad::gauss_legendre(opts.points_per_panel);
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double lo = edges[p], hi = edges[p + 1];
        const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
            const double s = mid + half * gl.nodes[j];
            nodes.push_back({scale * s, half * gl.weights[j] * density(s)});
        }
    }
    double total = 0.0;
    for (const auto& n : nodes) total += n.weight;
    for (auto& n : nodes) n.weight /= total;
    return nodes;
}

DiscountSpec::DiscountSpec(DiscountParams params, MixtureOptions opts) : params_(std::move(params)), opts_(opts) {
    nodes_ = std::visit(
        overloaded{
            [](const Exponential& e) -> std::vector<MixtureNode> {
                if (!(e.r > 0.0) || !std::isfinite(e.r)) throw ParameterError("exponential discount needs r > 0");
                return {{e.r, 1.0}};
            },
            [&](const Hyperbolic& h) -> std::vector<MixtureNode> {
                if (!(h.beta > 0.0) || !std::isfinite(h.beta)) throw ParameterError("hyperbolic discount needs beta > 0");
                return gamma_mixture_nodes(1.0, h.beta, opts_);
            },
            [&](const GeneralizedHyperbolic& g) -> std::vector<MixtureNode> {
                if (!(g.beta > 0.0) || !(g.gamma > 0.0))
                    throw ParameterError("generalized hyperbolic discount needs beta, gamma > 0");
                return gamma_mixture_nodes(g.gamma / g.beta, g.beta, opts_);
            },
            [](const PseudoExponential& p) -> std::vector<MixtureNode> {
                if (p.weights.size() != p.rates.size())
                    throw ParameterError("pseudo-exponential weights and rates differ in length");
                std::vector<MixtureNode> n;
                for (std::size_t i = 0; i < p.rates.size(); ++i) n.push_back({p.rates[i], p.weights[i]});
                return checked_nodes(std::move(n));
            },
            [](const WeightedMixture& w) { return checked_nodes(w.nodes); },
        },
        params_);
}

double DiscountSpec::mixture_delta(double t) const {
    double s = 0.0;
    for (const auto& n : nodes_) s += n.weight * std::exp(-n.rate * t);
    return s;
}

double DiscountSpec::delta(double t) const {
    return std::visit(overloaded{
                          [t](const Exponential& e) { return std::exp(-e.r * t); },
                          [t](const Hyperbolic& h) { return 1.0 / (1.0 + h.beta * t); },
                          [t](const GeneralizedHyperbolic& g) { return std::pow(1.0 + g.beta * t, -g.gamma / g.beta); },
                          [this, t](const auto&) { return mixture_delta(t); },
                      },
                      params_);
}

double DiscountSpec::delta_prime(double t) const {
    return std::visit(overloaded{
                          [t](const Exponential& e) { return -e.r * std::exp(-e.r * t); },
                          [t](const Hyperbolic& h) {
                              const double u = 1.0 + h.beta * t;
                              return -h.beta / (u * u);
                          },
                          [t](const GeneralizedHyperbolic& g) {
                              return -g.gamma * std::pow(1.0 + g.beta * t, -g.gamma / g.beta - 1.0);
                          },
                          [this, t](const auto&) {
                              double s = 0.0;
                              for (const auto& n : nodes_) s -= n.weight * n.rate * std::exp(-n.rate * t);
                              return s;
                          },
                      },
                      params_);
}

std::string DiscountSpec::kind_name() const {
    return std::visit(overloaded{
                          [](const Exponential&) { return std::string("exponential"); },
                          [](const Hyperbolic&) { return std::string("hyperbolic"); },
                          [](const GeneralizedHyperbolic&) { return std::string("generalized_hyperbolic"); },
                          [](const PseudoExponential&) { return std::string("pseudo_exponential"); },
                          [](const WeightedMixture&) { return std::string("weighted_mixture"); },
                      },
                      params_);
}

std::string DiscountSpec::describe() const {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const Exponential& e) { os << "exp(-" << e.r << " t)"; },
                   [&](const Hyperbolic& h) { os << "1/(1+" << h.beta << " t)"; },
                   [&](const GeneralizedHyperbolic& g) { os << "(1+" << g.beta << " t)^(-" << g.gamma << "/" << g.beta << ")"; },
                   [&](const PseudoExponential& p) { os << "pseudo-exponential with " << p.rates.size() << " terms"; },
                   [&](const WeightedMixture& w) { os << "mixture of " << w.nodes.size() << " exponentials"; },
               },
               params_);
    return os.str();
}

SubadditivityReport discount_check_log_subadditive(const DiscountSpec& d,
                                                   const std::vector<std::pair<double, double>>& grid) {
    SubadditivityReport rep{std::numeric_limits<double>::infinity(), 0.0, 0.0, true};
    for (const auto& [s, t] : grid) {
        if (s < 0.0 || t < 0.0) throw ParameterError("log sub-additivity grid needs s, t >= 0");
        const double gap = d.delta(t + s) - d.delta(t) * d.delta(s);
        if (gap < rep.min_gap) rep = {gap, s, t, true};
    }
    rep.holds = rep.min_gap >= -1e-12;
    return rep;
}

DerivativeInequalityReport discount_derivative_inequalities(const DiscountSpec& d, const std::vector<double>& tgrid) {
    DerivativeInequalityReport rep{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 0.0, 0.0, true};
    const double d0 = d.delta_prime0();
    for (double t : tgrid) {
        if (t < 0.0) throw ParameterError("derivative inequality grid needs t >= 0");
        const double m1 = d.delta_prime(t) - d.delta(t) * d0;
        const double m2 = std::fabs(d0) * t - (1.0 - d.delta(t));
        if (m1 < rep.worst_derivative_margin) {
            rep.worst_derivative_margin = m1;
            rep.at_t_derivative = t;
        }
        if (m2 < rep.worst_growth_margin) {
            rep.worst_growth_margin = m2;
            rep.at_t_growth = t;
        }
    }
    rep.holds = rep.worst_derivative_margin >= -1e-12 && rep.worst_growth_margin >= -1e-12;
    return rep;
}

double mixture_max_relative_error(const DiscountSpec& d, const std::vector<double>& tgrid) {
    double worst = 0.0;
    for (double t : tgrid) {
        const double exact = d.delta(t);
        worst = std::max(worst, std::fabs(d.mixture_delta(t) - exact) / exact);
    }
    return worst;
}

double weight_regularity_quotient(const DiscountSpec& d, double t) {
    double s = 0.0;
    for (const auto& n : d.mixture()) s += n.weight * n.rate * (-std::expm1(-n.rate * t));
    return s / std::sqrt(t);
}

}  // namespace tistop
