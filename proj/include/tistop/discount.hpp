#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace tistop {

/// One node of the mixing measure F: delta(t) ~ sum_i weight_i * exp(-rate_i t).
struct MixtureNode {
    double rate;
    double weight;
};

/// Options for discretising a continuous (Gamma) mixing measure.
///
/// The Gamma variable s = r / scale is split into [0, min_scale] (lumped into a
/// single node) and panels of `points_per_panel` Gauss-Legendre nodes. Panels
/// grow geometrically by `grading` near 0 and are otherwise sized so that the
/// integrand s^(k-1) exp(-s (1 + scale t)) changes by at most `efolds_per_panel`
/// e-folds across a panel for every t <= max_time.
struct MixtureOptions {
    std::size_t points_per_panel = 16;
    double min_scale = 1e-12;
    double grading = 8.0;
    double efolds_per_panel = 10.0;
    double max_time = 100.0;
};

struct Exponential { double r; };
struct Hyperbolic { double beta; };
struct GeneralizedHyperbolic { double beta; double gamma; };
struct PseudoExponential { std::vector<double> weights; std::vector<double> rates; };
struct WeightedMixture { std::vector<MixtureNode> nodes; };

using DiscountParams =
    std::variant<Exponential, Hyperbolic, GeneralizedHyperbolic, PseudoExponential, WeightedMixture>;

class DiscountSpec {
public:
    explicit DiscountSpec(DiscountParams params, MixtureOptions opts = {});

    static DiscountSpec exponential(double r) { return DiscountSpec(Exponential{r}); }
    static DiscountSpec hyperbolic(double beta, MixtureOptions o = {}) { return DiscountSpec(Hyperbolic{beta}, o); }
    static DiscountSpec generalized_hyperbolic(double beta, double gamma, MixtureOptions o = {}) {
        return DiscountSpec(GeneralizedHyperbolic{beta, gamma}, o);
    }

    double delta(double t) const;
    double delta_prime(double t) const;
    /// Right derivative at 0; equals -(first moment of F).
    double delta_prime0() const { return delta_prime(0.0); }

    const std::vector<MixtureNode>& mixture() const { return nodes_; }
    /// Mixture view evaluated at t: sum_i w_i exp(-r_i t).
    double mixture_delta(double t) const;

    const DiscountParams& params() const { return params_; }
    const MixtureOptions& mixture_options() const { return opts_; }
    std::string kind_name() const;
    std::string describe() const;

    /// Same discount with a different discretisation of F.
    DiscountSpec with_options(MixtureOptions opts) const { return DiscountSpec(params_, opts); }

private:
    DiscountParams params_;
    MixtureOptions opts_;
    std::vector<MixtureNode> nodes_;
};

/// Quadrature nodes for the Gamma(shape, scale) mixing law.
std::vector<MixtureNode> gamma_mixture_nodes(double shape, double scale, const MixtureOptions& opts);

struct SubadditivityReport {
    double min_gap;  // min over the grid of delta(t+s) - delta(t) delta(s)
    double at_s;
    double at_t;
    bool holds;      // min_gap >= -1e-12
};

SubadditivityReport discount_check_log_subadditive(const DiscountSpec& d,
                                                   const std::vector<std::pair<double, double>>& grid);

struct DerivativeInequalityReport {
    double worst_derivative_margin;  // min_t delta'(t) - delta(t) delta'(0)
    double worst_growth_margin;      // min_t |delta'(0)| t - (1 - delta(t))
    double at_t_derivative;
    double at_t_growth;
    bool holds;
};

DerivativeInequalityReport discount_derivative_inequalities(const DiscountSpec& d, const std::vector<double>& tgrid);

/// Largest relative deviation of the mixture view from delta on a t-grid.
double mixture_max_relative_error(const DiscountSpec& d, const std::vector<double>& tgrid);

/// Finite-node analogue of lim_{t->0} t^{-1/2} int r (1 - e^{-rt}) dF(r) = 0:
/// returns the quotient at the smallest grid time (should be small).
double weight_regularity_quotient(const DiscountSpec& d, double t);

}  // namespace tistop
