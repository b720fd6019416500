#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tistop/interval.hpp"

namespace tistop {

enum class DiffusionKind { BrownianMotion, GeometricBrownianMotion, Custom };

const char* to_string(DiffusionKind k);

/// Time-homogeneous diffusion dX = mu(X) dt + sigma(X) dW on an open interval.
///
/// For the two constant-coefficient families the parameters are kept so that
/// closed-form resolvents can be used; `Custom` carries only the callables.
class DiffusionSpec {
public:
    using Coefficient = std::function<double(double)>;

    static DiffusionSpec brownian(double mu, double sigma);
    static DiffusionSpec geometric(double mu, double sigma);
    static DiffusionSpec custom(Coefficient mu, Coefficient sigma, Interval state_space,
                                std::string description = "custom");

    DiffusionKind kind() const { return kind_; }
    double mu(double x) const { return mu_(x); }
    double sigma(double x) const { return sigma_(x); }
    const Interval& state_space() const { return state_space_; }
    /// Drift/volatility parameters of BM or GBM (zero for Custom).
    double mu_param() const { return mu_param_; }
    double sigma_param() const { return sigma_param_; }
    const std::string& description() const { return description_; }

    /// The same process with the closed-form fast paths disabled.
    DiffusionSpec as_custom() const;

    /// Throws ParameterError when sigma^2 <= 0 or a coefficient is not finite
    /// on the sampled grid. Returns warnings for difference quotients that
    /// exceed `lipschitz_bound`.
    std::vector<std::string> validate(double lipschitz_bound = 1e6) const;

private:
    DiffusionKind kind_ = DiffusionKind::Custom;
    Coefficient mu_;
    Coefficient sigma_;
    Interval state_space_;
    double mu_param_ = 0.0;
    double sigma_param_ = 0.0;
    std::string description_;
};

/// Finite sample grid inside an open interval (used for spot checks).
std::vector<double> sample_grid(const Interval& X, std::size_t n);

}  // namespace tistop
