#include "tistop/diffusion.hpp"

#include <cmath>
#include <sstream>

#include "tistop/errors.hpp"

namespace tistop {

const char* to_string(DiffusionKind k) {
    switch (k) {
        case DiffusionKind::BrownianMotion: return "bm";
        case DiffusionKind::GeometricBrownianMotion: return "gbm";
        case DiffusionKind::Custom: return "custom";
    }
    return "?";
}

DiffusionSpec DiffusionSpec::brownian(double mu, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(mu) || !std::isfinite(sigma))
        throw ParameterError("Brownian motion needs finite mu and sigma > 0");
    DiffusionSpec d;
    d.kind_ = DiffusionKind::BrownianMotion;
    d.mu_ = [mu](double) { return mu; };
    d.sigma_ = [sigma](double) { return sigma; };
    d.state_space_ = Interval::real_line();
    d.mu_param_ = mu;
    d.sigma_param_ = sigma;
    std::ostringstream os;
    os << "BM(mu=" << mu << ", sigma=" << sigma << ")";
    d.description_ = os.str();
    return d;
}

DiffusionSpec DiffusionSpec::geometric(double mu, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(mu) || !std::isfinite(sigma))
        throw ParameterError("geometric Brownian motion needs finite mu and sigma > 0");
    DiffusionSpec d;
    d.kind_ = DiffusionKind::GeometricBrownianMotion;
    d.mu_ = [mu](double x) { return mu * x; };
    d.sigma_ = [sigma](double x) { return sigma * x; };
    d.state_space_ = Interval::positive_half_line();
    d.mu_param_ = mu;
    d.sigma_param_ = sigma;
    std::ostringstream os;
    os << "GBM(mu=" << mu << ", sigma=" << sigma << ")";
    d.description_ = os.str();
    return d;
}

DiffusionSpec DiffusionSpec::custom(Coefficient mu, Coefficient sigma, Interval X, std::string description) {
    if (!mu || !sigma) throw ParameterError("custom diffusion needs both coefficients");
    if (X.lower_closed || X.upper_closed || !(X.lower < X.upper))
        throw ParameterError("state space must be a non-empty open interval");
    DiffusionSpec d;
    d.kind_ = DiffusionKind::Custom;
    d.mu_ = std::move(mu);
    d.sigma_ = std::move(sigma);
    d.state_space_ = X;
    d.description_ = std::move(description);
    return d;
}

DiffusionSpec DiffusionSpec::as_custom() const {
    DiffusionSpec d = *this;
    d.kind_ = DiffusionKind::Custom;
    return d;
}

std::vector<double> sample_grid(const Interval& X, std::size_t n) {
    std::vector<double> g;
    g.reserve(n);
    const bool lo_inf = !std::isfinite(X.lower);
    const bool hi_inf = !std::isfinite(X.upper);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n);  // (0,1)
        double x;
        if (lo_inf && hi_inf) {
            x = 20.0 * std::tan(M_PI * (u - 0.5)) / 10.0;
        } else if (lo_inf) {
            x = X.upper - (std::exp(8.0 * (1.0 - u)) - 1.0) * 0.1 * std::max(1.0, std::fabs(X.upper));
        } else if (hi_inf) {
            const double scale = X.lower == 0.0 ? 1.0 : std::fabs(X.lower);
            x = X.lower + scale * std::exp(-8.0 + 12.0 * u);
        } else {
            x = X.lower + (X.upper - X.lower) * u;
        }
        g.push_back(x);
    }
    return g;
}


std::vector<std::string> DiffusionSpec::validate(double lipschitz_bound) const {
    std::vector<std::string> warnings;
    const auto grid = sample_grid(state_space_, 201);
    for (double x : grid) {
        const double m = mu(x), s = sigma(x);
        if (!std::isfinite(m) || !std::isfinite(s)) {
            std::ostringstream os;
            os << "non-finite coefficient at x=" << x;
            throw ParameterError(os.str());
        }
        if (!(s * s > 0.0)) {
            std::ostringstream os;
            os << "sigma^2 must be positive; sigma(" << x << ")=" << s;
            throw ParameterError(os.str());
        }
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double dx = grid[i] - grid[i - 1];
        const double qm = std::fabs(mu(grid[i]) - mu(grid[i - 1])) / dx;
        const double qs = std::fabs(sigma(grid[i]) - sigma(grid[i - 1])) / dx;
        if (qm > lipschitz_bound || qs > lipschitz_bound) {
            std::ostringstream os;
            os << "difference quotient exceeds " << lipschitz_bound << " near x=" << grid[i];
            warnings.push_back(os.str());
        }
    }
    return warnings;
}

}  // namespace tistop
