#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tistop/problem.hpp"
#include "tistop/region.hpp"

namespace tistop {

enum class Scheme {
    /// Exact transition for Brownian / geometric Brownian motion, Euler otherwise.
    Auto,
    EulerMaruyama,
};

struct SimConfig {
    /// Smallest time step; used near stopping boundaries.
    double step = 1e-5;
    /// Largest time step; 0 picks infinity for exact schemes and 100 * step for Euler.
    double max_step = 0.0;
    /// Steps are clamped to adapt * (distance / sigma)^2 between step and max_step.
    double adapt = 0.04;
    /// Simulation horizon; 0 picks the first T with delta(T) <= horizon_discount.
    double horizon = 0.0;
    double horizon_discount = 1e-4;
    std::size_t paths = 100000;
    std::uint64_t seed = 20240601;
    Scheme scheme = Scheme::Auto;
    /// Half-width of the occupation-time band; 0 picks max(3 sigma sqrt(step), 1e-4).
    double band = 0.0;
    unsigned threads = 1;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string target;
    /// Fraction of paths stopped by the horizon before entering the target set.
    double censored_fraction = 0.0;
    /// censored_fraction * delta(T): bound on the discounted mass dropped by censoring (per unit payoff).
    double censored_mass = 0.0;
    /// Paths that left the state space (custom diffusions only).
    std::size_t domain_exits = 0;

    /// (mean - reference) / std_error, infinite when std_error is 0 and the means differ.
    double z(double reference = 0.0) const;
};

struct EntrySample {
    double rho;
    double x;
    bool censored;
    bool domain_exit;
};

void validate(const SimConfig& cfg);

/// First entry (rho_S, X_rho) for cfg.paths paths started at x0.
std::vector<EntrySample> simulate_first_entry(const ProblemInstance& inst, const StoppingRegion& S, double x0,
                                              const SimConfig& cfg);

/// E[delta(rho_S) f(X_rho)].
McEstimate estimate_J(const ProblemInstance& inst, const StoppingRegion& S, double x0, const SimConfig& cfg);

/// E[exp(-r rho_S) f(X_rho)].
McEstimate estimate_resolvent(const ProblemInstance& inst, const StoppingRegion& S, double x0, double r,
                              const SimConfig& cfg);

/// D(eps) = E[delta(rho^eps_S) f(X_{rho^eps})] - f(x) with rho^eps = first entry after eps.
/// With control = true the martingale sum of delta(t) f'(x) (X_{k+1} - E[X_{k+1} | X_k]) over [0, eps]
/// is regressed out.
McEstimate estimate_deviation(const ProblemInstance& inst, const StoppingRegion& S, double x, double eps,
                              const SimConfig& cfg, bool control = true);

struct DeviationPoint {
    double eps;
    McEstimate d;
    double ratio;       // D / eps
    double ratio_se;
};
std::vector<DeviationPoint> deviation_sweep(const ProblemInstance& inst, const StoppingRegion& S, double x,
                                            const std::vector<double>& eps, const SimConfig& cfg);

enum class LocalTimeMethod { Tanaka, Occupation };

/// E[L^{x0}_{eps ^ tau}] / sqrt(eps) where tau is the exit time of (x0 - h, x0 + h).
McEstimate estimate_local_time(const ProblemInstance& inst, double x0, double h, double eps, const SimConfig& cfg,
                               LocalTimeMethod method = LocalTimeMethod::Tanaka);

/// P(tau_{B(x0,h)} <= eps).
McEstimate small_time_exit_prob(const ProblemInstance& inst, double x0, double h, double eps, const SimConfig& cfg);

/// P(X_t > x0).
McEstimate half_probability(const ProblemInstance& inst, double x0, double t, const SimConfig& cfg);

struct ExitRatios {
    /// E[tau] / ((1 - r^2) h^2); tends to 1 / sigma(x0)^2.
    McEstimate exit_time;
    /// h E[int_0^tau delta dL^{x0}] / E[tau]; tends to sigma(x0)^2 / (1 + |r|).
    McEstimate local_time;
};
ExitRatios exit_time_and_localtime_ratio(const ProblemInstance& inst, double x0, double h, double r,
                                         const SimConfig& cfg);

/// E|X_eps - x0 - mu(x0) eps - sigma(x0) W_eps| on a shared Brownian path.
McEstimate drift_remainder_check(const ProblemInstance& inst, double x0, double eps, const SimConfig& cfg);

/// Smallest T with delta(T) <= level (doubling then bisection).
double discount_horizon(const DiscountSpec& d, double level);

/// Pairwise (cascade) sum; the result does not depend on thread count.
double pairwise_sum(const double* v, std::size_t n);

}  // namespace tistop
