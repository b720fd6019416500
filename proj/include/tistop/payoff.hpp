#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tistop/interval.hpp"

namespace tistop {

enum class PayoffKind { Put, CappedIdentity, Table, Custom };

const char* to_string(PayoffKind k);

/// Non-negative payoff, C^2 between finitely many kinks.
class PayoffSpec {
public:
    using Value = std::function<double(double)>;
    /// One-sided derivative: (x, side) -> f'(x-) or f'(x+) (resp. f'').
    using SidedDerivative = std::function<double(double, Side)>;

    /// (K - x)^+
    static PayoffSpec put(double K);
    /// min(x, K)
    static PayoffSpec capped_identity(double K);
    /// Piecewise natural cubic through (xs, ys); the cubic restarts at each kink
    /// (kinks must be grid points). Constant beyond the grid ends.
    static PayoffSpec table(std::vector<double> xs, std::vector<double> ys, std::vector<double> kinks);
    static PayoffSpec custom(Value f, SidedDerivative d1, SidedDerivative d2, std::vector<double> kinks,
                             std::string description = "custom");

    PayoffKind kind() const { return kind_; }
    double operator()(double x) const { return f_(x); }
    double value(double x) const { return f_(x); }
    double d1(double x, Side s) const { return d1_(x, s); }
    double d2(double x, Side s) const { return d2_(x, s); }
    const std::vector<double>& kinks() const { return kinks_; }
    bool is_kink(double x) const;
    /// Strike / cap parameter for the built-in kinds (0 otherwise).
    double strike() const { return strike_; }
    const std::string& description() const { return description_; }

    /// Declared well-posedness exponent (metadata only).
    double zeta() const { return zeta_; }
    void set_zeta(double z) { zeta_ = z; }

    /// Throws ParameterError when f < 0 or f jumps at a kink on a sample grid of X.
    void validate(const Interval& X) const;

private:
    PayoffKind kind_ = PayoffKind::Custom;
    Value f_;
    SidedDerivative d1_, d2_;
    std::vector<double> kinks_;
    double strike_ = 0.0;
    double zeta_ = 1.0;
    std::string description_;
};

}  // namespace tistop
