#include "tistop/closed_forms.hpp"

#include <cmath>
#include <variant>

#include "tistop/errors.hpp"
#include "tistop/quadrature.hpp"

namespace tistop {

namespace {

// q / sinh(L q) and q coth(L q), both finite as q -> 0.
double q_over_sinh(double q, double L) {
    if (q * L < 1e-12) return 1.0 / L;
    return -2.0 * q * std::exp(-L * q) / std::expm1(-2.0 * L * q);
}

double q_coth(double q, double L) {
    if (q * L < 1e-12) return 1.0 / L;
    return -q * (1.0 + std::exp(-2.0 * L * q)) / std::expm1(-2.0 * L * q);
}

}  // namespace

LambdaNu lambda_nu(double mu, double sigma, double beta) {
    if (!(sigma > 0.0) || !(beta > 0.0)) throw ParameterError("lambda_nu needs sigma > 0 and beta > 0");
    const double nu = mu / (sigma * sigma) - 0.5;
    const double c = 2.0 * beta / (sigma * sigma);
    const double lam = quad::integrate_exp_weight([=](double s) { return std::sqrt(nu * nu + c * s) + nu; }, 1e-13);
    return {lam, nu};
}

double type2_mild_condition(double mu, double sigma, double beta, double K, double a, double b) {
    if (!(a > 0.0) || !(b > a)) throw ParameterError("type-II condition needs 0 < a < b");
    const LambdaNu ln = lambda_nu(mu, sigma, beta);
    const double nu = ln.nu, c = 2.0 * beta / (sigma * sigma);
    const double L = std::log(b / a);
    auto g = [=](double s) {
        const double k = std::sqrt(nu * nu + c * s);
        const double kc = std::isfinite(L) ? q_coth(k, L) : k;
        return nu / a + kc / a;
    };
    const double integral = quad::integrate_exp_weight(g, 1e-13);
    return -(K - a) * integral + 1.0;
}

double type2_mild_condition(const ProblemInstance& inst, double a, double b) {
    const auto& d = inst.diffusion();
    const auto* h = std::get_if<Hyperbolic>(&inst.discount().params());
    if (d.kind() != DiffusionKind::GeometricBrownianMotion || !h || inst.payoff().kind() != PayoffKind::Put)
        throw ParameterError("type-II condition needs GBM dynamics, hyperbolic discount and a put payoff");
    return type2_mild_condition(d.mu_param(), d.sigma_param(), h->beta, inst.payoff().strike(), a, b);
}

AbcdCheck check_condition_abcd(double beta, double a, double b, double c, double d) {
    if (!(a < b) || !(c > 0.0) || !(d > c) || !(beta > 0.0))
        throw ParameterError("condition needs a < b, 0 < c < d and beta > 0");
    const double L = b - a;
    auto q = [beta](double s) { return std::sqrt(2.0 * beta * s); };
    const double num = quad::integrate_exp_weight([&](double s) { return q_over_sinh(q(s), L); }, 1e-13);
    const double coth = quad::integrate_exp_weight([&](double s) { return q_coth(q(s), L); }, 1e-13);
    const double lhs = num / (std::sqrt(M_PI * beta / 2.0) + coth);
    const double rhs = quad::integrate_exp_weight([&](double s) { return std::exp(-L * q(s)); }, 1e-13);
    const double ratio = c / d;
    return {lhs, ratio, rhs, lhs < ratio && ratio < rhs};
}

}  // namespace tistop
