// One line per acceptance criterion: "[PASS] n name: details (time)".
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tistop/closed_forms.hpp"
#include "tistop/equilibrium.hpp"
#include "tistop/mc.hpp"
#include "tistop/repro.hpp"

using namespace tistop;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void run(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = dt <= limit_s;
    const bool ok = o.pass && in_time;
    if (!ok) ++failures;
    std::printf("[%s] %d %s: %s (%.2f s, limit %.0f s%s)\n", ok ? "PASS" : "FAIL", id, name, o.detail.c_str(), dt,
                limit_s, in_time ? "" : ", too slow");
    std::fflush(stdout);
}

std::string fmtd(const char* f, double v) {
    char b[64];
    std::snprintf(b, sizeof b, f, v);
    return b;
}

// int_0^inf e^{-s} g(s) ds by adaptive Gauss-Kronrod on [0, inf).
double mix(const std::function<double(double)>& g) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double s) { return std::exp(-s) * g(s); }, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-13);
}

StoppingRegion region(std::vector<Interval> pieces, const Interval& X) { return StoppingRegion::normalize(pieces, X); }

PayoffSpec quadratic_payoff(double c, double d) {
    // f(0) = c, f(1) = d, positive everywhere.
    return PayoffSpec::custom([c, d](double x) { return c + (d - c) * x * x; },
                              [c, d](double x, Side) { return 2.0 * (d - c) * x; },
                              [c, d](double, Side) { return 2.0 * (d - c); }, {}, "quadratic");
}

Outcome criterion_sandwich() {
    const AbcdCheck r = check_condition_abcd(0.5, 0.0, 1.0, 0.42, 1.0);
    // 2 int_0^inf u exp(-u^2 - u) du
    const double closed = 1.0 - 0.5 * std::exp(0.25) * std::sqrt(M_PI) * std::erfc(0.5);
    const bool ok = std::fabs(r.lhs - 0.3952) <= 5e-4 && std::fabs(r.rhs - 0.4544) <= 5e-4 &&
                    std::fabs(r.rhs - closed) <= 1e-10;
    return {ok, "LHS=" + fmtd("%.6f", r.lhs) + " RHS=" + fmtd("%.6f", r.rhs) + " closed form=" + fmtd("%.6f", closed)};
}

Outcome criterion_hyperbolic_threshold() {
    const double mu = 0.05, sigma = 0.3, beta = 0.1, K = 1.0;
    const ProblemInstance inst(DiffusionSpec::geometric(mu, sigma), DiscountSpec::hyperbolic(beta), PayoffSpec::put(K));
    const double nu = mu / (sigma * sigma) - 0.5;
    boost::math::quadrature::exp_sinh<double> es;
    const double lambda =
        es.integrate([&](double s) { return std::exp(-s) * (std::sqrt(nu * nu + 2.0 * beta * s / (sigma * sigma)) + nu); });
    const double lib_lambda = lambda_nu(mu, sigma, beta).lambda;
    const double target = lambda * K / (1.0 + lambda);
    const ThresholdResult t = find_threshold_equilibrium(inst, ThresholdFamily::LeftRay);
    const ValueEvaluator e(inst, t.region);
    const double res = smooth_fit_residual(e, t.threshold);
    const bool ok = std::fabs(t.threshold - target) <= 1e-8 && std::fabs(res) <= 1e-7 &&
                    std::fabs(lib_lambda - lambda) <= 1e-10;
    return {ok, "a*=" + fmtd("%.12f", t.threshold) + " lambdaK/(1+lambda)=" + fmtd("%.12f", target) +
                    " |diff|=" + fmtd("%.1e", std::fabs(t.threshold - target)) + " residual=" + fmtd("%.1e", res)};
}

Outcome criterion_exponential_put() {
    bool ok = true;
    std::ostringstream os;
    for (auto [mu, sigma, r] : {std::tuple{0.05, 0.3, 0.05}, std::tuple{0.02, 0.25, 0.08}}) {
        const double K = 1.0;
        const ProblemInstance inst(DiffusionSpec::geometric(mu, sigma), DiscountSpec::exponential(r), PayoffSpec::put(K));
        const double nu = mu / (sigma * sigma) - 0.5;
        const double theta = nu + std::sqrt(nu * nu + 2.0 * r / (sigma * sigma));
        const double target = K * theta / (1.0 + theta);
        const ThresholdResult t = find_threshold_equilibrium(inst, ThresholdFamily::LeftRay);
        const double diff = std::fabs(t.threshold - target);
        ok = ok && diff <= 1e-8;
        os << "a=" << fmtd("%.12f", t.threshold) << " vs " << fmtd("%.12f", target) << " (" << fmtd("%.1e", diff) << ") ";
    }
    return {ok, os.str()};
}

Outcome criterion_verdict_matrix() {
    RunOptions opts;
    opts.mc.paths = 100000;
    opts.mc_checks = true;
    std::size_t total = 0, matched = 0, checks = 0, checks_ok = 0, mc = 0, mc_ok = 0;
    std::ostringstream os;
    for (ExampleId id : {ExampleId::Ex61, ExampleId::Ex62, ExampleId::Ex63}) {
        const ExampleRun run = run_example(build_example(id), opts);
        for (const CandidateResult& r : run.results) {
            ++total;
            if (r.matches()) ++matched;
            else os << to_string(id) << ":" << r.candidate.name << " mismatch; ";
            for (const McCheck& m : r.mc) {
                ++mc;
                if (m.pass) ++mc_ok;
            }
        }
        for (const NamedCheck& c : run.checks) {
            ++checks;
            if (c.pass) ++checks_ok;
        }
    }
    os << matched << "/" << total << " candidates match, " << checks_ok << "/" << checks << " named checks, " << mc_ok
       << "/" << mc << " MC checks";
    return {total >= 12 && matched == total && checks_ok == checks && mc_ok == mc, os.str()};
}

Outcome criterion_deviation() {
    const double K = 1.0;
    const ProblemInstance inst(DiffusionSpec::geometric(0.1, 0.3), DiscountSpec::hyperbolic(0.1),
                               PayoffSpec::capped_identity(K));
    const Interval X = inst.state_space();
    const StoppingRegion whole = StoppingRegion::whole(X);
    const StoppingRegion ray = region({Interval{K, kInf, true, false}}, X);
    SimConfig cfg;
    cfg.paths = 200000;
    bool ok = true;
    double zmin = kInf, worst = -kInf;
    for (double eps : {1e-3, 4e-3, 1.6e-2}) {
        const McEstimate d = estimate_deviation(inst, whole, K / 2, eps, cfg);
        zmin = std::min(zmin, d.z());
        ok = ok && d.mean > 0.0 && d.z() >= 3.0;
        for (double x : {K, 2 * K}) {
            const McEstimate d2 = estimate_deviation(inst, ray, x, eps, cfg);
            worst = std::max(worst, d2.mean / d2.std_error);
            ok = ok && d2.mean <= 3.0 * d2.std_error;
        }
    }
    return {ok, "(0,inf) at K/2: min z=" + fmtd("%.1f", zmin) + "; [K,inf) at K,2K: max D/SE=" + fmtd("%.2f", worst)};
}

Outcome criterion_local_time() {
    const ProblemInstance bm(DiffusionSpec::brownian(0.0, 1.0), DiscountSpec::hyperbolic(0.5), PayoffSpec::put(1.0));
    SimConfig cfg;
    cfg.paths = 1000000;
    const McEstimate lt = estimate_local_time(bm, 0.0, 1.0, 1e-3, cfg);
    const double target = std::sqrt(2.0 / M_PI);
    const bool ok = std::fabs(lt.mean - target) <= 3.0 * lt.std_error && lt.std_error <= 0.01;
    return {ok, "E[L]/sqrt(eps)=" + fmtd("%.5f", lt.mean) + " SE=" + fmtd("%.5f", lt.std_error) +
                    " target=" + fmtd("%.5f", target)};
}

Outcome criterion_exit_ratios() {
    const ProblemInstance bm(DiffusionSpec::brownian(0.0, 1.0), DiscountSpec::hyperbolic(0.5), PayoffSpec::put(1.0));
    SimConfig cfg;
    cfg.paths = 50000;
    cfg.step = 1e-7;
    bool ok = true;
    std::ostringstream os;
    for (double r : {0.0, 0.5, -0.5}) {
        const ExitRatios er = exit_time_and_localtime_ratio(bm, 0.0, 0.05, r, cfg);
        const double lt_target = 1.0 / (1.0 + std::fabs(r));
        ok = ok && std::fabs(er.exit_time.mean - 1.0) <= 3.0 * er.exit_time.std_error + 0.05;
        ok = ok && std::fabs(er.local_time.mean - lt_target) <= 3.0 * er.local_time.std_error + 0.05;
        os << "r=" << r << ": exit " << fmtd("%.4f", er.exit_time.mean) << ", local " << fmtd("%.4f", er.local_time.mean)
           << "/" << fmtd("%.4f", lt_target) << "; ";
    }
    return {ok, os.str()};
}

Outcome criterion_resolvent() {
    std::ostringstream os;
    // closed form vs collocation
    double worst_cf = 0.0;
    const DiscountSpec hyp = DiscountSpec::hyperbolic(0.5);
    const ProblemInstance bm(DiffusionSpec::brownian(0.3, 1.2), hyp, quadratic_payoff(1.0, 2.0));
    const ProblemInstance gbm(DiffusionSpec::geometric(0.05, 0.3), hyp, quadratic_payoff(1.0, 2.0));
    const StoppingRegion Sbm = region({Interval::closed(-1.0, 0.8), Interval::closed(1.5, 2.0)}, bm.state_space());
    const StoppingRegion Sgbm = region({Interval{0.0, 0.8, false, true}, Interval::closed(1.5, 2.0)}, gbm.state_space());
    for (auto [inst, S, xs] :
         {std::tuple{&bm, &Sbm, std::vector<double>{-3.0, -1.5, 0.9, 1.2, 1.45, 2.5, 5.0}},
          std::tuple{&gbm, &Sgbm, std::vector<double>{0.9, 1.2, 1.45, 2.5, 5.0, 30.0}}}) {
        const ResolventKernel cf(*inst, *S), bvp(inst->with_custom_diffusion(), *S);
        for (double r : {0.0, 0.05, 1.0, 20.0})
            for (double x : xs) {
                const double a = cf.value(x, r), b = bvp.value(x, r);
                if (a != 0.0 || b != 0.0) worst_cf = std::max(worst_cf, std::fabs(a - b) / std::max(std::fabs(a), 1e-300));
            }
    }
    os << "closed vs BVP rel=" << fmtd("%.1e", worst_cf);

    // J against direct quadrature of the one-point and two-point mixture kernels
    const double beta = 0.5, a = 0.0, b = 1.0, c = 0.42, d = 1.0;
    const ProblemInstance ex(DiffusionSpec::brownian(0.0, 1.0), DiscountSpec::hyperbolic(beta), quadratic_payoff(c, d));
    const Interval X = ex.state_space();
    const ValueEvaluator one(ex, region({Interval::point(b)}, X));
    const ValueEvaluator two(ex, region({Interval::point(a), Interval::point(b)}, X));
    auto q = [&](double s) { return std::sqrt(2.0 * beta * s); };
    double worst_j = 0.0;
    for (double x : {-2.0, -0.5, 0.0, 0.3, 0.5, 0.9, 1.0, 1.7, 4.0}) {
        const double ref = d * mix([&](double s) { return std::exp(-std::fabs(x - b) * q(s)); });
        worst_j = std::max(worst_j, std::fabs(one.J(x) - ref));
    }
    for (double x : {0.01, 0.2, 0.5, 0.77, 0.99}) {
        const double ref = mix([&](double s) {
            const double k = q(s);
            if (k == 0.0) return c * (b - x) / (b - a) + d * (x - a) / (b - a);
            return (c * std::sinh((b - x) * k) + d * std::sinh((x - a) * k)) / std::sinh((b - a) * k);
        });
        worst_j = std::max(worst_j, std::fabs(two.J(x) - ref));
    }
    for (double x : {-3.0, -0.4}) {
        const double ref = c * mix([&](double s) { return std::exp(-(a - x) * q(s)); });
        worst_j = std::max(worst_j, std::fabs(two.J(x) - ref));
    }
    os << ", J vs kernel quadrature=" << fmtd("%.1e", worst_j);

    // one-sided derivatives against Richardson-extrapolated differences of J
    const ProblemInstance custom(
        DiffusionSpec::custom([](double x) { return -0.3 * x; }, [](double x) { return 0.8 + 0.2 * std::sin(x); },
                              Interval::real_line(), "mean-reverting"),
        DiscountSpec::hyperbolic(0.3), quadratic_payoff(1.0, 2.0));
    const ValueEvaluator ebm(bm, Sbm), egbm(gbm, Sgbm),
        ecus(custom, region({Interval::closed(-0.5, 0.2), Interval::closed(1.0, 1.3)}, custom.state_space()));
    const double h = 1e-5;
    double worst_d = 0.0;
    for (const ValueEvaluator* e : {&ebm, &egbm, &ecus}) {
        auto J = [e](double x) { return e->J(x); };
        for (const BoundaryPoint& bp : e->region().boundary()) {
            for (Side side : {Side::Left, Side::Right}) {
                if (e->region().side_in_region(bp.x, side)) continue;
                const double s = side == Side::Left ? -1.0 : 1.0;
                auto D = [&](double hh) { return (J(bp.x + s * hh) - J(bp.x)) / (s * hh); };
                const double rich = 2.0 * D(h / 2) - D(h);
                const double an = e->vx(bp.x, side);
                worst_d = std::max(worst_d, std::fabs(an - rich) / std::max(1.0, std::fabs(an)));
            }
        }
        for (const Component& comp : e->region().complement()) {
            const double lo = std::isfinite(comp.lo) ? comp.lo : comp.hi - 2.0;
            const double hi = std::isfinite(comp.hi) ? comp.hi : comp.lo + 2.0;
            for (double t : {0.25, 0.5, 0.75}) {
                const double x = lo + t * (hi - lo);
                auto C = [&](double hh) { return (J(x + hh) - J(x - hh)) / (2.0 * hh); };
                const double rich = (4.0 * C(h / 2) - C(h)) / 3.0;
                const double an = e->vx(x, Side::Left);
                worst_d = std::max(worst_d, std::fabs(an - rich) / std::max(1.0, std::fabs(an)));
            }
        }
    }
    os << ", derivative vs Richardson=" << fmtd("%.1e", worst_d);
    return {worst_cf <= 1e-7 && worst_j <= 1e-6 && worst_d <= 1e-5, os.str()};
}

Outcome criterion_properties() {
    std::ostringstream os;
    // discount inequalities on every built-in family
    const std::vector<DiscountSpec> discounts = {
        DiscountSpec::exponential(0.1),
        DiscountSpec::hyperbolic(0.5),
        DiscountSpec::generalized_hyperbolic(1.0, 2.0),
        DiscountSpec(PseudoExponential{{0.3, 0.7}, {0.05, 1.0}}),
        DiscountSpec(WeightedMixture{{{0.02, 0.2}, {0.3, 0.5}, {2.0, 0.3}}}),
    };
    std::vector<double> tgrid;
    for (int i = 0; i < 32; ++i) tgrid.push_back(i == 0 ? 0.0 : std::pow(10.0, -4.0 + 7.0 * (i - 1) / 30.0));
    std::vector<std::pair<double, double>> pairs;
    for (double t : tgrid)
        for (double s : tgrid) pairs.emplace_back(t, s);
    bool disc_ok = pairs.size() >= 1000;
    for (const DiscountSpec& d : discounts) {
        const double d0 = d.delta_prime0();
        for (auto [t, s] : pairs) disc_ok = disc_ok && d.delta(t + s) - d.delta(t) * d.delta(s) >= -1e-12;
        for (double t : tgrid) {
            disc_ok = disc_ok && d.delta_prime(t) - d.delta(t) * d0 >= -1e-12;
            disc_ok = disc_ok && std::fabs(d0) * t - (1.0 - d.delta(t)) >= -1e-12;
        }
        disc_ok = disc_ok && discount_check_log_subadditive(d, pairs).holds &&
                  discount_derivative_inequalities(d, tgrid).holds;
    }
    os << "discounts " << (disc_ok ? "ok" : "FAILED") << " on " << pairs.size() << " pairs";

    // randomized instances
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int pasting_fail = 0, hierarchy_fail = 0, idem_fail = 0, strong = 0, weak = 0;
    for (int i = 0; i < 50; ++i) {
        const bool geometric = U(rng) < 0.5;
        const DiffusionSpec diff = geometric ? DiffusionSpec::geometric(-0.05 + 0.15 * U(rng), 0.2 + 0.3 * U(rng))
                                             : DiffusionSpec::brownian(-0.3 + 0.6 * U(rng), 0.5 + U(rng));
        const int dk = static_cast<int>(U(rng) * 3);
        const DiscountSpec disc = dk == 0   ? DiscountSpec::exponential(0.05 + 0.45 * U(rng))
                                  : dk == 1 ? DiscountSpec::hyperbolic(0.05 + U(rng))
                                            : DiscountSpec::generalized_hyperbolic(0.1 + U(rng), 0.5 + 2.5 * U(rng));
        const bool call_like = geometric && U(rng) < 0.5;
        const PayoffSpec pay = call_like ? PayoffSpec::capped_identity(1.0) : PayoffSpec::put(1.0);
        const ProblemInstance inst(diff, disc, pay);
        const Interval X = inst.state_space();
        StoppingRegion S;
        const double pick = U(rng);
        if (pick < 0.3 && !call_like) {
            S = find_threshold_equilibrium(inst, ThresholdFamily::LeftRay).region;
        } else if (pick < 0.3) {
            S = region({Interval{1.0 + U(rng), kInf, true, false}}, X);
        } else {
            const double lo = geometric ? 0.2 + U(rng) : -2.0 + 2.0 * U(rng);
            const double a = lo + 0.6 * U(rng), b = a + 0.1 + 0.5 * U(rng), c = b + 0.2 + U(rng);
            if (U(rng) < 0.5)
                S = region({Interval::closed(lo, a)}, X);
            else
                S = region({Interval::closed(lo, a), Interval::closed(b, c)}, X);
        }
        const ValueEvaluator e(inst, S);
        const EquilibriumReport r = classify(e);
        for (const BoundaryPoint& bp : S.boundary())
            for (Side side : {Side::Left, Side::Right}) {
                if (S.side_in_region(bp.x, side)) continue;
                const double hh = 1e-10, x = bp.x + (side == Side::Left ? -hh : hh);
                if (std::fabs(e.J(x) - pay(bp.x)) > 1e-8 + hh * std::fabs(e.vx(bp.x, side))) ++pasting_fail;
            }
        const bool certified = r.strong == StrongStatus::CertifiedStrong;
        if ((certified && !r.weak.holds) || (r.weak.holds && !r.mild.holds)) ++hierarchy_fail;
        if (r.weak.holds) ++weak;
        if (certified) {
            ++strong;
            const StoppingRegion F = fraktur_region(r.fraktur, X);
            const FrakturResult again = compute_fraktur_S(ValueEvaluator(inst, F));
            if (again.intervals != r.fraktur.intervals || !(F == S)) ++idem_fail;
        }
    }
    os << "; 50 random instances (" << weak << " weak, " << strong << " certified strong): pasting failures "
       << pasting_fail << ", hierarchy failures " << hierarchy_fail << ", idempotence failures " << idem_fail;
    return {disc_ok && pasting_fail == 0 && hierarchy_fail == 0 && idem_fail == 0 && strong > 0, os.str()};
}

}  // namespace

int main() {
    run(1, "two-point sandwich bounds", 1, criterion_sandwich);
    run(2, "hyperbolic put threshold", 5, criterion_hyperbolic_threshold);
    run(3, "exponential put threshold", 5, criterion_exponential_put);
    run(4, "worked example verdict matrix", 120, criterion_verdict_matrix);
    run(5, "deviation sign agrees with weak verdict", 60, criterion_deviation);
    run(6, "local time constant", 120, criterion_local_time);
    run(7, "exit time and local time ratios", 120, criterion_exit_ratios);
    run(8, "resolvent correctness", 30, criterion_resolvent);
    run(9, "property suites", 60, criterion_properties);
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
