#include "tistop/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "tistop/errors.hpp"
#include "tistop/rng.hpp"

namespace tistop {

double McEstimate::z(double reference) const {
    const double d = mean - reference;
    if (std_error > 0.0) return d / std_error;
    if (d == 0.0) return 0.0;
    return d > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}

double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t m = n / 2;
    return pairwise_sum(v, m) + pairwise_sum(v + m, n - m);
}

void validate(const SimConfig& cfg) {
    if (!(cfg.step > 0.0)) throw ParameterError("mc.step must be positive");
    if (cfg.max_step < 0.0) throw ParameterError("mc.max_step must be non-negative");
    if (!(cfg.adapt > 0.0)) throw ParameterError("mc.adapt must be positive");
    if (cfg.horizon < 0.0) throw ParameterError("mc.horizon must be non-negative");
    if (!(cfg.horizon_discount > 0.0 && cfg.horizon_discount < 1.0))
        throw ParameterError("mc.horizon_discount must lie in (0, 1)");
    if (cfg.paths < 100) throw ParameterError("mc.paths must be at least 100");
    if (cfg.band < 0.0) throw ParameterError("mc.band must be non-negative");
    if (cfg.threads < 1) throw ParameterError("mc.threads must be at least 1");
}

double discount_horizon(const DiscountSpec& d, double level) {
    double hi = 1.0;
    while (d.delta(hi) > level) {
        hi *= 2.0;
        if (hi > 1e12) return hi;
    }
    double lo = 0.0;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (d.delta(mid) > level ? lo : hi) = mid;
    }
    return hi;
}

namespace {

class Stepper {
public:
    Stepper(const DiffusionSpec& d, Scheme s) : d_(d), X_(d.state_space()) {
        exact_ = s == Scheme::Auto && d.kind() != DiffusionKind::Custom;
        gbm_ = d.kind() == DiffusionKind::GeometricBrownianMotion;
        mu_ = d.mu_param();
        sigma_ = d.sigma_param();
    }

    bool exact() const { return exact_; }
    const Interval& X() const { return X_; }

    // Coordinate in which the path moves like a Brownian motion with volatility sig().
    double y(double x) const { return exact_ && gbm_ ? std::log(x) : x; }
    double sig(double x) const { return exact_ ? sigma_ : std::fabs(d_.sigma(x)); }

    double advance(double x, double h, double z) const {
        if (exact_) {
            if (gbm_) return x * std::exp((mu_ - 0.5 * sigma_ * sigma_) * h + sigma_ * std::sqrt(h) * z);
            return x + mu_ * h + sigma_ * std::sqrt(h) * z;
        }
        return x + d_.mu(x) * h + d_.sigma(x) * std::sqrt(h) * z;
    }

    double mean(double x, double h) const {
        if (exact_) return gbm_ ? x * std::exp(mu_ * h) : x + mu_ * h;
        return x + d_.mu(x) * h;
    }

private:
    const DiffusionSpec& d_;
    Interval X_;
    bool exact_ = false;
    bool gbm_ = false;
    double mu_ = 0.0, sigma_ = 0.0;
};

struct PathEnd {
    double t;
    double x;
    bool entered;
    bool censored;
    bool domain_exit;
};

struct StepLimits {
    double step;
    double max_step;
    double adapt;
};

StepLimits limits(const SimConfig& cfg, const Stepper& st) {
    double m = cfg.max_step;
    if (m == 0.0) m = st.exact() ? std::numeric_limits<double>::infinity() : 100.0 * cfg.step;
    return {cfg.step, std::max(m, cfg.step), cfg.adapt};
}

struct NoObserver {
    void operator()(double, double, double, double, double, double) const {}
};

// Runs one path from (t, x) until it enters S (continuous monitoring with a
// Brownian-bridge crossing test per step) or reaches T. The observer sees
// (t, x, raw scheme endpoint, recorded endpoint, h, conditional mean).
template <class Obs>
PathEnd run_to_entry(const Stepper& st, const StoppingRegion& S, double x, double t, double T, const StepLimits& lim,
                     PathRng& rng, Obs&& obs) {
    if (S.in_region(x)) return {t, x, true, false, false};
    const auto ci = S.component_containing(x);
    const Component c = S.complement()[*ci];
    const double ylo = c.lo_is_stop ? st.y(c.lo) : 0.0, yhi = c.hi_is_stop ? st.y(c.hi) : 0.0;
    const Interval& X = st.X();
    while (true) {
        if (t >= T) return {t, x, false, true, false};
        const double yx = st.y(x), s = st.sig(x);
        double dist = std::numeric_limits<double>::infinity();
        if (c.lo_is_stop) dist = std::min(dist, (yx - ylo) / s);
        if (c.hi_is_stop) dist = std::min(dist, (yhi - yx) / s);
        double h = std::clamp(lim.adapt * dist * dist, lim.step, lim.max_step);
        h = std::min(h, T - t);
        const double z = rng.normal();
        const double xr = st.advance(x, h, z);
        const double m = st.mean(x, h);
        double xn = xr;
        bool entered = false;
        if (c.lo_is_stop && xr <= c.lo) {
            xn = c.lo;
            entered = true;
        } else if (c.hi_is_stop && xr >= c.hi) {
            xn = c.hi;
            entered = true;
        } else if (!X.interior_contains(xr)) {
            obs(t, x, xr, xr, h, m);
            return {t + h, xr, false, false, true};
        } else {
            const double yr = st.y(xr), v = s * s * h;
            if (c.lo_is_stop && rng.uniform() < std::exp(-2.0 * (yx - ylo) * (yr - ylo) / v)) {
                xn = c.lo;
                entered = true;
            } else if (c.hi_is_stop && rng.uniform() < std::exp(-2.0 * (yhi - yx) * (yhi - yr) / v)) {
                xn = c.hi;
                entered = true;
            }
        }
        obs(t, x, xr, xn, h, m);
        t += h;
        x = xn;
        if (entered) return {t, x, true, false, false};
    }
}

template <class F>
void for_paths(std::size_t n, unsigned threads, F&& f) {
    if (threads <= 1 || n < 2 * threads) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned k = 0; k < threads; ++k) {
        const std::size_t lo = k * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &f] {
            for (std::size_t i = lo; i < hi; ++i) f(i);
        });
    }
    for (auto& th : pool) th.join();
}

double mean_of(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()) / static_cast<double>(v.size()); }

McEstimate summarize(const std::vector<double>& v, const SimConfig& cfg, std::string target) {
    McEstimate e;
    e.n = v.size();
    e.seed = cfg.seed;
    e.target = std::move(target);
    e.mean = mean_of(v);
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - e.mean) * (v[i] - e.mean);
    const double var = v.size() > 1 ? pairwise_sum(sq.data(), sq.size()) / static_cast<double>(v.size() - 1) : 0.0;
    e.std_error = std::sqrt(var / static_cast<double>(v.size()));
    return e;
}

double horizon_for(const ProblemInstance& inst, const SimConfig& cfg) {
    return cfg.horizon > 0.0 ? cfg.horizon : discount_horizon(inst.discount(), cfg.horizon_discount);
}

void check_start(const ProblemInstance& inst, double x) {
    if (!inst.state_space().interior_contains(x)) throw DomainError("start point outside the state space");
}

// Complement of the open ball (x0 - h, x0 + h), as a stopping region of X.
StoppingRegion ball_exit_region(const Interval& X, double x0, double h) {
    if (!(h > 0.0)) throw ParameterError("ball radius h must be positive");
    std::vector<Interval> p;
    if (X.interior_contains(x0 - h)) p.push_back({X.lower, x0 - h, X.lower_closed, true});
    if (X.interior_contains(x0 + h)) p.push_back({x0 + h, X.upper, true, X.upper_closed});
    return StoppingRegion::normalize(p, X);
}

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

template <class Payoff>
McEstimate entry_estimate(const ProblemInstance& inst, const StoppingRegion& S, double x0, const SimConfig& cfg,
                          Payoff&& payoff, std::string target) {
    validate(cfg);
    check_start(inst, x0);
    const Stepper st(inst.diffusion(), cfg.scheme);
    const StepLimits lim = limits(cfg, st);
    const double T = horizon_for(inst, cfg);
    std::vector<double> v(cfg.paths);
    std::vector<char> cens(cfg.paths), dexit(cfg.paths);
    for_paths(cfg.paths, cfg.threads, [&](std::size_t i) {
        PathRng rng(cfg.seed, i);
        const PathEnd e = run_to_entry(st, S, x0, 0.0, T, lim, rng, NoObserver{});
        cens[i] = e.censored;
        dexit[i] = e.domain_exit;
        v[i] = e.entered ? payoff(e.t, e.x) : 0.0;
    });
    McEstimate est = summarize(v, cfg, std::move(target));
    const std::size_t nc = static_cast<std::size_t>(std::count(cens.begin(), cens.end(), 1));
    est.censored_fraction = static_cast<double>(nc) / static_cast<double>(cfg.paths);
    est.censored_mass = est.censored_fraction * inst.discount().delta(T);
    est.domain_exits = static_cast<std::size_t>(std::count(dexit.begin(), dexit.end(), 1));
    return est;
}

}  // namespace

std::vector<EntrySample> simulate_first_entry(const ProblemInstance& inst, const StoppingRegion& S, double x0,
                                              const SimConfig& cfg) {
    validate(cfg);
    check_start(inst, x0);
    const Stepper st(inst.diffusion(), cfg.scheme);
    const StepLimits lim = limits(cfg, st);
    const double T = horizon_for(inst, cfg);
    std::vector<EntrySample> out(cfg.paths);
    for_paths(cfg.paths, cfg.threads, [&](std::size_t i) {
        PathRng rng(cfg.seed, i);
        const PathEnd e = run_to_entry(st, S, x0, 0.0, T, lim, rng, NoObserver{});
        out[i] = {e.t, e.x, e.censored, e.domain_exit};
    });
    return out;
}

McEstimate estimate_J(const ProblemInstance& inst, const StoppingRegion& S, double x0, const SimConfig& cfg) {
    const auto& d = inst.discount();
    const auto& f = inst.payoff();
    return entry_estimate(inst, S, x0, cfg, [&](double t, double x) { return d.delta(t) * f(x); }, "J(x,S)");
}

McEstimate estimate_resolvent(const ProblemInstance& inst, const StoppingRegion& S, double x0, double r,
                              const SimConfig& cfg) {
    if (r < 0.0) throw ParameterError("rate must be non-negative");
    const auto& f = inst.payoff();
    McEstimate e =
        entry_estimate(inst, S, x0, cfg, [&](double t, double x) { return std::exp(-r * t) * f(x); }, "v(x,r,S)");
    return e;
}

McEstimate estimate_deviation(const ProblemInstance& inst, const StoppingRegion& S, double x, double eps,
                              const SimConfig& cfg, bool control) {
    validate(cfg);
    check_start(inst, x);
    if (!(eps > 0.0)) throw ParameterError("deviation delay eps must be positive");
    if (!S.in_region(x)) throw ParameterError("deviation start point must lie in S");
    const Stepper st(inst.diffusion(), cfg.scheme);
    const StepLimits lim = limits(cfg, st);
    const StepLimits free_lim{lim.step, std::min(lim.max_step, std::max(cfg.step, eps)), lim.adapt};
    const double T = std::max(horizon_for(inst, cfg), 2.0 * eps);
    const auto& d = inst.discount();
    const auto& f = inst.payoff();
    const StoppingRegion none = StoppingRegion::empty(inst.state_space());
    const double fx = f(x);
    const double slope = 0.5 * (f.d1(x, Side::Left) + f.d1(x, Side::Right));
    std::vector<double> y(cfg.paths), m(cfg.paths);
    std::vector<char> cens(cfg.paths), dexit(cfg.paths);
    for_paths(cfg.paths, cfg.threads, [&](std::size_t i) {
        PathRng rng(cfg.seed, i);
        double mart = 0.0;
        auto obs = [&](double t, double, double xr, double, double h, double mean) {
            mart += d.delta(t + h) * slope * (xr - mean);
        };
        const PathEnd a = run_to_entry(st, none, x, 0.0, eps, free_lim, rng, obs);
        double val = 0.0;
        if (a.domain_exit) {
            dexit[i] = 1;
        } else {
            const PathEnd b = run_to_entry(st, S, a.x, a.t, T, lim, rng, NoObserver{});
            cens[i] = b.censored;
            dexit[i] = b.domain_exit;
            if (b.entered) val = d.delta(b.t) * f(b.x);
        }
        y[i] = val - fx;
        m[i] = mart;
    });
    std::vector<double> r = y;
    if (control) {
        const double my = mean_of(y), mm = mean_of(m);
        std::vector<double> cov(cfg.paths), var(cfg.paths);
        for (std::size_t i = 0; i < cfg.paths; ++i) {
            cov[i] = (y[i] - my) * (m[i] - mm);
            var[i] = (m[i] - mm) * (m[i] - mm);
        }
        const double vm = pairwise_sum(var.data(), var.size());
        const double coef = vm > 0.0 ? pairwise_sum(cov.data(), cov.size()) / vm : 0.0;
        for (std::size_t i = 0; i < cfg.paths; ++i) r[i] = y[i] - coef * m[i];
    }
    McEstimate est = summarize(r, cfg, "D(eps)");
    const std::size_t nc = static_cast<std::size_t>(std::count(cens.begin(), cens.end(), 1));
    est.censored_fraction = static_cast<double>(nc) / static_cast<double>(cfg.paths);
    est.censored_mass = est.censored_fraction * d.delta(T);
    est.domain_exits = static_cast<std::size_t>(std::count(dexit.begin(), dexit.end(), 1));
    return est;
}

std::vector<DeviationPoint> deviation_sweep(const ProblemInstance& inst, const StoppingRegion& S, double x,
                                            const std::vector<double>& eps, const SimConfig& cfg) {
    std::vector<DeviationPoint> out;
    for (double e : eps) {
        McEstimate d = estimate_deviation(inst, S, x, e, cfg);
        out.push_back({e, d, d.mean / e, d.std_error / e});
    }
    return out;
}

McEstimate estimate_local_time(const ProblemInstance& inst, double x0, double h, double eps, const SimConfig& cfg,
                               LocalTimeMethod method) {
    validate(cfg);
    check_start(inst, x0);
    if (!(eps > 0.0)) throw ParameterError("eps must be positive");
    const Stepper st(inst.diffusion(), cfg.scheme);
    StepLimits lim = limits(cfg, st);
    const StoppingRegion exit = ball_exit_region(inst.state_space(), x0, h);
    const double s0 = std::fabs(inst.diffusion().sigma(x0));
    const double band = cfg.band > 0.0 ? cfg.band : std::max(3.0 * s0 * std::sqrt(cfg.step), 1e-4);
    if (method == LocalTimeMethod::Occupation) lim.max_step = cfg.step;
    const auto& diff = inst.diffusion();
    std::vector<double> v(cfg.paths);
    for_paths(cfg.paths, cfg.threads, [&](std::size_t i) {
        PathRng rng(cfg.seed, i);
        double L = 0.0;
        auto tanaka = [&](double, double xk, double, double xn, double, double) {
            L += std::fabs(xn - x0) - std::fabs(xk - x0) - sgn(xk - x0) * (xn - xk);
        };
        auto occupation = [&](double, double xk, double, double, double hh, double) {
            if (std::fabs(xk - x0) <= band) {
                const double s = diff.sigma(xk);
                L += s * s * hh / (2.0 * band);
            }
        };
        if (method == LocalTimeMethod::Tanaka)
            run_to_entry(st, exit, x0, 0.0, eps, lim, rng, tanaka);
        else
            run_to_entry(st, exit, x0, 0.0, eps, lim, rng, occupation);
        v[i] = L / std::sqrt(eps);
    });
    return summarize(v, cfg, method == LocalTimeMethod::Tanaka ? "E[L_(eps^tau)]/sqrt(eps) (Tanaka)"
                                                                 : "E[L_(eps^tau)]/sqrt(eps) (occupation)");
}

McEstimate small_time_exit_prob(const ProblemInstance& inst, double x0, double h, double eps, const SimConfig& cfg) {
    validate(cfg);
    check_start(inst, x0);
    if (!(eps > 0.0)) throw ParameterError("eps must be positive");
    const Stepper st(inst.diffusion(), cfg.scheme);
    const StepLimits lim = limits(cfg, st);
    const StoppingRegion exit = ball_exit_region(inst.state_space(), x0, h);
    std::vector<double> v(cfg.paths);
    for_paths(cfg.paths, cfg.threads, [&](std::size_t i) {
        PathRng rng(cfg.seed, i);
        const PathEnd e = run_to_entry(st, exit, x0, 0.0, eps, lim, rng, NoObserver{});
        v[i] = (e.entered || e.domain_exit) ? 1.0 : 0.0;
    });
    return summarize(v, cfg, "P(tau_B <= eps)");
}

McEstimate half_probability(const ProblemInstance& inst, double x0, double t, const SimConfig& cfg) {
    validate(cfg);
    check_start(inst, x0);
    if (!(t > 0.0)) throw ParameterError("t must be positive");
    const Stepper st(inst.diffusion(), cfg.scheme);
    StepLimits lim = limits(cfg, st);
    lim.max_step = std::min(lim.max_step, std::max(cfg.step, t));
    const StoppingRegion none = StoppingRegion::empty(inst.state_space());
    std::vector<double> v(cfg.paths);
    for_paths(cfg.paths, cfg.threads, [&](std::size_t i) {
        PathRng rng(cfg.seed, i);
        const PathEnd e = run_to_entry(st, none, x0, 0.0, t, lim, rng, NoObserver{});
        v[i] = (!e.domain_exit && e.x > x0) ? 1.0 : 0.0;
    });
    return summarize(v, cfg, "P(X_t > x0)");
}

ExitRatios exit_time_and_localtime_ratio(const ProblemInstance& inst, double x0, double h, double r,
                                         const SimConfig& cfg) {
    validate(cfg);
    check_start(inst, x0);
    if (!(r > -1.0 && r < 1.0)) throw ParameterError("r must lie in (-1, 1)");
    const double start = x0 + r * h;
    check_start(inst, start);
    const Stepper st(inst.diffusion(), cfg.scheme);
    const StepLimits lim = limits(cfg, st);
    const StoppingRegion exit = ball_exit_region(inst.state_space(), x0, h);
    const double s0 = std::fabs(inst.diffusion().sigma(x0));
    const double T = cfg.horizon > 0.0 ? cfg.horizon : 1e4 * h * h / (s0 * s0);
    const auto& d = inst.discount();
    std::vector<double> tau(cfg.paths), ld(cfg.paths);
    for_paths(cfg.paths, cfg.threads, [&](std::size_t i) {
        PathRng rng(cfg.seed, i);
        double L = 0.0;
        auto obs = [&](double t, double xk, double, double xn, double, double) {
            L += d.delta(t) * (std::fabs(xn - x0) - std::fabs(xk - x0) - sgn(xk - x0) * (xn - xk));
        };
        const PathEnd e = run_to_entry(st, exit, start, 0.0, T, lim, rng, obs);
        tau[i] = e.t;
        ld[i] = L;
    });
    const double scale = (1.0 - r * r) * h * h;
    McEstimate et = summarize(tau, cfg, "E[tau]/((1-r^2)h^2)");
    McEstimate lt = summarize(ld, cfg, "h E[int delta dL]/E[tau]");
    const double mt = et.mean, ml = lt.mean;
    const double ratio = h * ml / mt;
    std::vector<double> lin(cfg.paths);
    for (std::size_t i = 0; i < cfg.paths; ++i) lin[i] = (h * ld[i] - ratio * tau[i]) / mt;
    const McEstimate dl = summarize(lin, cfg, "");
    lt.mean = ratio;
    lt.std_error = dl.std_error;
    et.mean = mt / scale;
    et.std_error /= scale;
    return {et, lt};
}

McEstimate drift_remainder_check(const ProblemInstance& inst, double x0, double eps, const SimConfig& cfg) {
    validate(cfg);
    check_start(inst, x0);
    if (!(eps > 0.0)) throw ParameterError("eps must be positive");
    const Stepper st(inst.diffusion(), cfg.scheme);
    const auto& diff = inst.diffusion();
    const std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(eps / cfg.step)));
    const double h = eps / static_cast<double>(n);
    const double mu0 = diff.mu(x0), s0 = diff.sigma(x0);
    std::vector<double> v(cfg.paths);
    for_paths(cfg.paths, cfg.threads, [&](std::size_t i) {
        PathRng rng(cfg.seed, i);
        double x = x0, w = 0.0;
        bool out = false;
        for (std::size_t k = 0; k < n; ++k) {
            const double z = rng.normal();
            x = st.advance(x, h, z);
            w += std::sqrt(h) * z;
            if (!diff.state_space().interior_contains(x)) {
                out = true;
                break;
            }
        }
        v[i] = out ? 0.0 : std::fabs(x - x0 - mu0 * eps - s0 * w);
    });
    return summarize(v, cfg, "E|X_eps - x0 - mu eps - sigma W_eps|");
}

}  // namespace tistop
