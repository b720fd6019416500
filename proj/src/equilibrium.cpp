#include "tistop/equilibrium.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <map>

#include "tistop/errors.hpp"

namespace tistop {

const char* to_string(StrongStatus s) {
    switch (s) {
        case StrongStatus::CertifiedStrong: return "certified strong";
        case StrongStatus::NotCertified: return "not certified";
        case StrongStatus::NotStrongWitnessed: return "not strong, witnessed";
    }
    return "?";
}

const char* to_string(ThresholdFamily f) {
    switch (f) {
        case ThresholdFamily::LeftRay: return "left_ray";
        case ThresholdFamily::RightRay: return "right_ray";
        case ThresholdFamily::Point: return "point";
        case ThresholdFamily::TwoPoint: return "two_point";
    }
    return "?";
}

ThresholdFamily threshold_family_from_string(const std::string& s) {
    if (s == "left_ray") return ThresholdFamily::LeftRay;
    if (s == "right_ray") return ThresholdFamily::RightRay;
    if (s == "point") return ThresholdFamily::Point;
    if (s == "two_point") return ThresholdFamily::TwoPoint;
    throw ConfigError("unknown threshold family '" + s + "' (left_ray, right_ray, point, two_point)");
}

namespace {

std::vector<double> logspace(double lo_exp, double hi_exp, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = std::pow(10.0, lo_exp + (hi_exp - lo_exp) * static_cast<double>(i) / static_cast<double>(n - 1));
    return v;
}

// Points strictly inside (lo, hi), dense near finite ends.
std::vector<double> interval_grid(double lo, double hi, std::size_t n) {
    std::vector<double> xs;
    if (n < 4) n = 4;
    const bool flo = std::isfinite(lo), fhi = std::isfinite(hi);
    if (flo && fhi) {
        const double L = hi - lo;
        const std::size_t m = 10;
        const std::size_t nc = n > 2 * m + 2 ? n - 2 * m : 2;
        for (std::size_t j = 1; j <= nc; ++j)
            xs.push_back(lo + L * 0.5 * (1.0 - std::cos(M_PI * static_cast<double>(j) / static_cast<double>(nc + 1))));
        for (std::size_t k = 2; k < 2 + m; ++k) {
            const double t = std::pow(10.0, -static_cast<double>(k));
            xs.push_back(lo + L * t);
            xs.push_back(hi - L * t);
        }
    } else if (flo || fhi) {
        const double e = flo ? lo : hi;
        const double s = std::max(1.0, std::fabs(e));
        for (double d : logspace(-10.0, 6.0, n)) xs.push_back(flo ? e + s * d : e - s * d);
    } else {
        for (double d : logspace(-3.0, 6.0, n / 2)) {
            xs.push_back(d);
            xs.push_back(-d);
        }
        xs.push_back(0.0);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<double> out;
    for (double x : xs)
        if (x > lo && x < hi) out.push_back(x);
    return out;
}

double golden_min(const std::function<double(double)>& g, double a, double b, double& fmin) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = g(c), fd = g(d);
    for (int it = 0; it < 80 && (b - a) > 1e-14 * (1.0 + std::fabs(a) + std::fabs(b)); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = g(d);
        }
    }
    if (fc < fd) {
        fmin = fc;
        return c;
    }
    fmin = fd;
    return d;
}

double tol_at(const ValueEvaluator& e, double x) {
    return e.options().tol_eq * (1.0 + std::fabs(e.instance().payoff()(x)));
}

}  // namespace

std::vector<double> complement_grid(const StoppingRegion& S, std::size_t per_component) {
    std::vector<double> xs;
    for (const Component& c : S.complement()) {
        auto g = interval_grid(c.lo, c.hi, per_component);
        xs.insert(xs.end(), g.begin(), g.end());
    }
    return xs;
}

std::vector<std::pair<double, std::string>> region_points(const ValueEvaluator& e) {
    const StoppingRegion& S = e.region();
    const Interval& X = S.state_space();
    std::map<double, std::string> pts;
    for (const Interval& p : S.pieces()) {
        if (p.is_point()) continue;
        for (double x : interval_grid(p.lower, p.upper, e.options().interior_points)) pts.emplace(x, "interior");
    }
    for (double k : e.instance().payoff().kinks())
        if (X.interior_contains(k) && S.contains(k) == Membership::InteriorOfS) pts[k] = "kink";
    for (const BoundaryPoint& b : S.boundary()) pts[b.x] = "boundary";
    return {pts.begin(), pts.end()};
}

MildResult check_mild(const ValueEvaluator& e) {
    MildResult r;
    const StoppingRegion& S = e.region();
    auto margin = [&e](double x) { return e.gap(x) + tol_at(e, x); };
    for (const Component& c : S.complement()) {
        const auto xs = interval_grid(c.lo, c.hi, e.options().grid_points);
        if (xs.empty()) continue;
        r.has_points = true;
        std::vector<double> m(xs.size());
        std::size_t best = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            m[i] = margin(xs[i]);
            r.min_gap = std::min(r.min_gap, e.gap(xs[i]));
            if (m[i] < m[best]) best = i;
        }
        double wx = xs[best], wm = m[best];
        const double a = best > 0 ? xs[best - 1] : (std::isfinite(c.lo) ? c.lo : xs[best]);
        const double b = best + 1 < xs.size() ? xs[best + 1] : (std::isfinite(c.hi) ? c.hi : xs[best]);
        if (b > a) {
            double fm;
            const double xm = golden_min(margin, a, b, fm);
            if (xm > c.lo && xm < c.hi && fm < wm) {
                wx = xm;
                wm = fm;
                r.min_gap = std::min(r.min_gap, e.gap(xm));
            }
        }
        if (wm < r.witness_margin) {
            r.witness_margin = wm;
            r.witness = wx;
        }
    }
    r.holds = !r.has_points || r.witness_margin >= 0.0;
    return r;
}

namespace {

WeakResult weak_given_mild(const ValueEvaluator& e, const MildResult& m) {
    WeakResult w;
    w.mild = m.holds;
    for (const auto& [x, where] : region_points(e)) {
        PointConditions pc{x, where, e.instance().payoff()(x), e.vx(x, Side::Left), e.vx(x, Side::Right),
                           e.LV(x, Side::Left), e.LV(x, Side::Right)};
        const double tol = tol_at(e, x);
        if (where != "interior") {
            const double dm = pc.vx_left - pc.vx_right + tol;
            if (dm < w.worst_derivative_margin) {
                w.worst_derivative_margin = dm;
                w.derivative_witness = x;
            }
        }
        const double gm = tol - std::max(pc.lv_left, pc.lv_right);
        if (gm < w.worst_generator_margin) {
            w.worst_generator_margin = gm;
            w.generator_witness = x;
        }
        w.points.push_back(pc);
    }
    w.derivative_condition = w.worst_derivative_margin >= 0.0;
    w.generator_condition = w.worst_generator_margin >= 0.0;
    w.holds = w.mild && w.derivative_condition && w.generator_condition;
    return w;
}

}  // namespace

WeakResult check_weak(const ValueEvaluator& e) { return weak_given_mild(e, check_mild(e)); }

double smooth_fit_residual(const ValueEvaluator& e, double x) {
    const auto& bd = e.region().boundary();
    if (std::none_of(bd.begin(), bd.end(), [x](const BoundaryPoint& b) { return b.x == x; }))
        throw NotBoundaryPoint("x = " + std::to_string(x) + " is not a boundary point of " + e.region().describe());
    return e.vx(x, Side::Left) - e.vx(x, Side::Right);
}

std::vector<SmoothFit> smooth_fit_residuals(const ValueEvaluator& e) {
    std::vector<SmoothFit> out;
    const PayoffSpec& f = e.instance().payoff();
    for (const BoundaryPoint& b : e.region().boundary()) {
        const bool diff = std::fabs(f.d1(b.x, Side::Left) - f.d1(b.x, Side::Right)) <= 1e-12 * (1.0 + std::fabs(f.d1(b.x, Side::Left)));
        out.push_back({b.x, smooth_fit_residual(e, b.x), diff});
    }
    return out;
}

FrakturResult compute_fraktur_S(const ValueEvaluator& e) {
    FrakturResult fr;
    const StoppingRegion& S = e.region();
    const double ts = e.options().tol_strict, te = e.options().tol_eq;
    const auto pts = region_points(e);
    std::vector<bool> qual(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double x = pts[i].first;
        const double qg = -std::min(e.LV(x, Side::Left), e.LV(x, Side::Right));
        const double qd = e.vx(x, Side::Left) - e.vx(x, Side::Right);
        const bool g = qg > ts, d = qd > ts;
        qual[i] = g || d;
        if (qual[i]) {
            fr.qualifying.emplace_back(x, g && d ? "both" : (g ? "generator" : "derivative"));
        } else {
            fr.excluded.push_back(x);
            const double q = std::max(qg, qd);
            if (q > te && q <= ts) fr.indeterminate.push_back(x);
        }
    }
    for (const Interval& p : S.pieces()) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (p.contains(pts[i].first)) idx.push_back(i);
        std::size_t k = 0;
        while (k < idx.size()) {
            if (!qual[idx[k]]) {
                ++k;
                continue;
            }
            std::size_t j = k;
            while (j + 1 < idx.size() && qual[idx[j + 1]]) ++j;
            Interval iv = Interval::closed(pts[idx[k]].first, pts[idx[j]].first);
            if (k == 0 && !p.lower_closed) {
                iv.lower = p.lower;
                iv.lower_closed = false;
            }
            if (j + 1 == idx.size() && !p.upper_closed) {
                iv.upper = p.upper;
                iv.upper_closed = false;
            }
            fr.intervals.push_back(iv);
            k = j + 1;
        }
    }
    fr.equals_S = fr.excluded.empty();
    return fr;
}

StoppingRegion fraktur_region(const FrakturResult& fr, const Interval& X) {
    return StoppingRegion::normalize(fr.intervals, X);
}

StrongStatus check_strong_sufficient(const ValueEvaluator& e) {
    if (!check_weak(e).holds) return StrongStatus::NotCertified;
    return compute_fraktur_S(e).equals_S ? StrongStatus::CertifiedStrong : StrongStatus::NotCertified;
}

OptimalityResult optimal_within_family(const ValueEvaluator& e, const std::vector<const ValueEvaluator*>& competitors) {
    OptimalityResult o;
    if (!check_mild(e).holds) return o;
    const Interval& X = e.region().state_space();
    std::vector<double> grid = sample_grid(X, 400);
    auto add = [&grid](const StoppingRegion& S) {
        const auto g = complement_grid(S, 65);
        grid.insert(grid.end(), g.begin(), g.end());
        for (const BoundaryPoint& b : S.boundary()) grid.push_back(b.x);
    };
    add(e.region());
    for (const ValueEvaluator* c : competitors) add(c->region());
    for (const ValueEvaluator* c : competitors) {
        if (&c->region() == &e.region() || c->region() == e.region()) continue;
        if (!check_mild(*c).holds) continue;
        ++o.competitors;
        for (double x : grid) {
            if (!X.contains(x)) continue;
            const double m = e.J(x) - c->J(x) + tol_at(e, x);
            if (m < o.worst_margin) {
                o.worst_margin = m;
                o.witness = x;
            }
        }
    }
    o.optimal = o.worst_margin >= 0.0;
    return o;
}

EquilibriumReport classify(const ValueEvaluator& e) {
    EquilibriumReport r;
    r.region = e.region();
    r.mild = check_mild(e);
    r.weak = weak_given_mild(e, r.mild);
    r.smooth_fit = smooth_fit_residuals(e);
    r.fraktur = compute_fraktur_S(e);
    r.strong = r.weak.holds && r.fraktur.equals_S ? StrongStatus::CertifiedStrong : StrongStatus::NotCertified;
    r.tolerances = e.options();
    r.notes = e.instance().notes();
    for (const Component& c : e.region().complement()) {
        if (!c.lo_is_stop || !c.hi_is_stop) {
            r.notes.push_back("complement components reaching an end of the state space use the decaying solution");
            break;
        }
    }
    r.notes.push_back("the one-sided neighbourhood condition holds automatically in one dimension");
    if (e.max_residual() > 0.0) r.notes.push_back("largest collocation residual " + std::to_string(e.max_residual()));
    return r;
}

StoppingRegion threshold_region(const Interval& X, ThresholdFamily family, double a, std::optional<double> anchor) {
    std::vector<Interval> pieces;
    switch (family) {
        case ThresholdFamily::LeftRay: pieces.push_back({X.lower, a, false, true}); break;
        case ThresholdFamily::RightRay: pieces.push_back({a, X.upper, true, false}); break;
        case ThresholdFamily::Point: pieces.push_back(Interval::point(a)); break;
        case ThresholdFamily::TwoPoint:
            if (!anchor) throw ParameterError("two_point family needs an anchor b");
            pieces.push_back({X.lower, a, false, true});
            pieces.push_back({*anchor, X.upper, true, false});
            break;
    }
    return StoppingRegion::normalize(pieces, X);
}

namespace {

std::vector<double> scan_grid(const ProblemInstance& inst, const ThresholdOptions& o, double upper_limit) {
    const Interval& X = inst.state_space();
    if (o.bracket) {
        std::vector<double> g;
        const auto [a, b] = *o.bracket;
        if (!(a < b) || !X.interior_contains(a) || !X.interior_contains(b))
            throw ParameterError("threshold bracket must be an ordered pair inside the state space");
        for (std::size_t i = 0; i < o.scan_points; ++i)
            g.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(o.scan_points - 1));
        return g;
    }
    const auto& kinks = inst.payoff().kinks();
    double scale = 1.0, center = 0.0;
    if (!kinks.empty()) {
        scale = 0.0;
        for (double k : kinks) {
            scale = std::max(scale, std::fabs(k));
            center += k / static_cast<double>(kinks.size());
        }
        if (scale == 0.0) scale = 1.0;
    }
    std::vector<double> g;
    const std::size_t n = std::max<std::size_t>(o.scan_points, 8);
    if (std::isfinite(X.lower) && std::isfinite(X.upper)) {
        for (std::size_t i = 1; i <= n; ++i)
            g.push_back(X.lower + (X.upper - X.lower) * static_cast<double>(i) / static_cast<double>(n + 1));
    } else if (std::isfinite(X.lower)) {
        for (double d : logspace(-4.0, 2.0, n)) g.push_back(X.lower + scale * d);
    } else if (std::isfinite(X.upper)) {
        for (double d : logspace(2.0, -4.0, n)) g.push_back(X.upper - scale * d);
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double u = -6.0 + 12.0 * static_cast<double>(i) / static_cast<double>(n - 1);
            g.push_back(center + scale * std::sinh(u));
        }
    }
    for (double k : kinks) g.push_back(k);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    std::vector<double> out;
    for (double x : g)
        if (X.interior_contains(x) && x < upper_limit) out.push_back(x);
    return out;
}

}  // namespace

ThresholdResult find_threshold_equilibrium(const ProblemInstance& inst, ThresholdFamily family,
                                           const ThresholdOptions& topts, const ResolventOptions& ropts,
                                           const ValuationOptions& vopts) {
    const Interval& X = inst.state_space();
    ThresholdResult res;
    auto evaluator = [&](double a) {
        return ValueEvaluator(inst, threshold_region(X, family, a, topts.anchor), ropts, vopts);
    };
    auto finish = [&](double a, const std::string& method) {
        const ValueEvaluator e = evaluator(a);
        res.region = e.region();
        res.threshold = a;
        res.method = method;
        res.residual = smooth_fit_residual(e, a);
        res.mild = check_mild(e);
        res.weak = check_weak(e);
        return res;
    };

    if (family == ThresholdFamily::Point) {
        std::vector<double> g = sample_grid(X, 4001);
        for (double k : inst.payoff().kinks())
            if (X.interior_contains(k)) g.push_back(k);
        double best = g.front();
        for (double x : g)
            if (inst.payoff()(x) > inst.payoff()(best)) best = x;
        res.evaluations = g.size();
        return finish(best, "argmax");
    }

    const double upper_limit = family == ThresholdFamily::TwoPoint ? topts.anchor.value_or(kInf) : kInf;
    if (family == ThresholdFamily::TwoPoint && !topts.anchor) throw ParameterError("two_point family needs an anchor b");
    const std::vector<double> grid = scan_grid(inst, topts, upper_limit);
    if (grid.size() < 2) throw NoBracket("threshold scan range is empty");

    auto residual = [&](double a) {
        ++res.evaluations;
        return smooth_fit_residual(evaluator(a), a);
    };
    std::vector<double> rv(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) rv[i] = residual(grid[i]);

    const auto& kinks = inst.payoff().kinks();
    auto kink_in = [&](double lo, double hi) -> std::optional<double> {
        for (double k : kinks)
            if (k >= lo && k <= hi) return k;
        return std::nullopt;
    };

    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (rv[i] == 0.0) return finish(grid[i], "root");
        if (std::signbit(rv[i]) == std::signbit(rv[i + 1])) continue;
        const double scale = std::max(1.0, std::fabs(grid[i + 1]));
        auto stop = [&](double lo, double hi) { return hi - lo <= topts.x_tol * scale; };
        std::uintmax_t iters = 200;
        const auto br = boost::math::tools::toms748_solve(residual, grid[i], grid[i + 1], rv[i], rv[i + 1], stop, iters);
        const double lo = br.first, hi = br.second;
        const double root = 0.5 * (lo + hi);
        const double slack = 1e3 * topts.x_tol * scale;
        const double r_root = residual(root);
        if (auto k = kink_in(lo - slack, hi + slack); k && std::fabs(r_root) > vopts.tol_eq) return finish(*k, "kink");
        return finish(root, "root");
    }

    // No sign change: locate the mildness transition instead.
    auto mild_at = [&](double a) { return check_mild(evaluator(a)).holds; };
    std::vector<bool> mv(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) mv[i] = mild_at(grid[i]);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (mv[i] == mv[i + 1]) continue;
        double lo = grid[i], hi = grid[i + 1];
        const bool mlo = mv[i];
        const double scale = std::max(1.0, std::fabs(hi));
        while (hi - lo > topts.x_tol * scale) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            (mild_at(mid) == mlo ? lo : hi) = mid;
        }
        const double a = mlo ? lo : hi;
        if (auto k = kink_in(lo - 1e-6 * scale, hi + 1e-6 * scale)) return finish(*k, "kink");
        return finish(a, "mild-bisection");
    }
    throw NoBracket(std::string("smooth-fit residual keeps one sign over the scan range for family ") + to_string(family));
}

}  // namespace tistop
