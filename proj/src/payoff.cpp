#include "tistop/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "tistop/diffusion.hpp"
#include "tistop/errors.hpp"

namespace tistop {

const char* to_string(PayoffKind k) {
    switch (k) {
        case PayoffKind::Put: return "put";
        case PayoffKind::CappedIdentity: return "capped_identity";
        case PayoffKind::Table: return "custom_table";
        case PayoffKind::Custom: return "custom";
    }
    return "?";
}

bool PayoffSpec::is_kink(double x) const { return std::binary_search(kinks_.begin(), kinks_.end(), x); }

PayoffSpec PayoffSpec::put(double K) {
    if (!(K > 0.0) || !std::isfinite(K)) throw ParameterError("put strike must be positive");
    PayoffSpec p;
    p.kind_ = PayoffKind::Put;
    p.f_ = [K](double x) { return std::max(K - x, 0.0); };
    p.d1_ = [K](double x, Side s) {
        if (x < K) return -1.0;
        if (x > K) return 0.0;
        return s == Side::Left ? -1.0 : 0.0;
    };
    p.d2_ = [](double, Side) { return 0.0; };
    p.kinks_ = {K};
    p.strike_ = K;
    std::ostringstream os;
    os << "(" << K << " - x)^+";
    p.description_ = os.str();
    return p;
}

PayoffSpec PayoffSpec::capped_identity(double K) {
    if (!(K > 0.0) || !std::isfinite(K)) throw ParameterError("cap must be positive");
    PayoffSpec p;
    p.kind_ = PayoffKind::CappedIdentity;
    p.f_ = [K](double x) { return std::min(x, K); };
    p.d1_ = [K](double x, Side s) {
        if (x < K) return 1.0;
        if (x > K) return 0.0;
        return s == Side::Left ? 1.0 : 0.0;
    };
    p.d2_ = [](double, Side) { return 0.0; };
    p.kinks_ = {K};
    p.strike_ = K;
    std::ostringstream os;
    os << "min(x, " << K << ")";
    p.description_ = os.str();
    return p;
}

namespace {

struct CubicSegment {
    double x0, x1;
    std::vector<double> xs, ys, m;  // m = second derivatives at the nodes

    std::size_t locate(double x) const {
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        std::size_t i = it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
        return std::min(i, xs.size() - 2);
    }
    double eval(double x, int order) const {
        const std::size_t i = locate(x);
        const double h = xs[i + 1] - xs[i];
        const double A = (xs[i + 1] - x) / h, B = (x - xs[i]) / h;
        if (order == 0)
            return A * ys[i] + B * ys[i + 1] + ((A * A * A - A) * m[i] + (B * B * B - B) * m[i + 1]) * h * h / 6.0;
        if (order == 1)
            return (ys[i + 1] - ys[i]) / h - (3.0 * A * A - 1.0) / 6.0 * h * m[i] + (3.0 * B * B - 1.0) / 6.0 * h * m[i + 1];
        return A * m[i] + B * m[i + 1];
    }
};

CubicSegment natural_cubic(std::vector<double> xs, std::vector<double> ys) {
    const std::size_t n = xs.size();
    CubicSegment s{xs.front(), xs.back(), std::move(xs), std::move(ys), std::vector<double>(n, 0.0)};
    if (n < 3) return s;
    // Tridiagonal solve for interior second derivatives, natural ends.
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = s.xs[i] - s.xs[i - 1], h1 = s.xs[i + 1] - s.xs[i];
        const double a = h0 / 6.0, b = (h0 + h1) / 3.0, cc = h1 / 6.0;
        const double rhs = (s.ys[i + 1] - s.ys[i]) / h1 - (s.ys[i] - s.ys[i - 1]) / h0;
        const double denom = b - a * c[i - 1];
        c[i] = cc / denom;
        d[i] = (rhs - a * d[i - 1]) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        s.m[i] = d[i] - c[i] * s.m[i + 1];
        if (i == 1) break;
    }
    return s;
}

}  // namespace

PayoffSpec PayoffSpec::table(std::vector<double> xs, std::vector<double> ys, std::vector<double> kinks) {
    if (xs.size() != ys.size() || xs.size() < 2) throw ParameterError("payoff table needs matching xs/ys of length >= 2");
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        if (!(xs[i] < xs[i + 1])) throw ParameterError("payoff table grid must be strictly increasing");
    for (double y : ys)
        if (!(y >= 0.0) || !std::isfinite(y)) throw ParameterError("payoff table values must be finite and >= 0");
    std::sort(kinks.begin(), kinks.end());
    for (double k : kinks)
        if (!std::binary_search(xs.begin(), xs.end(), k)) throw ParameterError("payoff table kinks must be grid points");

    auto segs = std::make_shared<std::vector<CubicSegment>>();
    std::size_t start = 0;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const bool cut = i + 1 == xs.size() || std::binary_search(kinks.begin(), kinks.end(), xs[i]);
        if (!cut) continue;
        segs->push_back(natural_cubic({xs.begin() + start, xs.begin() + i + 1}, {ys.begin() + start, ys.begin() + i + 1}));
        start = i;
    }
    const double lo = xs.front(), hi = xs.back();
    auto pick = [segs](double x, Side s) -> const CubicSegment& {
        for (const auto& seg : *segs) {
            if (x < seg.x1 || (x == seg.x1 && s == Side::Left)) return seg;
        }
        return segs->back();
    };
    PayoffSpec p;
    p.kind_ = PayoffKind::Table;
    p.f_ = [=](double x) {
        if (x <= lo) return segs->front().ys.front();
        if (x >= hi) return segs->back().ys.back();
        return std::max(pick(x, Side::Right).eval(x, 0), 0.0);
    };
    p.d1_ = [=](double x, Side s) {
        if (x < lo || (x == lo && s == Side::Left)) return 0.0;
        if (x > hi || (x == hi && s == Side::Right)) return 0.0;
        return pick(x, s).eval(x, 1);
    };
    p.d2_ = [=](double x, Side s) {
        if (x < lo || (x == lo && s == Side::Left)) return 0.0;
        if (x > hi || (x == hi && s == Side::Right)) return 0.0;
        return pick(x, s).eval(x, 2);
    };
    kinks.push_back(lo);
    kinks.push_back(hi);
    std::sort(kinks.begin(), kinks.end());
    kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
    p.kinks_ = std::move(kinks);
    p.description_ = "table with " + std::to_string(xs.size()) + " nodes";
    return p;
}

PayoffSpec PayoffSpec::custom(Value f, SidedDerivative d1, SidedDerivative d2, std::vector<double> kinks,
                              std::string description) {
    if (!f || !d1 || !d2) throw ParameterError("custom payoff needs f, f' and f''");
    std::sort(kinks.begin(), kinks.end());
    PayoffSpec p;
    p.kind_ = PayoffKind::Custom;
    p.f_ = std::move(f);
    p.d1_ = std::move(d1);
    p.d2_ = std::move(d2);
    p.kinks_ = std::move(kinks);
    p.description_ = std::move(description);
    return p;
}

void PayoffSpec::validate(const Interval& X) const {
    for (std::size_t i = 0; i + 1 < kinks_.size(); ++i)
        if (!(kinks_[i + 1] - kinks_[i] > 0.0)) throw ParameterError("payoff kinks must be distinct");
    for (double x : sample_grid(X, 401)) {
        const double v = f_(x);
        if (!(v >= 0.0) || !std::isfinite(v)) {
            std::ostringstream os;
            os << "payoff is negative or not finite at x = " << x;
            throw ParameterError(os.str());
        }
    }
    for (double k : kinks_) {
        if (!X.interior_contains(k)) continue;
        const double h = 1e-7 * (1.0 + std::fabs(k));
        const double jump = std::fabs(f_(k + h) - f_(k - h));
        const double slope = std::max(std::fabs(d1_(k, Side::Left)), std::fabs(d1_(k, Side::Right)));
        if (jump > 10.0 * h * (1.0 + slope)) {
            std::ostringstream os;
            os << "payoff is discontinuous at kink " << k;
            throw ParameterError(os.str());
        }
    }
}

}  // namespace tistop
