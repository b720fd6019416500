#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace tistop {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Side of a point: the left (x-) or right (x+) one-sided neighbourhood.
enum class Side { Left, Right };

inline const char* to_string(Side s) { return s == Side::Left ? "left" : "right"; }

/// Interval of the extended real line. Endpoints may be +-infinity; an
/// infinite endpoint is always reported as open.
struct Interval {
    double lower = -kInf;
    double upper = kInf;
    bool lower_closed = false;
    bool upper_closed = false;

    static Interval closed(double lo, double hi) { return {lo, hi, std::isfinite(lo), std::isfinite(hi)}; }
    static Interval open(double lo, double hi) { return {lo, hi, false, false}; }
    static Interval point(double c) { return {c, c, true, true}; }
    static Interval real_line() { return {-kInf, kInf, false, false}; }
    static Interval positive_half_line() { return {0.0, kInf, false, false}; }

    bool is_point() const { return lower == upper; }
    bool valid() const {
        if (std::isnan(lower) || std::isnan(upper) || lower > upper) return false;
        if (lower == upper) return lower_closed && upper_closed && std::isfinite(lower);
        return true;
    }
    bool contains(double x) const {
        if (x < lower || x > upper) return false;
        if (x == lower && !lower_closed) return false;
        if (x == upper && !upper_closed) return false;
        return true;
    }
    /// Membership in the closure.
    bool closure_contains(double x) const { return x >= lower && x <= upper; }
    bool interior_contains(double x) const { return x > lower && x < upper; }
    double length() const { return upper - lower; }

    std::string describe() const;

    friend bool operator==(const Interval&, const Interval&) = default;
};

}  // namespace tistop
