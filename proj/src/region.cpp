#include "tistop/region.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tistop/errors.hpp"

namespace tistop {

namespace {

std::string format_number(double v) {
    if (v == kInf) return "+inf";
    if (v == -kInf) return "-inf";
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

std::string Interval::describe() const {
    if (is_point()) return "{" + format_number(lower) + "}";
    std::string s = lower_closed ? "[" : "(";
    s += format_number(lower) + ", " + format_number(upper);
    s += upper_closed ? "]" : ")";
    return s;
}

const char* to_string(Membership m) {
    switch (m) {
        case Membership::InteriorOfS: return "interior";
        case Membership::BoundaryCaseA: return "boundary_a";
        case Membership::BoundaryCaseB: return "boundary_b";
        case Membership::InComplement: return "complement";
    }
    return "?";
}

StoppingRegion StoppingRegion::normalize(std::span<const Interval> raw, const Interval& X) {
    std::vector<Interval> pieces;
    pieces.reserve(raw.size());
    for (Interval p : raw) {
        if (std::isnan(p.lower) || std::isnan(p.upper) || p.lower > p.upper)
            throw DomainError("malformed interval " + p.describe());
        if (p.lower < X.lower || p.upper > X.upper)
            throw DomainError("piece " + p.describe() + " leaves the state space " + X.describe());
        // Ends sitting on an open end of the state space are not part of it.
        if (p.lower == X.lower && !X.lower_closed) p.lower_closed = false;
        if (p.upper == X.upper && !X.upper_closed) p.upper_closed = false;
        if (p.is_point() && !(p.lower_closed && p.upper_closed)) continue;  // empty inside X
        const bool lower_ok = p.lower_closed || (p.lower == X.lower && !X.lower_closed);
        const bool upper_ok = p.upper_closed || (p.upper == X.upper && !X.upper_closed);
        if (!lower_ok || !upper_ok)
            throw OpenPieceError("piece " + p.describe() + " is not closed in " + X.describe());
        pieces.push_back(p);
    }
    std::sort(pieces.begin(), pieces.end(), [](const Interval& a, const Interval& b) {
        return a.lower < b.lower || (a.lower == b.lower && a.upper < b.upper);
    });
    std::vector<Interval> merged;
    for (const Interval& p : pieces) {
        if (!merged.empty()) {
            Interval& cur = merged.back();
            const bool touch = p.lower < cur.upper ||
                               (p.lower == cur.upper && (cur.upper_closed || p.lower_closed));
            if (touch) {
                if (p.upper > cur.upper) {
                    cur.upper = p.upper;
                    cur.upper_closed = p.upper_closed;
                } else if (p.upper == cur.upper) {
                    cur.upper_closed = cur.upper_closed || p.upper_closed;
                }
                continue;
            }
        }
        merged.push_back(p);
    }
    StoppingRegion s;
    s.pieces_ = std::move(merged);
    s.state_space_ = X;
    s.classify();
    return s;
}

StoppingRegion StoppingRegion::whole(const Interval& X) {
    const Interval all{X.lower, X.upper, X.lower_closed, X.upper_closed};
    return normalize(std::span<const Interval>(&all, 1), X);
}

StoppingRegion StoppingRegion::empty(const Interval& X) {
    return normalize(std::span<const Interval>(), X);
}

bool StoppingRegion::is_whole() const {
    return pieces_.size() == 1 && pieces_[0].lower == state_space_.lower &&
           pieces_[0].upper == state_space_.upper;
}

void StoppingRegion::classify() {
    // A finite union of closed intervals has only case (a) and (b) boundary
    // points, so every normalized region is admissible.
    admissibility_ = Admissibility::Admissible;
    boundary_.clear();
    components_.clear();
    for (const Interval& p : pieces_) {
        if (p.is_point()) {
            boundary_.push_back({p.lower, Membership::BoundaryCaseB, true, true});
            continue;
        }
        if (p.lower_closed) boundary_.push_back({p.lower, Membership::BoundaryCaseA, true, false});
        if (p.upper_closed) boundary_.push_back({p.upper, Membership::BoundaryCaseA, false, true});
    }
    double prev_end = state_space_.lower;
    bool prev_stop = false;
    for (const Interval& p : pieces_) {
        if (p.lower > prev_end) components_.push_back({prev_end, p.lower, prev_stop, true});
        prev_end = p.upper;
        prev_stop = p.upper_closed;
    }
    if (prev_end < state_space_.upper)
        components_.push_back({prev_end, state_space_.upper, prev_stop, false});
}

Membership StoppingRegion::contains(double x) const {
    if (!state_space_.contains(x))
        throw DomainError("state " + format_number(x) + " outside " + state_space_.describe());
    for (const Interval& p : pieces_) {
        if (!p.contains(x)) continue;
        if (p.is_point()) return Membership::BoundaryCaseB;
        if ((x == p.lower && p.lower_closed) || (x == p.upper && p.upper_closed))
            return Membership::BoundaryCaseA;
        return Membership::InteriorOfS;
    }
    return Membership::InComplement;
}

bool StoppingRegion::in_region(double x) const {
    return std::any_of(pieces_.begin(), pieces_.end(), [x](const Interval& p) { return p.contains(x); });
}

bool StoppingRegion::side_in_region(double x, Side side) const {
    for (const Interval& p : pieces_) {
        if (side == Side::Left && p.lower < x && x <= p.upper) return true;
        if (side == Side::Right && p.lower <= x && x < p.upper) return true;
    }
    return false;
}

std::optional<std::size_t> StoppingRegion::component_at(double x, Side side) const {
    for (std::size_t i = 0; i < components_.size(); ++i) {
        const Component& c = components_[i];
        if (side == Side::Left && c.lo < x && x <= c.hi) return i;
        if (side == Side::Right && c.lo <= x && x < c.hi) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> StoppingRegion::component_containing(double x) const {
    for (std::size_t i = 0; i < components_.size(); ++i)
        if (components_[i].lo < x && x < components_[i].hi) return i;
    return std::nullopt;
}

std::string StoppingRegion::describe() const {
    if (pieces_.empty()) return "{}";
    std::string s;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        if (i) s += " U ";
        s += pieces_[i].describe();
    }
    return s;
}

}  // namespace tistop
