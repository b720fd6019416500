#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tistop/interval.hpp"

namespace tistop {

/// Classification of a state relative to a stopping region.
enum class Membership { InteriorOfS, BoundaryCaseA, BoundaryCaseB, InComplement };

const char* to_string(Membership m);

enum class Admissibility { Admissible, InadmissibleCaseC };

struct BoundaryPoint {
    double x;
    Membership kind;  // BoundaryCaseA or BoundaryCaseB
    bool continuation_left;   // (x-h, x) lies in the complement
    bool continuation_right;  // (x, x+h) lies in the complement
};

/// Connected component (lo, hi) of the complement of S inside the state space.
/// An end is a stopping end when it is a finite point of S; otherwise it is
/// an end of the state space (finite-open or infinite).
struct Component {
    double lo;
    double hi;
    bool lo_is_stop;
    bool hi_is_stop;
};

/// Closed stopping region: a finite, sorted union of disjoint intervals that
/// are closed relative to the state space.
class StoppingRegion {
public:
    StoppingRegion() = default;

    /// Sort, merge overlapping/touching pieces and classify boundary points.
    /// Throws OpenPieceError for pieces that are not closed in the state space
    /// and DomainError for pieces outside its closure.
    static StoppingRegion normalize(std::span<const Interval> raw, const Interval& state_space);
    static StoppingRegion whole(const Interval& state_space);
    static StoppingRegion empty(const Interval& state_space);

    const std::vector<Interval>& pieces() const { return pieces_; }
    const Interval& state_space() const { return state_space_; }
    Admissibility admissibility() const { return admissibility_; }
    bool is_empty() const { return pieces_.empty(); }
    bool is_whole() const;

    /// Throws DomainError when x lies outside the state space.
    Membership contains(double x) const;
    bool in_region(double x) const;

    /// True when (x-h, x) (Left) or (x, x+h) (Right) lies in S for small h.
    bool side_in_region(double x, Side side) const;

    const std::vector<BoundaryPoint>& boundary() const { return boundary_; }
    const std::vector<Component>& complement() const { return components_; }

    /// Index of the complement component containing (x-h, x) or (x, x+h);
    /// empty when that neighbourhood lies in S.
    std::optional<std::size_t> component_at(double x, Side side) const;
    /// Index of the component containing x (x must be in the complement).
    std::optional<std::size_t> component_containing(double x) const;

    std::string describe() const;

    friend bool operator==(const StoppingRegion& a, const StoppingRegion& b) {
        return a.pieces_ == b.pieces_ && a.state_space_ == b.state_space_;
    }

private:
    void classify();

    std::vector<Interval> pieces_;
    Interval state_space_;
    Admissibility admissibility_ = Admissibility::Admissible;
    std::vector<BoundaryPoint> boundary_;
    std::vector<Component> components_;
};

}  // namespace tistop
