#include <doctest.h>

#include "support.hpp"
#include "tistop/errors.hpp"

using namespace tistop;
using testing::region;

TEST_CASE("intervals describe themselves and test membership") {
    const Interval a{0.0, 1.0, false, true};
    CHECK(a.describe() == "(0, 1]");
    CHECK(Interval::point(2.5).describe() == "{2.5}");
    CHECK_FALSE(a.contains(0.0));
    CHECK(a.contains(1.0));
    CHECK(a.interior_contains(0.5));
    CHECK(a.closure_contains(0.0));
    CHECK_FALSE(Interval{1.0, 1.0, true, false}.valid());
}

TEST_CASE("normalize merges overlapping and touching pieces") {
    const Interval X = Interval::real_line();
    const StoppingRegion S = region({Interval::closed(2, 3), Interval::closed(0, 1), Interval::closed(1, 1.5)}, X);
    REQUIRE(S.pieces().size() == 2);
    CHECK(S.pieces()[0] == Interval::closed(0, 1.5));
    CHECK(S.pieces()[1] == Interval::closed(2, 3));
    CHECK(S.describe() == "[0, 1.5] U [2, 3]");
}

TEST_CASE("normalize is idempotent") {
    const Interval X = Interval::positive_half_line();
    const StoppingRegion S = region({Interval{0.0, 0.4, false, true}, Interval::closed(0.3, 0.7), Interval::point(2.0)}, X);
    const StoppingRegion again = StoppingRegion::normalize(S.pieces(), X);
    CHECK(again == S);
}

TEST_CASE("open pieces are rejected") {
    const Interval X = Interval::real_line();
    CHECK_THROWS_AS(region({Interval::open(0, 1), Interval::open(1, 2)}, X), OpenPieceError);
    CHECK_THROWS_AS(region({Interval{0.0, 1.0, true, false}}, X), OpenPieceError);
}

TEST_CASE("pieces outside the state space are domain errors") {
    CHECK_THROWS_AS(region({Interval::closed(-1, 1)}, Interval::positive_half_line()), DomainError);
}

TEST_CASE("open ends of the state space count as closed") {
    const Interval X = Interval::positive_half_line();
    const StoppingRegion S = region({Interval{0.0, 0.5, false, true}}, X);
    CHECK(S.pieces().size() == 1);
    CHECK(S.boundary().size() == 1);
    CHECK(S.boundary()[0].x == 0.5);
    CHECK(S.admissibility() == Admissibility::Admissible);
}

TEST_CASE("boundary points are classified") {
    const Interval X = Interval::real_line();
    const StoppingRegion S = region({Interval::closed(0, 1), Interval::point(3)}, X);
    REQUIRE(S.boundary().size() == 3);
    CHECK(S.contains(0.0) == Membership::BoundaryCaseA);
    CHECK(S.contains(0.5) == Membership::InteriorOfS);
    CHECK(S.contains(3.0) == Membership::BoundaryCaseB);
    CHECK(S.contains(2.0) == Membership::InComplement);
    CHECK(S.side_in_region(0.0, Side::Right));
    CHECK_FALSE(S.side_in_region(0.0, Side::Left));
    CHECK_THROWS_AS(region({Interval::closed(0, 1)}, Interval::positive_half_line()).contains(-1.0), DomainError);
}

TEST_CASE("complement components record stopping ends") {
    const Interval X = Interval::real_line();
    const StoppingRegion S = region({Interval::closed(0, 1), Interval::point(3)}, X);
    const auto& c = S.complement();
    REQUIRE(c.size() == 3);
    CHECK(std::isinf(c[0].lo));
    CHECK_FALSE(c[0].lo_is_stop);
    CHECK(c[0].hi_is_stop);
    CHECK(c[1].lo == 1.0);
    CHECK(c[1].hi == 3.0);
    CHECK(c[2].lo_is_stop);
    CHECK(S.component_containing(2.0) == std::optional<std::size_t>(1));
    CHECK(S.component_at(3.0, Side::Left) == std::optional<std::size_t>(1));
    CHECK_FALSE(S.component_at(0.5, Side::Left).has_value());
}

TEST_CASE("whole and empty regions") {
    const Interval X = Interval::positive_half_line();
    CHECK(StoppingRegion::whole(X).is_whole());
    CHECK(StoppingRegion::whole(X).boundary().empty());
    CHECK(StoppingRegion::empty(X).is_empty());
    CHECK(StoppingRegion::empty(X).complement().size() == 1);
}
