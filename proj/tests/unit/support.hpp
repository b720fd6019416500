#pragma once

#include <vector>

#include "tistop/region.hpp"

namespace testing {

inline tistop::StoppingRegion region(std::vector<tistop::Interval> pieces, const tistop::Interval& X) {
    return tistop::StoppingRegion::normalize(pieces, X);
}

inline tistop::Interval ray_from(double a) { return {a, tistop::kInf, true, false}; }
inline tistop::Interval ray_to(double a) { return {-tistop::kInf, a, false, true}; }
inline tistop::Interval positive_to(double a) { return {0.0, a, false, true}; }

}  // namespace testing
