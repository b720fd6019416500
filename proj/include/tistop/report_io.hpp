#pragma once

#include <string>

#include <json.hpp>

#include "tistop/equilibrium.hpp"
#include "tistop/mc.hpp"
#include "tistop/repro.hpp"

namespace tistop {

/// Finite numbers as numbers, everything else as null.
nlohmann::json num(double v);
/// Interval end: numbers, or "-inf" / "+inf".
nlohmann::json end_json(double v);
/// Shortest round-trip decimal text with '.' as separator.
std::string fmt(double v);

nlohmann::json to_json(const Interval& iv);
nlohmann::json to_json(const StoppingRegion& S);
nlohmann::json to_json(const EquilibriumReport& r);
nlohmann::json to_json(const McEstimate& e);
nlohmann::json to_json(const ThresholdResult& t);
nlohmann::json to_json(const ExampleRun& run);
nlohmann::json describe_instance(const ProblemInstance& inst);

/// Columns x, f, J, gap, vx_left, vx_right, lv_left, lv_right on a state grid plus the boundary points.
std::string profile_csv(const ValueEvaluator& e, std::size_t points);
/// Per-point condition values on S (from the weak check).
std::string conditions_csv(const EquilibriumReport& r);

}  // namespace tistop
