#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tistop/valuation.hpp"

namespace tistop {

struct MildResult {
    bool holds = true;
    double min_gap = kInf;        // smallest J - f found on the complement
    double witness = 0.0;         // where the normalised gap is worst
    double witness_margin = kInf; // gap + tol_eq (1 + |f|) at the witness
    bool has_points = false;      // false when the complement is empty
};

/// Condition values at one point of S.
struct PointConditions {
    double x;
    std::string where;  // "boundary", "kink" or "interior"
    double f;
    double vx_left, vx_right;
    double lv_left, lv_right;
};

struct WeakResult {
    bool holds = true;
    bool mild = true;
    bool derivative_condition = true;  // V_x(0,x-) >= V_x(0,x+)
    bool generator_condition = true;   // LV(0,x-) v LV(0,x+) <= 0
    double worst_derivative_margin = kInf;
    double derivative_witness = 0.0;
    double worst_generator_margin = kInf;
    double generator_witness = 0.0;
    std::vector<PointConditions> points;
};

struct SmoothFit {
    double x;
    double residual;  // V_x(0,x-) - V_x(0,x+)
    bool payoff_differentiable;
};

/// Numerically observed strictness set.
struct FrakturResult {
    std::vector<Interval> intervals;
    bool equals_S = false;
    std::vector<double> excluded;       // sampled points of S outside the set
    std::vector<double> indeterminate;  // points with 0 < margin <= tol_strict
    std::vector<std::pair<double, std::string>> qualifying;  // point, clause ("generator", "derivative", "both")
};

enum class StrongStatus { CertifiedStrong, NotCertified, NotStrongWitnessed };
const char* to_string(StrongStatus s);

struct OptimalityResult {
    bool optimal = false;
    std::size_t competitors = 0;  // mild competitors compared against
    double worst_margin = kInf;   // min over grid and competitors of J_S - J_other
    double witness = 0.0;
};

struct EquilibriumReport {
    StoppingRegion region;
    MildResult mild;
    WeakResult weak;
    std::vector<SmoothFit> smooth_fit;
    FrakturResult fraktur;
    StrongStatus strong = StrongStatus::NotCertified;
    std::optional<OptimalityResult> optimality;
    ValuationOptions tolerances;
    std::vector<std::string> notes;
};

/// Sample points of the complement used by the mildness sweep.
std::vector<double> complement_grid(const StoppingRegion& S, std::size_t per_component);
/// Sample points of S (boundary, kinks inside S, interior grid).
std::vector<std::pair<double, std::string>> region_points(const ValueEvaluator& e);

MildResult check_mild(const ValueEvaluator& e);
WeakResult check_weak(const ValueEvaluator& e);
/// Throws NotBoundaryPoint when x is not on the boundary of S.
double smooth_fit_residual(const ValueEvaluator& e, double x);
std::vector<SmoothFit> smooth_fit_residuals(const ValueEvaluator& e);
FrakturResult compute_fraktur_S(const ValueEvaluator& e);
/// Region formed by the closed intervals of a strictness set.
StoppingRegion fraktur_region(const FrakturResult& fr, const Interval& state_space);
StrongStatus check_strong_sufficient(const ValueEvaluator& e);

/// Pointwise dominance of J(., S) over mild competitors on a state grid.
OptimalityResult optimal_within_family(const ValueEvaluator& e, const std::vector<const ValueEvaluator*>& competitors);

EquilibriumReport classify(const ValueEvaluator& e);

enum class ThresholdFamily { LeftRay, RightRay, Point, TwoPoint };
const char* to_string(ThresholdFamily f);
ThresholdFamily threshold_family_from_string(const std::string& s);

struct ThresholdOptions {
    std::optional<std::pair<double, double>> bracket;
    std::size_t scan_points = 200;
    double x_tol = 1e-13;
    /// TwoPoint: start b of the right ray in (inf X, a] U [b, sup X).
    std::optional<double> anchor;
};

struct ThresholdResult {
    StoppingRegion region;
    double threshold = 0.0;
    double residual = 0.0;  // smooth-fit residual at the threshold
    std::string method;     // "root", "kink", "mild-bisection" or "argmax"
    std::size_t evaluations = 0;
    MildResult mild;
    WeakResult weak;
};

/// Region of the given family built from threshold a.
StoppingRegion threshold_region(const Interval& X, ThresholdFamily family, double a, std::optional<double> anchor = {});

ThresholdResult find_threshold_equilibrium(const ProblemInstance& inst, ThresholdFamily family,
                                           const ThresholdOptions& topts = {}, const ResolventOptions& ropts = {},
                                           const ValuationOptions& vopts = {});

}  // namespace tistop
