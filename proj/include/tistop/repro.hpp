#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tistop/equilibrium.hpp"
#include "tistop/mc.hpp"

namespace tistop {

enum class ExampleId { Ex61, Ex62, Ex63 };
const char* to_string(ExampleId id);
ExampleId example_id_from_string(const std::string& s);

struct ExpectedVerdict {
    bool mild;
    bool weak;
    StrongStatus strong;
    /// Optimal among the mild candidates of the same example; unset when no claim is made.
    std::optional<bool> optimal;
    /// The claim the expectation encodes, in words.
    std::string claim;
};

struct Candidate {
    std::string name;
    StoppingRegion region;
    ExpectedVerdict expected;
};

struct ExampleCase {
    ExampleId id;
    ProblemInstance instance;
    std::vector<Candidate> candidates;
    std::map<std::string, double> parameters;
    std::vector<std::string> notes;
};

/// Brownian motion, delta = 1/(1+beta t), the two-point payoff built from J(.,{a,b}) and J(.,{b}).
ExampleCase build_example_61(double beta = 0.5, double a = 0.0, double b = 1.0, double c = 0.42, double d = 1.0);
/// Geometric Brownian motion with mu = beta, payoff x ^ K.
ExampleCase build_example_62(double mu = 0.1, double sigma = 0.3, double K = 1.0);
/// Geometric Brownian motion put (K - x)^+ with hyperbolic discount.
ExampleCase build_example_63(double mu = 0.05, double sigma = 0.3, double beta = 0.1, double K = 1.0);
ExampleCase build_example(ExampleId id);

struct RunOptions {
    SimConfig mc{};
    bool mc_checks = true;
    /// Delay used for the deviation checks.
    double eps = 4e-3;
    ResolventOptions resolvent{};
    ValuationOptions valuation{};
};

struct McCheck {
    std::string kind;  // "J" or "deviation"
    double x;
    double eps;        // 0 for J checks
    double analytic;   // value_J for J checks, 0 for deviations
    McEstimate estimate;
    bool pass;
};

struct CandidateResult {
    Candidate candidate;
    EquilibriumReport report;
    StrongStatus strong;
    std::optional<bool> optimal;
    std::vector<McCheck> mc;
    std::vector<std::string> mismatches;
    bool matches() const { return mismatches.empty(); }
};

struct NamedCheck {
    std::string name;
    double value;
    double reference;
    double tolerance;
    bool pass;
};

struct ExampleRun {
    ExampleId id;
    std::map<std::string, double> parameters;
    std::vector<std::string> notes;
    std::vector<CandidateResult> results;
    std::vector<NamedCheck> checks;
    bool all_match() const;
};

ExampleRun run_example(const ExampleCase& ex, const RunOptions& opts = {});

/// A point of the first complement component, used for Monte Carlo value checks.
std::optional<double> probe_point(const StoppingRegion& S);

}  // namespace tistop
