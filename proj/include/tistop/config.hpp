#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tistop/equilibrium.hpp"
#include "tistop/mc.hpp"

namespace tistop {

struct McSection {
    SimConfig sim{};
    /// Estimators to run: J, deviation, resolvent, local_time, half_probability,
    /// small_time_exit, exit_ratio, drift_remainder.
    std::vector<std::string> checks;
    std::vector<double> x;             // evaluation points (J, deviation, ...)
    std::vector<double> eps{1e-3, 4e-3, 1.6e-2};
    double h = 1.0;                    // ball radius
    std::vector<double> r{0.0};        // start offsets for exit_ratio
    double t = 1e-4;                   // time for half_probability
    double rate = 0.5;                 // rate for the resolvent check
    LocalTimeMethod local_time_method = LocalTimeMethod::Tanaka;
};

struct ThresholdSection {
    ThresholdFamily family = ThresholdFamily::LeftRay;
    ThresholdOptions options{};
};

struct Config {
    std::optional<ProblemInstance> instance;
    /// Raw pieces, normalised when a command needs the region.
    std::optional<std::vector<Interval>> region;
    std::optional<ThresholdSection> threshold;
    ResolventOptions resolvent{};
    ValuationOptions valuation{};
    McSection mc{};
    std::size_t profile_points = 401;
    nlohmann::json source;  // the document after overrides
};

/// Parses "+inf"/"-inf"/"inf" sentinels and numbers.
double parse_extended(const nlohmann::json& v, const std::string& where);

/// Interval from "[a,b]" / "(a,b]" strings, [a,b] arrays (closed relative to X) or
/// {"lo","hi","lo_closed","hi_closed"} objects.
Interval parse_interval(const nlohmann::json& v, const Interval& X, const std::string& where);

/// Applies "a.b.c=value" (value parsed as JSON when possible, else kept as a string).
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Strict parse: unknown keys and wrong types raise ConfigError.
Config parse_config(const nlohmann::json& doc);
Config load_config(const std::string& path, const std::vector<std::string>& overrides = {});

}  // namespace tistop
