#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tistop/config.hpp"
#include "tistop/errors.hpp"
#include "tistop/report_io.hpp"

using nlohmann::json;
namespace fs = std::filesystem;
using namespace tistop;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRegion = 2;
constexpr int kExitSolver = 3;
constexpr int kExitMismatch = 4;

struct Common {
    std::string config;
    std::vector<std::string> overrides;
    std::string out = ".";
    std::string format = "both";
    std::optional<std::uint64_t> seed;
    bool no_meta = false;

    bool want_json() const { return format != "csv"; }
    bool want_csv() const { return format != "json"; }
};

Config load(const Common& c) {
    Config cfg;
    if (c.config.empty()) {
        json doc = json::object();
        for (const auto& o : c.overrides) apply_override(doc, o);
        cfg = parse_config(doc);
    } else {
        cfg = load_config(c.config, c.overrides);
    }
    if (c.seed) cfg.mc.sim.seed = *c.seed;
    return cfg;
}

const ProblemInstance& need_instance(const Config& cfg) {
    if (!cfg.instance) throw ConfigError("config needs diffusion, discount and payoff");
    return *cfg.instance;
}

StoppingRegion need_region(const Config& cfg) {
    if (!cfg.region) throw ConfigError("config needs region.pieces");
    StoppingRegion S = StoppingRegion::normalize(*cfg.region, need_instance(cfg).state_space());
    if (S.admissibility() != Admissibility::Admissible)
        throw InadmissibleRegion("stopping region " + S.describe() + " is not admissible");
    return S;
}

json meta(const std::string& command, const Config& cfg) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return {{"tool", "tistop"}, {"version", "0.1.0"}, {"command", command}, {"generated_at", stamp},
            {"seed", cfg.mc.sim.seed}, {"config", cfg.source}};
}

void write_file(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + p.string());
    out << text;
}

void write_json(const Common& c, const std::string& name, json doc, const std::string& command, const Config& cfg) {
    if (!c.no_meta) doc["meta"] = meta(command, cfg);
    write_file(fs::path(c.out) / name, doc.dump(2) + "\n");
}

int cmd_classify(const Common& c) {
    const Config cfg = load(c);
    const StoppingRegion S = need_region(cfg);
    const ValueEvaluator e(need_instance(cfg), S, cfg.resolvent, cfg.valuation);
    const EquilibriumReport r = classify(e);
    if (c.want_json()) write_json(c, "report.json", to_json(r), "classify", cfg);
    if (c.want_csv()) {
        write_file(fs::path(c.out) / "profile.csv", profile_csv(e, cfg.profile_points));
        write_file(fs::path(c.out) / "conditions.csv", conditions_csv(r));
    }
    std::cout << S.describe() << ": mild=" << r.mild.holds << " weak=" << r.weak.holds
              << " strong=" << to_string(r.strong) << '\n';
    return kExitOk;
}

int cmd_solve_threshold(const Common& c) {
    const Config cfg = load(c);
    const ProblemInstance& inst = need_instance(cfg);
    if (!cfg.threshold) throw ConfigError("config needs a threshold section with a family");
    const ThresholdResult t =
        find_threshold_equilibrium(inst, cfg.threshold->family, cfg.threshold->options, cfg.resolvent, cfg.valuation);
    const ValueEvaluator e(inst, t.region, cfg.resolvent, cfg.valuation);
    const EquilibriumReport r = classify(e);
    if (c.want_json()) {
        json doc = to_json(t);
        doc["family"] = to_string(cfg.threshold->family);
        doc["report"] = to_json(r);
        write_json(c, "threshold.json", doc, "solve-threshold", cfg);
    }
    if (c.want_csv()) write_file(fs::path(c.out) / "profile.csv", profile_csv(e, cfg.profile_points));
    std::cout << "threshold " << fmt(t.threshold) << " (" << t.method << "), region " << t.region.describe()
              << ", residual " << fmt(t.residual) << '\n';
    return kExitOk;
}

json entry(const std::string& check, double x, const McEstimate& est, std::optional<double> reference, json params,
           std::optional<double> slack = {}) {
    json j = {{"check", check}, {"x", num(x)}, {"params", std::move(params)}, {"estimate", to_json(est)}};
    if (reference) {
        const double z = est.z(*reference);
        j["reference"] = num(*reference);
        j["z"] = num(z);
        const double allow = 3.0 * est.std_error + slack.value_or(0.0);
        j["pass"] = std::fabs(est.mean - *reference) <= allow;
    } else {
        j["reference"] = nullptr;
        j["z"] = num(est.z());
        j["pass"] = nullptr;
    }
    return j;
}

int cmd_mc_check(const Common& c) {
    const Config cfg = load(c);
    const ProblemInstance& inst = need_instance(cfg);
    const McSection& m = cfg.mc;
    std::optional<StoppingRegion> S;
    if (cfg.region) S = need_region(cfg);
    std::vector<std::string> checks = m.checks;
    if (checks.empty()) checks = S ? std::vector<std::string>{"J", "deviation"} : std::vector<std::string>{"local_time"};

    const Interval& X = inst.state_space();
    auto default_point = [&]() {
        if (X.contains(0.0) && X.interior_contains(0.0)) return 0.0;
        if (X.interior_contains(1.0)) return 1.0;
        return sample_grid(X, 3)[1];
    };
    auto points = [&](bool need_region_point) {
        if (!m.x.empty()) return m.x;
        if (need_region_point && S) {
            if (auto p = probe_point(*S)) return std::vector<double>{*p};
        }
        return std::vector<double>{default_point()};
    };
    auto need_S = [&](const std::string& what) -> const StoppingRegion& {
        if (!S) throw ConfigError("mc check '" + what + "' needs region.pieces");
        return *S;
    };

    json results = json::array();
    for (const std::string& check : checks) {
        if (check == "J") {
            const ValueEvaluator e(inst, need_S(check), cfg.resolvent, cfg.valuation);
            for (double x : points(true)) {
                const McEstimate est = estimate_J(inst, *S, x, m.sim);
                results.push_back(entry(check, x, est, e.J(x), json::object()));
            }
        } else if (check == "resolvent") {
            const ResolventKernel k(inst, need_S(check), cfg.resolvent);
            for (double x : points(true)) {
                const McEstimate est = estimate_resolvent(inst, *S, x, m.rate, m.sim);
                results.push_back(entry(check, x, est, k.value(x, m.rate), {{"rate", m.rate}}));
            }
        } else if (check == "deviation") {
            const StoppingRegion& R = need_S(check);
            std::vector<double> xs = m.x;
            if (xs.empty())
                for (const BoundaryPoint& b : R.boundary()) xs.push_back(b.x);
            for (double x : xs) {
                for (const DeviationPoint& d : deviation_sweep(inst, R, x, m.eps, m.sim)) {
                    json j = entry(check, x, d.d, std::nullopt, {{"eps", d.eps}});
                    j["ratio"] = num(d.ratio);
                    j["ratio_se"] = num(d.ratio_se);
                    j["positive"] = d.d.z() >= 3.0;
                    results.push_back(j);
                }
            }
        } else if (check == "local_time") {
            for (double x : points(false)) {
                const double s = inst.diffusion().sigma(x);
                for (double eps : m.eps) {
                    const McEstimate est = estimate_local_time(inst, x, m.h, eps, m.sim, m.local_time_method);
                    results.push_back(entry(check, x, est, s * std::sqrt(2.0 / M_PI),
                                            {{"eps", eps}, {"h", m.h},
                                             {"method", m.local_time_method == LocalTimeMethod::Tanaka ? "tanaka"
                                                                                                        : "occupation"}}));
                }
            }
        } else if (check == "half_probability") {
            for (double x : points(false))
                results.push_back(entry(check, x, half_probability(inst, x, m.t, m.sim), 0.5, {{"t", m.t}}));
        } else if (check == "small_time_exit") {
            for (double x : points(false))
                for (double eps : m.eps)
                    results.push_back(entry(check, x, small_time_exit_prob(inst, x, m.h, eps, m.sim), std::nullopt,
                                            {{"eps", eps}, {"h", m.h}}));
        } else if (check == "exit_ratio") {
            for (double x : points(false)) {
                const double s2 = std::pow(inst.diffusion().sigma(x), 2);
                for (double r : m.r) {
                    const ExitRatios er = exit_time_and_localtime_ratio(inst, x, m.h, r, m.sim);
                    json params = {{"h", m.h}, {"r", r}};
                    json a = entry("exit_ratio.exit_time", x, er.exit_time, 1.0 / s2, params, 0.05);
                    json b = entry("exit_ratio.local_time", x, er.local_time, s2 / (1.0 + std::fabs(r)), params, 0.05);
                    results.push_back(a);
                    results.push_back(b);
                }
            }
        } else if (check == "drift_remainder") {
            for (double x : points(false))
                for (double eps : m.eps)
                    results.push_back(entry(check, x, drift_remainder_check(inst, x, eps, m.sim), std::nullopt,
                                            {{"eps", eps}}));
        } else {
            throw ConfigError("unknown mc check '" + check + "'");
        }
    }
    json doc = {{"paths", m.sim.paths}, {"seed", m.sim.seed}, {"results", results}};
    if (S) doc["region"] = S->describe();
    write_json(c, "mc.json", doc, "mc-check", cfg);
    for (const json& r : results) {
        std::cout << r["check"].get<std::string>() << " x=" << r["x"].dump() << " mean=" << r["estimate"]["mean"].dump()
                  << " se=" << r["estimate"]["std_error"].dump() << " z=" << r["z"].dump() << '\n';
    }
    return kExitOk;
}

int cmd_reproduce(const Common& c, const std::string& which, bool no_mc) {
    Config cfg;
    if (!c.config.empty() || !c.overrides.empty()) cfg = load(c);
    if (c.seed) cfg.mc.sim.seed = *c.seed;
    std::vector<ExampleId> ids;
    if (which == "all")
        ids = {ExampleId::Ex61, ExampleId::Ex62, ExampleId::Ex63};
    else
        ids = {example_id_from_string(which)};

    RunOptions opts;
    opts.mc = cfg.mc.sim;
    opts.mc_checks = !no_mc;
    opts.resolvent = cfg.resolvent;
    opts.valuation = cfg.valuation;

    json bundle = {{"examples", json::array()}, {"mc", !no_mc}};
    bool all = true;
    for (ExampleId id : ids) {
        const ExampleCase ex = build_example(id);
        const ExampleRun run = run_example(ex, opts);
        all = all && run.all_match();
        bundle["examples"].push_back(to_json(run));
        if (c.want_csv()) {
            for (std::size_t i = 0; i < run.results.size(); ++i) {
                const ValueEvaluator e(ex.instance, run.results[i].candidate.region, opts.resolvent, opts.valuation);
                write_file(fs::path(c.out) / (std::string(to_string(id)) + "_candidate" + std::to_string(i) + ".csv"),
                           profile_csv(e, cfg.profile_points));
            }
        }
        for (const CandidateResult& r : run.results) {
            std::cout << to_string(id) << ' ' << r.candidate.name << ' ' << r.candidate.region.describe() << ": "
                      << (r.matches() ? "match" : "MISMATCH");
            for (const auto& m : r.mismatches) std::cout << " [" << m << ']';
            std::cout << '\n';
        }
        for (const NamedCheck& k : run.checks)
            std::cout << to_string(id) << " check " << k.name << ": " << (k.pass ? "pass" : "FAIL") << '\n';
    }
    bundle["all_match"] = all;
    if (c.want_json()) write_json(c, "reproduce.json", bundle, "reproduce", cfg);
    return all ? kExitOk : kExitMismatch;
}

int cmd_info(const Common& c) {
    const Config cfg = load(c);
    json doc = json::object();
    if (cfg.instance) doc["instance"] = describe_instance(*cfg.instance);
    if (cfg.region) doc["region"] = to_json(need_region(cfg));
    if (cfg.threshold) doc["threshold_family"] = to_string(cfg.threshold->family);
    doc["mc"] = {{"paths", cfg.mc.sim.paths}, {"seed", cfg.mc.sim.seed}, {"step", cfg.mc.sim.step},
                 {"threads", cfg.mc.sim.threads}};
    if (!c.no_meta) doc["meta"] = meta("info", cfg);
    std::cout << doc.dump(2) << '\n';
    return kExitOk;
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "JSON configuration file");
    sub->add_option("--set", c.overrides, "Override a config key, e.g. mc.paths=1000 (repeatable)")
        ->allow_extra_args(false)
        ->take_all();
    sub->add_option("--out", c.out, "Output directory");
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv", "both"}));
    sub->add_option("--seed", c.seed, "Monte Carlo seed");
    sub->add_flag("--no-meta", c.no_meta, "Omit the meta block (timestamps) for byte-stable output");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Equilibrium stopping regions for time-inconsistent stopping of one-dimensional diffusions"};
    app.require_subcommand(1);
    Common common;
    std::string example = "all";
    bool no_mc = false;

    auto* classify_cmd = app.add_subcommand("classify", "Classify a stopping region (mild / weak / strong)");
    auto* solve_cmd = app.add_subcommand("solve-threshold", "Find the threshold equilibrium of a family");
    auto* mc_cmd = app.add_subcommand("mc-check", "Run Monte Carlo oracles");
    auto* repro_cmd = app.add_subcommand("reproduce", "Re-run the worked examples and compare verdicts");
    auto* info_cmd = app.add_subcommand("info", "Describe a problem instance");
    for (auto* s : {classify_cmd, solve_cmd, mc_cmd, repro_cmd, info_cmd}) add_common(s, common);
    repro_cmd->add_option("--example", example, "ex61, ex62, ex63 or all")
        ->check(CLI::IsMember({"ex61", "ex62", "ex63", "all"}));
    repro_cmd->add_flag("--no-mc", no_mc, "Skip Monte Carlo checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*classify_cmd) return cmd_classify(common);
        if (*solve_cmd) return cmd_solve_threshold(common);
        if (*mc_cmd) return cmd_mc_check(common);
        if (*repro_cmd) return cmd_reproduce(common, example, no_mc);
        if (*info_cmd) return cmd_info(common);
    } catch (const OpenPieceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRegion;
    } catch (const InadmissibleRegion& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRegion;
    } catch (const SolverError& e) {
        std::cerr << "error: " << e.what() << " (residual " << e.residual() << ")\n";
        return kExitSolver;
    } catch (const NoBracket& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSolver;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSolver;
    }
    return kExitConfig;
}
