#include "tistop/report_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "tistop/closed_forms.hpp"

namespace tistop {

using nlohmann::json;

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json end_json(double v) {
    if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
    return v;
}

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

json to_json(const Interval& iv) {
    return {{"lo", end_json(iv.lower)},
            {"hi", end_json(iv.upper)},
            {"lo_closed", iv.lower_closed},
            {"hi_closed", iv.upper_closed},
            {"text", iv.describe()}};
}

json to_json(const StoppingRegion& S) {
    json pieces = json::array();
    for (const Interval& p : S.pieces()) pieces.push_back(to_json(p));
    json boundary = json::array();
    for (const BoundaryPoint& b : S.boundary())
        boundary.push_back({{"x", b.x}, {"case", b.kind == Membership::BoundaryCaseB ? "b" : "a"}});
    return {{"pieces", pieces},
            {"boundary", boundary},
            {"state_space", to_json(S.state_space())},
            {"admissible", S.admissibility() == Admissibility::Admissible},
            {"text", S.describe()}};
}

json to_json(const EquilibriumReport& r) {
    json verdicts = {{"is_mild", r.mild.holds},
                     {"is_weak", r.weak.holds},
                     {"weak_conditions",
                      {{"continuation", r.weak.mild},
                       {"derivative", r.weak.derivative_condition},
                       {"generator", r.weak.generator_condition}}},
                     {"strong", to_string(r.strong)},
                     {"is_strong_certified", r.strong == StrongStatus::CertifiedStrong}};
    if (r.optimality) {
        verdicts["optimal_within_tested_family"] = r.optimality->optimal;
        verdicts["optimality_competitors"] = r.optimality->competitors;
    }
    json witnesses = {
        {"mild", {{"x", r.mild.has_points ? num(r.mild.witness) : json(nullptr)},
                  {"margin", num(r.mild.witness_margin)},
                  {"min_gap", num(r.mild.min_gap)}}},
        {"derivative", {{"x", std::isfinite(r.weak.worst_derivative_margin) ? num(r.weak.derivative_witness) : json(nullptr)},
                        {"margin", num(r.weak.worst_derivative_margin)}}},
        {"generator", {{"x", std::isfinite(r.weak.worst_generator_margin) ? num(r.weak.generator_witness) : json(nullptr)},
                       {"margin", num(r.weak.worst_generator_margin)}}},
        {"not_strict", r.fraktur.excluded}};
    if (r.optimality)
        witnesses["optimality"] = {{"x", std::isfinite(r.optimality->worst_margin) ? num(r.optimality->witness) : json(nullptr)},
                                   {"margin", num(r.optimality->worst_margin)}};
    json sf = json::array();
    for (const SmoothFit& s : r.smooth_fit)
        sf.push_back({{"x", s.x}, {"residual", num(s.residual)}, {"payoff_differentiable", s.payoff_differentiable}});
    json intervals = json::array();
    for (const Interval& iv : r.fraktur.intervals) intervals.push_back(to_json(iv));
    json qualifying = json::array();
    for (const auto& [x, clause] : r.fraktur.qualifying) qualifying.push_back({{"x", x}, {"clause", clause}});
    json fraktur = {{"intervals", intervals},
                    {"equals_S", r.fraktur.equals_S},
                    {"qualifying", qualifying},
                    {"indeterminate", r.fraktur.indeterminate}};
    json tol = {{"tol_eq", r.tolerances.tol_eq},
                {"tol_strict", r.tolerances.tol_strict},
                {"grid_points", r.tolerances.grid_points},
                {"interior_points", r.tolerances.interior_points}};
    return {{"region", to_json(r.region)},
            {"verdicts", verdicts},
            {"witnesses", witnesses},
            {"smooth_fit", sf},
            {"fraktur_S", fraktur},
            {"tolerances", tol},
            {"notes", r.notes}};
}

json to_json(const McEstimate& e) {
    return {{"target", e.target},
            {"mean", num(e.mean)},
            {"std_error", num(e.std_error)},
            {"n", e.n},
            {"seed", e.seed},
            {"censored_fraction", e.censored_fraction},
            {"censored_mass", e.censored_mass},
            {"domain_exits", e.domain_exits}};
}

json to_json(const ThresholdResult& t) {
    return {{"threshold", t.threshold},
            {"residual", num(t.residual)},
            {"method", t.method},
            {"evaluations", t.evaluations},
            {"region", to_json(t.region)},
            {"is_mild", t.mild.holds},
            {"is_weak", t.weak.holds}};
}

json to_json(const ExampleRun& run) {
    json cands = json::array();
    for (const CandidateResult& r : run.results) {
        json mc = json::array();
        for (const McCheck& m : r.mc) {
            json j = {{"kind", m.kind}, {"x", m.x}, {"estimate", to_json(m.estimate)}, {"pass", m.pass}};
            if (m.kind == "J") {
                j["analytic"] = m.analytic;
                j["z"] = num(m.estimate.z(m.analytic));
            } else {
                j["eps"] = m.eps;
                j["z"] = num(m.estimate.z());
            }
            mc.push_back(j);
        }
        const ExpectedVerdict& ev = r.candidate.expected;
        json expected = {{"mild", ev.mild}, {"weak", ev.weak}, {"strong", to_string(ev.strong)}, {"claim", ev.claim}};
        if (ev.optimal) expected["optimal"] = *ev.optimal;
        json observed = {{"mild", r.report.mild.holds}, {"weak", r.report.weak.holds}, {"strong", to_string(r.strong)}};
        if (r.optimal) observed["optimal"] = *r.optimal;
        cands.push_back({{"name", r.candidate.name},
                         {"region", r.candidate.region.describe()},
                         {"expected", expected},
                         {"observed", observed},
                         {"matches", r.matches()},
                         {"mismatches", r.mismatches},
                         {"mc", mc},
                         {"report", to_json(r.report)}});
    }
    json checks = json::array();
    for (const NamedCheck& c : run.checks)
        checks.push_back({{"name", c.name}, {"value", num(c.value)}, {"reference", num(c.reference)},
                          {"tolerance", num(c.tolerance)}, {"pass", c.pass}});
    json params = json::object();
    for (const auto& [k, v] : run.parameters) params[k] = num(v);
    return {{"example", to_string(run.id)},
            {"parameters", params},
            {"notes", run.notes},
            {"candidates", cands},
            {"checks", checks},
            {"all_match", run.all_match()}};
}

json describe_instance(const ProblemInstance& inst) {
    const auto& d = inst.discount();
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back(i == 0 ? 0.0 : std::pow(10.0, -6.0 + 8.0 * (i - 1) / 39.0));
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t i = 0; i < grid.size(); i += 4)
        for (std::size_t j = 0; j < grid.size(); j += 4) pairs.emplace_back(grid[i], grid[j]);
    const SubadditivityReport sub = discount_check_log_subadditive(d, pairs);
    const DerivativeInequalityReport der = discount_derivative_inequalities(d, grid);
    json j = {{"label", inst.label()},
              {"diffusion", inst.diffusion().description()},
              {"state_space", to_json(inst.state_space())},
              {"discount",
               {{"kind", d.kind_name()},
                {"text", d.describe()},
                {"delta_prime0", d.delta_prime0()},
                {"mixture_nodes", d.mixture().size()},
                {"mixture_max_relative_error", num(mixture_max_relative_error(d, grid))},
                {"log_subadditive_min_gap", num(sub.min_gap)},
                {"log_subadditive", sub.holds},
                {"derivative_inequality_margin", num(der.worst_derivative_margin)},
                {"growth_inequality_margin", num(der.worst_growth_margin)},
                {"derivative_inequalities", der.holds}}},
              {"payoff", {{"kind", to_string(inst.payoff().kind())}, {"kinks", inst.payoff().kinks()}}},
              {"notes", inst.notes()}};
    const auto& diff = inst.diffusion();
    if (diff.kind() == DiffusionKind::GeometricBrownianMotion && inst.payoff().kind() == PayoffKind::Put) {
        if (const auto* h = std::get_if<Hyperbolic>(&d.params())) {
            const LambdaNu ln = lambda_nu(diff.mu_param(), diff.sigma_param(), h->beta);
            const double K = inst.payoff().strike();
            j["put_threshold"] = {{"lambda", ln.lambda}, {"nu", ln.nu}, {"a_star", ln.lambda * K / (1.0 + ln.lambda)}};
        }
    }
    return j;
}

std::string profile_csv(const ValueEvaluator& e, std::size_t points) {
    const StoppingRegion& S = e.region();
    std::vector<double> xs = sample_grid(S.state_space(), points);
    for (const BoundaryPoint& b : S.boundary()) xs.push_back(b.x);
    for (double k : e.instance().payoff().kinks())
        if (S.state_space().interior_contains(k)) xs.push_back(k);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::ostringstream out;
    out << "x,f,J,gap,vx_left,vx_right,lv_left,lv_right\n";
    for (double x : xs) {
        const double f = e.instance().payoff()(x), J = e.J(x);
        out << fmt(x) << ',' << fmt(f) << ',' << fmt(J) << ',' << fmt(J - f) << ',' << fmt(e.vx(x, Side::Left)) << ','
            << fmt(e.vx(x, Side::Right)) << ',' << fmt(e.LV(x, Side::Left)) << ',' << fmt(e.LV(x, Side::Right)) << '\n';
    }
    return out.str();
}

std::string conditions_csv(const EquilibriumReport& r) {
    std::ostringstream out;
    out << "x,where,f,vx_left,vx_right,lv_left,lv_right\n";
    for (const PointConditions& p : r.weak.points)
        out << fmt(p.x) << ',' << p.where << ',' << fmt(p.f) << ',' << fmt(p.vx_left) << ',' << fmt(p.vx_right) << ','
            << fmt(p.lv_left) << ',' << fmt(p.lv_right) << '\n';
    return out.str();
}

}  // namespace tistop
