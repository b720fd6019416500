#include "tistop/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "tistop/errors.hpp"

namespace tistop {

using nlohmann::json;

namespace {

// Object reader that remembers which keys were consumed and rejects the rest.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_ + " must be an object");
    }

    bool has(const std::string& k) const { return j_.contains(k); }

    const json& at(const std::string& k) {
        used_.insert(k);
        if (!j_.contains(k)) throw ConfigError("missing key " + name(k));
        return j_.at(k);
    }

    template <class T>
    T get(const std::string& k, T fallback) {
        if (!j_.contains(k)) return fallback;
        return as<T>(at(k), name(k));
    }

    template <class T>
    T require(const std::string& k) {
        return as<T>(at(k), name(k));
    }

    std::string name(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.count(it.key())) throw ConfigError("unknown key " + name(it.key()));
    }

    template <class T>
    static T as(const json& v, const std::string& where) {
        try {
            if constexpr (std::is_same_v<T, double>) {
                if (!v.is_number()) throw ConfigError(where + " must be a number");
                return v.get<double>();
            } else if constexpr (std::is_same_v<T, std::size_t>) {
                if (!v.is_number_integer() || v.get<long long>() < 0)
                    throw ConfigError(where + " must be a non-negative integer");
                return v.get<std::size_t>();
            } else if constexpr (std::is_same_v<T, std::uint64_t>) {
                if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
                    throw ConfigError(where + " must be a non-negative integer");
                return v.get<std::uint64_t>();
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!v.is_string()) throw ConfigError(where + " must be a string");
                return v.get<std::string>();
            } else if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean()) throw ConfigError(where + " must be a boolean");
                return v.get<bool>();
            } else if constexpr (std::is_same_v<T, std::vector<double>>) {
                if (!v.is_array()) throw ConfigError(where + " must be an array of numbers");
                std::vector<double> out;
                for (const auto& e : v) out.push_back(as<double>(e, where));
                return out;
            } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
                if (!v.is_array()) throw ConfigError(where + " must be an array of strings");
                std::vector<std::string> out;
                for (const auto& e : v) out.push_back(as<std::string>(e, where));
                return out;
            } else {
                static_assert(sizeof(T) == 0, "unsupported config type");
            }
        } catch (const json::exception& e) {
            throw ConfigError(where + ": " + e.what());
        }
    }

private:
    json j_;
    std::string path_;
    std::set<std::string> used_;
};

double parse_number_text(std::string s, const std::string& where) {
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t") + 1);
    if (s == "+inf" || s == "inf" || s == "infinity" || s == "+infinity") return kInf;
    if (s == "-inf" || s == "-infinity") return -kInf;
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ConfigError(where + ": cannot read '" + s + "' as a number");
    }
    if (pos != s.size() || !std::isfinite(v)) throw ConfigError(where + ": cannot read '" + s + "' as a number");
    return v;
}

DiffusionSpec::Coefficient parse_coefficient(const json& v, const std::string& where) {
    if (v.is_number()) {
        const double c = v.get<double>();
        return [c](double) { return c; };
    }
    Section s(v, where);
    const std::string kind = s.require<std::string>("kind");
    if (kind == "poly") {
        const auto c = s.require<std::vector<double>>("coeffs");
        s.finish();
        if (c.empty()) throw ConfigError(where + ".coeffs must not be empty");
        return [c](double x) {
            double r = 0.0;
            for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
            return r;
        };
    }
    if (kind == "sin") {
        const double amp = s.get<double>("amp", 1.0), freq = s.get<double>("freq", 1.0);
        const double phase = s.get<double>("phase", 0.0), offset = s.get<double>("offset", 0.0);
        s.finish();
        return [=](double x) { return offset + amp * std::sin(freq * x + phase); };
    }
    throw ConfigError(where + ".kind must be poly or sin");
}

Interval parse_domain(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2) throw ConfigError(where + " must be [lower, upper]");
    const double lo = parse_extended(v[0], where), hi = parse_extended(v[1], where);
    if (!(lo < hi)) throw ConfigError(where + " must have lower < upper");
    return Interval::open(lo, hi);
}

DiffusionSpec parse_diffusion(const json& j) {
    Section s(j, "diffusion");
    const std::string kind = s.require<std::string>("kind");
    DiffusionSpec d = [&] {
        if (kind == "bm" || kind == "brownian") {
            const double mu = s.get<double>("mu", 0.0), sigma = s.get<double>("sigma", 1.0);
            return DiffusionSpec::brownian(mu, sigma);
        }
        if (kind == "gbm" || kind == "geometric") {
            const double mu = s.require<double>("mu"), sigma = s.require<double>("sigma");
            return DiffusionSpec::geometric(mu, sigma);
        }
        if (kind == "custom") {
            auto mu = parse_coefficient(s.at("mu"), "diffusion.mu");
            auto sigma = parse_coefficient(s.at("sigma"), "diffusion.sigma");
            const Interval X = s.has("domain") ? parse_domain(s.at("domain"), "diffusion.domain") : Interval::real_line();
            return DiffusionSpec::custom(mu, sigma, X, "custom (" + s.at("mu").dump() + ", " + s.at("sigma").dump() + ")");
        }
        throw ConfigError("diffusion.kind must be bm, gbm or custom");
    }();
    if (kind != "custom" && s.has("domain")) {
        if (!(parse_domain(s.at("domain"), "diffusion.domain") == d.state_space()))
            throw ConfigError("diffusion.domain does not match the state space of " + kind);
    }
    s.finish();
    return d;
}

DiscountSpec parse_discount(const json& j) {
    Section s(j, "discount");
    const std::string kind = s.require<std::string>("kind");
    MixtureOptions mo;
    if (s.has("mixture")) {
        Section m(s.at("mixture"), "discount.mixture");
        mo.points_per_panel = m.get<std::size_t>("points_per_panel", mo.points_per_panel);
        mo.min_scale = m.get<double>("min_scale", mo.min_scale);
        mo.grading = m.get<double>("grading", mo.grading);
        mo.efolds_per_panel = m.get<double>("efolds_per_panel", mo.efolds_per_panel);
        mo.max_time = m.get<double>("max_time", mo.max_time);
        m.finish();
    }
    Section p(s.has("params") ? s.at("params") : json::object(), "discount.params");
    DiscountParams params = [&]() -> DiscountParams {
        if (kind == "exponential") return Exponential{p.require<double>("r")};
        if (kind == "hyperbolic") return Hyperbolic{p.require<double>("beta")};
        if (kind == "generalized_hyperbolic") return GeneralizedHyperbolic{p.require<double>("beta"), p.require<double>("gamma")};
        if (kind == "pseudo_exponential")
            return PseudoExponential{p.require<std::vector<double>>("weights"), p.require<std::vector<double>>("rates")};
        if (kind == "mixture") {
            const auto r = p.require<std::vector<double>>("rates"), w = p.require<std::vector<double>>("weights");
            if (r.size() != w.size()) throw ConfigError("discount.params rates and weights differ in length");
            std::vector<MixtureNode> nodes;
            for (std::size_t i = 0; i < r.size(); ++i) nodes.push_back({r[i], w[i]});
            return WeightedMixture{nodes};
        }
        throw ConfigError(
            "discount.kind must be exponential, hyperbolic, generalized_hyperbolic, pseudo_exponential or mixture");
    }();
    p.finish();
    s.finish();
    return DiscountSpec(params, mo);
}

PayoffSpec parse_payoff(const json& j) {
    Section s(j, "payoff");
    const std::string kind = s.require<std::string>("kind");
    Section p(s.has("params") ? s.at("params") : json::object(), "payoff.params");
    const auto kinks = s.get<std::vector<double>>("kinks", {});
    PayoffSpec f = [&] {
        if (kind == "put") return PayoffSpec::put(p.require<double>("K"));
        if (kind == "capped_identity") return PayoffSpec::capped_identity(p.require<double>("K"));
        if (kind == "custom_table")
            return PayoffSpec::table(p.require<std::vector<double>>("xs"), p.require<std::vector<double>>("ys"), kinks);
        throw ConfigError("payoff.kind must be put, capped_identity or custom_table");
    }();
    if (kind != "custom_table" && !kinks.empty()) {
        for (double k : kinks)
            if (!f.is_kink(k)) throw ConfigError("payoff.kinks lists " + std::to_string(k) + ", which is not a kink of " + kind);
    }
    p.finish();
    s.finish();
    return f;
}

}  // namespace

double parse_extended(const json& v, const std::string& where) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_number_text(v.get<std::string>(), where);
    throw ConfigError(where + ": expected a number or \"-inf\"/\"+inf\"");
}

Interval parse_interval(const json& v, const Interval& X, const std::string& where) {
    auto relative = [&X](double lo, double hi) {
        // Closed relative to X: an end sitting on an open end of X stays open.
        const bool lc = std::isfinite(lo) && !(lo == X.lower && !X.lower_closed);
        const bool hc = std::isfinite(hi) && !(hi == X.upper && !X.upper_closed);
        return Interval{lo, hi, lc, hc};
    };
    if (v.is_array()) {
        if (v.size() != 2) throw ConfigError(where + " must be [lo, hi]");
        return relative(parse_extended(v[0], where), parse_extended(v[1], where));
    }
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        s.erase(0, s.find_first_not_of(" \t"));
        s.erase(s.find_last_not_of(" \t") + 1);
        const auto comma = s.find(',');
        if (s.size() < 5 || comma == std::string::npos || (s.front() != '[' && s.front() != '(') ||
            (s.back() != ']' && s.back() != ')'))
            throw ConfigError(where + ": expected an interval like \"[a,b]\" or \"(a,b]\"");
        const double lo = parse_number_text(s.substr(1, comma - 1), where);
        const double hi = parse_number_text(s.substr(comma + 1, s.size() - comma - 2), where);
        return {lo, hi, s.front() == '[', s.back() == ']'};
    }
    Section o(v, where);
    const double lo = parse_extended(o.at("lo"), where + ".lo"), hi = parse_extended(o.at("hi"), where + ".hi");
    Interval iv = relative(lo, hi);
    iv.lower_closed = o.get<bool>("lo_closed", iv.lower_closed);
    iv.upper_closed = o.get<bool>("hi_closed", iv.upper_closed);
    o.finish();
    return iv;
}

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' must look like key=value");
    const std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(text);
    } catch (const json::exception&) {
        value = text;
    }
    json* node = &doc;
    std::stringstream ss(key);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) {
        if (part.empty()) throw ConfigError("override key '" + key + "' has an empty component");
        parts.push_back(part);
    }
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!node->is_object()) throw ConfigError("override key '" + key + "' descends into a non-object");
        node = &(*node)[parts[i]];
        if (node->is_null()) *node = json::object();
    }
    if (!node->is_object()) throw ConfigError("override key '" + key + "' descends into a non-object");
    (*node)[parts.back()] = value;
}

Config parse_config(const json& doc) {
    Config c;
    c.source = doc;
    Section top(doc, "");
    const std::string label = top.get<std::string>("label", "");
    const bool has_problem = top.has("diffusion") || top.has("discount") || top.has("payoff");
    if (has_problem) {
        DiffusionSpec d = parse_diffusion(top.at("diffusion"));
        DiscountSpec q = parse_discount(top.at("discount"));
        PayoffSpec f = parse_payoff(top.at("payoff"));
        c.instance.emplace(std::move(d), std::move(q), std::move(f), label);
    }
    if (top.has("region")) {
        if (!c.instance) throw ConfigError("region needs diffusion, discount and payoff");
        Section r(top.at("region"), "region");
        const json& pieces = r.at("pieces");
        if (!pieces.is_array()) throw ConfigError("region.pieces must be an array");
        std::vector<Interval> raw;
        for (std::size_t i = 0; i < pieces.size(); ++i)
            raw.push_back(parse_interval(pieces[i], c.instance->state_space(), "region.pieces[" + std::to_string(i) + "]"));
        r.finish();
        c.region = raw;
    }
    if (top.has("threshold")) {
        Section t(top.at("threshold"), "threshold");
        ThresholdSection ts;
        ts.family = threshold_family_from_string(t.require<std::string>("family"));
        if (t.has("bracket")) {
            const auto b = t.require<std::vector<double>>("bracket");
            if (b.size() != 2) throw ConfigError("threshold.bracket must be [lo, hi]");
            ts.options.bracket = std::make_pair(b[0], b[1]);
        }
        if (t.has("anchor")) ts.options.anchor = t.require<double>("anchor");
        ts.options.scan_points = t.get<std::size_t>("scan_points", ts.options.scan_points);
        ts.options.x_tol = t.get<double>("x_tol", ts.options.x_tol);
        t.finish();
        c.threshold = ts;
    }
    if (top.has("resolvent")) {
        Section r(top.at("resolvent"), "resolvent");
        c.resolvent.tol = r.get<double>("tol", c.resolvent.tol);
        c.resolvent.nodes = r.get<std::size_t>("nodes", c.resolvent.nodes);
        c.resolvent.max_nodes = r.get<std::size_t>("max_nodes", c.resolvent.max_nodes);
        c.resolvent.decay_efolds = r.get<double>("decay_efolds", c.resolvent.decay_efolds);
        c.resolvent.max_mapped_extent = r.get<double>("max_mapped_extent", c.resolvent.max_mapped_extent);
        r.finish();
        if (!(c.resolvent.tol > 0.0) || c.resolvent.nodes < 4 || c.resolvent.max_nodes < c.resolvent.nodes)
            throw ConfigError("resolvent needs tol > 0, nodes >= 4 and max_nodes >= nodes");
    }
    if (top.has("valuation")) {
        Section v(top.at("valuation"), "valuation");
        c.valuation.grid_points = v.get<std::size_t>("grid_points", c.valuation.grid_points);
        c.valuation.interior_points = v.get<std::size_t>("interior_points", c.valuation.interior_points);
        c.valuation.tol_eq = v.get<double>("tol_eq", c.valuation.tol_eq);
        c.valuation.tol_strict = v.get<double>("tol_strict", c.valuation.tol_strict);
        v.finish();
        if (c.valuation.grid_points < 8 || c.valuation.interior_points < 4 || !(c.valuation.tol_eq >= 0.0) ||
            !(c.valuation.tol_strict >= c.valuation.tol_eq))
            throw ConfigError("valuation needs grid_points >= 8, interior_points >= 4 and 0 <= tol_eq <= tol_strict");
    }
    if (top.has("mc")) {
        Section m(top.at("mc"), "mc");
        SimConfig& s = c.mc.sim;
        s.step = m.get<double>("step", s.step);
        s.max_step = m.get<double>("max_step", s.max_step);
        s.adapt = m.get<double>("adapt", s.adapt);
        s.horizon = m.get<double>("horizon", s.horizon);
        s.horizon_discount = m.get<double>("horizon_discount", s.horizon_discount);
        s.paths = m.get<std::size_t>("paths", s.paths);
        s.seed = m.get<std::uint64_t>("seed", s.seed);
        s.band = m.get<double>("band", s.band);
        s.threads = static_cast<unsigned>(m.get<std::size_t>("threads", s.threads));
        const std::string scheme = m.get<std::string>("scheme", "auto");
        if (scheme == "auto")
            s.scheme = Scheme::Auto;
        else if (scheme == "euler")
            s.scheme = Scheme::EulerMaruyama;
        else
            throw ConfigError("mc.scheme must be auto or euler");
        c.mc.checks = m.get<std::vector<std::string>>("checks", {});
        static const std::set<std::string> known{"J",          "deviation",       "resolvent",  "local_time",
                                                 "half_probability", "small_time_exit", "exit_ratio", "drift_remainder"};
        for (const auto& k : c.mc.checks)
            if (!known.count(k)) throw ConfigError("mc.checks has unknown estimator '" + k + "'");
        if (m.has("x")) {
            const json& xv = m.at("x");
            c.mc.x = xv.is_array() ? Section::as<std::vector<double>>(xv, "mc.x")
                                   : std::vector<double>{Section::as<double>(xv, "mc.x")};
        }
        c.mc.eps = m.get<std::vector<double>>("eps", c.mc.eps);
        c.mc.h = m.get<double>("h", c.mc.h);
        if (m.has("r")) {
            const json& rv = m.at("r");
            c.mc.r = rv.is_array() ? Section::as<std::vector<double>>(rv, "mc.r")
                                   : std::vector<double>{Section::as<double>(rv, "mc.r")};
        }
        c.mc.t = m.get<double>("t", c.mc.t);
        c.mc.rate = m.get<double>("rate", c.mc.rate);
        const std::string ltm = m.get<std::string>("local_time_method", "tanaka");
        if (ltm == "tanaka")
            c.mc.local_time_method = LocalTimeMethod::Tanaka;
        else if (ltm == "occupation")
            c.mc.local_time_method = LocalTimeMethod::Occupation;
        else
            throw ConfigError("mc.local_time_method must be tanaka or occupation");
        m.finish();
        try {
            validate(s);
        } catch (const ParameterError& e) {
            throw ConfigError(e.what());
        }
    }
    if (top.has("output")) {
        Section o(top.at("output"), "output");
        c.profile_points = o.get<std::size_t>("profile_points", c.profile_points);
        o.finish();
        if (c.profile_points < 2) throw ConfigError("output.profile_points must be at least 2");
    }
    top.finish();
    return c;
}

Config load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
    }
    for (const auto& o : overrides) apply_override(doc, o);
    return parse_config(doc);
}

}  // namespace tistop
