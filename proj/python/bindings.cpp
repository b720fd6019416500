#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "tistop/config.hpp"
#include "tistop/errors.hpp"
#include "tistop/report_io.hpp"
#include "tistop/repro.hpp"

namespace py = pybind11;
using namespace tistop;
using nlohmann::json;

namespace {

Config load(const std::string& doc, const std::vector<std::string>& overrides) {
    json j = json::parse(doc);
    for (const auto& o : overrides) apply_override(j, o);
    return parse_config(j);
}

const ProblemInstance& need_instance(const Config& c) {
    if (!c.instance) throw ConfigError("config has no problem instance");
    return *c.instance;
}

ValueEvaluator evaluator(const Config& c) {
    if (!c.region) throw ConfigError("config has no region");
    const ProblemInstance& inst = need_instance(c);
    StoppingRegion S = StoppingRegion::normalize(*c.region, inst.state_space());
    if (S.admissibility() != Admissibility::Admissible) throw InadmissibleRegion("region is not admissible");
    return ValueEvaluator(inst, std::move(S), c.resolvent, c.valuation);
}

std::string classify_json(const std::string& doc, const std::vector<std::string>& overrides) {
    const Config c = load(doc, overrides);
    py::gil_scoped_release nogil;
    return to_json(classify(evaluator(c))).dump();
}

std::vector<double> values(const std::string& doc, const std::vector<double>& xs) {
    const Config c = load(doc, {});
    py::gil_scoped_release nogil;
    const ValueEvaluator e = evaluator(c);
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back(e.J(x));
    return out;
}

std::string threshold_json(const std::string& doc, const std::vector<std::string>& overrides) {
    const Config c = load(doc, overrides);
    if (!c.threshold) throw ConfigError("config has no threshold section");
    py::gil_scoped_release nogil;
    const ThresholdResult t = find_threshold_equilibrium(need_instance(c), c.threshold->family, c.threshold->options,
                                                         c.resolvent, c.valuation);
    return to_json(t).dump();
}

std::string reproduce_json(const std::string& id, bool mc, std::size_t paths, std::uint64_t seed) {
    RunOptions o;
    o.mc_checks = mc;
    o.mc.paths = paths;
    o.mc.seed = seed;
    py::gil_scoped_release nogil;
    return to_json(run_example(build_example(example_id_from_string(id)), o)).dump();
}

std::string describe_json(const std::string& doc) { return describe_instance(need_instance(load(doc, {}))).dump(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Equilibrium stopping under non-exponential discounting";
    m.attr("__version__") = "0.1.0";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base);
    py::register_exception<ParameterError>(m, "ParameterError", base);
    py::register_exception<ConfigError>(m, "ConfigError", base);
    py::register_exception<OpenPieceError>(m, "OpenPieceError", base);
    py::register_exception<InadmissibleRegion>(m, "InadmissibleRegion", base);
    py::register_exception<NotBoundaryPoint>(m, "NotBoundaryPoint", base);
    py::register_exception<SolverError>(m, "SolverError", base);
    py::register_exception<NoBracket>(m, "NoBracket", base);

    m.def("classify", &classify_json, py::arg("config"), py::arg("overrides") = std::vector<std::string>{},
          "Equilibrium report for the configured region, as a JSON string.");
    m.def("values", &values, py::arg("config"), py::arg("xs"), "J(x, S) at the given states.");
    m.def("solve_threshold", &threshold_json, py::arg("config"), py::arg("overrides") = std::vector<std::string>{},
          "Threshold equilibrium search, as a JSON string.");
    m.def("reproduce", &reproduce_json, py::arg("example"), py::arg("mc") = false, py::arg("paths") = 100000,
          py::arg("seed") = 20240601, "Run a worked example, as a JSON string.");
    m.def("describe", &describe_json, py::arg("config"), "Model summary, as a JSON string.");
}
