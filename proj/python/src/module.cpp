#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <chrono>
#include <sstream>

#include "fleetopt/cli.hpp"
#include "fleetopt/compiler.hpp"
#include "fleetopt/dataset_io.hpp"
#include "fleetopt/greedy.hpp"
#include "fleetopt/linmodel.hpp"
#include "fleetopt/oracle.hpp"
#include "fleetopt/report.hpp"
#include "fleetopt/simplify.hpp"
#include "fleetopt/synthetic.hpp"

namespace py = pybind11;
using namespace fleetopt;

namespace {

// Everything crosses the boundary as instance text or JSON text; the Python
// side decodes the JSON.
std::string solve(const std::string& text, const std::string& mode, std::size_t n_bunch, const std::string& backend,
                  std::uint64_t seed, std::int64_t time_limit_ms) {
  Dataset d = simplify(parse_dataset(text));
  const Backend b = backend == "anneal" ? Backend::Anneal : Backend::Exact;
  if (backend != "exact" && backend != "anneal") throw std::invalid_argument("backend must be exact or anneal");
  const std::chrono::milliseconds limit{time_limit_ms};
  nlohmann::json out;
  py::gil_scoped_release release;
  if (mode == "bisect") {
    auto r = run_bisection(d, 0, b, limit, seed);
    out = fleet_json(d, r.fleet);
    out["n_min"] = r.n_min;
    out["proven_optimal"] = r.proven_optimal;
    out["complete"] = true;
  } else if (mode == "greedy") {
    GreedyConfig cfg;
    cfg.n_bunch = n_bunch;
    cfg.backend = b;
    cfg.seed = seed;
    cfg.per_iteration_time_limit = limit;
    auto r = run_greedy(d, cfg);
    out = fleet_json(d, r.fleet);
    out["complete"] = r.complete;
    out["report"] = report_json(r.fleet.trace, instance_digest(d), nlohmann::json::object());
  } else {
    throw std::invalid_argument("mode must be greedy or bisect");
  }
  return out.dump();
}

std::string export_model(const std::string& text, std::size_t n, const std::string& mode, const std::string& format) {
  auto m = compile(simplify(parse_dataset(text)), n, mode == "sat" ? CompileMode::Sat : CompileMode::MaxSat);
  return format == "mps" ? export_mps(m) : export_lp(m);
}

py::tuple run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Test fleet configuration optimizer";
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<CompileError>(m, "CompileError", PyExc_ValueError);

  m.def("generate", [](std::size_t f, std::size_t o, std::size_t q, std::size_t rules, std::size_t groups,
                       std::uint64_t seed) {
    return serialize_dataset(generate_synthetic(
        {.features = f, .types = o, .tests = q, .rules = rules, .groups = groups, .seed = seed}));
  }, py::arg("features"), py::arg("types"), py::arg("tests"), py::arg("rules") = 4, py::arg("groups") = 1,
        py::arg("seed") = 1);
  m.def("simplify", [](const std::string& text) { return serialize_dataset(simplify(parse_dataset(text))); },
        py::arg("text"));
  m.def("digest", [](const std::string& text) { return instance_digest(parse_dataset(text)); }, py::arg("text"));
  m.def("solve", &solve, py::arg("text"), py::arg("mode") = "greedy", py::arg("n_bunch") = 1,
        py::arg("backend") = "exact", py::arg("seed") = 0, py::arg("time_limit_ms") = 5000);
  m.def("export_model", &export_model, py::arg("text"), py::arg("n") = 1, py::arg("mode") = "maxsat",
        py::arg("format") = "lp");
  m.def("oracle_min_fleet", [](const std::string& text, std::size_t cap) {
    return oracle::min_fleet(simplify(parse_dataset(text)), cap);
  }, py::arg("text"), py::arg("cap") = 8);
  m.def("oracle_max_coverage", [](const std::string& text, std::size_t n) {
    return to_string(oracle::max_coverage(simplify(parse_dataset(text)), n));
  }, py::arg("text"), py::arg("n"));
  m.def("run_cli", &run_cli, py::arg("args"));
}
