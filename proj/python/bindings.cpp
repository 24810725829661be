#include "varbounds/bounds.hpp"
#include "varbounds/cli.hpp"
#include "varbounds/error.hpp"
#include "varbounds/io.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace varbounds;

namespace {

// Python-facing handle; the variant itself has no default constructor.
struct PyDistribution {
  Distribution d;
};

FunctionTuple tuple_from(const std::vector<std::string>& exprs) {
  std::vector<TestFunction> fs;
  for (const auto& e : exprs) fs.emplace_back(parse_expression(e), e);
  return FunctionTuple(std::move(fs));
}

EngineConfig engine_from(int quad_nodes, const std::string& infinite_map, double trunc_tol, std::size_t mc_samples,
                         std::uint64_t mc_seed) {
  EngineConfig e;
  e.quad_nodes = quad_nodes;
  if (infinite_map == "tanh") e.infinite_map = InfiniteMap::tanh;
  else if (infinite_map != "rational") throw InvalidArgument("infinite_map must be 'rational' or 'tanh'");
  e.trunc_tol = trunc_tol;
  e.mc_samples = mc_samples;
  e.mc_seed = mc_seed;
  e.validate();
  return e;
}

py::tuple quadratic_tuple(const Quadratic& q) { return py::make_tuple(q.delta, q.beta, q.gamma); }

} // namespace

PYBIND11_MODULE(_varbounds, m) {
  m.doc() = "Matrix variance inequalities for Integrated Pearson and Cumulative Ord members";

  py::register_exception<SingularCoefficient>(m, "SingularCoefficient", PyExc_ArithmeticError);
  py::register_exception<ClassMembershipError>(m, "ClassMembershipError", PyExc_ValueError);
  py::register_exception<NoSampler>(m, "NoSampler", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

  py::class_<PyDistribution>(m, "Distribution")
      .def_property_readonly("name", [](const PyDistribution& p) { return name_of(p.d); })
      .def_property_readonly("mean", [](const PyDistribution& p) { return mean_of(p.d); })
      .def_property_readonly("discrete", [](const PyDistribution& p) { return is_discrete(p.d); })
      .def_property_readonly("quadratic", [](const PyDistribution& p) -> py::object {
        if (!has_quadratic(p.d)) return py::none();
        return quadratic_tuple(quadratic_of(p.d));
      })
      .def("__repr__", [](const PyDistribution& p) { return "<Distribution " + name_of(p.d) + ">"; });

  m.def("catalog", [](const std::string& name, const ParamMap& params) { return PyDistribution{catalog(name, params)}; },
        py::arg("name"), py::arg("params") = ParamMap{});
  m.def("catalog_names", &catalog_names);
  m.def("parse_distribution", [](const std::string& text) { return PyDistribution{parse_distribution(text)}; });
  m.def("distribution_from_argument",
        [](const std::string& arg) { return PyDistribution{distribution_from_argument(arg)}; });

  m.def("infer_quadratic", [](const PyDistribution& p) {
    const QuadraticFit fit = infer_quadratic(p.d);
    py::dict out;
    out["quadratic"] = quadratic_tuple(fit.q);
    out["max_residual"] = fit.max_residual;
    out["mean_residual"] = fit.mean_residual;
    out["points"] = fit.points;
    return out;
  });
  m.def(
      "verify_membership",
      [](const PyDistribution& p, std::optional<double> tol) {
        const MembershipReport r = verify_membership(p.d, tol);
        py::dict out;
        out["pass"] = r.pass;
        out["max_residual"] = r.max_residual;
        out["tolerance"] = r.tolerance;
        out["points"] = r.points;
        return out;
      },
      py::arg("distribution"), py::arg("tolerance") = py::none());
  m.def("moment_finiteness", [](const PyDistribution& p, int n) { return moment_finiteness(p.d, n).finite; });

  m.def(
      "compute_bounds",
      [](const PyDistribution& p, const std::vector<std::string>& functions, int n,
         const std::vector<std::string>& theorems, double tol, int quad_nodes, const std::string& infinite_map,
         double trunc_tol) {
        BoundsConfig cfg;
        cfg.engine = engine_from(quad_nodes, infinite_map, trunc_tol, 200000, 0x5eed5eedULL);
        cfg.tol_factor = tol;
        std::vector<Theorem> ts;
        for (const auto& t : theorems) ts.push_back(theorem_from_string(t));
        return report_to_json(compute_bounds(p.d, tuple_from(functions), n, ts, cfg));
      },
      py::arg("distribution"), py::arg("functions"), py::arg("n"),
      py::arg("theorems") = std::vector<std::string>{"poincare", "bessel"}, py::arg("tol") = 1e-6,
      py::arg("quad_nodes") = 200, py::arg("infinite_map") = "rational", py::arg("trunc_tol") = 1e-12,
      "Runs the bound pipeline and returns the JSON report text.");

  m.def(
      "mc_cross_check",
      [](const PyDistribution& p, const std::vector<std::string>& functions, const std::string& report_json,
         std::size_t samples, std::uint64_t seed) {
        const EngineConfig e = engine_from(200, "rational", 1e-12, samples, seed);
        const McCheck mc = mc_cross_check(p.d, tuple_from(functions), report_from_json(report_json), e);
        py::dict out;
        out["pass"] = mc.pass;
        out["max_deviation"] = mc.max_deviation;
        out["max_ratio"] = mc.max_ratio;
        out["entries"] = mc.entries.size();
        return out;
      },
      py::arg("distribution"), py::arg("functions"), py::arg("report"), py::arg("samples") = 200000,
      py::arg("seed") = 0x5eed5eedULL);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::vector<const char*> argv{"varbounds"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(rc, out.str(), err.str());
  });
}
