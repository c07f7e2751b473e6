#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "dgac/characteristic.hpp"
#include "dgac/experiments.hpp"
#include "dgac/quadrature.hpp"

namespace py = pybind11;
using namespace dgac;

namespace {

RunConfig config_from(const std::string& text) {
  try {
    return parse_run_config(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

py::dict norms_dict(const NormReport& r) {
  py::dict d;
  d["L2L2"] = r.L2L2;
  d["LinfL2"] = r.LinfL2;
  d["L2H1"] = r.L2H1;
  d["L4L4"] = r.L4L4;
  d["jump_sum"] = r.jump_sum;
  return d;
}

py::dict solve(const std::string& config, const std::string& out) {
  const SolveOutcome o = cmd_solve(config_from(config), out);
  py::dict d;
  d["exit_code"] = o.exit_code;
  d["error"] = o.error;
  d["norms"] = o.norms ? py::object(norms_dict(*o.norms)) : py::none();
  d["error_norms"] = o.error_norms ? py::object(norms_dict(*o.error_norms)) : py::none();
  return d;
}

py::dict verify(const std::optional<std::string>& config, const std::string& out) {
  const VerifyResult r = cmd_verify(config ? config_from(*config) : default_verify_config(), out);
  py::list checks;
  for (const auto& c : r.checks) {
    py::dict e;
    e["identity"] = c.identity;
    e["residual"] = c.residual;
    e["threshold"] = c.threshold;
    e["skipped"] = c.skipped;
    e["note"] = c.note;
    e["passed"] = c.passed();
    checks.append(e);
  }
  py::dict d;
  d["exit_code"] = r.exit_code;
  d["error"] = r.error;
  d["checks"] = checks;
  return d;
}

py::list convergence(const std::string& config, int levels, const std::string& refine, const std::string& out) {
  const ConvergenceTable t = cmd_convergence(config_from(config), levels, parse_refine_mode(refine), out);
  py::list rows;
  for (const auto& r : t.rows) {
    py::dict d = norms_dict(r.errors);
    d["level"] = r.level;
    d["n"] = r.n;
    d["slabs"] = r.slabs;
    d["order_LinfL2"] = r.order_LinfL2;
    d["order_L2H1"] = r.order_L2H1;
    d["order_X"] = r.order_X;
    rows.append(d);
  }
  if (!t.complete) throw std::runtime_error("convergence ladder incomplete: " + t.error);
  return rows;
}

}  // namespace

PYBIND11_MODULE(_dgac, m) {
  m.doc() = "Space-time dG solver for the Allen-Cahn equation";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("solve", &solve, py::arg("config"), py::arg("out"), "Forward solve from a JSON config; writes outputs under out.");
  m.def("verify", &verify, py::arg("config") = py::none(), py::arg("out") = "out", "Run the identity checks.");
  m.def("convergence", &convergence, py::arg("config"), py::arg("levels"), py::arg("refine"), py::arg("out"));
  m.def("config_hash", [](const std::string& config) { return config_hash(config_from(config)); });
  m.def("default_verify_config", [] { return to_json(default_verify_config()).dump(); });

  m.def("gauss_legendre", [](int n) {
    const QuadratureRule1D r = gauss_legendre(n);
    return py::make_tuple(r.points, r.weights);
  }, "n-point Gauss-Legendre rule on [0, 1].");
  m.def("right_radau_points", &right_radau_points);
  m.def("discrete_characteristic", [](int k, double t_hat) {
    return discrete_characteristic(k, t_hat).coefficients;
  }, py::arg("k"), py::arg("t_hat"), "Monomial coefficients of the discrete characteristic.");
  m.def("characteristic_constant", [](int k, int grid) { return sup_norm_scan(k, grid).constant; },
        py::arg("k"), py::arg("grid") = 1001);
}
