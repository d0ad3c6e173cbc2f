#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fklab/config.hpp"
#include "fklab/ids.hpp"
#include "fklab/laplace.hpp"
#include "fklab/model.hpp"
#include "fklab/scenarios.hpp"
#include "fklab/spectral.hpp"

namespace py = pybind11;
using namespace fklab;

namespace {

QuadratureSpec quad_spec(double abs_tol, double rel_tol) {
  QuadratureSpec q;
  q.abs_tol = abs_tol;
  q.rel_tol = rel_tol;
  return q;
}

// Settings are passed as strings so that Python and config files go through one validator.
RunConfig make_config(const std::string& scenario, const py::dict& settings) {
  RunConfig c;
  c.scenario = scenario;
  for (auto item : settings) {
    const std::string key = py::str(item.first);
    py::handle v = item.second;
    std::string value;
    if (py::isinstance<py::bool_>(v)) {
      value = v.cast<bool>() ? "true" : "false";
    } else if (py::isinstance<py::list>(v) || py::isinstance<py::tuple>(v)) {
      for (auto e : v) value += (value.empty() ? "" : ",") + std::string(py::str(e));
    } else {
      value = py::str(v);
    }
    apply_setting(c, key, value);
  }
  c.validate();
  return c;
}

}  // namespace

PYBIND11_MODULE(_fklab, m) {
  m.doc() = "Annealed Brownian motion in a heavy-tailed Poissonian potential";
  m.attr("__version__") = FKLAB_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def(
      "constants",
      [](int d, double alpha) {
        ModelParams{d, alpha, 1.0}.validate();
        const ConstantsBundle c = compute_constants(d, alpha);
        py::dict out;
        out["a1"] = c.a1;
        out["C"] = c.C;
        out["a2"] = c.a2;
        out["l1"] = c.l1;
        out["l2"] = c.l2;
        out["sigma_d"] = c.sigma_d;
        return out;
      },
      py::arg("d"), py::arg("alpha"), "Model constants for dimension d and tail exponent alpha.");

  m.def(
      "log_mgf",
      [](double s, int d, double alpha, double abs_tol, double rel_tol) {
        return exact_mgf_V0(s, Model({d, alpha, 1.0}), quad_spec(abs_tol, rel_tol));
      },
      py::arg("s"), py::arg("d") = 1, py::arg("alpha") = 2.0, py::arg("abs_tol") = 1e-10, py::arg("rel_tol") = 1e-8,
      "log E[exp(-s V(0))] by quadrature.");

  m.def(
      "log_laplace",
      [](const std::vector<double>& atoms, const std::vector<double>& weights, double t, int d, double alpha) {
        const Model model({d, alpha, t});
        return -exact_log_laplace(DiscreteMeasure(d, atoms, weights), model);
      },
      py::arg("atoms"), py::arg("weights"), py::arg("t"), py::arg("d") = 1, py::arg("alpha") = 2.0,
      "log E[exp(-t <mu, V>)] for a discrete measure (atoms flat, row-major).");

  m.def(
      "ground_state",
      [](const std::vector<double>& potential, double half_width) {
        // potential sampled on the interior nodes of a uniform Dirichlet grid on (-L, L)
        if (potential.size() < 3) throw std::invalid_argument("ground_state: need at least 3 nodes");
        const double h = 2 * half_width / static_cast<double>(potential.size() + 1);
        const Grid g(Box::cube(1, half_width), h);
        if (g.size() != potential.size()) throw std::invalid_argument("ground_state: grid size mismatch");
        GridField V = GridField::zeros(g);
        V.values = potential;
        const EigenResult e = smallest_eigs(assemble(V), 2);
        return py::make_tuple(e.lambda1, e.lambda2, e.phi1.values);
      },
      py::arg("potential"), py::arg("half_width"),
      "Two smallest Dirichlet eigenvalues of -Delta/2 + V and the ground state (d = 1).");

  m.def(
      "ids",
      [](const std::vector<double>& lambdas, int d, double alpha, double box, std::size_t samples,
         std::uint64_t seed, bool importance) {
        IdsOptions o;
        o.importance = importance;
        const IdsCurve c = ids_estimate(lambdas, d, alpha, box, samples, seed, o);
        py::list out;
        for (const IdsPoint& p : c.points) {
          py::dict q;
          q["lambda"] = p.lambda;
          q["N"] = p.N;
          q["lo"] = p.lo;
          q["hi"] = p.hi;
          out.append(q);
        }
        return out;
      },
      py::arg("lambdas"), py::arg("d") = 1, py::arg("alpha") = 1.5, py::arg("box") = 64.0,
      py::arg("samples") = 100, py::arg("seed") = 1, py::arg("importance") = true,
      "Integrated density of states per unit volume.");

  m.def("scenarios", &registered_scenarios, "Registered scenario names.");

  m.def(
      "run_scenario",
      [](const std::string& name, const py::dict& settings, const std::string& out_dir) {
        const RunConfig c = make_config(name, settings);
        ScenarioOutput out;
        {
          py::gil_scoped_release release;
          out = run_scenario(c);
        }
        if (!out_dir.empty()) write_outputs(out, out_dir, c.plots);
        return out.record.dump();
      },
      py::arg("name"), py::arg("settings") = py::dict(), py::arg("out_dir") = "",
      "Run a scenario and return its record as a JSON string.");
}
