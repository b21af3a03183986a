#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

#include "veselova/cli/run.hpp"
#include "veselova/veselova.hpp"

namespace py = pybind11;
using namespace veselova;

namespace {

ReducedState reduced(const Vector& q, const Vector& p) { return ReducedState{q, p}; }

FullState full(const Matrix& g, const Matrix& omega) {
  return FullState{OrthogonalMatrix(g, 1e-8), SkewMatrix::from_dense(omega)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Nonholonomic Veselova top: reduced and full dynamics";

  py::register_exception<Error>(m, "VeselovaError", PyExc_RuntimeError);
  py::register_exception<cli::ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("symmetry_class", [](const std::vector<double>& J) { return symmetry_name(classify_symmetry(MassTensor(J))); });

  m.def("hamiltonian_reduced", [](const std::vector<double>& J, const Vector& q, const Vector& p) {
    return hamiltonian_reduced(MassTensor(J), reduced(q, p));
  });
  m.def("vector_field_reduced", [](const std::vector<double>& J, const Vector& q, const Vector& p) {
    const ReducedTangent t = vector_field_reduced(MassTensor(J), reduced(q, p));
    return py::make_tuple(t.q_dot, t.p_dot);
  });
  m.def("measure_density", [](const std::vector<double>& J, const Vector& q) { return measure_density(MassTensor(J), q); });
  m.def(
      "measure_divergence_residual",
      [](const std::vector<double>& J, const Vector& q, const Vector& p) {
        return measure_divergence_residual(MassTensor(J), reduced(q, p));
      },
      "|div(mu X)| at (q, p)");
  m.def("em_map", [](const std::vector<double>& J, const Vector& q, const Vector& p) {
    const EMValue v = em_map(MassTensor(J), reduced(q, p));
    return py::make_tuple(v.P, v.H);
  });
  m.def("critical_ray_slopes", [](const std::vector<double>& J) { return critical_ray_slopes(MassTensor(J)); });
  m.def("fj_matrix", [](const std::vector<double>& J) { return fj_matrix(MassTensor(J)); });

  m.def(
      "stability_hessian",
      [](const std::vector<double>& J, int i, int j, double omega) {
        const StabilityAnalysis a = stability_hessian(MassTensor(J), i, j, omega);
        return py::make_tuple(a.hessian, a.verdict == Verdict::Stable);
      },
      py::arg("J"), py::arg("i"), py::arg("j"), py::arg("omega"));

  m.def(
      "integrate_reduced",
      [](const std::vector<double>& J, const Vector& q, const Vector& p, double dt, long steps) {
        IntegrationOptions o;
        o.dt = dt;
        o.steps = steps;
        const ReducedState s = integrate_reduced(MassTensor(J), reduced(q, p), o);
        return py::make_tuple(s.q, s.p);
      },
      py::arg("J"), py::arg("q"), py::arg("p"), py::arg("dt") = 1e-3, py::arg("steps") = 1000);

  m.def(
      "integrate_full",
      [](const std::vector<double>& J, const Matrix& g, const Matrix& omega, double dt, long steps) {
        FullOptions o;
        o.dt = dt;
        o.steps = steps;
        const FullState s = integrate_full(MassTensor(J), full(g, omega), o);
        return py::make_tuple(s.g.matrix(), s.omega.dense());
      },
      py::arg("J"), py::arg("g"), py::arg("omega"), py::arg("dt") = 1e-3, py::arg("steps") = 1000);

  m.def("energy", [](const std::vector<double>& J, const Matrix& omega) {
    return energy(MassTensor(J), SkewMatrix::from_dense(omega));
  });
  m.def("max_constraint_residual", [](const Matrix& g, const Matrix& omega) {
    return max_constraint_residual(full(g, omega));
  });
  m.def(
      "random_admissible_state",
      [](const std::vector<double>& J, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        const FullState s = random_admissible_state(MassTensor(J), rng);
        return py::make_tuple(s.g.matrix(), s.omega.dense());
      },
      py::arg("J"), py::arg("seed") = 0);
  m.def("project_to_reduced", [](const std::vector<double>& J, const Matrix& g, const Matrix& omega) {
    const ReducedState s = project_to_reduced(MassTensor(J), full(g, omega));
    return py::make_tuple(s.q, s.p);
  });

  m.def(
      "base_frequencies",
      [](const std::vector<std::vector<double>>& channels, double dt, double tolerance) {
        FrequencyOptions o;
        o.tolerance = tolerance;
        const FrequencySpectrum s = frequency_analysis(channels, dt, o);
        return py::make_tuple(s.base_count, s.basis, s.near_resonance);
      },
      py::arg("channels"), py::arg("dt"), py::arg("tolerance") = 1e-3);

  m.def(
      "run_config",
      [](const std::string& text) {
        cli::ExperimentConfig c = cli::parse_config(text);
        return cli::report_to_json(cli::run(c));
      },
      "Run a JSON config and return the JSON report");
  m.def("verify", [](const std::vector<double>& J, std::uint64_t seed) {
    py::list out;
    for (const auto& c : cli::verify_suite(J, seed)) out.append(py::make_tuple(c.name, c.value, c.passed));
    return out;
  }, py::arg("J"), py::arg("seed") = 0);
}
