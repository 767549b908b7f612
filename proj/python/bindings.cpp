#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pmelab/energy.hpp"
#include "pmelab/equivalence.hpp"
#include "pmelab/mollify.hpp"
#include "pmelab/obstacle.hpp"
#include "pmelab/scenario.hpp"
#include "pmelab/solver.hpp"

namespace py = pybind11;
using namespace pmelab;

namespace {

py::array_t<double> field_to_numpy(const ScalarField& f) {
  const SpaceTimeGrid& g = f.grid();
  py::array_t<double> out({g.nt, g.num_nodes()});
  auto buf = out.mutable_unchecked<2>();
  for (int k = 0; k < g.nt; ++k)
    for (int n = 0; n < g.num_nodes(); ++n) buf(k, n) = f.at(k, n);
  return out;
}

ScalarField field_from_numpy(const SpaceTimeGrid& g, py::array_t<double> a,
                             bool nonneg) {
  auto buf = a.unchecked<2>();
  if (buf.shape(0) != g.nt || buf.shape(1) != g.num_nodes())
    throw std::invalid_argument("array shape must be (nt, num_nodes)");
  ScalarField f(g, 0.0, nonneg);
  for (int k = 0; k < g.nt; ++k)
    for (int n = 0; n < g.num_nodes(); ++n) f.at(k, n) = buf(k, n);
  f.validate();
  return f;
}

}  // namespace

PYBIND11_MODULE(_pmelab, m) {
  m.doc() = "finite-difference laboratory for slow nonlinear diffusion";

  py::class_<SpaceTimeGrid>(m, "SpaceTimeGrid")
      .def_static("make1d", &SpaceTimeGrid::make1d, py::arg("xlo"), py::arg("xhi"),
                  py::arg("nx"), py::arg("nt"), py::arg("T"))
      .def_static("make2d", &SpaceTimeGrid::make2d, py::arg("xlo"), py::arg("xhi"),
                  py::arg("ylo"), py::arg("yhi"), py::arg("nx"), py::arg("ny"),
                  py::arg("nt"), py::arg("T"))
      .def_readonly("dim", &SpaceTimeGrid::dim)
      .def_readonly("nt", &SpaceTimeGrid::nt)
      .def_readonly("T", &SpaceTimeGrid::T)
      .def_readonly("dt", &SpaceTimeGrid::dt)
      .def("num_nodes", &SpaceTimeGrid::num_nodes)
      .def("x", &SpaceTimeGrid::x)
      .def("t", &SpaceTimeGrid::t);

  py::class_<ScalarField>(m, "ScalarField")
      .def_static("constant", &ScalarField::constant, py::arg("grid"), py::arg("c"))
      .def_static("from_array", &field_from_numpy, py::arg("grid"),
                  py::arg("values"), py::arg("nonneg") = false)
      .def("to_array", &field_to_numpy)
      .def("grid", &ScalarField::grid)
      .def("min", &ScalarField::min)
      .def("max", &ScalarField::max)
      .def("slice", &ScalarField::slice, py::arg("step"));

  m.def(
      "barenblatt",
      [](double x, double t, double m_, double C, double t0) {
        BarenblattParams p;
        p.m = m_;
        p.C = C;
        p.t0 = t0;
        return barenblatt(x, t, p);
      },
      py::arg("x"), py::arg("t"), py::arg("m") = 2.0, py::arg("C") = 1.0,
      py::arg("t0") = 1.0,
      "compactly supported self-similar exact solution (1D)");

  m.def(
      "solve_pme",
      [](const std::vector<double>& u0, const ScalarField& bc, double m_,
         bool neumann) {
        PMEParams p;
        p.m = m_;
        p.eps = 0.0;
        return solve_pme(u0, bc, p, bc.grid(), nullptr,
                         neumann ? BoundaryKind::Neumann : BoundaryKind::Dirichlet)
            .u;
      },
      py::arg("u0"), py::arg("boundary"), py::arg("m") = 2.0,
      py::arg("neumann") = false,
      "implicit time-stepping for du/dt = Lap(u^m) with the given data");

  m.def(
      "mollify_time",
      [](const ScalarField& u, double h, bool from_initial_slice) {
        return mollify_time(u, from_initial_slice
                                   ? MollifierParams::initial_slice(h)
                                   : MollifierParams::zero_start(h));
      },
      py::arg("u"), py::arg("h"), py::arg("from_initial_slice") = true,
      "exponential-kernel time averaging");

  m.def(
      "solve_obstacle",
      [](const ScalarField& psi, const ScalarField& g,
         const std::vector<double>& u0, double m_,
         const std::vector<double>& deltas) {
        ObstacleProblemSpec spec;
        spec.psi = psi;
        spec.g = g;
        spec.u0 = u0;
        spec.m = m_;
        ApproximationChain chain;
        if (!deltas.empty()) chain.delta_seq = deltas;
        const StrongSolveResult r = solve_strong(spec, chain);
        return py::make_tuple(r.u, r.feasibility_seq, r.cauchy_increments);
      },
      py::arg("psi"), py::arg("g"), py::arg("u0"), py::arg("m") = 2.0,
      py::arg("deltas") = std::vector<double>{},
      "penalized solve of the constrained problem u >= psi; returns "
      "(solution, feasibility per delta, increments between deltas)");

  m.def(
      "weak_residuals",
      [](const ScalarField& u, double m_, int count, uint64_t seed,
         bool midpoint_form) {
        const TestFunctionBasis basis =
            TestFunctionBasis::make(u.grid(), count, seed);
        return weak_residual(u, m_, basis,
                             midpoint_form ? WeakForm::GradUmid : WeakForm::GradUm);
      },
      py::arg("u"), py::arg("m") = 2.0, py::arg("count") = 20,
      py::arg("seed") = 20240901, py::arg("midpoint_form") = false,
      "per-test-function residuals of the weak form");

  m.def(
      "run_scenario",
      [](const std::string& config_path, const std::string& out_dir) {
        ScenarioConfig cfg = load_scenario(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        const RunResult r = run_scenario(cfg);
        return py::make_tuple(r.all_pass(), r.summary(), r.artifacts);
      },
      py::arg("config_path"), py::arg("out_dir") = std::string(),
      "execute a scenario config; returns (all_pass, summary, artifacts)");
}
