#include "lrflow/coefficients.hpp"
#include "lrflow/integrator.hpp"
#include "lrflow/maccormack.hpp"
#include "lrflow/scenario.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <limits>
#include <sstream>

namespace py = pybind11;
using namespace lrflow;

namespace {

py::dict report_dict(const StepReport& r) {
  py::dict d;
  d["mass_drift"] = r.mass_drift;
  d["mom1_drift"] = r.mom1_drift;
  d["mom2_drift"] = r.mom2_drift;
  d["smin"] = r.smin;
  d["orthonormality_x"] = r.orthonormality_x;
  d["orthonormality_v"] = r.orthonormality_v;
  d["k_substeps"] = r.k_substeps;
  d["s_substeps"] = r.s_substeps;
  d["l_substeps"] = r.l_substeps;
  return d;
}

py::dict diag_dict(const DiagnosticsRow& r) {
  py::dict d;
  d["time"] = r.time;
  d["mass"] = r.mass;
  d["mom1"] = r.mom1;
  d["mom2"] = r.mom2;
  d["mass_drift"] = r.mass_drift;
  d["max_u"] = r.max_u;
  d["smin"] = r.smin;
  d["err_rho"] = r.err_rho;
  d["err_u"] = r.err_u;
  return d;
}

py::dict fields_dict(const FieldSet& f) {
  py::dict d;
  d["time"] = f.time;
  d["rho"] = f.rho;
  d["u1"] = f.u1;
  d["u2"] = f.u2;
  d["vorticity"] = f.vorticity;
  return d;
}

template <class T, class F>
py::list to_list(const std::vector<T>& v, F&& f) {
  py::list out;
  for (const auto& x : v) out.append(f(x));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Low-rank BGK solver core";

  py::register_exception<IntegrationError>(m, "IntegrationError", PyExc_RuntimeError);

  py::class_<PhaseGrids>(m, "PhaseGrids")
      .def(py::init([](int n_x, int n_v, double v_max) { return PhaseGrids{SpatialGrid(n_x), VelocityGrid(n_v, v_max)}; }),
           py::arg("n_x"), py::arg("n_v"), py::arg("v_max") = 6.0)
      .def_property_readonly("n_x", [](const PhaseGrids& g) { return g.x.n(); })
      .def_property_readonly("n_v", [](const PhaseGrids& g) { return g.v.n(); })
      .def_property_readonly("v_max", [](const PhaseGrids& g) { return g.v.v_max(); })
      .def_property_readonly("x1", [](const PhaseGrids& g) { return g.x.x1(); })
      .def_property_readonly("x2", [](const PhaseGrids& g) { return g.x.x2(); })
      .def_property_readonly("v1", [](const PhaseGrids& g) { return g.v.v1(); })
      .def_property_readonly("v2", [](const PhaseGrids& g) { return g.v.v2(); });

  py::class_<LowRankState>(m, "LowRankState")
      .def(py::init<>())
      .def(py::init([](Basis X, Matrix S, Basis V) { return LowRankState{std::move(X), std::move(S), std::move(V)}; }),
           py::arg("X"), py::arg("S"), py::arg("V"))
      .def_readwrite("X", &LowRankState::X)
      .def_readwrite("S", &LowRankState::S)
      .def_readwrite("V", &LowRankState::V)
      .def_property_readonly("rank", &LowRankState::rank);

  m.def(
      "init_equilibrium",
      [](const PhaseGrids& g, const Field& rho, const Field& u1, const Field& u2, int rank, std::uint64_t seed) {
        Rng rng(seed);
        return init_equilibrium(g, rho, u1, u2, rank, rng);
      },
      py::arg("grids"), py::arg("rho"), py::arg("u1"), py::arg("u2"), py::arg("rank") = 10, py::arg("seed") = 1,
      "Local Maxwellian state of the given rank, padded with random orthonormal columns.");
  m.def("dense_f", &dense_f, py::arg("state"), "Full tensor X S V^T, shape (n_x^2, n_v^2).");
  m.def(
      "moments",
      [](const PhaseGrids& g, const LowRankState& s) {
        const MomentFields mf = moments(g, s);
        py::dict d;
        d["rho"] = mf.rho;
        d["mom1"] = mf.mom1;
        d["mom2"] = mf.mom2;
        d["u1"] = mf.u1;
        d["u2"] = mf.u2;
        return d;
      },
      py::arg("grids"), py::arg("state"));
  m.def(
      "compute_coefficients",
      [](const PhaseGrids& g, const LowRankState& s, const std::string& derivative) {
        const CoefficientSet c = compute_coefficients(g, s, parse_derivative(derivative));
        py::dict d;
        d["c1"] = py::make_tuple(c.c1.x1, c.c1.x2);
        d["d1"] = py::make_tuple(c.d1.x1, c.d1.x2);
        d["c3"] = c.c3;
        d["d3"] = c.d3;
        d["e"] = c.e;
        return d;
      },
      py::arg("grids"), py::arg("state"), py::arg("derivative") = "centered2");

  py::class_<SplittingConfig>(m, "SplittingConfig")
      .def(py::init<>())
      .def_readwrite("epsilon", &SplittingConfig::epsilon)
      .def_readwrite("tau", &SplittingConfig::tau)
      .def_property(
          "order", [](const SplittingConfig& c) { return to_string(c.order); },
          [](SplittingConfig& c, const std::string& s) { c.order = parse_order(s); })
      .def_property(
          "backend", [](const SplittingConfig& c) { return to_string(c.backend); },
          [](SplittingConfig& c, const std::string& s) { c.backend = parse_backend(s); })
      .def_property(
          "derivative", [](const SplittingConfig& c) { return to_string(c.derivative_method()); },
          [](SplittingConfig& c, const std::string& s) { c.derivative = parse_derivative(s); })
      .def_readwrite("collision_substep", &SplittingConfig::collision_substep)
      .def_readwrite("advection_cfl", &SplittingConfig::advection_cfl)
      .def("validate", &SplittingConfig::validate);

  py::class_<ProjectorSplitting>(m, "ProjectorSplitting")
      .def(py::init<PhaseGrids, SplittingConfig, std::uint64_t>(), py::arg("grids"), py::arg("config"),
           py::arg("seed") = 1)
      .def(
          "step",
          [](ProjectorSplitting& p, LowRankState& s, std::optional<double> tau) {
            return report_dict(tau ? p.step(s, *tau) : p.step(s));
          },
          py::arg("state"), py::arg("tau") = py::none(),
          "Advance the state in place by one macro step and return the step report.")
      .def("k_step", [](const ProjectorSplitting& p, const Basis& K, const Basis& V, double t) { return p.k_step(K, V, t); },
           py::arg("K"), py::arg("V"), py::arg("duration"))
      .def("s_step",
           [](const ProjectorSplitting& p, const Matrix& S, const Basis& X, const Basis& V, double t) {
             return p.s_step(S, X, V, t);
           },
           py::arg("S"), py::arg("X"), py::arg("V"), py::arg("duration"))
      .def("l_step", [](const ProjectorSplitting& p, const Basis& L, const Basis& X, double t) { return p.l_step(L, X, t); },
           py::arg("L"), py::arg("X"), py::arg("duration"));

  py::class_<FluidState>(m, "FluidState")
      .def(py::init<>())
      .def_readwrite("rho", &FluidState::rho)
      .def_readwrite("mom1", &FluidState::mom1)
      .def_readwrite("mom2", &FluidState::mom2)
      .def_readwrite("time", &FluidState::time);
  py::class_<ViscosityParams>(m, "ViscosityParams")
      .def(py::init<>())
      .def_readwrite("mu", &ViscosityParams::mu)
      .def_readwrite("lam", &ViscosityParams::lambda);
  m.def("viscosity_from_epsilon", &viscosity_from_epsilon, py::arg("epsilon"), py::arg("d") = 2);
  m.def("make_fluid_state", &make_fluid_state, py::arg("rho"), py::arg("u1"), py::arg("u2"));
  m.def(
      "cfl_dt", [](const PhaseGrids& g, const FluidState& s, double cfl) { return cfl_dt(g.x, s, cfl); },
      py::arg("grids"), py::arg("state"), py::arg("cfl") = 0.9);
  m.def(
      "maccormack_step",
      [](const PhaseGrids& g, const FluidState& s, const ViscosityParams& v, double dt) {
        return maccormack_step(g.x, s, v, dt);
      },
      py::arg("grids"), py::arg("state"), py::arg("viscosity"), py::arg("dt"));
  m.def(
      "vorticity",
      [](const PhaseGrids& g, const Field& u1, const Field& u2, const std::string& derivative) {
        return vorticity(g.x, u1, u2, parse_derivative(derivative));
      },
      py::arg("grids"), py::arg("u1"), py::arg("u2"), py::arg("derivative") = "spectral");

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("scenario", &ScenarioConfig::scenario)
      .def_readwrite("solver", &ScenarioConfig::solver)
      .def_readwrite("n_x", &ScenarioConfig::n_x)
      .def_readwrite("n_v", &ScenarioConfig::n_v)
      .def_readwrite("rank", &ScenarioConfig::rank)
      .def_readwrite("v_max", &ScenarioConfig::v_max)
      .def_readwrite("epsilon", &ScenarioConfig::epsilon)
      .def_readwrite("reynolds", &ScenarioConfig::reynolds)
      .def_readwrite("v0", &ScenarioConfig::v0)
      .def_readwrite("shear_width", &ScenarioConfig::shear_width)
      .def_readwrite("amplitude", &ScenarioConfig::amplitude)
      .def_readwrite("kx", &ScenarioConfig::kx)
      .def_readwrite("ky", &ScenarioConfig::ky)
      .def_readwrite("tau", &ScenarioConfig::tau)
      .def_readwrite("order", &ScenarioConfig::order)
      .def_readwrite("backend", &ScenarioConfig::backend)
      .def_readwrite("cfl", &ScenarioConfig::cfl)
      .def_readwrite("t_end", &ScenarioConfig::t_end)
      .def_readwrite("snapshot_times", &ScenarioConfig::snapshot_times)
      .def_readwrite("snapshot_fields", &ScenarioConfig::snapshot_fields)
      .def_readwrite("out_dir", &ScenarioConfig::out_dir)
      .def_readwrite("seed", &ScenarioConfig::seed)
      .def("resolved_epsilon", &ScenarioConfig::resolved_epsilon)
      .def("splitting", &ScenarioConfig::splitting)
      .def("set", &apply_config_value, py::arg("key"), py::arg("value"), "Set a key with the config file syntax.");

  m.def(
      "parse_config",
      [](const std::string& text) {
        std::istringstream in(text);
        return parse_config(in);
      },
      py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));
  m.def("validate", &validate, py::arg("config"));
  m.def(
      "initial_condition",
      [](const ScenarioConfig& c) {
        const FluidInit in = initial_condition(SpatialGrid(c.n_x), c);
        return py::make_tuple(in.rho, in.u1, in.u2);
      },
      py::arg("config"), "Initial (rho, u1, u2) of a scenario.");
  m.def(
      "run",
      [](const ScenarioConfig& c, bool write_files) {
        validate(c);
        SimulationResult r;
        {
          py::gil_scoped_release release;
          r = run(c, write_files);
        }
        py::dict d;
        d["lowrank"] = to_list(r.lowrank, diag_dict);
        d["maccormack"] = to_list(r.maccormack, diag_dict);
        d["reports"] = to_list(r.reports, report_dict);
        d["lowrank_snapshots"] = to_list(r.lowrank_snapshots, fields_dict);
        d["maccormack_snapshots"] = to_list(r.maccormack_snapshots, fields_dict);
        d["comparison"] = to_list(r.comparison, [](const ComparisonRow& row) {
          py::dict e;
          e["time"] = row.time;
          e["err_rho"] = row.err_rho;
          e["err_u"] = row.err_u;
          e["err_u1"] = row.err_u1;
          e["err_u2"] = row.err_u2;
          e["err_vorticity"] = row.err_vorticity;
          return e;
        });
        d["lowrank_steps"] = r.lowrank_steps;
        d["maccormack_steps"] = r.maccormack_steps;
        return d;
      },
      py::arg("config"), py::arg("write_files") = false,
      "Run a scenario. Fields are flat arrays indexed i1 + n_x * i2.");
}
