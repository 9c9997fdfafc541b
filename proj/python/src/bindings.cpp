#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "fermigas/determinantal_check.hpp"
#include "fermigas/energy_bounds.hpp"
#include "fermigas/errors.hpp"
#include "fermigas/fermi_box.hpp"
#include "fermigas/potential.hpp"
#include "fermigas/scattering.hpp"
#include "fermigas/twobody.hpp"

namespace py = pybind11;
using namespace fermigas;

namespace {

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

nlohmann::json from_python(const py::object& obj) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

BoundConstants constants_from(const py::object& obj) {
  if (obj.is_none()) return {};
  return BoundConstants::from_json(from_python(obj));
}

}  // namespace

PYBIND11_MODULE(_fermigas, m) {
  m.doc() = "Low-density Fermi gas numerics";

  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<ScheduleInfeasible>(m, "ScheduleInfeasible", PyExc_RuntimeError);

  py::class_<RadialPotential>(m, "RadialPotential")
      .def_static("zero", &RadialPotential::zero, py::arg("range") = 1.0)
      .def_static("hard_sphere", &RadialPotential::hard_sphere, py::arg("radius"))
      .def_static("square_barrier", &RadialPotential::square_barrier, py::arg("height"), py::arg("range"))
      .def_static("linear_ramp", &RadialPotential::linear_ramp, py::arg("height"), py::arg("range"),
                  py::arg("nodes") = 2)
      .def_static("double_step", &RadialPotential::double_step, py::arg("inner"), py::arg("outer"), py::arg("split"),
                  py::arg("range"))
      .def_static("hard_core_shoulder", &RadialPotential::hard_core_shoulder, py::arg("core"), py::arg("shoulder"),
                  py::arg("range"))
      .def_static(
          "from_dict", [](const py::object& doc) { return RadialPotential::from_json(from_python(doc)); },
          py::arg("doc"))
      .def("to_dict", [](const RadialPotential& v) { return to_python(v.to_json()); })
      .def("__call__", &RadialPotential::evaluate, py::arg("r"))
      .def("scaled", &RadialPotential::scaled, py::arg("factor"))
      .def("with_strength", &RadialPotential::with_strength, py::arg("factor"))
      .def_property_readonly("label", &RadialPotential::label)
      .def_property_readonly("range", &RadialPotential::range)
      .def_property_readonly("hard_core_radius", &RadialPotential::hard_core_radius)
      .def_property_readonly("max_value", &RadialPotential::max_value)
      .def("__repr__", [](const RadialPotential& v) {
        return "<RadialPotential '" + v.label() + "' range=" + std::to_string(v.range()) + ">";
      });

  py::class_<ScatteringSolution>(m, "ScatteringSolution")
      .def_readonly("a", &ScatteringSolution::a)
      .def_readonly("log_a", &ScatteringSolution::log_a)
      .def_readonly("residual", &ScatteringSolution::residual)
      .def("phi", &ScatteringSolution::phi, py::arg("r"))
      .def("dphi", &ScatteringSolution::dphi, py::arg("r"))
      .def("profile_csv", &ScatteringSolution::profile_csv, py::arg("R_ref") = 0.0);

  m.def("solve_zero_energy", &solve_zero_energy, py::arg("potential"), py::arg("dimension") = 3,
        py::arg("tolerance") = 1e-10, py::arg("R_hint") = 0.0);
  m.def("scattering_energy_integral", &scattering_energy_integral, py::arg("solution"), py::arg("R"));
  m.def("square_barrier_scattering_length", &square_barrier_scattering_length, py::arg("height"), py::arg("range"));

  m.def("dirichlet_k2_sum", &dirichlet_k2_sum, py::arg("n"), py::arg("dimension") = 3);
  m.def("dirichlet_energy_sum", &dirichlet_energy_sum, py::arg("n"), py::arg("ell") = 1.0, py::arg("dimension") = 3);
  m.def("kinetic_leading", &kinetic_leading, py::arg("n"), py::arg("ell") = 1.0, py::arg("dimension") = 3);
  m.def("density_square_integral", py::overload_cast<long, double, int>(&density_square_integral), py::arg("n"),
        py::arg("ell") = 1.0, py::arg("dimension") = 3);
  m.def(
      "fermi_leading_term",
      [](const std::vector<double>& densities, int dimension) { return fermi_leading_term(densities, dimension); },
      py::arg("densities"), py::arg("dimension") = 3);
  m.def(
      "two_particle_density",
      [](long n, double ell, const Point& x, const Point& y) {
        return two_particle_density(make_fermi_sea(n, ell, 3), x, y);
      },
      py::arg("n"), py::arg("ell"), py::arg("x"), py::arg("y"));

  m.def(
      "determinantal_check",
      [](std::uint64_t seed, double tolerance, int scale) {
        return to_python(to_json(determinantal_check(seed, tolerance, scale)));
      },
      py::arg("seed") = 42, py::arg("tolerance") = 1e-5, py::arg("scale") = 1);

  m.def("balanced_minimum", &balanced_minimum, py::arg("dimension"), py::arg("rho"), py::arg("a"));
  m.def(
      "upper_bound",
      [](int dimension, double gas_parameter, double fraction, double R0_over_a, const py::object& constants) {
        return to_python(to_json(upper_bound_schedule({dimension, gas_parameter, fraction, R0_over_a},
                                                      constants_from(constants))));
      },
      py::arg("dimension"), py::arg("gas_parameter"), py::arg("fraction") = 0.5, py::arg("R0_over_a") = 1.0,
      py::arg("constants") = py::none());
  m.def(
      "lower_bound",
      [](int dimension, double gas_parameter, double fraction, double R0_over_a, const py::object& constants) {
        return to_python(to_json(lower_bound_schedule({dimension, gas_parameter, fraction, R0_over_a},
                                                      constants_from(constants))));
      },
      py::arg("dimension"), py::arg("gas_parameter"), py::arg("fraction") = 0.5, py::arg("R0_over_a") = 1.0,
      py::arg("constants") = py::none());
  m.def(
      "sweep_bounds",
      [](int dimension, const std::vector<double>& gas, double fraction, double R0_over_a,
         const py::object& constants) {
        return to_python(to_json(sweep_bounds(dimension, gas, fraction, R0_over_a, constants_from(constants))));
      },
      py::arg("dimension"), py::arg("gas_parameters"), py::arg("fraction") = 0.5, py::arg("R0_over_a") = 1.0,
      py::arg("constants") = py::none());

  m.def(
      "two_body_ground_state",
      [](const RadialPotential& v, double ell, int cutoff, int dimension) {
        return to_python(to_json(ground_state_energy({v, ell, cutoff, dimension})));
      },
      py::arg("potential"), py::arg("ell") = 1.0, py::arg("cutoff") = 4, py::arg("dimension") = 3);
  m.def("free_two_body_energy", &free_two_body_energy, py::arg("ell") = 1.0, py::arg("dimension") = 3);
  m.def("pseudopotential_prediction", &pseudopotential_prediction, py::arg("a"), py::arg("ell") = 1.0,
        py::arg("dimension") = 3);
  m.def("tune_scattering_length", &tune_scattering_length, py::arg("shape"), py::arg("a"), py::arg("dimension") = 3);
}
