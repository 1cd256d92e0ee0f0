#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "decolight/commands.hpp"
#include "decolight/config.hpp"
#include "decolight/error.hpp"
#include "decolight/fock_oracle.hpp"
#include "decolight/observables.hpp"

namespace py = pybind11;
using namespace decolight;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Light-induced decoherence of a condensate in a far-detuned laser";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_ArithmeticError);

  py::class_<PhysicalScales>(m, "PhysicalScales")
      .def(py::init<double, double, double>(), py::arg("k0") = 1.0, py::arg("gamma0") = 1.0, py::arg("omega0") = 0.0)
      .def_property_readonly("k0", &PhysicalScales::k0)
      .def_property_readonly("gamma0", &PhysicalScales::gamma0)
      .def_property_readonly("omega0", &PhysicalScales::omega0)
      .def_property_readonly("lambda0", &PhysicalScales::lambda0);

  py::class_<DipoleOrientation>(m, "DipoleOrientation")
      .def(py::init<Vec3>(), py::arg("direction"))
      .def_static("transverse", &DipoleOrientation::transverse)
      .def_property_readonly("direction", &DipoleOrientation::direction);

  m.def("sph_bessel_j0", &sph_bessel_j0, py::arg("u"));
  m.def("sph_bessel_j1", &sph_bessel_j1, py::arg("u"));
  m.def("dipole_kernel", &dipole_kernel, py::arg("separation"), py::arg("dipole"), py::arg("scales"),
        "J(r, theta) for a separation vector");

  py::class_<LaserField>(m, "LaserField")
      .def_static("running_wave", &LaserField::running_wave, py::arg("rabi0"), py::arg("detuning"),
                  py::arg("wavenumber"), py::arg("amplitude") = Complex(1.0, 0.0))
      .def_static("standing_wave", &LaserField::standing_wave, py::arg("rabi0"), py::arg("detuning"),
                  py::arg("wavenumber"))
      .def_property_readonly("rabi0", &LaserField::rabi0)
      .def_property_readonly("detuning", &LaserField::detuning)
      .def("has_homogeneous_phase", &LaserField::has_homogeneous_phase)
      .def("rabi_at", [](const LaserField& f, const Vec3& x) { return rabi_at(f, x); }, py::arg("x"));
  m.def("decoherence_rate", &decoherence_rate, py::arg("field"), py::arg("scales"));

  py::class_<CondensateMode>(m, "CondensateMode")
      .def(py::init<double, Complex, Vec3>(), py::arg("width"), py::arg("alpha"),
           py::arg("center") = Vec3::Zero())
      .def_readonly("width", &CondensateMode::width)
      .def_readonly("alpha", &CondensateMode::alpha)
      .def_readonly("center", &CondensateMode::center)
      .def_property_readonly("atom_number", &CondensateMode::atom_number);
  m.def("n_lambda", &n_lambda, py::arg("mode"), py::arg("scales"));

  py::enum_<QuadratureMethod>(m, "QuadratureMethod")
      .value("GaussHermite", QuadratureMethod::GaussHermite)
      .value("Adaptive", QuadratureMethod::Adaptive);
  py::class_<QuadratureSpec>(m, "QuadratureSpec")
      .def(py::init<>())
      .def_readwrite("method", &QuadratureSpec::method)
      .def_readwrite("order", &QuadratureSpec::order)
      .def_readwrite("tolerance", &QuadratureSpec::tolerance)
      .def_readwrite("panel_nodes", &QuadratureSpec::panel_nodes)
      .def_readwrite("reduce_axisymmetric", &QuadratureSpec::reduce_axisymmetric);
  m.def("gauss_hermite_rule", [](int n) {
    const GaussRule r = gauss_hermite_rule(n);
    return py::make_tuple(r.nodes, r.weights);
  }, py::arg("n"), "nodes and weights for the weight exp(-x^2)");

  py::class_<Scenario>(m, "Scenario")
      .def(py::init([](const PhysicalScales& s, const LaserField& f, const CondensateMode& c,
                       const DipoleOrientation& d, const QuadratureSpec& q) { return Scenario{s, f, c, d, q}; }),
           py::arg("scales"), py::arg("field"), py::arg("mode"),
           py::arg("dipole") = DipoleOrientation::transverse(), py::arg("quadrature") = QuadratureSpec{})
      .def_readonly("scales", &Scenario::scales)
      .def_readonly("field", &Scenario::field)
      .def_readonly("mode", &Scenario::mode)
      .def_readonly("dipole", &Scenario::dipole);

  py::class_<OverlapResult>(m, "OverlapResult")
      .def_readonly("value", &OverlapResult::value)
      .def_readonly("deficit", &OverlapResult::deficit)
      .def_readonly("error_estimate", &OverlapResult::error_estimate)
      .def_readonly("reduced", &OverlapResult::reduced);
  py::class_<DecoherenceResult>(m, "DecoherenceResult")
      .def_readonly("position", &DecoherenceResult::position)
      .def_readonly("time", &DecoherenceResult::time)
      .def_readonly("single_particle_factor", &DecoherenceResult::single_particle_factor)
      .def_readonly("overlap", &DecoherenceResult::overlap)
      .def_readonly("overlap_deficit", &DecoherenceResult::overlap_deficit)
      .def_readonly("amplitude", &DecoherenceResult::amplitude)
      .def_readonly("quadrature_error", &DecoherenceResult::quadrature_error);
  py::class_<ABProfilePoint>(m, "ABProfilePoint")
      .def_readonly("z", &ABProfilePoint::z)
      .def_readonly("A", &ABProfilePoint::A)
      .def_readonly("B", &ABProfilePoint::B);

  m.def("single_particle_factor",
        py::overload_cast<const LaserField&, const Vec3&, double, const PhysicalScales&>(&single_particle_factor),
        py::arg("field"), py::arg("x"), py::arg("t"), py::arg("scales"));
  m.def("overlap", &overlap, py::arg("x"), py::arg("t"), py::arg("scenario"));
  m.def("condensate_amplitude", &condensate_amplitude, py::arg("x"), py::arg("t"), py::arg("scenario"));
  m.def("decay_time_series", &decay_time_series, py::arg("x"), py::arg("times"), py::arg("scenario"));
  m.def("ab_profile",
        [](double z, const Scenario& s, bool allow) { return ab_profile(z, s, allow); }, py::arg("z"),
        py::arg("scenario"), py::arg("allow_homogeneous_phase") = false);

  py::class_<OracleSettings>(m, "OracleSettings")
      .def(py::init<>())
      .def_readwrite("sites", &OracleSettings::sites)
      .def_readwrite("spacing", &OracleSettings::spacing)
      .def_readwrite("n_max", &OracleSettings::n_max)
      .def_readwrite("atom_number", &OracleSettings::atom_number)
      .def_readwrite("rabi_over_detuning", &OracleSettings::rabi_over_detuning)
      .def_readwrite("times", &OracleSettings::times)
      .def_readwrite("flip_theta_sign", &OracleSettings::flip_theta_sign);
  py::class_<OracleCheck>(m, "OracleCheck")
      .def_readonly("name", &OracleCheck::name)
      .def_readonly("deviation", &OracleCheck::deviation)
      .def_readonly("threshold", &OracleCheck::threshold)
      .def_readonly("passed", &OracleCheck::passed);
  m.def("run_oracle_suite", &run_oracle_suite, py::arg("settings"), py::arg("geometry"), py::arg("dipole"),
        py::arg("scales"));

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def("__eq__", [](const RunConfig& a, const RunConfig& b) { return a == b; });
  m.def("parse_config", [](const std::string& text) { return parse_config_string(text); }, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));
  m.def("emit_config", &emit_config, py::arg("config"));
  m.def("apply_override", [](RunConfig c, const std::string& a) {
    apply_override(c, a);
    return c;
  }, py::arg("config"), py::arg("assignment"), "returns a copy with section.key=value applied");
  m.def("run_command", [](const std::string& command, const RunConfig& c) {
    std::ostringstream out, log;
    int code;
    {
      py::gil_scoped_release release;
      code = run_command(command, c, out, log);
    }
    return py::make_tuple(code, out.str(), log.str());
  }, py::arg("command"), py::arg("config"), "(exit code, output, diagnostics)");
}
