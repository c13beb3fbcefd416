#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nilcmc/cmc_family.hpp"
#include "nilcmc/revolution.hpp"
#include "nilcmc/s2xr.hpp"
#include "nilcmc/variational.hpp"
#include "nilcmc/weierstrass.hpp"

namespace py = pybind11;
using namespace nilcmc;

PYBIND11_MODULE(_core, m) {
    m.doc() = "cmc surfaces of revolution in Nil: closed forms, profile ODE, "
              "spinor energy, descent, and the S^2 x R companion family";

    py::enum_<EvalMode>(m, "EvalMode")
        .value("closed_form", EvalMode::closed_form)
        .value("quadrature", EvalMode::quadrature);

    py::class_<QuadratureResult>(m, "QuadratureResult")
        .def_readonly("value", &QuadratureResult::value)
        .def_readonly("err_estimate", &QuadratureResult::err_estimate)
        .def_readonly("evaluations", &QuadratureResult::evaluations)
        .def("__repr__", [](const QuadratureResult& r) {
            return "QuadratureResult(value=" + std::to_string(r.value) +
                   ", err_estimate=" + std::to_string(r.err_estimate) + ")";
        });

    m.def("n3_of_r", &n3_of_r, py::arg("r"));
    m.def("conformal_factor", &conformal_factor, py::arg("H"), py::arg("r"));
    m.def("area", &area, py::arg("H"), py::arg("mode") = EvalMode::closed_form);
    m.def("volume", &volume, py::arg("H"), py::arg("mode") = EvalMode::closed_form);
    m.def("spinor_energy", &spinor_energy, py::arg("H"));
    m.def("willmore", &willmore, py::arg("H"), py::arg("mode") = EvalMode::closed_form);
    m.def("isoperimetric_residual", &isoperimetric_residual, py::arg("H"));
    m.def("isoperimetric_residual_corrected", &isoperimetric_residual_corrected,
          py::arg("H"));
    m.def("spinor_energy_complex", &spinor_energy_complex, py::arg("H"),
          py::arg("panels"));

    py::enum_<Topology>(m, "Topology")
        .value("sphere", Topology::sphere)
        .value("torus", Topology::torus);

    py::class_<ProfileSample>(m, "ProfileSample")
        .def_readonly("s", &ProfileSample::s)
        .def_readonly("u", &ProfileSample::u)
        .def_readonly("v", &ProfileSample::v)
        .def_readonly("sigma", &ProfileSample::sigma);

    py::class_<ProfileCurve>(m, "ProfileCurve")
        .def_readonly("samples", &ProfileCurve::samples)
        .def_readonly("topology", &ProfileCurve::topology)
        .def("length", &ProfileCurve::length);

    py::class_<RevolutionReport>(m, "RevolutionReport")
        .def_readonly("E_direct", &RevolutionReport::E_direct)
        .def_readonly("E_reduced", &RevolutionReport::E_reduced)
        .def_readonly("E_imag", &RevolutionReport::E_imag)
        .def_readonly("W", &RevolutionReport::W)
        .def_readonly("area", &RevolutionReport::area)
        .def_readonly("volume", &RevolutionReport::volume)
        .def_readonly("chi", &RevolutionReport::chi);

    m.def("generate_cmc_profile", &generate_cmc_profile, py::arg("H"),
          py::arg("tol") = 1e-10, py::arg("n_samples") = 4001);
    m.def("profile_closed_form_distance", &profile_closed_form_distance,
          py::arg("curve"), py::arg("H"));
    m.def("revolution_report", &revolution_report, py::arg("curve"));
    m.def("energy_reduced", &energy_reduced, py::arg("curve"));
    m.def("reduced_integrand_sup", &reduced_integrand_sup, py::arg("curve"));
    m.def("read_profile_csv", &read_profile_csv_file, py::arg("path"));
    m.def("write_profile_csv",
          py::overload_cast<const std::string&, const ProfileCurve&>(&write_profile_csv),
          py::arg("path"), py::arg("curve"));

    m.def("perturb", &perturb, py::arg("curve"), py::arg("amplitude"), py::arg("mode"),
          py::arg("seed") = 0);

    py::class_<DescentOptions>(m, "DescentOptions")
        .def(py::init<>())
        .def_readwrite("max_iters", &DescentOptions::max_iters)
        .def_readwrite("tol_E", &DescentOptions::tol_E)
        .def_readwrite("tol_constraint", &DescentOptions::tol_constraint)
        .def_readwrite("penalty", &DescentOptions::penalty);

    py::class_<DescentTraceRow>(m, "DescentTraceRow")
        .def_readonly("iter", &DescentTraceRow::iter)
        .def_readonly("E", &DescentTraceRow::E)
        .def_readonly("violation", &DescentTraceRow::violation)
        .def_readonly("step", &DescentTraceRow::step);

    py::class_<DescentTrace>(m, "DescentTrace")
        .def_readonly("rows", &DescentTrace::rows)
        .def_readonly("converged", &DescentTrace::converged)
        .def_readonly("message", &DescentTrace::message);

    m.def("minimize_energy", &minimize_energy, py::arg("initial"),
          py::arg("options") = DescentOptions{});

    m.def(
        "el_residual_sup",
        [](double H, int grid, int order) {
            const auto g =
                make_cmc_sphere_grid(H, -1.6, 1.6, -1.6, 1.6, grid, grid, order);
            return el_residual(g).sup;
        },
        py::arg("H"), py::arg("grid"), py::arg("order") = 4);

    auto s2 = m.def_submodule("s2xr", "cmc spheres of revolution in S^2 x R");
    py::enum_<s2xr::EvalMode>(s2, "EvalMode")
        .value("closed_form", s2xr::EvalMode::closed_form)
        .value("quadrature", s2xr::EvalMode::quadrature);
    py::class_<s2xr::ClosedForms>(s2, "ClosedForms")
        .def_readonly("area", &s2xr::ClosedForms::area)
        .def_readonly("int_khat", &s2xr::ClosedForms::int_khat);
    s2.def("closed_forms", &s2xr::closed_forms, py::arg("h"));
    s2.def("willmore_type_value", &s2xr::willmore_type_value, py::arg("h"),
           py::arg("mode") = s2xr::EvalMode::closed_form);
}
