// bindings.cpp — Python module exposing closed forms, numeric sensing engines, and config-driven runs

#include "dtc/analytic.hpp"
#include "dtc/experiment.hpp"
#include "dtc/metrology.hpp"
#include "dtc/models.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace dtc;

namespace {

py::object cell_to_py(const Cell& c) {
    return std::visit([](const auto& v) -> py::object { return py::cast(v); }, c);
}

py::dict run_to_dict(const RunResult& r) {
    py::dict columns;
    for (std::size_t j = 0; j < r.table.columns.size(); ++j) {
        py::list col;
        for (const auto& row : r.table.rows) col.append(cell_to_py(row[j]));
        columns[py::str(r.table.columns[j])] = col;
    }
    py::dict out;
    out["name"] = r.name;
    out["experiment"] = to_string(r.experiment);
    out["columns"] = columns;
    out["diagnostics"] = r.diagnostics;
    out["wall_seconds"] = r.wall_seconds;
    return out;
}

}  // namespace

PYBIND11_MODULE(_dtc, m) {
    m.doc() = "Parametrically driven Tavis-Cummings model: criticality and dynamic sensing";
    m.attr("__version__") = library_version();

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<ModelParams>(m, "ModelParams")
        .def_static("from_g", py::overload_cast<double, double, double, int, double, double>(&ModelParams::from_g),
                    py::arg("g"), py::arg("Omega"), py::arg("G"), py::arg("n_qubits"), py::arg("K") = -1.0,
                    py::arg("omega") = 1.0)
        .def_property_readonly("omega", &ModelParams::omega)
        .def_property_readonly("Omega", &ModelParams::Omega)
        .def_property_readonly("lam", &ModelParams::lambda)
        .def_property_readonly("G", &ModelParams::G)
        .def_property_readonly("n_qubits", &ModelParams::n_qubits)
        .def_property_readonly("K", &ModelParams::K)
        .def_property_readonly("beta", &ModelParams::beta)
        .def_property_readonly("g", &ModelParams::g);

    py::enum_<EnergyBranch>(m, "EnergyBranch")
        .value("full", EnergyBranch::full)
        .value("approximate", EnergyBranch::approximate);

    py::class_<MetricComponents>(m, "MetricComponents")
        .def_readonly("g_ll", &MetricComponents::g_ll)
        .def_readonly("g_OO", &MetricComponents::g_OO)
        .def_readonly("g_lO", &MetricComponents::g_lO);

    m.def("alpha_prime", py::overload_cast<const ModelParams&>(&alpha_prime));
    m.def("ground_energy",
          [](const ModelParams& p, double g, EnergyBranch b) {
              const auto e = ground_energy_point(p, g, b);
              return py::make_tuple(e.E, e.d2E);
          },
          py::arg("params"), py::arg("g"), py::arg("branch") = EnergyBranch::full,
          "(E_G, d2E_G/dg2) at coupling g with the other parameters of params");
    m.def("ground_energy_d2_fd", &ground_energy_d2_fd, py::arg("params"), py::arg("g"),
          py::arg("branch") = EnergyBranch::full);
    m.def("metric_components", &metric_components);
    m.def("revival_time", &revival_time, py::arg("alpha_prime"), py::arg("G"), py::arg("n") = 1);
    m.def("inverted_variance_closed_form",
          py::overload_cast<double, double, cplx, int>(&inverted_variance_closed_form), py::arg("alpha_prime"),
          py::arg("G"), py::arg("xi"), py::arg("n") = 1);
    m.def("inverted_variance",
          [](double a, double G, cplx xi, double t) { return inverted_variance_numeric(a, G, xi, t); },
          py::arg("alpha_prime"), py::arg("G"), py::arg("xi"), py::arg("t"));
    m.def("qfi", [](double a, double G, cplx xi, double t) { return qfi_numeric(a, G, xi, t); },
          py::arg("alpha_prime"), py::arg("G"), py::arg("xi"), py::arg("t"));

    m.def("parse_config", [](const std::string& text) { return dump_config(parse_config(text)); },
          "Validate a config and return its canonical JSON text");
    m.def("config_schema", &config_schema);
    m.def(
        "run_config",
        [](const std::string& text, int threads) {
            const auto cfg = parse_config(text);
            py::list out;
            for (const auto& r : cfg.runs) {
                RunResult res;
                {
                    py::gil_scoped_release release;
                    res = execute_run(r, threads);
                }
                out.append(run_to_dict(res));
            }
            return out;
        },
        py::arg("config_json"), py::arg("threads") = 0,
        "Execute every run of a config; returns one dict of columns per run");
    m.def("verify", [](const std::string& suite) {
        const auto rep = verify_suite(suite);
        py::list checks;
        for (const auto& c : rep.checks) checks.append(py::make_tuple(c.name, c.measured, c.threshold, c.passed));
        return py::make_tuple(rep.passed(), checks);
    });
}
