#include "fpres/errors.hpp"
#include "fpres/extension.hpp"
#include "fpres/generators.hpp"
#include "fpres/io.hpp"
#include "fpres/validator.hpp"
#include "fpres/version.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace fpres;

namespace {

// JSON crosses the boundary as text; the Python package parses it.
std::string text(const json& j) { return j.dump(); }

std::vector<std::string> rational_strings(const std::vector<Rational>& xs) {
    std::vector<std::string> out;
    for (const auto& x : xs) out.push_back(to_string(x));
    return out;
}

struct PyExtension {
    ExtendedTheory ext;
    Theory theory() const { return ext.as_theory(); }
};

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.attr("__version__") = kVersion;
    py::register_exception<Error>(m, "FpresError", PyExc_ValueError);

    py::class_<Theory>(m, "Theory")
        .def_property_readonly("size", [](const Theory& th) { return th.md->size(); })
        .def_property_readonly("labels", [](const Theory& th) { return th.md->labels(); })
        .def_property_readonly("h", [](const Theory& th) { return rational_strings(th.md->h()); })
        .def_property_readonly("c", [](const Theory& th) { return to_string(th.md->c()); })
        .def("S", [](const Theory& th) { return th.md->dense_S(); })
        .def("find", [](const Theory& th, const std::string& ref) { return field_from_ref(*th.md, ref); })
        .def("modular_data_json", [](const Theory& th) { return text(to_json(*th.md)); })
        .def("currents_json", [](const Theory& th) { return text(currents_to_json(th)); })
        .def("modular_deviation", [](const Theory& th) { return check_modular(*th.md).max(); })
        .def(
            "fusion_json",
            [](const Theory& th, double tol) { return text(check_fusion_integrality(*th.md, tol).to_json()); },
            py::arg("tol") = 1e-6)
        .def(
            "conditions_json",
            [](const Theory& th, double tol) { return text(check_conditions(th, tol).to_json()); },
            py::arg("tol") = 1e-8)
        .def("__mul__", [](const Theory& a, const Theory& b) { return tensor(a, b); });

    m.def(
        "load",
        [](const std::string& spec, const std::string& cache_dir) {
            GeneratorOptions opt;
            opt.cache_dir = cache_dir;
            return make_theory(load_model(spec, opt));
        },
        py::arg("spec"), py::arg("cache_dir") = "");

    py::class_<PyExtension>(m, "Extension")
        .def_property_readonly("theory", &PyExtension::theory)
        .def_property_readonly("report_json", [](const PyExtension& e) { return text(e.ext.report); })
        .def_property_readonly("residual_orders", [](const PyExtension& e) { return e.ext.residual.orders(); })
        .def("bundles_json", [](const PyExtension& e) {
            std::map<int, std::string> out;
            for (const auto& [cls, b] : e.ext.resolved) out[cls] = text(bundle_to_json(b, *e.ext.md));
            return out;
        });

    m.def(
        "extend",
        [](const Theory& th, const std::vector<std::string>& currents, unsigned seed, double tol) {
            std::vector<int> fields;
            for (const auto& c : currents) fields.push_back(field_from_ref(*th.md, c));
            Conventions conv;
            conv.seed = seed;
            conv.tolerance = tol;
            py::gil_scoped_release release;
            return PyExtension{extend(th, subgroup_of_currents(*th.center, fields), conv)};
        },
        py::arg("theory"), py::arg("currents"), py::arg("seed") = 0, py::arg("tol") = 1e-8);
}
