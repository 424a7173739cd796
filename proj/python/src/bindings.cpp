#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "frailty/error.hpp"
#include "frailty/extensions.hpp"
#include "frailty/io.hpp"
#include "frailty/shapes.hpp"
#include "frailty/simulation.hpp"
#include "frailty/survivor.hpp"
#include "frailty/verify.hpp"

namespace py = pybind11;
using frailty::io::Json;

namespace {

// Models cross the boundary as JSON text; the Python layer serialises dicts.
Json parse(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        frailty::fail(frailty::ErrorKind::InvalidConfig, e.what());
    }
}

frailty::FrailtyFamily family(const std::string& doc) { return frailty::io::family_from_json(parse(doc)); }

py::dict triple(const frailty::LaplaceTriple& t) {
    py::dict d;
    d["l0"] = t.l0;
    d["l1"] = t.l1;
    d["l2"] = t.l2;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Relative frailty variance and cross-ratio shapes for discrete frailty models";

    static py::exception<frailty::Error> error(m, "FrailtyError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const frailty::Error& e) {
            PyErr_SetObject(error.ptr(),
                            py::make_tuple(std::string(frailty::to_string(e.kind())), std::string(e.what())).ptr());
        }
    });

    m.def("validate", [](const std::string& f) { frailty::validate(family(f)); });
    m.def("laplace", [](const std::string& f, double s) { return triple(frailty::laplace(family(f), s)); });
    m.def("moments", [](const std::string& f) {
        const auto mo = frailty::moments(family(f));
        return py::make_tuple(mo.mean, mo.variance);
    });
    m.def("rfv", [](const std::string& f, double x) { return frailty::rfv_at(family(f), x); });
    m.def("crf", [](const std::string& f, double x) { return frailty::crf_at(family(f), x); });
    m.def("rfv_closed", [](const std::string& f, double x) { return frailty::rfv_closed_at(family(f), x); });
    m.def("rfv_derivative", [](const std::string& f, double x) { return frailty::rfv_derivative(family(f), x); });
    m.def("stationary_points", [](const std::string& f, double lambda_max) {
        std::vector<std::pair<double, std::string>> out;
        for (const auto& p : frailty::stationary_points(family(f), lambda_max))
            out.emplace_back(p.lambda, std::string(frailty::to_string(p.kind)));
        return out;
    });
    m.def("classify_tail", [](const std::string& f) { return std::string(frailty::to_string(frailty::classify_tail(family(f)))); });
    m.def("curve", [](const std::string& f, const std::vector<double>& grid) {
        const auto c = frailty::curve(family(f), grid);
        return frailty::io::curve_sidecar(c).dump();
    });
    m.def("curve_values", [](const std::string& f, const std::vector<double>& grid) {
        const auto c = frailty::curve(family(f), grid);
        return py::make_tuple(c.rfv, c.crf);
    });
    m.def("survivor_pmf", [](const std::string& f, double x) {
        const auto pmf = frailty::oracle::survivor_pmf(family(f), x);
        return py::make_tuple(pmf.support, pmf.probs);
    });
    m.def("oracle_rfv", [](const std::string& f, double x) { return frailty::oracle::rfv(family(f), x); });

    m.def("simulate", [](const std::string& cfg_doc) {
        const auto cfg = frailty::io::sim_config_from_json(parse(cfg_doc));
        std::vector<frailty::ClusterSample> samples;
        {
            py::gil_scoped_release release;
            samples = frailty::simulate(cfg);
        }
        std::vector<double> z;
        std::vector<std::vector<double>> times;
        z.reserve(samples.size());
        times.reserve(samples.size());
        for (const auto& s : samples) {
            z.push_back(s.z);
            std::vector<double> row;
            for (const auto& t : s.times) row.push_back(t.is_cured() ? INFINITY : t.value());
            times.push_back(std::move(row));
        }
        return py::make_tuple(z, times, frailty::cure_fraction(samples));
    });

    m.def("correlated_crf", [](const std::string& model, const std::vector<double>& t) {
        return frailty::correlated_crf(frailty::io::correlated_from_json(parse(model)), t);
    });
    m.def("frailty_correlation", [](const std::string& model, std::size_t j, std::size_t jp) {
        return frailty::frailty_correlation(frailty::io::correlated_from_json(parse(model)), j, jp);
    });
    m.def("piecewise_rfv", [](const std::string& model, const std::vector<double>& t) {
        return frailty::piecewise_rfv(frailty::io::piecewise_from_json(parse(model)), t);
    });
    m.def("timevarying_rfv", [](const std::string& model, double x) {
        return frailty::timevarying_shift_rfv(frailty::io::timevarying_from_json(parse(model)), x);
    });

    m.def(
        "verify",
        [](const std::vector<std::string>& only, std::uint64_t seed, std::size_t mc_clusters, const std::string& fault) {
            frailty::verify::Options opt;
            opt.only = only;
            opt.seed = seed;
            opt.mc_clusters = mc_clusters;
            opt.fault = frailty::verify::fault_from_string(fault);
            std::vector<frailty::verify::CriterionResult> results;
            {
                py::gil_scoped_release release;
                results = frailty::verify::run(opt);
            }
            return frailty::verify::to_json(results).dump();
        },
        py::arg("only"), py::arg("seed"), py::arg("mc_clusters"), py::arg("fault"));
}
