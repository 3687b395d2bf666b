#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ufn/correlation.hpp"
#include "ufn/experiments.hpp"
#include "ufn/field.hpp"
#include "ufn/finite_function.hpp"
#include "ufn/gowers.hpp"
#include "ufn/report.hpp"
#include "ufn/symmetric.hpp"

namespace py = pybind11;

namespace {

py::dict estimate_to_dict(const ufn::GowersEstimate& est) {
    py::dict d;
    d["order"] = est.order;
    d["value"] = est.value;
    d["raw_power"] = est.raw_power;
    d["std_error"] = est.std_error;
    d["samples"] = est.samples;
    d["exact"] = est.exact;
    d["raw_numer"] = ufn::format_u128(est.raw_numer);
    d["raw_denom_log2"] = est.raw_denom_log2;
    return d;
}

}  // namespace

PYBIND11_MODULE(ufn, m) {
    m.doc() =
        "Uniformity norms, low-degree correlation searches, and quadratic "
        "spectrum checks for functions on F_p^N";

    m.def(
        "gowers_norm_exact",
        [](const std::string& function, uint32_t p, uint32_t N, uint32_t k,
           uint32_t threads) {
            ufn::FiniteFunction f = ufn::materialize(function, p, N);
            return estimate_to_dict(ufn::gowers_norm_exact(f, k, threads));
        },
        py::arg("function"), py::arg("p"), py::arg("N"), py::arg("k"),
        py::arg("threads") = 0,
        "Exact uniformity norm of the described function; raw_numer / "
        "2**raw_denom_log2 is the exact raw power at p = 2.");

    m.def(
        "gowers_norm_mc",
        [](const std::string& function, uint32_t p, uint32_t N, uint32_t k,
           uint64_t samples, uint64_t seed, uint32_t threads) {
            ufn::FiniteFunction f = ufn::materialize(function, p, N);
            return estimate_to_dict(
                ufn::gowers_norm_mc(f, k, samples, seed, threads));
        },
        py::arg("function"), py::arg("p"), py::arg("N"), py::arg("k"),
        py::arg("samples"), py::arg("seed") = 42, py::arg("threads") = 0,
        "Sampled uniformity norm; deterministic in (seed, samples).");

    m.def(
        "max_correlation",
        [](const std::string& function, uint32_t p, uint32_t N, uint32_t d,
           uint32_t threads) {
            ufn::FiniteFunction f = ufn::materialize(function, p, N);
            ufn::CorrelationResult res =
                ufn::max_correlation_exhaustive(f, d, threads);
            py::dict out;
            out["max_abs"] = res.max_abs;
            out["numer"] = res.numer;
            out["denom_log2"] = res.denom_log2;
            out["dimension"] = res.dimension;
            out["candidates"] = res.candidates;
            if (res.witness) out["witness"] = res.witness->to_json();
            return out;
        },
        py::arg("function"), py::arg("p"), py::arg("N"), py::arg("d"),
        py::arg("threads") = 0,
        "Exact maximum correlation with degree-<= d polynomials (p = 2).");

    m.def(
        "run_experiment",
        [](const std::string& name,
           const std::map<std::string, std::string>& params,
           bool timestamp) {
            ufn::ExperimentReport rep = ufn::run_experiment(name, params);
            rep.include_timestamp = timestamp;
            py::dict out;
            out["json"] = rep.to_json();
            out["csv"] = rep.to_csv();
            out["pass"] = rep.pass();
            return out;
        },
        py::arg("name"), py::arg("params") = std::map<std::string, std::string>{},
        py::arg("timestamp") = false,
        "Run a named experiment; returns serialized report and pass flag.");

    m.def("lucas_binomial", &ufn::lucas_binomial, py::arg("n"), py::arg("k"),
          py::arg("p"), "C(n, k) mod p by digitwise reduction.");

    m.def(
        "symmetric_cube_value",
        [](uint32_t n, uint32_t p, uint64_t weight) {
            return ufn::cube_value_lucas(n, p, weight);
        },
        py::arg("n"), py::arg("p"), py::arg("weight"),
        "Value of the order-n elementary symmetric polynomial on a 0/1 "
        "vector of the given weight.");

    m.def(
        "eval_symmetric",
        [](uint32_t n, uint32_t p, const std::vector<uint8_t>& coords) {
            ufn::FieldVector x(p, uint32_t(coords.size()));
            for (uint32_t i = 0; i < coords.size(); ++i) {
                x.set(i, coords[i]);
            }
            return ufn::eval_symmetric(n, x);
        },
        py::arg("n"), py::arg("p"), py::arg("coords"),
        "Order-n elementary symmetric polynomial at the given point.");
}
