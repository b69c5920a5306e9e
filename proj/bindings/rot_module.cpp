#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "rot/bench.hpp"
#include "rot/pipeline.hpp"
#include "rot/table_io.hpp"

namespace py = pybind11;

namespace {

rot::PriorWeights make_weights(std::size_t p,
                               const std::optional<std::vector<double>>& pi,
                               const std::optional<std::vector<double>>& eta) {
    rot::PriorWeights w = rot::PriorWeights::neutral(p);
    if (pi) w.pi = *pi;
    if (eta) w.eta = *eta;
    return w;
}

rot::TransformOptions make_opts(bool lenient) {
    rot::TransformOptions opts;
    opts.lenient = lenient;
    return opts;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Renyi outlier test: transform p-values to unit exponentials and "
              "test the global null with a K-robust omnibus statistic";

    m.def("log_gamma_upper_reg",
          [](double shape, double x) { return rot::log_gamma_upper_reg(shape, x).value(); },
          py::arg("shape"), py::arg("x"),
          "log of the upper regularized incomplete gamma Q(shape, x)");
    m.def("log_beta_upper_reg",
          [](double a, double b, double x) {
              return rot::log_beta_upper_reg(a, b, x).value();
          },
          py::arg("a"), py::arg("b"), py::arg("x"),
          "log of the Beta survival 1 - I_{a,b}(x)");
    m.def("log1m_exp", [](double v) { return rot::log1m_exp(v); }, py::arg("logv"),
          "log(1 - exp(logv))");

    py::class_<rot::TransformResult>(m, "TransformResult")
        .def_readonly("x", &rot::TransformResult::x)
        .def_readonly("total", &rot::TransformResult::total)
        .def_readonly("order", &rot::TransformResult::order)
        .def_readonly("clamped", &rot::TransformResult::clamped);

    py::class_<rot::LadderSpec>(m, "LadderSpec")
        .def_readonly("K", &rot::LadderSpec::K)
        .def_readonly("kstar", &rot::LadderSpec::kstar)
        .def_readonly("ladder", &rot::LadderSpec::ladder)
        .def_readonly("clamped_to_p", &rot::LadderSpec::clamped_to_p);

    py::class_<rot::RotResult>(m, "RotResult")
        .def_readonly("rho", &rot::RotResult::rho)
        .def_readonly("components", &rot::RotResult::components)
        .def_readonly("argmax_i", &rot::RotResult::argmax_i);

    py::class_<rot::TestReport>(m, "TestReport")
        .def_readonly("p", &rot::TestReport::p)
        .def_readonly("K", &rot::TestReport::K)
        .def_readonly("kstar", &rot::TestReport::kstar)
        .def_readonly("rho", &rot::TestReport::rho)
        .def_readonly("components", &rot::TestReport::components)
        .def_readonly("argmax_i", &rot::TestReport::argmax_i)
        .def_readonly("log10_pvalue", &rot::TestReport::log10_pvalue)
        .def_readonly("pvalue", &rot::TestReport::pvalue)
        .def_readonly("extrapolated", &rot::TestReport::extrapolated)
        .def_readonly("warnings", &rot::TestReport::warnings)
        .def("to_json", &rot::report_to_json)
        .def("__repr__", [](const rot::TestReport& r) {
            return "<TestReport rho=" + std::to_string(r.rho) +
                   " log10_pvalue=" + std::to_string(r.log10_pvalue) + ">";
        });

    py::class_<rot::TableSet>(m, "TableSet")
        .def_static("load", [](const std::string& path) {
            return rot::load_table_set(path);
        }, py::arg("path"))
        .def_static("default_set", [] { return rot::default_table_set(); })
        .def("save", [](const rot::TableSet& ts, const std::string& path) {
            rot::save_table_set(ts, path);
        }, py::arg("path"))
        .def("kstars", [](const rot::TableSet& ts) {
            std::vector<int> ks;
            for (const auto& [k, t] : ts.tables) ks.push_back(k);
            return ks;
        })
        .def("lookup", [](const rot::TableSet& ts, double rho, int kstar) {
            const auto [lp, extr] = rot::lookup_log_pvalue(rho, ts.at(kstar));
            return std::make_pair(lp.value(), extr);
        }, py::arg("rho"), py::arg("kstar"),
           "log p-value and extrapolation flag for an observed statistic");

    m.def("classical_renyi", &rot::classical_renyi, py::arg("sorted_u"),
          "classical Renyi map on ascending uniforms (reference path)");

    m.def("renyi_transform",
          [](const std::vector<double>& logp,
             const std::optional<std::vector<double>>& pi,
             const std::optional<std::vector<double>>& eta, bool lenient) {
              rot::LogPValueVector input;
              input.logp = logp;
              return rot::renyi_transform(input, make_weights(logp.size(), pi, eta),
                                          make_opts(lenient));
          },
          py::arg("logp"), py::arg("pi") = std::nullopt, py::arg("eta") = std::nullopt,
          py::arg("lenient") = false);

    m.def("choose_kstar",
          [](int K, std::size_t p) { return rot::choose_kstar(K, p); },
          py::arg("K"), py::arg("p"));

    m.def("collapse_tail",
          [](const rot::TransformResult& tr, const rot::LadderSpec& spec) {
              const auto tail = rot::collapse_tail(tr, spec);
              return std::make_pair(tail.xt, tail.capped);
          },
          py::arg("transform"), py::arg("spec"));

    m.def("rot_statistic",
          [](const std::vector<double>& xt, const rot::LadderSpec& spec) {
              return rot::rot_statistic(xt, spec);
          },
          py::arg("xt"), py::arg("spec"));

    m.def("fixed_k_test",
          [](const rot::TransformResult& tr, int k) {
              return rot::fixed_k_test(tr, k).value();
          },
          py::arg("transform"), py::arg("k"),
          "log p-value of the fixed-k sum test");

    m.def("rot_test",
          [](const std::vector<double>& logp, int K,
             const std::optional<std::vector<double>>& pi,
             const std::optional<std::vector<double>>& eta,
             const std::optional<std::string>& tables, bool lenient) {
              rot::LogPValueVector input;
              input.logp = logp;
              rot::TableSet storage;
              const rot::TableSet* ts = &rot::default_table_set();
              if (tables) {
                  storage = rot::load_table_set(*tables);
                  ts = &storage;
              }
              return rot::run_rot_test(input, make_weights(logp.size(), pi, eta), K,
                                       *ts, make_opts(lenient));
          },
          py::arg("logp"), py::arg("K"), py::arg("pi") = std::nullopt,
          py::arg("eta") = std::nullopt, py::arg("tables") = std::nullopt,
          py::arg("lenient") = false,
          "full pipeline: transform, collapse, omnibus statistic, p-value lookup");

    m.def("simulate_null",
          [](int kstar, std::uint64_t n, std::uint64_t seed, int threads) {
              return rot::simulate_null(kstar, n, seed, threads);
          },
          py::arg("kstar"), py::arg("n"), py::arg("seed"), py::arg("threads") = 1);

    m.def("calibrate_tables",
          [](const std::vector<int>& kstars, std::uint64_t n, std::uint64_t seed,
             int threads) { return rot::calibrate_tables(kstars, n, seed, threads); },
          py::arg("kstars"), py::arg("n"), py::arg("seed"), py::arg("threads") = 1);

#ifdef VERSION_INFO
#define ROT_STR2(x) #x
#define ROT_STR(x) ROT_STR2(x)
    m.attr("__version__") = ROT_STR(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
