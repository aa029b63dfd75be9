#include <optional>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mackboot/bootstrap.hpp"
#include "mackboot/dgp.hpp"
#include "mackboot/error.hpp"
#include "mackboot/experiment.hpp"
#include "mackboot/mack.hpp"
#include "mackboot/stats.hpp"
#include "mackboot/triangle.hpp"

namespace py = pybind11;
using namespace mackboot;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

std::vector<std::vector<double>> rectangle_rows(const ClaimsRectangle& r) {
  std::vector<std::vector<double>> rows(r.n_periods());
  for (std::size_t a = 0; a < r.n_periods(); ++a) {
    for (std::size_t d = 0; d < r.n_periods(); ++d) rows[a].push_back(r.at(a, d));
  }
  return rows;
}

CondFamily family_from(const std::string& name, double trunc_point, bool moment_match) {
  CondFamily f = parse_family(name);
  f.trunc_point = trunc_point;
  f.moment_match = moment_match;
  return f;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Chain-ladder reserving with Mack-type bootstraps";

  static py::exception<Error> error(m, "MackbootError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error)(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      exc.attr("exit_code") = exit_code(e.code());
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<DevTriangle>(m, "Triangle")
      .def(py::init<const std::vector<std::vector<double>>&>(), py::arg("rows"))
      .def_property_readonly("n_periods", &DevTriangle::n_periods)
      .def("rows", &DevTriangle::rows)
      .def("at", &DevTriangle::at, py::arg("row"), py::arg("dev"))
      .def("diagonal", [](const DevTriangle& t) { return diagonal(t).values; })
      .def("to_csv", &serialize_triangle)
      .def("__eq__", [](const DevTriangle& a, const DevTriangle& b) { return a == b; })
      .def("__repr__", [](const DevTriangle& t) {
        return "<Triangle " + std::to_string(t.n_periods()) + " periods>";
      });

  m.def("parse_triangle",
        [](const std::string& text, bool header) { return parse_triangle(text, {header}); },
        py::arg("text"), py::arg("header") = false);
  m.def("read_triangle",
        [](const std::string& path, bool header) { return read_triangle_file(path, {header}); },
        py::arg("path"), py::arg("header") = false);

  py::class_<MackFit>(m, "MackFit")
      .def_readonly("f_hat", &MackFit::f_hat)
      .def_readonly("sigma2_hat", &MackFit::sigma2_hat)
      .def_readonly("ultimates", &MackFit::ultimates)
      .def_readonly("reserves", &MackFit::reserves)
      .def_readonly("total_reserve", &MackFit::total_reserve);
  m.def("fit", &fit_mack, py::arg("triangle"));

  m.def("residual_pool",
        [](const DevTriangle& t) {
          const auto pool = build_residual_pool(t, fit_mack(t));
          return py::make_tuple(to_array(pool.raw), to_array(pool.standardized));
        },
        py::arg("triangle"), "Raw and standardized residuals");

  py::class_<BootstrapRun>(m, "BootstrapRun")
      .def_property_readonly("method", [](const BootstrapRun& r) { return method_name(r.method); })
      .def_property_readonly("roots", [](const BootstrapRun& r) { return to_array(r.roots); })
      .def_property_readonly("part1", [](const BootstrapRun& r) { return to_array(r.part1); })
      .def_property_readonly("part2", [](const BootstrapRun& r) { return to_array(r.part2); })
      .def_readonly("total_reserve", &BootstrapRun::center_total)
      .def_readonly("seed", &BootstrapRun::seed)
      .def_readonly("family_upper", &BootstrapRun::family_upper)
      .def_readonly("factors", &BootstrapRun::factors)
      .def("interval",
           [](const BootstrapRun& r, double alpha) {
             return prediction_interval(r, r.center_total, alpha);
           },
           py::arg("alpha") = 0.05);

  m.def(
      "bootstrap",
      [](const DevTriangle& t, const std::string& method, std::size_t B, std::uint64_t seed,
         const std::string& family, std::optional<std::string> family_upper,
         const std::string& backward_variance, double alpha, unsigned threads,
         bool keep_factors) {
        BootstrapOptions o;
        o.B = B;
        o.seed = seed;
        o.alpha = alpha;
        o.family_lower = parse_family(family);
        if (family_upper) o.family_upper = parse_family(*family_upper);
        o.backward_variance = parse_backward_variance(backward_variance);
        o.threads = threads;
        o.keep_factors = keep_factors;
        const Method mth = parse_method(method);
        const MackFit fit = fit_mack(t);
        py::gil_scoped_release release;
        return run_bootstrap(mth, t, fit, o);
      },
      py::arg("triangle"), py::arg("method") = "original", py::arg("B") = 1000,
      py::arg("seed") = 0, py::arg("family") = "gamma", py::arg("family_upper") = py::none(),
      py::arg("backward_variance") = "literal", py::arg("alpha") = 0.05,
      py::arg("threads") = 0, py::arg("keep_factors") = false);

  m.def(
      "simulate_triangle",
      [](std::size_t I_base, std::size_t n, const std::string& setup, const std::string& family,
         std::uint64_t seed) {
        DgpConfig cfg;
        cfg.I_base = I_base;
        cfg.n = n;
        cfg.setup = parse_setup(setup);
        cfg.family = parse_family(family);
        cfg.seed = seed;
        auto sim = generate_triangle(cfg);
        return py::make_tuple(sim.upper, rectangle_rows(sim.full));
      },
      py::arg("I_base") = 10, py::arg("n") = 0, py::arg("setup") = "a",
      py::arg("family") = "gamma", py::arg("seed") = 0,
      "Returns the observed triangle and the full rectangle of claims");

  m.def(
      "oracle_roots",
      [](const DevTriangle& t, std::size_t I_base, std::size_t n, const std::string& setup,
         const std::string& family, std::size_t B, std::uint64_t seed) {
        const auto params = param_sequences(I_base, n, parse_setup(setup));
        const auto run = oracle_predictive_roots(t, params, parse_family(family), B, seed);
        return py::make_tuple(to_array(run.roots), to_array(run.part1));
      },
      py::arg("triangle"), py::arg("I_base") = 10, py::arg("n") = 0, py::arg("setup") = "a",
      py::arg("family") = "gamma", py::arg("B") = 1000, py::arg("seed") = 0);

  m.def(
      "ks_two_sample",
      [](std::vector<double> x, std::vector<double> y) {
        const auto r = ks_two_sample(std::move(x), std::move(y));
        return py::make_tuple(r.statistic, r.p_value);
      },
      py::arg("x"), py::arg("y"), "Returns (statistic, asymptotic p-value)");
  m.def("kolmogorov_survival", &kolmogorov_survival, py::arg("lam"));
  m.def("process_variance_limit", &process_variance_limit, py::arg("diag_by_dev"),
        py::arg("f"), py::arg("sigma2"));
  m.def("estimation_variance_limit_tilde", &estimation_variance_limit_tilde,
        py::arg("diag_by_dev"), py::arg("f"), py::arg("sigma2"), py::arg("mu0"));

  m.def(
      "run_experiment",
      [](const std::string& setup, std::vector<std::string> true_families,
         std::vector<std::string> chosen_families, std::vector<std::size_t> n_values,
         std::vector<std::string> methods, std::size_t M, std::size_t B, std::uint64_t seed,
         double alpha, std::size_t I_base, double trunc_point, bool moment_match,
         unsigned threads) {
        ExperimentGrid g;
        g.setup = parse_setup(setup);
        g.true_families.clear();
        for (const auto& f : true_families) {
          g.true_families.push_back(family_from(f, trunc_point, moment_match));
        }
        g.chosen_families.clear();
        for (const auto& f : chosen_families) {
          g.chosen_families.push_back(family_from(f, trunc_point, moment_match));
        }
        g.n_values = std::move(n_values);
        g.methods.clear();
        for (const auto& name : methods) g.methods.push_back(parse_method(name));
        g.M = M;
        g.B = B;
        g.seed = seed;
        g.ks_level = alpha;
        g.I_base = I_base;
        g.threads = threads;
        std::string csv;
        {
          py::gil_scoped_release release;
          csv = summary_csv(run_experiment(g).cells);
        }
        return csv;
      },
      py::arg("setup") = "a", py::arg("true_families") = std::vector<std::string>{"gamma"},
      py::arg("chosen_families") = std::vector<std::string>{"gamma"},
      py::arg("n_values") = std::vector<std::size_t>{0},
      py::arg("methods") = std::vector<std::string>{"original", "alternative", "intermediate"},
      py::arg("M") = 10, py::arg("B") = 500, py::arg("seed") = 0, py::arg("alpha") = 0.05,
      py::arg("I_base") = 10, py::arg("trunc_point") = 0.1, py::arg("moment_match") = false,
      py::arg("threads") = 0, "Runs a simulation grid and returns the summary CSV text");
}
