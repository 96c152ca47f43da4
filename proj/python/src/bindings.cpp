#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "coopmac/app/commands.hpp"
#include "coopmac/app/scenario.hpp"
#include "coopmac/region.hpp"
#include "coopmac/solver.hpp"
#include "coopmac/verify.hpp"

namespace py = pybind11;
using namespace coopmac;

namespace {

// Policies cross the boundary as lists of six-element rows in component
// order p10, p12, pU1, p20, p21, pU2.
std::vector<std::array<double, kNumComponents>> policy_rows(const PowerPolicy& p) {
  std::vector<std::array<double, kNumComponents>> rows;
  rows.reserve(p.size());
  for (const auto& v : p.vectors) rows.push_back(v.p);
  return rows;
}

PowerPolicy policy_from_rows(const std::vector<std::array<double, kNumComponents>>& rows) {
  PowerPolicy p;
  for (const auto& r : rows) p.vectors.push_back(PowerVector{r});
  return p;
}

}  // namespace

PYBIND11_MODULE(_coopmac, m) {
  m.doc() = "Power allocation for the two-user fading cooperative MAC";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<app::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<app::ValidationError>(m, "ValidationError", PyExc_ValueError);

  py::class_<EffectiveGains>(m, "EffectiveGains")
      .def_readonly("s10", &EffectiveGains::s10)
      .def_readonly("s20", &EffectiveGains::s20)
      .def_readonly("s12", &EffectiveGains::s12)
      .def_readonly("s21", &EffectiveGains::s21);

  py::class_<Ensemble>(m, "Ensemble")
      .def("__len__", &Ensemble::size)
      .def_property_readonly("probs", [](const Ensemble& e) { return e.probs(); })
      .def_property_readonly("gains", [](const Ensemble& e) { return e.gains(); });

  m.def(
      "uniform_grid",
      [](std::vector<double> direct, std::vector<double> inter, bool tie) {
        return build_uniform_grid(direct, inter, {}, {}, tie);
      },
      py::arg("direct"), py::arg("inter"), py::arg("tie_inter_links") = false);
  m.def(
      "rayleigh",
      [](double mean_direct, double mean_inter, std::size_t n, std::uint64_t seed) {
        return build_rayleigh_mc(mean_direct, mean_inter, n, seed, {}, {});
      },
      py::arg("mean_direct"), py::arg("mean_inter"), py::arg("n_samples"),
      py::arg("seed"));

  py::class_<RateBounds>(m, "RateBounds")
      .def_readonly("r1_bound", &RateBounds::r1_bound)
      .def_readonly("r2_bound", &RateBounds::r2_bound)
      .def_readonly("sum_bound", &RateBounds::sum_bound)
      .def_readonly("mean_log_a", &RateBounds::mean_log_a)
      .def_readonly("mean_log_bc", &RateBounds::mean_log_bc);

  m.def("rate_bounds", [](const Ensemble& e, const std::vector<std::array<double, 6>>& rows) {
    return rate_bounds(e, policy_from_rows(rows));
  });

  m.def(
      "optimize",
      [](const Ensemble& e, std::pair<double, double> mu, double a, double b,
         std::size_t max_iters) {
        SolverConfig config;
        config.a = a;
        config.b = b;
        config.max_iters = max_iters;
        const auto r = optimize(e, {mu.first, mu.second}, config);
        py::dict out;
        out["best_value"] = r.best_value;
        out["iterations"] = r.iterations_run;
        out["policy"] = policy_rows(r.best_policy);
        std::vector<double> objective;
        for (const auto& t : r.trace) objective.push_back(t.objective);
        out["objective"] = objective;
        return out;
      },
      py::arg("ensemble"), py::arg("mu"), py::arg("a") = 50.0, py::arg("b") = 5.0,
      py::arg("max_iters") = 1000);

  m.def("project_user", [](std::vector<double> raw, std::vector<double> w, double budget) {
    return project_user(raw, w, budget);
  });

  m.def("convex_hull", [](const std::vector<std::pair<double, double>>& pts) {
    std::vector<HullVertex> v;
    for (const auto& [r1, r2] : pts) v.push_back({r1, r2});
    std::vector<std::pair<double, double>> out;
    for (const auto& h : convex_hull(v)) out.emplace_back(h.r1, h.r2);
    return out;
  });

  m.def("min_gap", [](const Ensemble& e, const std::vector<std::array<double, 6>>& rows) {
    return min_gap(e, policy_from_rows(rows));
  });

  m.def("load_scenario", [](const std::filesystem::path& path) {
    return app::load_scenario(path).build_ensemble();
  }, "Ensemble described by a scenario file");

  m.def(
      "solve",
      [](const std::filesystem::path& scenario, std::pair<double, double> mu,
         const std::filesystem::path& out_dir) {
        const auto sc = app::load_scenario(scenario);
        const auto s = app::run_solve(sc, SchemeMode::CoopPowerControl,
                                      {mu.first, mu.second}, out_dir);
        return app::summary_text(s, sc.log_base);
      },
      py::arg("scenario"), py::arg("mu"), py::arg("out_dir"),
      "Runs the solve command and returns the summary text");
}
