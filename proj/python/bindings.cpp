#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pfreal/eliminant.hpp"
#include "pfreal/io.hpp"
#include "pfreal/monodromy.hpp"
#include "pfreal/survey.hpp"

namespace py = pybind11;
using namespace pfreal;

namespace {

py::int_ to_pyint(const BigInt& v) { return py::int_(py::str(v.str())); }

py::dict solve_dict(const PowerSystem& ps, std::uint64_t seed) {
  SolveReport r;
  {
    py::gil_scoped_release release;
    r = solve_report(ps, seed);
  }
  py::list sols, real, trivial, residual;
  for (std::size_t i = 0; i < r.solutions.size(); ++i) {
    sols.append(r.solutions[i]);
    real.append(r.records[i].is_real);
    trivial.append(r.records[i].is_trivial);
    residual.append(r.records[i].residual);
  }
  py::dict d;
  d["n_complex"] = r.n_complex;
  d["n_real"] = r.n_real;
  d["n_trivial"] = r.n_trivial;
  d["diverged_paths"] = r.diverged;
  d["failed_paths"] = r.failed;
  d["solutions"] = sols;
  d["is_real"] = real;
  d["is_trivial"] = trivial;
  d["residual"] = residual;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Power flow solution counting: homotopy solve, eliminant, monodromy, survey";

  py::class_<PowerSystem>(m, "System")
      .def_property_readonly("n_buses", &PowerSystem::size)
      .def("to_json", &system_to_json)
      .def("__repr__", [](const PowerSystem& ps) {
        return "<pfreal.System " + std::to_string(ps.size()) + " buses, " + std::to_string(ps.lines.size()) + " lines>";
      });

  m.def("parse_system", &parse_system_json, py::arg("text"), "System from a JSON string");
  m.def("load_system", &load_system, py::arg("path"), "System from a JSON file");
  m.def(
      "four_bus",
      [](const Susceptances& b, const std::array<double, 3>& p) { return four_bus_network(b, p); },
      py::arg("b"), py::arg("p") = std::array<double, 3>{0.0, 0.0, 0.0},
      "Four-bus PV network from (b12, b13, b14, b23, b24, b34)");

  m.def("complex_bound", py::overload_cast<int>(&complex_bound), py::arg("n"));
  m.def("bezout_bound", py::overload_cast<int>(&bezout_bound), py::arg("n"));

  m.def("solve", &solve_dict, py::arg("system"), py::arg("seed") = 0,
        "All complex solutions; real trivial first, then real nonconstant, then nonreal");

  m.def(
      "eliminant",
      [](const PowerSystem& ps, std::uint64_t seed) {
        EliminantCount ec;
        {
          py::gil_scoped_release release;
          ec = count_real_via_eliminant(ps, solve_all(build_system(ps), HomotopyConfig::from_seed(seed)));
        }
        const auto asc = ec.poly.coeffs_double();
        py::dict d;
        d["coefficients"] = std::vector<double>(asc.rbegin(), asc.rend());
        d["text"] = ec.poly.format(4);
        d["descartes_max"] = ec.roots.descartes_max;
        d["sturm_positive"] = ec.roots.sturm_positive;
        d["real_via_eliminant"] = ec.via_eliminant;
        d["real_direct"] = ec.direct;
        return d;
      },
      py::arg("system"), py::arg("seed") = 0, "Eliminant in the squared last V_q, highest power first");

  m.def(
      "monodromy",
      [](const PowerSystem& ps, int budget, std::uint64_t seed, const std::string& slice) {
        MonodromyConfig cfg;
        cfg.budget = budget;
        cfg.seed = seed;
        cfg.slice = parse_slice(slice);
        MonodromyGroup g;
        {
          py::gil_scoped_release release;
          g = generate_group(ps, cfg);
        }
        py::dict d;
        d["order"] = to_pyint(g.order);
        d["fixed_points"] = g.fixed_points;
        d["blocks"] = g.blocks;
        d["loops_used"] = g.loops_used;
        d["loops_rejected"] = g.loops_rejected;
        return d;
      },
      py::arg("system"), py::arg("budget") = 25, py::arg("seed") = 0, py::arg("slice") = "zero-injection",
      "Monodromy group; points are 0-based positions in solve() order of the base solve");

  m.def(
      "survey",
      [](std::size_t n, double sigma, double mean, std::uint64_t seed, int workers) {
        SurveyConfig cfg;
        cfg.n_instances = n;
        cfg.sigma = sigma;
        cfg.mean = mean;
        cfg.seed = seed;
        cfg.workers = workers;
        SurveyResult r;
        {
          py::gil_scoped_release release;
          r = run_survey(cfg);
        }
        py::dict d;
        d["histogram"] = r.histogram;
        d["max_real"] = r.max_real;
        d["failures"] = r.failures;
        d["csv"] = survey_csv(r);
        return d;
      },
      py::arg("n"), py::arg("sigma") = 8.0, py::arg("mean") = 0.0, py::arg("seed") = 0, py::arg("workers") = 1);

  m.def(
      "group_order",
      [](const std::vector<std::vector<int>>& gens) {
        std::vector<Permutation> perms;
        for (const auto& g : gens) perms.emplace_back(g);
        if (!perms.empty())
          for (const auto& p : perms)
            if (p.size() != perms.front().size()) throw InvalidInput("generators act on different point sets");
        return to_pyint(group_order(perms));
      },
      py::arg("generators"), "Order of the group generated by 0-based image lists");
}
