#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "shadowkin/kinematics.hpp"
#include "shadowkin/retarded_oracle.hpp"
#include "shadowkin/scene.hpp"
#include "shadowkin/serialization.hpp"
#include "shadowkin/signaling.hpp"
#include "shadowkin/verification.hpp"

namespace py = pybind11;

namespace {

using shadowkin::Scene;
namespace io = shadowkin::io;
namespace kin = shadowkin::kinematics;
namespace oracle = shadowkin::oracle;
namespace signaling = shadowkin::signaling;
namespace verification = shadowkin::verification;

py::object json_to_py(const io::json& value) {
  switch (value.type()) {
    case nlohmann::detail::value_t::object: {
      py::dict d;
      for (const auto& [key, item] : value.items()) {
        d[py::str(key)] = json_to_py(item);
      }
      return d;
    }
    case nlohmann::detail::value_t::array: {
      py::list lst;
      for (const auto& item : value) lst.append(json_to_py(item));
      return lst;
    }
    case nlohmann::detail::value_t::string:
      return py::str(value.get<std::string>());
    case nlohmann::detail::value_t::boolean:
      return py::bool_(value.get<bool>());
    case nlohmann::detail::value_t::number_float:
      return py::float_(value.get<double>());
    case nlohmann::detail::value_t::number_integer:
      return py::int_(value.get<std::int64_t>());
    case nlohmann::detail::value_t::number_unsigned:
      return py::int_(value.get<std::uint64_t>());
    default:
      return py::none();
  }
}

oracle::EmissionConvention convention_from(const std::string& name) {
  if (name == "projector-on") {
    return oracle::EmissionConvention::kProjectorOnAtZero;
  }
  if (name == "steady-beam") return oracle::EmissionConvention::kSteadyBeam;
  throw shadowkin::ValidationError(
      "convention", "convention must be \"projector-on\" or \"steady-beam\"");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "shadow kinematics: closed forms, a retarded-time transport "
            "simulator, and signaling feasibility analysis";

  py::register_exception<shadowkin::ValidationError>(m, "ValidationError",
                                                     PyExc_ValueError);
  py::register_exception<oracle::GridBudgetError>(m, "GridBudgetError",
                                                  PyExc_RuntimeError);
  py::register_exception<oracle::WorldlineGapError>(m, "WorldlineGapError",
                                                    PyExc_RuntimeError);

  py::class_<Scene>(m, "Scene")
      .def(py::init([](double L, double l, double s, double v, double c) {
             return shadowkin::validate_scene({L, l, s, v, c});
           }),
           py::arg("L"), py::arg("l"), py::arg("s"), py::arg("v"),
           py::arg("c") = shadowkin::kSpeedOfLight)
      .def_readonly("L", &Scene::L)
      .def_readonly("l", &Scene::l)
      .def_readonly("s", &Scene::s)
      .def_readonly("v", &Scene::v)
      .def_readonly("c", &Scene::c)
      .def("__repr__", [](const Scene& scene) {
        return "Scene(L=" + io::format_display(scene.L) +
               ", l=" + io::format_display(scene.l) +
               ", s=" + io::format_display(scene.s) +
               ", v=" + io::format_display(scene.v) +
               ", c=" + io::format_display(scene.c) + ")";
      });

  m.def(
      "report",
      [](const Scene& scene, double dominance_ratio) {
        return json_to_py(io::to_json(kin::report(scene, dominance_ratio)));
      },
      py::arg("scene"),
      py::arg("dominance_ratio") = kin::kDefaultDominanceRatio,
      "Closed-form kinematics: t, t1, t2, T, S, v_avg, v_naive and the "
      "regime/threshold booleans.");

  m.def(
      "certificate",
      [](const Scene& scene) {
        return json_to_py(io::to_json(kin::subluminality_certificate(scene)));
      },
      py::arg("scene"),
      "Subluminality certificate: the unsquared inequality chain and the "
      "squaring-branch validity.");

  m.def(
      "signal",
      [](const Scene& scene) {
        return json_to_py(io::to_json(signaling::analyze(scene)));
      },
      py::arg("scene"), "Signaling feasibility report for one scene.");

  m.def("anti_bell_check", &signaling::anti_bell_check, py::arg("l"),
        py::arg("s"), py::arg("L"),
        "l^2((L-l)^2+s^2) < L^2 s^2, required whenever a feasible channel "
        "coexists with a superluminal-looking shadow.");

  m.def(
      "simulate",
      [](const Scene& scene, const std::string& convention,
         std::optional<double> dy, std::optional<double> dt,
         std::optional<double> eps) {
        const auto conv = convention_from(convention);
        oracle::GridSpec grid = oracle::default_grid(scene);
        if (dy) grid.dy = *dy;
        if (dt) grid.dt = *dt;
        if (eps) {
          grid.eps = *eps;
        } else {
          grid.eps = std::max(scene.v * grid.dt, grid.dy * scene.l / scene.L);
        }
        const auto trajectory = shadowkin::rise_and_stop_trajectory(scene);
        const auto timeline =
            oracle::simulate_transport(scene, trajectory, conv, grid);
        const auto events = oracle::measure_events(timeline);
        const auto worldline = oracle::extract_worldline(timeline);
        py::list points;
        for (const auto& p : worldline) {
          points.append(py::make_tuple(p.t, p.y));
        }
        py::dict out;
        out["convention"] = io::to_string(conv);
        out["onset_y0"] = events.onset_y0;
        out["stop_ys"] = events.stop_ys;
        out["n_y"] = timeline.y.size();
        out["n_t"] = timeline.t.size();
        out["worldline"] = points;
        return out;
      },
      py::arg("scene"), py::arg("convention") = "projector-on",
      py::arg("dy") = py::none(), py::arg("dt") = py::none(),
      py::arg("eps") = py::none(),
      "Retarded-time transport on a screen grid; returns measured event "
      "times and the traced shadow worldline.");

  m.def(
      "verify",
      [](std::uint64_t trials, std::uint64_t seed) {
        verification::Options options;
        options.trials = trials;
        options.seed = seed;
        const auto result = verification::run(options);
        py::dict out;
        out["ok"] = result.ok();
        out["trials_run"] = result.trials_run;
        out["boundary_flagged"] = result.boundary_flagged;
        if (result.failure) {
          py::dict failure;
          failure["check"] = result.failure->check;
          failure["scene"] = json_to_py(io::to_json(result.failure->scene));
          failure["detail"] = result.failure->detail;
          out["failure"] = failure;
        } else {
          out["failure"] = py::none();
        }
        return out;
      },
      py::arg("trials") = 1000, py::arg("seed") = 42,
      "Random-scene invariant battery; deterministic for a fixed seed.");

  m.attr("SPEED_OF_LIGHT") = shadowkin::kSpeedOfLight;
  m.attr("__version__") = "0.1.0";
}
