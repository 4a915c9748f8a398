#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "conedef/bounds.hpp"
#include "conedef/cli.hpp"
#include "conedef/sim.hpp"

namespace py = pybind11;
using namespace conedef;

namespace {

Vec2 to_vec(const std::pair<double, double>& xy) { return {xy.first, xy.second}; }
std::pair<double, double> from_vec(Vec2 v) { return {v.x, v.y}; }

}  // namespace

PYBIND11_MODULE(_conedef, m) {
  m.doc() = "Cone target-defense game: geometry, engagement sets, bounds and simulation";

  py::register_exception<ParameterViolation>(m, "ParameterViolation", PyExc_ValueError);
  py::register_exception<OutOfEnvironment>(m, "OutOfEnvironment", PyExc_ValueError);

  py::class_<GameParams>(m, "GameParams")
      .def_readonly("r_t", &GameParams::r_t)
      .def_readonly("rho_t", &GameParams::rho_t)
      .def_readonly("rho_a", &GameParams::rho_a)
      .def_readonly("nu", &GameParams::nu)
      .def_readonly("phi", &GameParams::phi)
      .def_readonly("alpha", &GameParams::alpha)
      .def_readonly("beta", &GameParams::beta)
      .def_readonly("gamma", &GameParams::gamma)
      .def_property_readonly("capture_cone_radius", &GameParams::capture_cone_radius);

  m.def("make_params", &make_params, py::arg("r_t"), py::arg("rho_t"), py::arg("rho_a"),
        py::arg("nu"), py::arg("phi"));
  m.def("default_params", &default_params);

  m.def(
      "apollonius_circle",
      [](std::pair<double, double> a, std::pair<double, double> d, const GameParams& p) {
        const ApolloniusCircle c = apollonius_circle(to_vec(a), to_vec(d), p);
        return py::make_tuple(from_vec(c.center), c.radius);
      },
      py::arg("x_a"), py::arg("x_d"), py::arg("params"));

  m.def("critical_times", [](const GameParams& p) {
    const CriticalTimes t = critical_times(p);
    return py::make_tuple(t.tau1, t.tau2, t.tau3, t.tau4);
  });
  m.def(
      "guard_threshold",
      [](double tau, double theta_a0, const GameParams& p) {
        return guard_threshold(tau, theta_a0, p);
      },
      py::arg("tau"), py::arg("theta_a0"), py::arg("params"));
  m.def(
      "escape_threshold",
      [](double tau, double theta_a0, const GameParams& p) {
        return escape_threshold(tau, theta_a0, p);
      },
      py::arg("tau"), py::arg("theta_a0"), py::arg("params"));
  m.def(
      "theta_max",
      [](double tau, double theta, double r, const GameParams& p) {
        return theta_max({tau, theta}, r, p);
      },
      py::arg("tau_eng"), py::arg("theta_eng"), py::arg("r"), py::arg("params"));
  m.def(
      "max_theta_max",
      [](double r, const GameParams& p) {
        const ThetaMaxResult res = max_theta_max(r, p);
        return py::make_tuple(res.value, res.config.tau_eng, res.config.theta_eng);
      },
      py::arg("r"), py::arg("params"));
  m.def("capturable",
        [](double a, double d, double r, const GameParams& p) { return capturable(a, d, r, p); },
        py::arg("theta_a0"), py::arg("theta_d0"), py::arg("r"), py::arg("params"));

  py::class_<CaptureModel>(m, "CaptureModel")
      .def(py::init([](const GameParams& p) { return CaptureModel(p); }), py::arg("params"))
      .def(
          "probability",
          [](const CaptureModel& cm, std::pair<double, double> x) {
            return cm.probability(to_vec(x));
          },
          py::arg("x"))
      .def(
          "choose_engagement",
          [](const CaptureModel& cm, std::pair<double, double> x_d0,
             double theta_a0) -> py::object {
            const auto s = choose_engagement(to_vec(x_d0), theta_a0, cm);
            if (!s) return py::none();
            py::dict d;
            d["tau_eng"] = s->engagement.tau_eng;
            d["theta_eng"] = s->engagement.theta_eng;
            d["capture_point"] = from_vec(s->capture_point);
            d["value"] = s->value;
            return d;
          },
          py::arg("x_d0"), py::arg("theta_a0"));

  m.def("p_star", &p_star, py::arg("model"));
  m.def("q_star", &q_star, py::arg("model"));
  m.def("markov_bound", &markov_bound, py::arg("n"), py::arg("star"));
  m.def("stationary_bound", &stationary_bound, py::arg("star"));

  m.def(
      "run_game",
      [](std::pair<double, double> x_d0, double theta_a0, const CaptureModel& cm,
         const std::string& defender, const std::string& attacker, double dt) {
        SimOptions o;
        o.dt = dt;
        const GameOutcome g = run_game(to_vec(x_d0), theta_a0,
                                       {parse_defender(defender), parse_attacker(attacker)}, cm, o);
        py::dict d;
        d["outcome"] = to_string(g.kind);
        d["time"] = g.terminal_time;
        d["capture_point"] =
            g.capture_point ? py::cast(from_vec(*g.capture_point)) : py::object(py::none());
        return d;
      },
      py::arg("x_d0"), py::arg("theta_a0"), py::arg("model"), py::arg("defender") = "optimal",
      py::arg("attacker") = "optimal", py::arg("dt") = 1e-3);

  m.def(
      "monte_carlo",
      [](const CaptureModel& cm, int n_trials, int n_attackers, std::uint64_t seed,
         const std::string& defender, const std::string& attacker, int workers) {
        MonteCarloOptions mc;
        mc.n_trials = n_trials;
        mc.n_attackers = n_attackers;
        mc.base_seed = seed;
        mc.workers = workers;
        py::gil_scoped_release release;
        return monte_carlo(mc, {parse_defender(defender), parse_attacker(attacker)}, cm).mean_pct;
      },
      py::arg("model"), py::arg("n_trials"), py::arg("n_attackers"), py::arg("seed") = 1,
      py::arg("defender") = "optimal", py::arg("attacker") = "optimal", py::arg("workers") = 0);
}
