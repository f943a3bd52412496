// Python bindings for the main operations: norms and duality pairings,
// semigroup evaluation, the three closed-loop simulators (config-driven),
// and the certificate machinery.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stabcert/certificates.hpp"
#include "stabcert/runner.hpp"

namespace py = pybind11;
using namespace stabcert;

namespace {

NormTag tag_from(const std::string& s) {
  if (s == "l1" || s == "L1") return NormTag::L1;
  if (s == "sup" || s == "Sup") return NormTag::Sup;
  throw std::invalid_argument("norm tag must be 'l1' or 'sup'");
}

GridFunction make_state(const std::vector<double>& values, double x_min, double x_max,
                        const std::string& tag) {
  const Grid g(x_min, x_max, static_cast<int>(values.size()));
  return GridFunction(g, values, tag_from(tag));
}

ExperimentConfig config_from_dict(const py::dict& d) {
  ExperimentConfig cfg;
  for (auto item : d)
    cfg.set(py::str(item.first).cast<std::string>(), py::str(item.second).cast<std::string>());
  cfg.finalize();
  return cfg;
}

py::dict trajectory_to_dict(const Trajectory& traj) {
  py::dict out;
  out["t"] = traj.times;
  out["norm"] = traj.norms;
  out["control"] = traj.control_values;
  return out;
}

py::dict report_to_dict(const CertificateReport& rep) {
  py::dict out;
  out["model"] = rep.model_id;
  out["T"] = rep.T;
  out["M_c"] = rep.M_c;
  out["M_o"] = rep.M_o;
  out["M_j"] = rep.M_j;
  out["M"] = rep.M;
  out["delta"] = rep.delta;
  out["delta_T1"] = rep.delta_T1;
  out["delta_denom_reverted"] = rep.delta_denom_reverted;
  out["c"] = rep.c;
  out["k1"] = rep.k1;
  out["k2"] = rep.k2;
  out["alpha"] = rep.alpha;
  out["mu_star"] = rep.mu_star;
  out["q_star"] = rep.q_star;
  out["iterate_pass"] = rep.iterate_pass;
  out["iterate_k"] = rep.iterate_k;
  out["sigma_emp"] = rep.sigma_emp;
  out["m_prime_emp"] = rep.m_prime_emp;
  out["nilpotent"] = rep.nilpotent;
  out["stability_ok"] = rep.stability_ok;
  out["stability_drift"] = rep.stability_drift;
  out["verdict"] = rep.pass ? std::string("PASS") : std::string("FAIL");
  out["key_value"] = rep.to_key_value_block();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "closed-loop transport/heat simulation and stabilization certificates";

  m.def(
      "norm",
      [](const std::vector<double>& values, double x_min, double x_max, const std::string& tag) {
        return norm(make_state(values, x_min, x_max, tag));
      },
      py::arg("values"), py::arg("x_min"), py::arg("x_max"), py::arg("tag"),
      "L1 (midpoint rule) or sup norm of a cell-sampled state");

  m.def(
      "duality_pairing",
      [](const std::vector<double>& z, const std::vector<double>& y, double x_min, double x_max,
         const std::string& tag) {
        const GridFunction zf = make_state(z, x_min, x_max, tag);
        const GridFunction yf = make_state(y, x_min, x_max, tag);
        return pair(zf, duality_select(yf));
      },
      py::arg("z"), py::arg("y"), py::arg("x_min"), py::arg("x_max"), py::arg("tag"),
      "<z, J(y)> for the selected duality element of y");

  m.def(
      "evaluate_semigroup",
      [](const std::string& kind, const std::vector<double>& y0, double x_min, double x_max,
         double t, double dt) {
        const Grid g(x_min, x_max, static_cast<int>(y0.size()));
        SemigroupModel S;
        if (kind == "left_shift_cutoff")
          S = SemigroupModel::left_shift_cutoff(g);
        else if (kind == "right_shift")
          S = SemigroupModel::right_shift(g);
        else if (kind == "heat_neumann")
          S = SemigroupModel::heat_neumann(g, dt, HeatScheme::ImplicitEuler);
        else
          throw std::invalid_argument("kind must be left_shift_cutoff|right_shift|heat_neumann");
        return S.evaluate(GridFunction(g, y0, S.norm_tag()), t).values();
      },
      py::arg("kind"), py::arg("y0"), py::arg("x_min"), py::arg("x_max"), py::arg("t"),
      py::arg("dt") = 0.01, "S(t) y0 for one of the model semigroups");

  m.def(
      "simulate",
      [](const py::dict& cfg) {
        return trajectory_to_dict(run_trajectory(build_bundle(config_from_dict(cfg))));
      },
      py::arg("config"), "run the configured closed loop; returns t/norm/control arrays");

  m.def(
      "certify",
      [](const py::dict& cfg) {
        return report_to_dict(run_certificate_chain(build_bundle(config_from_dict(cfg))));
      },
      py::arg("config"), "estimate the certificate constants for the configured model");

  m.def("compute_q", &compute_q, py::arg("mu"), py::arg("delta"), py::arg("M"), py::arg("c"),
        "decay factor q(mu, delta, M, c)");

  m.def(
      "gain_window",
      [](double M, double delta, double c) {
        const GainWindow gw = gain_window(M, delta, c);
        return py::make_tuple(gw.alpha, gw.pass);
      },
      py::arg("M"), py::arg("delta"), py::arg("c"),
      "largest certified gain bound (alpha, pass)");

  m.def(
      "fit_decay_rate",
      [](const std::vector<double>& times, const std::vector<double>& norms, double t_min) {
        Trajectory traj;
        traj.times = times;
        traj.norms = norms;
        traj.control_values.assign(times.size(), 0.0);
        const DecayFit fit = fit_decay_rate(traj, t_min);
        py::dict out;
        out["sigma"] = fit.sigma;
        out["prefactor"] = fit.prefactor;
        out["nilpotent"] = fit.nilpotent;
        return out;
      },
      py::arg("times"), py::arg("norms"), py::arg("t_min") = 0.0,
      "least-squares decay rate of ln(norm) vs t past t_min");
}
