// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run via ctest or directly; finishes in well under a minute.

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "stabcert/certificates.hpp"
#include "stabcert/runner.hpp"
#include "stabcert/util.hpp"

using namespace stabcert;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Harness {
  int failures = 0;
  int index = 0;
  void run(const std::string& name, const std::function<bool(std::string&)>& body) {
    ++index;
    std::string detail;
    bool ok = false;
    try {
      ok = body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%2d] %-34s %s%s%s\n", index, name.c_str(), ok ? "PASS" : "FAIL",
                detail.empty() ? "" : "  -- ", detail.c_str());
    if (!ok) ++failures;
  }
};

struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed ^ 0x9e3779b97f4a7c15ULL) {}
  std::uint64_t bits() {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
};

GridFunction random_state(Rng& rng, const Grid& g, NormTag tag) {
  std::vector<double> v(g.n_cells);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return GridFunction(g, std::move(v), tag);
}

ModelBundle bundle_for(const std::string& id) {
  ExperimentConfig cfg = ExperimentConfig::defaults_for(id);
  cfg.finalize();
  return build_bundle(cfg);
}

long double q_reference(long double mu, long double delta, long double M, long double c) {
  const long double num =
      1.0L + 2.0L * delta * mu * mu * mu * M * M * M * M / ((1.0L - M * mu) * (1.0L - M * mu)) +
      2.0L * c * mu * mu;
  return num / (1.0L + 2.0L * mu * delta);
}

}  // namespace

int main() {
  Harness h;

  // 1. Example 1 exactness: ||y(0.5)||_1 = 0.5 e^{-0.1} within 1e-10 and
  //    exact extinction for t >= 1.
  h.run("example1-exactness", [](std::string& detail) {
    const ModelBundle b = bundle_for("example1");
    const Trajectory traj = run_trajectory(b);
    const double target = 0.5 * std::exp(-0.1);
    bool ok = false, extinct = true;
    double measured = -1.0;
    for (size_t j = 0; j < traj.times.size(); ++j) {
      if (std::abs(traj.times[j] - 0.5) < 1e-12) {
        measured = traj.norms[j];
        ok = std::abs(traj.norms[j] - target) <= 1e-10;
      }
      if (traj.times[j] >= 1.0 && traj.norms[j] != 0.0) extinct = false;
    }
    detail = "norm(0.5) = " + fmt_double(measured) + " vs " + fmt_double(target);
    return ok && extinct;
  });

  // 2. Example 2 rate: sigma_emp in [0.49, 0.51]; sandwich bound at every
  //    stored time.
  h.run("example2-rate-and-sandwich", [](std::string& detail) {
    const ModelBundle b = bundle_for("example2");
    const Trajectory traj = run_trajectory(b);
    const DecayFit fit = fit_decay_rate(traj, b.t_min_fit);
    const double k_l1 = 0.5;  // analytic ||k||_1 of 0.5 e^{-x} on (0, inf)
    const double n0 = norm(b.y0);
    bool sandwich = true;
    for (size_t j = 0; j < traj.times.size(); ++j) {
      const double t = traj.times[j];
      const double lo = std::exp(-b.mu * t - b.mu * k_l1) * n0 * (1.0 - 1e-12);
      const double hi = std::exp(-b.mu * t + b.mu * k_l1) * n0 * (1.0 + 1e-12);
      if (traj.norms[j] < lo || traj.norms[j] > hi) sandwich = false;
    }
    detail = "sigma_emp = " + fmt_double(fit.sigma);
    return fit.sigma >= 0.49 && fit.sigma <= 0.51 && sandwich;
  });

  // 3. Miyadera admissibility (m1): estimate <= ||k||_1 = 0.5 over >= 100
  //    seeded samples; >= 0.49 on the boundary-concentrated family, T = 10.
  h.run("miyadera-admissibility-m1", [](std::string& detail) {
    const ModelBundle b = bundle_for("example2");
    const double T = 10.0;
    SampleSpec spec{100, 20240810, SampleFamily::Mixed};
    auto samples = make_samples(spec, b.grid, b.tag, SampleBC::None, b.grid.length());
    samples.push_back(GridFunction::sample(
        b.grid, b.tag, [](double x) { return x < 0.01 ? 100.0 : 0.0; }));
    const double M_all =
        estimate_admissibility(AdmissibilityKind::Observation, b.op, b.S, T, samples);
    SampleSpec bc_spec{16, 20240811, SampleFamily::BoundaryConcentrated};
    auto bc_samples = make_samples(bc_spec, b.grid, b.tag, SampleBC::None, 2.0);
    bc_samples.push_back(samples.back());
    const double M_bc =
        estimate_admissibility(AdmissibilityKind::Observation, b.op, b.S, T, bc_samples);
    detail = "max ratio = " + fmt_double(M_all) + ", boundary family = " + fmt_double(M_bc);
    return M_all <= 0.5 && M_bc >= 0.49 && M_bc <= 0.5;
  });

  // 4. Observability (m2): delta >= T - ||k||_1 - 0.01 for T in {1, 2}.
  h.run("observability-m2", [](std::string& detail) {
    const ModelBundle b = bundle_for("example2");
    SampleSpec spec{100, 20240812, SampleFamily::Mixed};
    const auto samples =
        make_samples(spec, b.grid, b.tag, SampleBC::LeftZero, b.grid.length() - 2.1);
    bool ok = true;
    for (double T : {1.0, 2.0}) {
      const ObservabilityEstimate est =
          estimate_observability(ObservabilityMode::Miyadera, b.op, b.S, T, samples);
      detail += "delta(T=" + fmt_double(T) + ") = " + fmt_double(est.delta) + "  ";
      if (est.delta < T - 0.5 - 0.01) ok = false;
    }
    return ok;
  });

  // 5. Example 3: discrete duality identity at dx = 1/200 and fitted
  //    sup-norm decay rate >= 0.95 mu for mu = 0.1.
  h.run("example3-identity-and-rate", [](std::string& detail) {
    const ModelBundle b = bundle_for("example3");
    SampleSpec spec{100, 20240813, SampleFamily::SmoothModes};
    const auto samples = make_samples(spec, b.grid, b.tag, SampleBC::Neumann, b.grid.length());
    const double dx = b.grid.dx();
    bool identity_ok = true;
    double worst_ratio = 0.0;
    for (const GridFunction& y : samples) {
      const double lhs = std::abs(x_part_pairing(b.op, y) - norm(y) * norm(y));
      const double graph = norm(y) + norm(b.S.generator().apply(y));
      const double bound = 5.0 * dx * graph * norm(y);
      worst_ratio = std::max(worst_ratio, lhs / bound);
      if (lhs > bound) identity_ok = false;
    }
    const Trajectory traj = run_trajectory(b);
    const DecayFit fit = fit_decay_rate(traj, b.t_min_fit);
    detail = "identity worst lhs/bound = " + fmt_double(worst_ratio) +
             ", sigma_emp = " + fmt_double(fit.sigma);
    return identity_ok && fit.sigma >= 0.95 * b.mu;
  });

  // 6. Theorem machinery on example 2: alpha > 0, q(alpha/2) < 1, iterate
  //    bound holds through k = 10; frozen q value against an independent
  //    long-double evaluation.
  h.run("theorem-machinery-q", [](std::string& detail) {
    const ModelBundle b = bundle_for("example2");
    const CertificateReport rep = run_certificate_chain(b);
    const double q = compute_q(0.1, 1.0, 1.0, 1.0);
    const double q_ref = static_cast<double>(q_reference(0.1L, 1.0L, 1.0L, 1.0L));
    detail = "alpha = " + fmt_double(rep.alpha) + ", q* = " + fmt_double(rep.q_star) +
             ", k = " + std::to_string(rep.iterate_k) + ", q(0.1,1,1,1) = " + fmt_double(q);
    return rep.pass && rep.alpha > 0.0 && rep.q_star < 1.0 && rep.iterate_pass &&
           rep.iterate_k >= 10 && std::abs(q - 0.852058) <= 1e-6 + 2e-7 &&
           std::abs(q - q_ref) <= 1e-6;
  });

  // 7. Semigroup invariants: exact law for aligned shifts, contraction over
  //    1000 sampled (model, y, t), Hille-Yosida at lambda in {1,...,1e4}.
  h.run("semigroup-invariants", [](std::string& detail) {
    Rng rng(20240814);
    const ModelBundle b1 = bundle_for("example1");
    const ModelBundle b2 = bundle_for("example2");
    const ModelBundle b3 = bundle_for("example3");
    const SemigroupModel* models[3] = {&b1.S, &b2.S, &b3.S};

    bool law_ok = true;
    for (int trial = 0; trial < 50; ++trial) {
      const SemigroupModel& S = trial % 2 ? b2.S : b1.S;
      const GridFunction y = random_state(rng, S.grid(), S.norm_tag());
      const double t = S.grid().dx() * (1 + static_cast<int>(rng.uniform(0.0, 200.0)));
      const double s = S.grid().dx() * (1 + static_cast<int>(rng.uniform(0.0, 200.0)));
      if (semigroup_law_residual(S, y, t, s) != 0.0) law_ok = false;
    }

    bool contraction_ok = true;
    for (int trial = 0; trial < 1000; ++trial) {
      const SemigroupModel& S = *models[trial % 3];
      const GridFunction y = random_state(rng, S.grid(), S.norm_tag());
      const double t = rng.uniform(0.0, 2.5);
      if (norm(S.evaluate(y, t)) > norm(y) * (1.0 + 1e-10)) contraction_ok = false;
    }

    bool hy_ok = true;
    double hy_worst = 0.0;
    for (const SemigroupModel* S : models) {
      for (double lambda : {1.0, 10.0, 100.0, 1e3, 1e4}) {
        const double n = hille_yosida_norm(S->generator(), lambda, S->generator().dissip_norm);
        hy_worst = std::max(hy_worst, n);
        if (n > 1.0 + 1e-8) hy_ok = false;
      }
    }
    detail = "worst ||lambda R|| = " + fmt_double(hy_worst);
    return law_ok && contraction_ok && hy_ok;
  });

  // 8. Duality map: |<y, J(y)> - ||y||^2| <= 1e-10 ||y||^2 on 1000 seeded
  //    samples, both norms.
  h.run("duality-map-normalization", [](std::string& detail) {
    Rng rng(20240815);
    const Grid g(0.0, 1.0, 311);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const NormTag tag = trial % 2 ? NormTag::L1 : NormTag::Sup;
      const GridFunction y = random_state(rng, g, tag);
      const double n2 = norm(y) * norm(y);
      if (n2 == 0.0) continue;
      worst = std::max(worst, std::abs(pair(y, duality_select(y)) - n2) / n2);
    }
    detail = "worst relative defect = " + fmt_double(worst);
    return worst <= 1e-10;
  });

  // 9. Cross-scheme validation: upwind FD vs exact characteristics at
  //    dx = 1e-3, t = 0.5, relative L1 error <= 5%, halving dx halves the
  //    error within +-20%.
  h.run("cross-scheme-validation", [](std::string& detail) {
    bool ok = true;
    for (int example : {1, 2}) {
      double err[2];
      for (int r = 0; r < 2; ++r) {
        const int n = (example == 1 ? 1000 : 2000) << r;
        const Grid g(0.0, example == 1 ? 1.0 : 2.0, n);
        const GridFunction y0 = (example == 1)
            ? GridFunction::constant(g, NormTag::L1, 1.0)
            : GridFunction::sample(g, NormTag::L1, [](double x) { return x < 1.0 ? 1.0 : 0.0; });
        const double mu = example == 1 ? 0.2 : 0.5;
        GridFunction k = GridFunction::zeros(g, NormTag::L1);
        Trajectory exact;
        if (example == 1) {
          exact = simulate_example1_exact(y0, mu, 1.0, g.dx(), 0.5);
        } else {
          k = GridFunction::sample(g, NormTag::L1,
                                   [](double x) { return 0.5 * std::exp(-x); });
          exact = simulate_example2_exact(y0, k, mu, g.dx(), 0.5);
        }
        const Trajectory fd =
            simulate_upwind_fd(example, y0, example == 2 ? &k : nullptr, mu, g.dx(), 0.5);
        err[r] = norm(sub(fd.states.back(), exact.states.back())) / norm(exact.states.back());
      }
      const double ratio = err[1] / err[0];
      detail += "ex" + std::to_string(example) + ": err = " + fmt_double(err[0]) +
                ", ratio = " + fmt_double(ratio) + "  ";
      if (!(err[0] <= 0.05 && ratio >= 0.4 && ratio <= 0.6)) ok = false;
    }
    return ok;
  });

  // 10. Resolvent smoothing: f_BC agrees with the direct pairing within
  //     1e-6 relative for the multiplication model; the identity composite
  //     converges to ||y||^2 along the ladder.
  h.run("resolvent-smoothing-fbc", [](std::string& detail) {
    const Grid g(0.0, 8.0, 800);
    const SemigroupModel S = SemigroupModel::right_shift(g);
    const GridFunction kf = GridFunction::sample(
        g, NormTag::L1, [](double x) { return 0.5 * std::exp(-x); });
    const ControlOperatorModel op = ControlOperatorModel::multiplication(kf);
    SampleSpec spec{20, 20240816, SampleFamily::Bumps};
    const auto samples = make_samples(spec, g, NormTag::L1, SampleBC::None, 6.0);
    double worst = 0.0;
    for (const GridFunction& y : samples) {
      const double direct = x_part_pairing(op, y);
      const FbcResult r = f_bc_limsup(S.generator(), op, y);
      worst = std::max(worst, std::abs(r.value - direct) / std::abs(direct));
    }

    const Grid gh(0.0, 1.0, 200);
    const SemigroupModel Sh = SemigroupModel::heat_neumann(gh, 0.005, HeatScheme::ImplicitEuler);
    const ControlOperatorModel id =
        ControlOperatorModel::multiplication(GridFunction::zeros(gh, NormTag::L1));
    const GridFunction u = GridFunction::sample(
        gh, NormTag::Sup, [](double x) { return 2.0 + std::cos(kPi * x); });
    const FbcResult ri = f_bc_limsup(Sh.generator(), id, u);
    const double n2 = norm(u) * norm(u);
    const double id_defect = std::abs(ri.value - n2) / n2;
    detail = "mult worst rel = " + fmt_double(worst) +
             ", identity defect = " + fmt_double(id_defect);
    return worst <= 1e-6 && ri.converged && id_defect <= 1e-6;
  });

  // 11. Determinism: two certify runs with identical config and seed write
  //     byte-identical reports.
  h.run("certify-determinism", [](std::string& detail) {
    ExperimentConfig cfg = ExperimentConfig::defaults_for("example2");
    cfg.finalize();
    const CertificateReport a = run_certificate_chain(build_bundle(cfg));
    const CertificateReport b = run_certificate_chain(build_bundle(cfg));
    const bool ok = a.to_key_value_block() == b.to_key_value_block() &&
                    a.to_csv_row() == b.to_csv_row();
    detail = ok ? "reports byte-identical" : "reports differ";
    return ok;
  });

  std::printf("%d/%d criteria passed\n", h.index - h.failures, h.index);
  return h.failures == 0 ? 0 : 1;
}
