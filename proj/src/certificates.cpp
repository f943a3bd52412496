#include "stabcert/certificates.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace stabcert {

namespace {

// Number of evaluator-aligned steps covering the horizon T.
int aligned_horizon_steps(const SemigroupModel& S, double T) {
  const double step = S.aligned_step();
  const double r = T / step;
  const int n_t = static_cast<int>(std::llround(r));
  if (n_t < 1 || std::abs(r - n_t) > 1e-9)
    throw std::invalid_argument("certificates: horizon T must be a multiple of the aligned step");
  return n_t;
}

std::string fmt(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fmt(bool v) { return v ? "1" : "0"; }
std::string fmt(int v) { return std::to_string(v); }

}  // namespace

double estimate_admissibility(AdmissibilityKind kind, const ControlOperatorModel& model,
                              const SemigroupModel& S, double T,
                              const std::vector<GridFunction>& samples,
                              const std::vector<std::vector<double>>& time_profiles) {
  const int n_t = aligned_horizon_steps(S, T);
  const double step = S.aligned_step();
  const Grid& grid = S.grid();
  const NormTag tag = S.norm_tag();
  double worst = 0.0;

  if (kind == AdmissibilityKind::Observation) {
    for (const GridFunction& y : samples) {
      const double den = norm(y);
      if (den == 0.0) continue;
      OrbitWalker walker(S, y.with_tag(tag), step);
      double integral = 0.0;
      for (int j = 0; j < n_t; ++j) {
        integral += step * model.observation_norm(walker.state());
        walker.advance();
      }
      worst = std::max(worst, integral / den);
    }
    return worst;
  }

  if (time_profiles.empty())
    throw std::invalid_argument("estimate_admissibility: control/joint kinds need time profiles");
  const bool scalar_u = model.kind() == ControlOperatorModel::Kind::DiracTrace;
  const size_t n_inputs = scalar_u ? time_profiles.size()
                                   : std::min(time_profiles.size(), samples.size());
  for (size_t s = 0; s < n_inputs; ++s) {
    const std::vector<double>& g = time_profiles[s];
    if (static_cast<int>(g.size()) != n_t)
      throw std::invalid_argument("estimate_admissibility: profile length mismatch");
    const GridFunction* w = scalar_u ? nullptr : &samples[s];
    double u_l1 = 0.0;
    for (double gv : g) u_l1 += step * std::abs(gv);
    if (!scalar_u) u_l1 *= norm(*w);
    if (u_l1 == 0.0) continue;

    // P_{j+1} = S(step)(P_j + step * B u(s_j)): left-rectangle convolution.
    GridFunction P = GridFunction::zeros(grid, tag);
    double joint_integral = 0.0;
    for (int j = 0; j < n_t; ++j) {
      if (kind == AdmissibilityKind::Joint) joint_integral += step * model.observation_norm(P);
      const Observation u_j = scalar_u ? Observation::of_scalar(g[j])
                                       : Observation::of_func(scaled(*w, g[j]));
      const GridFunction bu = model.b_apply(u_j, S.generator(), grid, tag);
      P = S.evaluate(add(P, scaled(bu, step)), step);
    }
    const double value =
        (kind == AdmissibilityKind::Control) ? norm(P) : joint_integral;
    worst = std::max(worst, value / u_l1);
  }
  return worst;
}

ObservabilityEstimate estimate_observability(ObservabilityMode mode,
                                             const ControlOperatorModel& model,
                                             const SemigroupModel& S, double T,
                                             const std::vector<GridFunction>& samples) {
  const int n_t = aligned_horizon_steps(S, T);
  const double step = S.aligned_step();
  ObservabilityEstimate est;
  est.delta = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const GridFunction& y : samples) {
    const double ny2 = norm(y) * norm(y);
    if (ny2 == 0.0) continue;
    OrbitWalker walker(S, y.with_tag(S.norm_tag()), step);
    double integral = 0.0;
    for (int j = 0; j < n_t; ++j) {
      const GridFunction& st = walker.state();
      double pairing = 0.0;
      switch (mode) {
        case ObservabilityMode::XPart:
        case ObservabilityMode::Miyadera:
          pairing = x_part_pairing(model, st);
          break;
        case ObservabilityMode::Fbc:
          pairing = f_bc_limsup(S.generator(), model, st).value;
          break;
      }
      integral += step * pairing;
      walker.advance();
    }
    double den = ny2;
    if (mode != ObservabilityMode::Miyadera) {
      const double nT = norm(walker.state());
      if (nT > 0.0) {
        den = nT * nT;
      } else {
        est.denom_reverted = true;  // vacuous horizon, fall back to ||y||^2
      }
    }
    if (den == 0.0) continue;
    est.delta = std::min(est.delta, integral / den);
    any = true;
  }
  if (!any) throw std::runtime_error("estimate_observability: all samples skipped");
  return est;
}

LipschitzEstimate estimate_lipschitz(const ControlOperatorModel& model,
                                     const std::vector<GridFunction>& samples) {
  if (samples.size() < 2)
    throw std::invalid_argument("estimate_lipschitz: needs at least 2 samples");
  const size_t n = samples.size();
  std::vector<double> F(n), nx(n), cx(n);
  for (size_t i = 0; i < n; ++i) {
    F[i] = x_part_pairing(model, samples[i]);
    nx[i] = norm(samples[i]);
    cx[i] = model.observation_norm(samples[i]);
  }
  struct PairData {
    double lhs, a, b;
  };
  std::vector<PairData> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const GridFunction d = sub(samples[i], samples[j]);
      PairData p;
      p.lhs = std::abs(F[i] - F[j]);
      p.a = (nx[i] + cx[i] + nx[j] + cx[j]) * norm(d);
      p.b = (nx[i] + nx[j]) * model.observation_norm(d);
      pairs.push_back(p);
    }
  }
  // Smallest (k1,k2) on a k1 grid; ties by max(k1,k2) then k1+k2.
  const int grid_n = 80;
  const double k1_max = 4.0;
  LipschitzEstimate best{0.0, std::numeric_limits<double>::infinity()};
  double best_score = std::numeric_limits<double>::infinity();
  for (int gi = 0; gi <= grid_n; ++gi) {
    const double k1 = k1_max * gi / grid_n;
    double k2 = 0.0;
    bool feasible = true;
    for (const PairData& p : pairs) {
      const double rem = p.lhs - k1 * p.a;
      if (rem <= 0.0) continue;
      if (p.b == 0.0) {
        feasible = false;
        break;
      }
      k2 = std::max(k2, rem / p.b);
    }
    if (!feasible) continue;
    const double score = std::max(k1, k2) + 1e-9 * (k1 + k2);
    if (score < best_score) {
      best_score = score;
      best = {k1, k2};
    }
  }
  return best;
}

double estimate_proof_constant_c(const ControlOperatorModel& model, const SemigroupModel& S,
                                 double T, double mu, const std::vector<GridFunction>& samples,
                                 const std::function<Trajectory(const GridFunction&, double)>&
                                     simulate_closed_loop) {
  if (mu == 0.0) return 0.0;  // y(t) -> S(t)y0, both integrals coincide
  const int n_t = aligned_horizon_steps(S, T);
  const double step = S.aligned_step();
  double worst = 0.0;
  for (const GridFunction& y0 : samples) {
    const double ny2 = norm(y0) * norm(y0);
    if (ny2 == 0.0) continue;
    OrbitWalker walker(S, y0.with_tag(S.norm_tag()), step);
    double open_integral = 0.0;
    for (int j = 0; j < n_t; ++j) {
      open_integral += step * x_part_pairing(model, walker.state());
      walker.advance();
    }
    const Trajectory traj = simulate_closed_loop(y0, mu);
    if (traj.states.size() < static_cast<size_t>(n_t))
      throw std::invalid_argument("estimate_proof_constant_c: trajectory shorter than horizon");
    double closed_integral = 0.0;
    for (int j = 0; j < n_t; ++j)
      closed_integral += step * x_part_pairing(model, traj.states[j]);
    const double val = (open_integral - closed_integral) / (mu * ny2);
    worst = std::max(worst, std::max(0.0, val));
  }
  return worst;
}

double compute_q(double mu, double delta, double M, double c) {
  if (!(mu > 0.0)) throw std::domain_error("compute_q: requires mu > 0");
  if (!(mu < 1.0 / M)) throw std::domain_error("compute_q: requires mu < 1/M");
  const double r = M * M / (1.0 - M * mu);
  return (1.0 + 2.0 * mu * mu * (delta * mu * r * r + c)) / (1.0 + 2.0 * mu * delta);
}

GainWindow gain_window(double M, double delta, double c, int grid_points) {
  if (!(M > 0.0)) throw std::invalid_argument("gain_window: requires M > 0");
  const double cap = 0.5 / M;
  GainWindow gw;
  for (int j = 1; j <= grid_points; ++j) {
    const double mu = cap * j / grid_points;
    if (compute_q(mu, delta, M, c) < 1.0) {
      gw.alpha = mu;
    } else {
      break;
    }
  }
  gw.pass = gw.alpha > 0.0;
  return gw;
}

IterateVerdict verify_iterate_bound(const Trajectory& traj, double q, double T) {
  if (traj.times.empty() || traj.times.back() < 2.0 * T - 1e-12)
    throw std::invalid_argument("verify_iterate_bound: trajectory shorter than 2T");
  IterateVerdict v;
  v.pass = true;
  const double n0sq = traj.norms.front() * traj.norms.front();
  double qk = 1.0;
  for (int k = 0;; ++k) {
    const double target = k * T;
    if (target > traj.times.back() + 1e-9) break;
    // locate the stored time nearest target
    size_t lo = 0, hi = traj.times.size();
    while (lo + 1 < hi) {
      const size_t mid = (lo + hi) / 2;
      if (traj.times[mid] <= target) lo = mid;
      else hi = mid;
    }
    size_t idx = lo;
    if (lo + 1 < traj.times.size() &&
        std::abs(traj.times[lo + 1] - target) < std::abs(traj.times[lo] - target))
      idx = lo + 1;
    if (std::abs(traj.times[idx] - target) > 1e-9 * std::max(1.0, target))
      throw std::invalid_argument("verify_iterate_bound: trajectory not sampled at multiples of T");
    const double lhs = traj.norms[idx] * traj.norms[idx];
    const double rhs = qk * n0sq;
    v.worst_margin = std::max(v.worst_margin, lhs - rhs);
    if (lhs > rhs * (1.0 + 1e-6)) v.pass = false;
    v.k_checked = k;
    qk *= q;
  }
  return v;
}

DecayFit fit_decay_rate(const Trajectory& traj, double t_min) {
  DecayFit fit;
  for (double nv : traj.norms)
    if (nv == 0.0) fit.nilpotent = true;
  if (fit.nilpotent) {
    fit.sigma = std::numeric_limits<double>::infinity();
    fit.prefactor = 0.0;
    return fit;
  }
  std::vector<double> ts, ys;
  for (size_t i = 0; i < traj.times.size(); ++i) {
    if (traj.times[i] < t_min || traj.norms[i] <= 1e-300) continue;
    ts.push_back(traj.times[i]);
    ys.push_back(std::log(traj.norms[i]));
  }
  if (ts.size() < 5)
    throw std::invalid_argument("fit_decay_rate: needs at least 5 samples past t_min");
  double tbar = 0.0, ybar = 0.0;
  for (size_t i = 0; i < ts.size(); ++i) {
    tbar += ts[i];
    ybar += ys[i];
  }
  tbar /= ts.size();
  ybar /= ys.size();
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < ts.size(); ++i) {
    sxx += (ts[i] - tbar) * (ts[i] - tbar);
    sxy += (ts[i] - tbar) * (ys[i] - ybar);
  }
  const double slope = (sxx > 0.0) ? sxy / sxx : 0.0;
  const double intercept = ybar - slope * tbar;
  fit.sigma = -slope;
  fit.prefactor = std::exp(intercept) / traj.norms.front();
  return fit;
}

std::string CertificateReport::to_key_value_block() const {
  std::string s;
  s += "model = " + model_id + "\n";
  s += "T = " + fmt(T) + "\n";
  s += "M_c = " + fmt(M_c) + "\n";
  s += "M_o = " + fmt(M_o) + "\n";
  s += "M_j = " + fmt(M_j) + "\n";
  s += "M = " + fmt(M) + "\n";
  s += "delta = " + fmt(delta) + "\n";
  s += "delta_T1 = " + fmt(delta_T1) + "\n";
  s += "delta_denom_reverted = " + fmt(delta_denom_reverted) + "\n";
  s += "c = " + fmt(c) + "\n";
  s += "k1 = " + fmt(k1) + "\n";
  s += "k2 = " + fmt(k2) + "\n";
  s += "alpha = " + fmt(alpha) + "\n";
  s += "mu_star = " + fmt(mu_star) + "\n";
  s += "q_star = " + fmt(q_star) + "\n";
  s += "iterate_pass = " + fmt(iterate_pass) + "\n";
  s += "iterate_k = " + fmt(iterate_k) + "\n";
  s += "sigma_emp = " + fmt(sigma_emp) + "\n";
  s += "m_prime_emp = " + fmt(m_prime_emp) + "\n";
  s += "nilpotent = " + fmt(nilpotent) + "\n";
  s += "stability_ok = " + fmt(stability_ok) + "\n";
  s += "stability_drift = " + fmt(stability_drift) + "\n";
  s += std::string("verdict = ") + (pass ? "PASS" : "FAIL") + "\n";
  return s;
}

std::string CertificateReport::csv_header() {
  return "model,T,M_c,M_o,M_j,M,delta,delta_T1,delta_denom_reverted,c,k1,k2,alpha,mu_star,"
         "q_star,iterate_pass,iterate_k,sigma_emp,m_prime_emp,nilpotent,stability_ok,"
         "stability_drift,verdict";
}

std::string CertificateReport::to_csv_row() const {
  std::string s;
  s += model_id + ",";
  s += fmt(T) + "," + fmt(M_c) + "," + fmt(M_o) + "," + fmt(M_j) + "," + fmt(M) + ",";
  s += fmt(delta) + "," + fmt(delta_T1) + "," + fmt(delta_denom_reverted) + ",";
  s += fmt(c) + "," + fmt(k1) + "," + fmt(k2) + "," + fmt(alpha) + "," + fmt(mu_star) + ",";
  s += fmt(q_star) + "," + fmt(iterate_pass) + "," + fmt(iterate_k) + ",";
  s += fmt(sigma_emp) + "," + fmt(m_prime_emp) + "," + fmt(nilpotent) + ",";
  s += fmt(stability_ok) + "," + fmt(stability_drift) + ",";
  s += pass ? "PASS" : "FAIL";
  return s;
}

}  // namespace stabcert
