#include "stabcert/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "stabcert/util.hpp"

namespace stabcert {

namespace {

namespace fs = std::filesystem;

GridFunction parse_y0(const ExperimentConfig& cfg, const Grid& grid, NormTag tag) {
  const std::string spec = cfg.get("y0");
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string args = spec.substr(colon + 1);
  if (kind == "const") {
    return GridFunction::constant(grid, tag, std::stod(args));
  }
  if (kind == "bump") {
    const auto comma = args.find(',');
    if (comma == std::string::npos) throw ConfigError("y0: bump needs center,width");
    const double c = std::stod(args.substr(0, comma));
    const double w = std::stod(args.substr(comma + 1));
    if (!(w > 0.0)) throw ConfigError("y0: bump width must be positive");
    constexpr double kPi = 3.14159265358979323846;
    return GridFunction::sample(grid, tag, [&](double x) {
      const double d = std::abs(x - c);
      if (d >= w) return 0.0;
      const double t = std::cos(0.5 * kPi * d / w);
      return t * t;
    });
  }
  if (kind == "random") {
    SampleSpec s;
    s.count = 1;
    s.seed = static_cast<std::uint64_t>(std::stoll(args));
    s.family = SampleFamily::Bumps;
    return make_samples(s, grid, tag, SampleBC::None, grid.length()).front();
  }
  throw ConfigError("y0: unknown initial-data kind '" + kind + "'");
}

GridFunction make_k_profile(const ExperimentConfig& cfg, const Grid& grid) {
  const std::string family = cfg.get_or("k.family", "exp");
  if (family == "zero") return GridFunction::zeros(grid, NormTag::L1);
  const double k0 = cfg.get_double("k.k0");
  const double rate = cfg.get_double("k.rate");
  return GridFunction::sample(grid, NormTag::L1,
                              [&](double x) { return k0 * std::exp(-rate * x); });
}

// Implicit Euler for the matrix-level closed loop y' = Ay + v*By with B the
// diagonal part of the configured operator (zero or identity).
Trajectory simulate_matrix_closedloop(const SemigroupModel& S, const ControlOperatorModel& op,
                                      const GridFunction& y0, double dt, double t_end,
                                      int stride, const FeedbackLaw& fl) {
  const long n_steps = std::llround(t_end / dt);
  if (n_steps < 1 || std::abs(n_steps * dt - t_end) > 1e-9)
    throw std::invalid_argument("matrix mode: t_final must be a multiple of dt");
  Trajectory traj;
  GridFunction state = y0;
  double cached_v = 1.0;
  TriDiagMatrix L;
  const double lam = 1.0 / dt;
  for (long j = 0; j <= n_steps; ++j) {
    double v = (fl.kind == FeedbackLaw::Kind::BangBang)
                   ? bang_bang_value(op, nullptr, state, fl)
                   : -fl.mu;
    if (v == 0.0) v = 0.0;
    if (j % stride == 0 || j == n_steps) {
      traj.times.push_back(j * dt);
      traj.norms.push_back(norm(state));
      traj.control_values.push_back(v);
      traj.states.push_back(state);
    }
    if (j == n_steps) break;
    if (v != cached_v) {
      L = S.generator();
      if (op.kind() == ControlOperatorModel::Kind::Multiplication)
        for (int i = 0; i < L.n; ++i) L.diag[i] += v * (1.0 + op.k()[i]);
      cached_v = v;
    }
    std::vector<double> rhs(state.size());
    for (int i = 0; i < state.size(); ++i) rhs[i] = lam * state[i];
    state = GridFunction(state.grid(), solve_shifted(L, lam, rhs), state.norm_tag());
  }
  return traj;
}

}  // namespace

Trajectory ModelBundle::simulate_closed_loop(const GridFunction& start, double gain, double step,
                                             double t_end, int out_stride,
                                             const FeedbackLaw* fl) const {
  const FeedbackLaw fallback = FeedbackLaw::output_feedback(gain);
  const FeedbackLaw* use = fl ? fl : &fallback;
  if (model_id == "example1")
    return simulate_example1_exact(start, gain, op.alpha(), step, t_end, out_stride, use);
  if (model_id == "example2")
    return simulate_example2_exact(start, op.k(), gain, step, t_end, out_stride, use);
  if (model_id == "example3")
    return simulate_heat_closedloop(start, gain, step, t_end, out_stride, use);
  return simulate_matrix_closedloop(S, op, start, step, t_end, out_stride, *use);
}

ModelBundle build_bundle(const ExperimentConfig& cfg) {
  ModelBundle b;
  b.model_id = cfg.get("model");
  const Grid grid(cfg.get_double("grid.x_min"), cfg.get_double("grid.x_max"),
                  static_cast<int>(cfg.get_int("grid.n_cells")));
  b.grid = grid;
  b.mu = cfg.get_double("mu");
  b.T = cfg.get_double("time.T");
  b.dt = cfg.get_double("time.dt");
  b.t_final = cfg.get_double("time.t_final");
  b.t_min_fit = cfg.get_double("time.t_min_fit");
  b.stride = static_cast<int>(cfg.get_int("stride"));
  b.samples.count = static_cast<int>(cfg.get_int("samples.count"));
  b.samples.seed = static_cast<std::uint64_t>(cfg.get_int("samples.seed"));
  b.samples.family = sample_family_from_string(cfg.get("samples.family"));
  const double eps_rel = cfg.get_double("feedback.eps_rel");
  b.law = (cfg.get("feedback") == "bangbang") ? FeedbackLaw::bang_bang(b.mu, eps_rel)
                                              : FeedbackLaw::output_feedback(b.mu);
  const HeatScheme scheme = (cfg.get("scheme") == "crank_nicolson") ? HeatScheme::CrankNicolson
                                                                    : HeatScheme::ImplicitEuler;

  if (b.model_id == "example1") {
    b.tag = NormTag::L1;
    b.S = SemigroupModel::left_shift_cutoff(grid);
    const double alpha = cfg.get_double("alpha");
    b.op = ControlOperatorModel::dirac_trace(alpha);
    b.obs_mode = ObservabilityMode::XPart;
    b.domain_bc = SampleBC::RightZero;
    b.support_max = grid.length();
    if (alpha > 0.0) b.mu_cap = 0.99 / alpha;  // the given well-posedness window
  } else if (b.model_id == "example2") {
    b.tag = NormTag::L1;
    b.S = SemigroupModel::right_shift(grid);
    GridFunction k = make_k_profile(cfg, grid);
    try {
      b.op = ControlOperatorModel::multiplication(std::move(k));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("k.k0: ") + e.what());
    }
    b.obs_mode = ObservabilityMode::Miyadera;
    b.domain_bc = SampleBC::LeftZero;
    b.support_max = std::max(6.0 * grid.dx(), grid.length() - std::max(b.T, 1.0) - 0.1);
  } else if (b.model_id == "example3") {
    b.tag = NormTag::Sup;
    b.S = SemigroupModel::heat_neumann(grid, b.dt, scheme);
    b.op = ControlOperatorModel::identity_plus_derivative();
    b.obs_mode = ObservabilityMode::XPart;
    b.domain_bc = SampleBC::Neumann;
    b.support_max = grid.length();
  } else if (b.model_id == "matrix") {
    b.tag = NormTag::Sup;
    const SemigroupModel heat = SemigroupModel::heat_neumann(grid, b.dt, scheme);
    b.S = heat;
    b.op = (cfg.get("matrix.op") == "identity")
               ? ControlOperatorModel::multiplication(GridFunction::zeros(grid, NormTag::L1))
               : ControlOperatorModel::zero();
    b.obs_mode = ObservabilityMode::Miyadera;
    b.domain_bc = SampleBC::Neumann;
    b.support_max = grid.length();
  } else {
    throw ConfigError("model: unknown model id '" + b.model_id + "'");
  }
  b.y0 = parse_y0(cfg, grid, b.tag);
  return b;
}

Trajectory run_trajectory(const ModelBundle& b) {
  return b.simulate_closed_loop(b.y0, b.mu, b.dt, b.t_final, b.stride, &b.law);
}

namespace {

double rel_drift(double fresh, double base) {
  const double scale = std::max(std::abs(base), 1e-12);
  return std::abs(fresh - base) / scale;
}

}  // namespace

CertificateReport run_certificate_chain(const ModelBundle& b) {
  CertificateReport rep;
  rep.model_id = b.model_id;
  rep.T = b.T;

  const double step = b.S.aligned_step();
  const int n_t = static_cast<int>(std::llround(b.T / step));
  if (n_t < 1 || std::abs(n_t * step - b.T) > 1e-9)
    throw std::invalid_argument("certify: T must be a multiple of the aligned step");

  const auto samples_state =
      make_samples(b.samples, b.grid, b.tag, SampleBC::None, b.support_max);
  SampleSpec domain_spec = b.samples;
  domain_spec.seed += 7;
  const auto samples_domain =
      make_samples(domain_spec, b.grid, b.tag, b.domain_bc, b.support_max);
  SampleSpec profile_spec = b.samples;
  profile_spec.seed += 13;
  profile_spec.count = std::min(b.samples.count, 64);
  const auto profiles = make_time_profiles(profile_spec, n_t, b.T);

  rep.M_o = estimate_admissibility(AdmissibilityKind::Observation, b.op, b.S, b.T, samples_state);
  rep.M_c = estimate_admissibility(AdmissibilityKind::Control, b.op, b.S, b.T, samples_state,
                                   profiles);
  rep.M_j = estimate_admissibility(AdmissibilityKind::Joint, b.op, b.S, b.T, samples_state,
                                   profiles);
  rep.M = std::max({rep.M_c, rep.M_o, rep.M_j});

  const ObservabilityEstimate obs =
      estimate_observability(b.obs_mode, b.op, b.S, b.T, samples_domain);
  rep.delta = obs.delta;
  rep.delta_denom_reverted = obs.denom_reverted;
  rep.delta_T1 = (b.T == 1.0)
                     ? obs.delta
                     : estimate_observability(b.obs_mode, b.op, b.S, 1.0, samples_domain).delta;

  std::vector<GridFunction> lip_samples(
      samples_domain.begin(),
      samples_domain.begin() + std::min<size_t>(samples_domain.size(), 48));
  const LipschitzEstimate lip = estimate_lipschitz(b.op, lip_samples);
  rep.k1 = lip.k1;
  rep.k2 = lip.k2;

  std::vector<GridFunction> c_samples(
      samples_domain.begin(),
      samples_domain.begin() + std::min<size_t>(samples_domain.size(), 24));
  const auto sim_cb = [&](const GridFunction& y0, double gain) {
    return b.simulate_closed_loop(y0, gain, step, b.T, 1);
  };

  const auto apply_cap = [&](double a) {
    return (b.mu_cap > 0.0) ? std::min(a, b.mu_cap) : a;
  };
  if (rep.delta > 0.0 && rep.M > 0.0) {
    // c depends on the gain; estimate at a provisional gain, derive the
    // window, then re-estimate at mu* and re-verify q there.
    const double mu0 = apply_cap(0.25 / rep.M) * 0.5;
    const double c0 = estimate_proof_constant_c(b.op, b.S, b.T, mu0, c_samples, sim_cb);
    GainWindow gw = gain_window(rep.M, rep.delta, c0);
    rep.alpha = apply_cap(gw.alpha);
    rep.c = c0;
    if (gw.pass) {
      double mu_star = rep.alpha / 2.0;
      double c_final = estimate_proof_constant_c(b.op, b.S, b.T, mu_star, c_samples, sim_cb);
      double q_star = compute_q(mu_star, rep.delta, rep.M, c_final);
      if (q_star >= 1.0) {
        gw = gain_window(rep.M, rep.delta, c_final);
        rep.alpha = apply_cap(gw.alpha);
        if (gw.pass) {
          mu_star = rep.alpha / 2.0;
          c_final = estimate_proof_constant_c(b.op, b.S, b.T, mu_star, c_samples, sim_cb);
          q_star = compute_q(mu_star, rep.delta, rep.M, c_final);
        }
      }
      rep.c = c_final;
      rep.mu_star = mu_star;
      rep.q_star = q_star;
      rep.pass = gw.pass && q_star < 1.0;
    }
  }

  if (rep.pass) {
    const Trajectory traj =
        b.simulate_closed_loop(b.y0, rep.mu_star, b.dt, b.t_final, b.stride);
    const IterateVerdict iv = verify_iterate_bound(traj, rep.q_star, b.T);
    rep.iterate_pass = iv.pass;
    rep.iterate_k = iv.k_checked;
    const DecayFit fit = fit_decay_rate(traj, b.t_min_fit);
    rep.sigma_emp = fit.sigma;
    rep.m_prime_emp = fit.prefactor;
    rep.nilpotent = fit.nilpotent;
  }

  // Sampling stability: the headline constants under sample doubling.
  SampleSpec doubled = b.samples;
  doubled.count *= 2;
  doubled.seed += 1;
  const auto fresh_state = make_samples(doubled, b.grid, b.tag, SampleBC::None, b.support_max);
  SampleSpec doubled_domain = domain_spec;
  doubled_domain.count *= 2;
  doubled_domain.seed += 1;
  const auto fresh_domain =
      make_samples(doubled_domain, b.grid, b.tag, b.domain_bc, b.support_max);
  const double M_o2 =
      estimate_admissibility(AdmissibilityKind::Observation, b.op, b.S, b.T, fresh_state);
  const double delta2 =
      estimate_observability(b.obs_mode, b.op, b.S, b.T, fresh_domain).delta;
  rep.stability_drift = std::max(rel_drift(M_o2, rep.M_o), rel_drift(delta2, rep.delta));
  rep.stability_ok = rep.stability_drift <= 0.10;

  return rep;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "t,norm,control\n";
  for (size_t i = 0; i < traj.times.size(); ++i)
    out << fmt_double(traj.times[i]) << ',' << fmt_double(traj.norms[i]) << ','
        << fmt_double(traj.control_values[i]) << '\n';
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << text;
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", &tm);
  return buf;
}

struct StageTimer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

}  // namespace

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& log) {
  const ModelBundle b = build_bundle(cfg);
  const fs::path dir = fs::path(cfg.get("out")) / (b.model_id + "-simulate");
  fs::create_directories(dir);
  StageTimer timer;
  const Trajectory traj = run_trajectory(b);
  write_trajectory_csv((dir / "trajectory.csv").string(), traj);
  write_text(dir / "config.cfg", cfg.echo());
  log << "simulate " << b.model_id << ": " << traj.times.size() << " stored steps, final norm "
      << fmt_double(traj.norms.back()) << " (" << fmt_double(timer.seconds()) << " s)\n";
  log << "wrote " << (dir / "trajectory.csv").string() << "\n";
  return kExitOk;
}

int cmd_certify(const ExperimentConfig& cfg, std::ostream& log) {
  const ModelBundle b = build_bundle(cfg);
  const fs::path dir = fs::path(cfg.get("out")) / (b.model_id + "-certify");
  fs::create_directories(dir);
  StageTimer timer;
  const CertificateReport rep = run_certificate_chain(b);
  write_text(dir / "certificate.txt", rep.to_key_value_block());
  write_text(dir / "certificate.csv",
             CertificateReport::csv_header() + "\n" + rep.to_csv_row() + "\n");
  write_text(dir / "config.cfg", cfg.echo());
  log << rep.to_key_value_block();
  log << "certify " << b.model_id << " finished in " << fmt_double(timer.seconds()) << " s\n";
  log << "wrote " << (dir / "certificate.txt").string() << "\n";
  return rep.pass ? kExitOk : kExitCriterionFail;
}

int cmd_reproduce(int example_id, const std::string& out_root, std::ostream& log) {
  if (example_id < 1 || example_id > 3)
    throw ConfigError("reproduce: example id must be 1, 2 or 3");
  const std::string model = "example" + std::to_string(example_id);
  ExperimentConfig cfg = ExperimentConfig::defaults_for(model);
  cfg.finalize();
  const ModelBundle b = build_bundle(cfg);

  const fs::path dir =
      fs::path(out_root) / ("reproduce-" + model + "-" + timestamp_utc());
  fs::create_directories(dir);
  write_text(dir / "config.cfg", cfg.echo());

  std::string runlog;
  auto note = [&](const std::string& line) {
    runlog += line + "\n";
    log << line << "\n";
  };

  StageTimer total;
  StageTimer t_cert;
  const CertificateReport rep = run_certificate_chain(b);
  write_text(dir / "certificate.txt", rep.to_key_value_block());
  write_text(dir / "certificate.csv",
             CertificateReport::csv_header() + "\n" + rep.to_csv_row() + "\n");
  note("stage certify: " + fmt_double(t_cert.seconds()) + " s");
  note("verdict certificate = " + std::string(rep.pass ? "PASS" : "FAIL"));

  StageTimer t_sim;
  const Trajectory traj = run_trajectory(b);
  write_trajectory_csv((dir / "trajectory.csv").string(), traj);
  note("stage simulate(mu=" + fmt_double(b.mu) + "): " + fmt_double(t_sim.seconds()) + " s");

  bool all_pass = rep.pass;
  const DecayFit fit = fit_decay_rate(traj, b.t_min_fit);
  note("canonical_sigma_emp = " + fmt_double(fit.sigma));
  note("canonical_m_prime_emp = " + fmt_double(fit.prefactor));
  if (example_id == 1) {
    bool extinct = true;
    for (size_t i = 0; i < traj.times.size(); ++i)
      if (traj.times[i] >= b.grid.length() && traj.norms[i] != 0.0) extinct = false;
    note("verdict nilpotent_flag = " + std::string(fit.nilpotent ? "PASS" : "FAIL"));
    note("verdict exact_extinction = " + std::string(extinct ? "PASS" : "FAIL"));
    all_pass = all_pass && fit.nilpotent && extinct;
  } else if (example_id == 2) {
    const bool ok = std::abs(fit.sigma - b.mu) <= 0.02 * b.mu;
    note("verdict sigma_within_2pct_of_mu = " + std::string(ok ? "PASS" : "FAIL"));
    all_pass = all_pass && ok;
  } else {
    const bool ok = fit.sigma >= 0.95 * b.mu;
    note("verdict sigma_ge_95pct_of_mu = " + std::string(ok ? "PASS" : "FAIL"));
    all_pass = all_pass && ok;
  }
  note("total: " + fmt_double(total.seconds()) + " s");
  write_text(dir / "run.log", runlog);
  log << "wrote " << dir.string() << "\n";
  return all_pass ? kExitOk : kExitCriterionFail;
}

}  // namespace stabcert
