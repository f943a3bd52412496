#include "stabcert/closedloop.hpp"

#include <algorithm>
#include <cmath>

namespace stabcert {

namespace {

long aligned_count(double span, double step, const char* where) {
  const double r = span / step;
  const long m = std::llround(r);
  if (m < 1 || std::abs(r - static_cast<double>(m)) > 1e-9)
    throw std::invalid_argument(std::string(where) + ": time step must be an exact multiple");
  return m;
}

double law_value(const FeedbackLaw& law, const ControlOperatorModel& op, const TriDiagMatrix* A,
                 const GridFunction& y) {
  double v;
  if (law.kind == FeedbackLaw::Kind::BangBang)
    v = bang_bang_value(op, A, y, law);
  else
    v = -law.mu;
  if (v == 0.0) v = 0.0;  // normalize -0
  return v;
}

struct Recorder {
  Trajectory traj;
  int stride;
  long total_steps;
  void record(long j, double dt, const GridFunction& state, double control) {
    if (j % stride != 0 && j != total_steps) return;
    traj.times.push_back(j * dt);
    traj.norms.push_back(norm(state));
    traj.control_values.push_back(control);
    traj.states.push_back(state);
  }
};

}  // namespace

double bang_bang_value(const ControlOperatorModel& model, const TriDiagMatrix* A,
                       const GridFunction& y, const FeedbackLaw& law) {
  const double by = norm(model.full_apply_discrete(y, A));
  return by > law.eps_rel * norm(y) ? -law.mu : 0.0;
}

Trajectory simulate_example1_exact(const GridFunction& y0, double mu, double alpha, double dt,
                                   double t_final, int stride, const FeedbackLaw* law) {
  if (mu < 0.0) throw std::invalid_argument("example1: mu must be >= 0");
  if (mu * alpha >= 1.0)
    throw std::invalid_argument("example1: requires mu*alpha < 1 for well-posedness");
  const Grid& grid = y0.grid();
  aligned_count(dt, grid.dx(), "example1");
  const long n_steps = aligned_count(t_final, dt, "example1");
  const SemigroupModel S = SemigroupModel::left_shift_cutoff(grid);
  const ControlOperatorModel op = ControlOperatorModel::dirac_trace(alpha);
  const FeedbackLaw fl = law ? *law : FeedbackLaw::output_feedback(mu);

  Recorder rec{{}, stride, n_steps};
  GridFunction state = y0.with_tag(NormTag::L1);
  for (long j = 0; j <= n_steps; ++j) {
    const double v = law_value(fl, op, &S.generator(), state);
    rec.record(j, dt, state, v);
    if (j == n_steps) break;
    state = scaled(S.evaluate(state, dt), std::exp(v * dt));
  }
  return rec.traj;
}

Trajectory simulate_example2_exact(const GridFunction& y0, const GridFunction& k, double mu,
                                   double dt, double t_final, int stride,
                                   const FeedbackLaw* law) {
  if (mu < 0.0) throw std::invalid_argument("example2: mu must be >= 0");
  require_same_grid(y0, k, "example2");
  const Grid& grid = y0.grid();
  const int n = grid.n_cells;
  const double dx = grid.dx();
  const long m = aligned_count(dt, dx, "example2");
  const long n_steps = aligned_count(t_final, dt, "example2");
  const ControlOperatorModel op = ControlOperatorModel::multiplication(k);

  // Support must stay inside the truncation window for the whole run.
  int i_max = -1;
  for (int i = 0; i < n; ++i)
    if (y0[i] != 0.0) i_max = i;
  if (i_max >= 0 && i_max + m * n_steps > n - 1)
    throw std::invalid_argument(
        "example2: support escapes the truncation window; enlarge x_max");

  // Per-cell characteristic integral over one step: int_{x_{i-m}}^{x_i} k.
  std::vector<double> prefix(n, 0.0);
  prefix[0] = k[0];
  for (int i = 1; i < n; ++i) prefix[i] = prefix[i - 1] + k[i];
  std::vector<double> step_base(n, 0.0);
  for (int i = static_cast<int>(m); i < n; ++i) {
    const int a = i - static_cast<int>(m);
    step_base[i] = dt + dx * ((prefix[i - 1] - prefix[a]) + 0.5 * (k[a] + k[i]));
  }

  const FeedbackLaw fl = law ? *law : FeedbackLaw::output_feedback(mu);
  double cached_v = 1.0;  // impossible control value
  std::vector<double> factor(n, 1.0);

  Recorder rec{{}, stride, n_steps};
  GridFunction state = y0.with_tag(NormTag::L1);
  for (long j = 0; j <= n_steps; ++j) {
    const double v = law_value(fl, op, nullptr, state);
    rec.record(j, dt, state, v);
    if (j == n_steps) break;
    if (v != cached_v) {
      for (int i = static_cast<int>(m); i < n; ++i) factor[i] = std::exp(v * step_base[i]);
      cached_v = v;
    }
    std::vector<double> next(n, 0.0);
    for (int i = static_cast<int>(m); i < n; ++i)
      next[i] = state[i - static_cast<int>(m)] * factor[i];
    state = GridFunction(grid, std::move(next), NormTag::L1);
  }
  return rec.traj;
}

namespace {

TriDiagMatrix heat_closedloop_matrix(const TriDiagMatrix& A, const Grid& grid, double v) {
  // A + v (I + D+), D+ with a mirror ghost on the right.
  TriDiagMatrix L = A;
  const double idx = 1.0 / grid.dx();
  for (int i = 0; i < L.n; ++i) {
    const bool last = (i + 1 == L.n);
    L.diag[i] += v * (1.0 + (last ? 0.0 : -idx));
    if (!last) L.sup[i] += v * idx;
  }
  return L;
}

}  // namespace

Trajectory simulate_heat_closedloop(const GridFunction& y0, double mu, double dt, double t_final,
                                    int stride, const FeedbackLaw* law) {
  if (mu < 0.0) throw std::invalid_argument("example3: mu must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("example3: dt must be positive");
  const Grid& grid = y0.grid();
  const long n_steps = aligned_count(t_final, dt, "example3");
  const SemigroupModel S = SemigroupModel::heat_neumann(grid, dt, HeatScheme::ImplicitEuler);
  const ControlOperatorModel op = ControlOperatorModel::identity_plus_derivative();
  const FeedbackLaw fl = law ? *law : FeedbackLaw::output_feedback(mu);

  double cached_v = 1.0;
  TriDiagMatrix L;
  Recorder rec{{}, stride, n_steps};
  GridFunction state = y0.with_tag(NormTag::Sup);
  const double lam = 1.0 / dt;
  for (long j = 0; j <= n_steps; ++j) {
    const double v = law_value(fl, op, nullptr, state);
    rec.record(j, dt, state, v);
    if (j == n_steps) break;
    if (v != cached_v) {
      L = heat_closedloop_matrix(S.generator(), grid, v);
      cached_v = v;
    }
    std::vector<double> rhs(state.size());
    for (int i = 0; i < state.size(); ++i) rhs[i] = lam * state[i];
    state = GridFunction(grid, solve_shifted(L, lam, rhs), NormTag::Sup);
  }
  return rec.traj;
}

Trajectory simulate_upwind_fd(int example, const GridFunction& y0, const GridFunction* k,
                              double mu, double dt, double t_final, int stride) {
  if (example != 1 && example != 2)
    throw std::invalid_argument("simulate_upwind_fd: example must be 1 or 2");
  const Grid& grid = y0.grid();
  const int n = grid.n_cells;
  const double dx = grid.dx();
  if (dt > dx * (1.0 + 1e-12))
    throw std::invalid_argument("simulate_upwind_fd: CFL violation, requires dt <= dx");
  const long n_steps = aligned_count(t_final, dt, "upwind_fd");
  const double cfl = dt / dx;
  if (example == 2 && k != nullptr) require_same_grid(y0, *k, "upwind_fd");

  Recorder rec{{}, stride, n_steps};
  GridFunction state = y0.with_tag(NormTag::L1);
  for (long j = 0; j <= n_steps; ++j) {
    rec.record(j, dt, state, mu == 0.0 ? 0.0 : -mu);
    if (j == n_steps) break;
    std::vector<double> next(n, 0.0);
    if (example == 1) {
      // y_t = y_x - mu y, characteristics move left, ghost y(1) = 0.
      for (int i = 0; i < n; ++i) {
        const double right = (i + 1 < n) ? state[i + 1] : 0.0;
        next[i] = state[i] + cfl * (right - state[i]) - mu * dt * state[i];
      }
    } else {
      // y_t = -y_x - mu (1+k) y, characteristics move right, inflow 0.
      for (int i = 0; i < n; ++i) {
        const double left = (i > 0) ? state[i - 1] : 0.0;
        const double ki = k ? (*k)[i] : 0.0;
        next[i] = state[i] - cfl * (state[i] - left) - mu * dt * (1.0 + ki) * state[i];
      }
    }
    state = GridFunction(grid, std::move(next), NormTag::L1);
  }
  return rec.traj;
}

double vcf_residual(int example, const SemigroupModel& S, const ControlOperatorModel& op,
                    const Trajectory& traj, double mu) {
  if (example != 2 && example != 3)
    throw std::invalid_argument("vcf_residual: verified for examples 2 and 3 only");
  if (traj.times.size() < 2) throw std::invalid_argument("vcf_residual: trajectory too short");
  const double dt = traj.times[1] - traj.times[0];
  for (size_t j = 1; j < traj.times.size(); ++j)
    if (std::abs(traj.times[j] - traj.times[j - 1] - dt) > 1e-9 * std::max(1.0, dt))
      throw std::invalid_argument("vcf_residual: trajectory must be stored at a uniform step");

  // Trapezoid convolution, advanced recursively:
  //   Q_{j+1} = S(dt)(Q_j + dt/2 f_j) + dt/2 f_{j+1},  f_j = B y(t_j).
  OrbitWalker open_loop(S, traj.states[0], dt);
  GridFunction Q = GridFunction::zeros(traj.states[0].grid(), traj.states[0].norm_tag());
  GridFunction f_prev = op.x_part_apply(traj.states[0]);
  double worst = 0.0;
  for (size_t j = 1; j < traj.states.size(); ++j) {
    Q = S.evaluate(add(Q, scaled(f_prev, 0.5 * dt)), dt);
    const GridFunction f_cur = op.x_part_apply(traj.states[j]);
    Q = add(Q, scaled(f_cur, 0.5 * dt));
    f_prev = f_cur;
    open_loop.advance();
    const GridFunction res = add(sub(traj.states[j], open_loop.state()), scaled(Q, mu));
    worst = std::max(worst, norm(res));
  }
  return worst;
}

}  // namespace stabcert
