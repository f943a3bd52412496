#include "stabcert/semigroup.hpp"

#include <algorithm>
#include <cmath>

namespace stabcert {

namespace {

TriDiagMatrix upwind_left_shift_generator(const Grid& grid) {
  // A = d/dx with y(x_max) = 0 absorbed via a zero ghost cell.
  const int n = grid.n_cells;
  const double idx = 1.0 / grid.dx();
  TriDiagMatrix A = TriDiagMatrix::zero(n, NormTag::L1);
  for (int i = 0; i < n; ++i) {
    A.diag[i] = -idx;
    if (i + 1 < n) A.sup[i] = idx;
  }
  return A;
}

TriDiagMatrix upwind_right_shift_generator(const Grid& grid) {
  // A = -d/dx with inflow y(0) = 0 via a zero ghost cell.
  const int n = grid.n_cells;
  const double idx = 1.0 / grid.dx();
  TriDiagMatrix A = TriDiagMatrix::zero(n, NormTag::L1);
  for (int i = 0; i < n; ++i) {
    A.diag[i] = -idx;
    if (i > 0) A.sub[i] = idx;
  }
  return A;
}

TriDiagMatrix heat_neumann_generator(const Grid& grid) {
  // Second difference with mirror ghost cells (preserves constants exactly).
  const int n = grid.n_cells;
  const double w = 1.0 / (grid.dx() * grid.dx());
  TriDiagMatrix A = TriDiagMatrix::zero(n, NormTag::Sup);
  for (int i = 0; i < n; ++i) {
    const bool left = i > 0, right = i + 1 < n;
    A.diag[i] = -w * ((left ? 1 : 0) + (right ? 1 : 0));
    if (left) A.sub[i] = w;
    if (right) A.sup[i] = w;
  }
  return A;
}

// Splits t into aligned steps, snapping away 1-ulp jitter.
void split_steps(double t, double step, long& full, double& rem) {
  const double s = t / step;
  const double r = std::round(s);
  if (std::abs(s - r) <= 1e-9 * std::max(1.0, std::abs(s))) {
    full = static_cast<long>(r);
    rem = 0.0;
  } else {
    full = static_cast<long>(std::floor(s));
    rem = t - static_cast<double>(full) * step;
  }
}

}  // namespace

SemigroupModel SemigroupModel::left_shift_cutoff(const Grid& grid) {
  SemigroupModel m;
  m.kind_ = Kind::LeftShiftCutoff;
  m.grid_ = grid;
  m.tag_ = NormTag::L1;
  m.generator_ = upwind_left_shift_generator(grid);
  return m;
}

SemigroupModel SemigroupModel::right_shift(const Grid& grid) {
  SemigroupModel m;
  m.kind_ = Kind::RightShift;
  m.grid_ = grid;
  m.tag_ = NormTag::L1;
  m.generator_ = upwind_right_shift_generator(grid);
  return m;
}

SemigroupModel SemigroupModel::heat_neumann(const Grid& grid, double dt, HeatScheme scheme) {
  return implicit_stepper(grid, heat_neumann_generator(grid), dt, scheme, NormTag::Sup);
}

SemigroupModel SemigroupModel::implicit_stepper(const Grid& grid, TriDiagMatrix A, double dt,
                                                HeatScheme scheme, NormTag tag) {
  if (!(dt > 0.0)) throw std::invalid_argument("implicit_stepper: dt must be positive");
  if (A.n != grid.n_cells) throw std::invalid_argument("implicit_stepper: matrix size mismatch");
  SemigroupModel m;
  m.kind_ = Kind::ImplicitStepper;
  m.grid_ = grid;
  m.tag_ = tag;
  m.dt_ = dt;
  m.scheme_ = scheme;
  m.generator_ = std::move(A);
  return m;
}

double SemigroupModel::aligned_step() const {
  return kind_ == Kind::ImplicitStepper ? dt_ : grid_.dx();
}

namespace {

std::vector<double> stepper_step(const TriDiagMatrix& A, HeatScheme scheme, double dt,
                                 const std::vector<double>& y) {
  if (scheme == HeatScheme::ImplicitEuler) {
    std::vector<double> rhs(y.size());
    const double lam = 1.0 / dt;
    for (size_t i = 0; i < y.size(); ++i) rhs[i] = lam * y[i];
    return solve_shifted(A, lam, rhs);
  }
  // Crank-Nicolson: (I - dt/2 A) y1 = (I + dt/2 A) y0.
  std::vector<double> ay = A.apply(y);
  const double lam = 2.0 / dt;
  std::vector<double> rhs(y.size());
  for (size_t i = 0; i < y.size(); ++i) rhs[i] = lam * y[i] + ay[i];
  return solve_shifted(A, lam, rhs);
}

}  // namespace

SemigroupModel::EvalResult SemigroupModel::evaluate_ex(const GridFunction& y0, double t) const {
  if (t < 0.0) throw std::invalid_argument("semigroup evaluate: t must be >= 0");
  if (!(y0.grid() == grid_))
    throw std::invalid_argument("semigroup evaluate: state on a different grid");
  EvalResult res{y0, false};
  if (t == 0.0) return res;

  const int n = grid_.n_cells;
  if (kind_ == Kind::ImplicitStepper) {
    long full = 0;
    double rem = 0.0;
    split_steps(t, dt_, full, rem);
    std::vector<double> v = y0.values();
    for (long j = 0; j < full; ++j) v = stepper_step(generator_, scheme_, dt_, v);
    if (rem > 0.0) v = stepper_step(generator_, scheme_, rem, v);
    res.state = GridFunction(grid_, std::move(v), tag_);
    return res;
  }

  // Shifts. Nilpotent cutoff: the left shift is exactly zero past the window.
  if (kind_ == Kind::LeftShiftCutoff && t >= grid_.length()) {
    res.state = GridFunction::zeros(grid_, tag_);
    return res;
  }
  long m = 0;
  double rem = 0.0;
  split_steps(t, grid_.dx(), m, rem);
  const double theta = rem / grid_.dx();
  std::vector<double> v(n, 0.0);
  const auto& y = y0.values();
  if (kind_ == Kind::LeftShiftCutoff) {
    if (theta == 0.0) {
      for (int i = 0; i < n; ++i)
        if (i + m < n) v[i] = y[i + m];
    } else {
      res.interpolated = true;
      for (int i = 0; i < n; ++i) {
        // value at x_i + t, zero past the cutoff
        if (grid_.center(i) + t > grid_.x_max) continue;
        const long a = i + m;
        const double ya = (a >= 0 && a < n) ? y[a] : 0.0;
        const double yb = (a + 1 >= 0 && a + 1 < n) ? y[a + 1] : 0.0;
        v[i] = (1.0 - theta) * ya + theta * yb;
      }
    }
  } else {  // RightShift
    if (theta == 0.0) {
      for (int i = 0; i < n; ++i)
        if (i - m >= 0) v[i] = y[i - m];
    } else {
      res.interpolated = true;
      for (int i = 0; i < n; ++i) {
        if (grid_.center(i) - t < grid_.x_min) continue;
        const long a = i - m - 1;
        const double ya = (a >= 0 && a < n) ? y[a] : 0.0;
        const double yb = (a + 1 >= 0 && a + 1 < n) ? y[a + 1] : 0.0;
        v[i] = theta * ya + (1.0 - theta) * yb;
      }
    }
  }
  res.state = GridFunction(grid_, std::move(v), tag_);
  return res;
}

GridFunction SemigroupModel::evaluate(const GridFunction& y0, double t) const {
  return evaluate_ex(y0, t).state;
}

GridFunction SemigroupModel::step_aligned(const GridFunction& y) const {
  if (kind_ == Kind::ImplicitStepper)
    return GridFunction(grid_, stepper_step(generator_, scheme_, dt_, y.values()), tag_);
  const int n = grid_.n_cells;
  std::vector<double> v(n, 0.0);
  if (kind_ == Kind::LeftShiftCutoff) {
    for (int i = 0; i + 1 < n; ++i) v[i] = y[i + 1];
  } else {
    for (int i = n - 1; i >= 1; --i) v[i] = y[i - 1];
  }
  return GridFunction(grid_, std::move(v), tag_);
}

OrbitWalker::OrbitWalker(const SemigroupModel& model, GridFunction y0, double step)
    : model_(&model), state_(std::move(y0)), step_(step) {
  const double base = model.aligned_step();
  const double r = step / base;
  substeps_ = static_cast<int>(std::llround(r));
  if (substeps_ < 1 || std::abs(r - substeps_) > 1e-9)
    throw std::invalid_argument("OrbitWalker: step must be a positive multiple of the aligned step");
}

void OrbitWalker::advance() {
  for (int j = 0; j < substeps_; ++j) state_ = model_->step_aligned(state_);
  ++steps_taken_;
}

double semigroup_law_residual(const SemigroupModel& model, const GridFunction& y0, double t,
                              double s) {
  if (t < 0.0 || s < 0.0)
    throw std::invalid_argument("semigroup_law_residual: t, s must be >= 0");
  const GridFunction lhs = model.evaluate(model.evaluate(y0, s), t);
  const GridFunction rhs = model.evaluate(y0, t + s);
  return norm(sub(lhs, rhs));
}

GridFunction resolvent_apply(const TriDiagMatrix& A, double lambda, const GridFunction& z) {
  if (!(lambda > 0.0)) throw std::invalid_argument("resolvent_apply: lambda must be positive");
  return GridFunction(z.grid(), solve_shifted(A, lambda, z.values()), z.norm_tag());
}

GridFunction resolvent_smoother(const TriDiagMatrix& A,
                                const std::function<GridFunction(const GridFunction&)>& b_apply,
                                double lambda, const GridFunction& u) {
  return scaled(resolvent_apply(A, lambda, b_apply(u)), lambda);
}

}  // namespace stabcert
