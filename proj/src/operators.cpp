#include "stabcert/operators.hpp"

#include <algorithm>
#include <cmath>

namespace stabcert {

double boundary_trace_right(const GridFunction& y) {
  const int n = y.size();
  return 1.5 * y[n - 1] - 0.5 * y[n - 2];
}

ControlOperatorModel ControlOperatorModel::dirac_trace(double alpha) {
  ControlOperatorModel m;
  m.kind_ = Kind::DiracTrace;
  m.alpha_ = alpha;
  return m;
}

ControlOperatorModel ControlOperatorModel::multiplication(GridFunction k) {
  ControlOperatorModel m;
  m.kind_ = Kind::Multiplication;
  m.k_l1_ = norm(k.with_tag(NormTag::L1));
  if (!(m.k_l1_ < 1.0))
    throw std::invalid_argument("multiplication: requires ||k||_1 < 1");
  m.k_ = std::move(k);
  return m;
}

ControlOperatorModel ControlOperatorModel::identity_plus_derivative() {
  ControlOperatorModel m;
  m.kind_ = Kind::IdentityPlusDerivative;
  return m;
}

ControlOperatorModel ControlOperatorModel::zero() {
  ControlOperatorModel m;
  m.kind_ = Kind::Zero;
  return m;
}

GridFunction ControlOperatorModel::forward_difference(const GridFunction& y) {
  const int n = y.size();
  const double idx = 1.0 / y.grid().dx();
  std::vector<double> v(n, 0.0);
  for (int i = 0; i + 1 < n; ++i) v[i] = (y[i + 1] - y[i]) * idx;
  v[n - 1] = 0.0;  // mirror ghost
  return GridFunction(y.grid(), std::move(v), y.norm_tag());
}

Observation ControlOperatorModel::observe(const GridFunction& y) const {
  switch (kind_) {
    case Kind::DiracTrace:
      return Observation::of_scalar(alpha_ * boundary_trace_right(y));
    case Kind::Multiplication: {
      require_same_grid(y, k_, "observe");
      std::vector<double> v(y.size());
      for (int i = 0; i < y.size(); ++i) v[i] = k_[i] * y[i];
      return Observation::of_func(GridFunction(y.grid(), std::move(v), y.norm_tag()));
    }
    case Kind::IdentityPlusDerivative:
      return Observation::of_func(add(y, forward_difference(y)));
    case Kind::Zero:
      return Observation::of_func(GridFunction::zeros(y.grid(), y.norm_tag()));
  }
  throw std::logic_error("observe: unknown kind");
}

double ControlOperatorModel::observation_norm(const GridFunction& y) const {
  const Observation o = observe(y);
  return o.is_scalar ? std::abs(o.scalar) : norm(o.func);
}

GridFunction ControlOperatorModel::x_part_apply(const GridFunction& y) const {
  switch (kind_) {
    case Kind::DiracTrace:
      return y;
    case Kind::Multiplication: {
      require_same_grid(y, k_, "x_part_apply");
      std::vector<double> v(y.size());
      for (int i = 0; i < y.size(); ++i) v[i] = (1.0 + k_[i]) * y[i];
      return GridFunction(y.grid(), std::move(v), y.norm_tag());
    }
    case Kind::IdentityPlusDerivative:
      return add(y, forward_difference(y));
    case Kind::Zero:
      return GridFunction::zeros(y.grid(), y.norm_tag());
  }
  throw std::logic_error("x_part_apply: unknown kind");
}

GridFunction ControlOperatorModel::full_apply_discrete(const GridFunction& y,
                                                       const TriDiagMatrix* A) const {
  if (kind_ != Kind::DiracTrace) return x_part_apply(y);
  if (A == nullptr)
    throw std::invalid_argument("full_apply_discrete: DiracTrace needs the generator matrix");
  const double q = alpha_ * boundary_trace_right(y);
  const GridFunction spike = A->apply(GridFunction::constant(y.grid(), y.norm_tag(), q));
  return add(y, spike);
}

GridFunction ControlOperatorModel::b_apply(const Observation& u, const TriDiagMatrix& A,
                                           const Grid& grid, NormTag tag) const {
  if (kind_ == Kind::DiracTrace) {
    if (!u.is_scalar) throw std::invalid_argument("b_apply: DiracTrace takes a scalar input");
    return A.apply(GridFunction::constant(grid, tag, u.scalar));
  }
  if (u.is_scalar) throw std::invalid_argument("b_apply: expected a grid-function input");
  if (kind_ == Kind::Zero) return GridFunction::zeros(grid, tag);
  return u.func;
}

double x_part_pairing(const ControlOperatorModel& model, const GridFunction& y) {
  return pair(model.x_part_apply(y), duality_select(y));
}

FbcResult f_bc_limsup(const TriDiagMatrix& A, const ControlOperatorModel& model,
                      const GridFunction& y, const FbcOptions& opts) {
  FbcResult res;
  const DualityElement j = duality_select(y);
  GridFunction smoothee = GridFunction::zeros(y.grid(), y.norm_tag());
  if (model.kind() == ControlOperatorModel::Kind::DiracTrace) {
    smoothee = model.b_apply(model.observe(y), A, y.grid(), y.norm_tag());
  } else {
    smoothee = model.x_part_apply(y);
  }
  double prev = 0.0;
  bool have_prev = false;
  for (double lambda = opts.lambda_min; lambda <= opts.lambda_max * 1.0001; lambda *= 10.0) {
    const GridFunction z = scaled(resolvent_apply(A, lambda, smoothee), lambda);
    const double f = pair(z, j);
    if (have_prev) {
      const double scale = std::max({std::abs(f), std::abs(prev), 1e-300});
      res.converged = std::abs(f - prev) <= opts.rel_tol * scale;
    }
    res.ladder_values.push_back(f);
    prev = f;
    have_prev = true;
  }
  // limsup: max over the ladder tail
  const size_t m = res.ladder_values.size();
  res.value = res.ladder_values[m - 1];
  if (m >= 2) res.value = std::max(res.value, res.ladder_values[m - 2]);
  return res;
}

double check_a_boundedness(const ControlOperatorModel& model, const TriDiagMatrix& A,
                           std::span<const GridFunction> samples) {
  double worst = 0.0;
  for (const GridFunction& y : samples) {
    const double den = norm(y) + norm(A.apply(y));
    if (den == 0.0) continue;
    worst = std::max(worst, model.observation_norm(y) / den);
  }
  return worst;
}

}  // namespace stabcert
