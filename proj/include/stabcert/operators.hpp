#pragma once

#include <optional>
#include <span>

#include "stabcert/duality.hpp"
#include "stabcert/semigroup.hpp"

namespace stabcert {

// Observation value Cy: a scalar (boundary trace) or a grid function.
struct Observation {
  bool is_scalar = false;
  double scalar = 0.0;
  GridFunction func;

  static Observation of_scalar(double v) {
    Observation o;
    o.is_scalar = true;
    o.scalar = v;
    return o;
  }
  static Observation of_func(GridFunction f) {
    Observation o;
    o.func = std::move(f);
    return o;
  }
};

// The control/observation operator classes:
//
//   DiracTrace             Cy = alpha*y(1) (trace by linear extrapolation),
//                          Bq = q*A_{-1}a with a == 1; the X-part of the
//                          composite acts as the identity.
//   Multiplication         full operator (1+k)*y, unbounded part k*y, the
//                          embedding as control; requires ||k||_1 < 1.
//   IdentityPlusDerivative y + D+ y with a one-sided forward difference.
//   Zero                   everything zero (matrix-mode null operator).
class ControlOperatorModel {
 public:
  enum class Kind { DiracTrace, Multiplication, IdentityPlusDerivative, Zero };

  ControlOperatorModel() = default;  // the zero operator

  static ControlOperatorModel dirac_trace(double alpha);
  static ControlOperatorModel multiplication(GridFunction k);
  static ControlOperatorModel identity_plus_derivative();
  static ControlOperatorModel zero();

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  const GridFunction& k() const { return k_; }
  double k_l1_norm() const { return k_l1_; }

  // Observation map used in the admissibility estimates: alpha*y(1),
  // k*y, y + D+ y, or 0.
  Observation observe(const GridFunction& y) const;
  double observation_norm(const GridFunction& y) const;  // ||Cy||_U

  // The projection _X of the composite onto X: identity, (1+k)*y, y + D+ y, 0.
  GridFunction x_part_apply(const GridFunction& y) const;

  // Full operator with any extrapolation-space part represented on the grid
  // (DiracTrace needs the discrete generator to place q*A a).
  GridFunction full_apply_discrete(const GridFunction& y, const TriDiagMatrix* A) const;

  // B u as a grid-level vector: DiracTrace maps a scalar to A(u*1); the
  // other classes are embeddings.
  GridFunction b_apply(const Observation& u, const TriDiagMatrix& A, const Grid& grid,
                       NormTag tag) const;

  // One-sided forward difference with mirror ghost at the right end.
  static GridFunction forward_difference(const GridFunction& y);

 private:
  Kind kind_ = Kind::Zero;
  double alpha_ = 0.0;
  GridFunction k_;
  double k_l1_ = 0.0;
};

// Boundary trace y(1) reconstructed by linear extrapolation from the last
// two cell values.
double boundary_trace_right(const GridFunction& y);

// <_X(BC) y, J(y)>.
double x_part_pairing(const ControlOperatorModel& model, const GridFunction& y);

struct FbcOptions {
  double lambda_min = 1e1;
  double lambda_max = 1e10;  // ladder in powers of 10
  double rel_tol = 1e-8;     // successive-value stabilization threshold
};

struct FbcResult {
  double value = 0.0;
  bool converged = false;
  std::vector<double> ladder_values;
};

// f_BC(y) = limsup_lambda <B_lambda C y, J(y)> evaluated along the lambda
// ladder; returns the max over the tail with a convergence flag.
FbcResult f_bc_limsup(const TriDiagMatrix& A, const ControlOperatorModel& model,
                      const GridFunction& y, const FbcOptions& opts = {});

// sup over samples of ||By|| / (||y|| + ||Ay||), samples from discrete D(A).
double check_a_boundedness(const ControlOperatorModel& model, const TriDiagMatrix& A,
                           std::span<const GridFunction> samples);

}  // namespace stabcert
