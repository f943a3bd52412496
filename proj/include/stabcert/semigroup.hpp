#pragma once

#include <functional>

#include "stabcert/grid.hpp"
#include "stabcert/tridiag.hpp"

namespace stabcert {

enum class HeatScheme { ImplicitEuler, CrankNicolson };

// Evaluators for the model semigroups:
//   LeftShiftCutoff  (S(t)y)(x) = y(x+t) for x+t <= 1, else 0    (L1, nilpotent)
//   RightShift       (S(t)y)(x) = y(x-t) for x-t >= 0, else 0    (L1, isometry)
//   ImplicitStepper  repeated implicit steps of a tridiagonal generator
//                    (heat with Neumann boundary, or a user matrix)
//
// Shifts are exact for t a multiple of dx and linearly interpolated
// otherwise (flagged via evaluate_ex). The stepper shortens the last
// partial step.
class SemigroupModel {
 public:
  enum class Kind { LeftShiftCutoff, RightShift, ImplicitStepper };

  SemigroupModel() = default;  // empty placeholder; use the factories

  static SemigroupModel left_shift_cutoff(const Grid& grid);
  static SemigroupModel right_shift(const Grid& grid);
  static SemigroupModel heat_neumann(const Grid& grid, double dt, HeatScheme scheme);
  static SemigroupModel implicit_stepper(const Grid& grid, TriDiagMatrix A, double dt,
                                         HeatScheme scheme, NormTag tag);

  Kind kind() const { return kind_; }
  const Grid& grid() const { return grid_; }
  NormTag norm_tag() const { return tag_; }
  double dt() const { return dt_; }
  HeatScheme scheme() const { return scheme_; }
  const TriDiagMatrix& generator() const { return generator_; }

  // Smallest t-step the evaluator handles exactly (dx for shifts, dt for steppers).
  double aligned_step() const;

  GridFunction evaluate(const GridFunction& y0, double t) const;

  struct EvalResult {
    GridFunction state;
    bool interpolated = false;  // shift evaluated off the cell grid
  };
  EvalResult evaluate_ex(const GridFunction& y0, double t) const;

  // One exact-aligned step of size aligned_step() (used by orbit walkers).
  GridFunction step_aligned(const GridFunction& y) const;

 private:
  Kind kind_ = Kind::LeftShiftCutoff;
  Grid grid_;
  NormTag tag_ = NormTag::L1;
  double dt_ = 0.0;
  HeatScheme scheme_ = HeatScheme::ImplicitEuler;
  TriDiagMatrix generator_;
};

// Walks S(j * step) y0 incrementally; step must be a positive multiple of
// the model's aligned step.
class OrbitWalker {
 public:
  OrbitWalker(const SemigroupModel& model, GridFunction y0, double step);
  const GridFunction& state() const { return state_; }
  double time() const { return steps_taken_ * step_; }
  void advance();

 private:
  const SemigroupModel* model_;
  GridFunction state_;
  double step_;
  int substeps_;
  long steps_taken_ = 0;
};

// || S(t) S(s) y0 - S(t+s) y0 ||.
double semigroup_law_residual(const SemigroupModel& model, const GridFunction& y0,
                              double t, double s);

// Solves (lambda*I - A) w = z.
GridFunction resolvent_apply(const TriDiagMatrix& A, double lambda, const GridFunction& z);

// B_lambda u = lambda (lambda*I - A)^{-1} (B u) on the discrete level.
GridFunction resolvent_smoother(const TriDiagMatrix& A,
                                const std::function<GridFunction(const GridFunction&)>& b_apply,
                                double lambda, const GridFunction& u);

}  // namespace stabcert
