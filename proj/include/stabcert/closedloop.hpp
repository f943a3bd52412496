#pragma once

#include "stabcert/operators.hpp"

namespace stabcert {

// u = -mu*Cy (constant gain) or the switching law v = -mu*1{By != 0}.
struct FeedbackLaw {
  enum class Kind { OutputFeedback, BangBang };

  Kind kind = Kind::OutputFeedback;
  double mu = 0.0;
  double eps_rel = 1e-12;  // relative zero threshold for the switching test

  static FeedbackLaw output_feedback(double mu) { return {Kind::OutputFeedback, mu, 0.0}; }
  static FeedbackLaw bang_bang(double mu, double eps_rel = 1e-12) {
    return {Kind::BangBang, mu, eps_rel};
  }
};

// Time-stamped closed-loop run: states, their norms and the control value
// in effect at each stored time.
struct Trajectory {
  std::vector<double> times;
  std::vector<double> norms;
  std::vector<double> control_values;
  std::vector<GridFunction> states;
};

// -mu if ||By|| > eps_rel*||y||, else 0.
double bang_bang_value(const ControlOperatorModel& model, const TriDiagMatrix* A,
                       const GridFunction& y, const FeedbackLaw& law);

// Example 1 (transport on (0,1), Dirac-trace class) in its reduced
// absorbed-boundary form y(t) = e^{-mu t} S(t) y0, valid for 0 <= mu*alpha < 1.
// dt must be a multiple of dx.
Trajectory simulate_example1_exact(const GridFunction& y0, double mu, double alpha,
                                   double dt, double t_final, int stride = 1,
                                   const FeedbackLaw* law = nullptr);

// Example 2 (right shift on (0,x_max), multiplication by 1+k) by exact
// characteristics: y(x,t) = y0(x-t) exp(-mu t - mu int_{x-t}^x k).
// Throws if support reaches the truncation boundary during the run.
Trajectory simulate_example2_exact(const GridFunction& y0, const GridFunction& k, double mu,
                                   double dt, double t_final, int stride = 1,
                                   const FeedbackLaw* law = nullptr);

// Example 3: implicit-Euler steps of y_t = y_xx - mu (y + y_x) with Neumann
// boundary conditions.
Trajectory simulate_heat_closedloop(const GridFunction& y0, double mu, double dt,
                                    double t_final, int stride = 1,
                                    const FeedbackLaw* law = nullptr);

// First-order upwind cross-validation scheme for examples 1 and 2
// (k empty for example 1). Requires the CFL condition dt <= dx.
Trajectory simulate_upwind_fd(int example, const GridFunction& y0, const GridFunction* k,
                              double mu, double dt, double t_final, int stride = 1);

// Max over stored times of || y(t) - S(t)y0 + mu * int_0^t S(t-s) By(s) ds ||
// with the time integral by the trapezoid rule on the stored steps.
// example selects the operator: 2 -> (1+k)*y on the right shift,
// 3 -> y + D+ y on the Neumann heat stepper.
double vcf_residual(int example, const SemigroupModel& S, const ControlOperatorModel& op,
                    const Trajectory& traj, double mu);

}  // namespace stabcert
