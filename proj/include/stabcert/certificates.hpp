#pragma once

#include <functional>
#include <string>

#include "stabcert/closedloop.hpp"
#include "stabcert/sampling.hpp"

namespace stabcert {

enum class AdmissibilityKind { Control, Observation, Joint };

enum class ObservabilityMode {
  XPart,     // int <_X(BC) S(t)y, J(S(t)y)> dt >= delta ||S(T)y||^2
  Fbc,       // int f_BC(S(t)y) dt            >= delta ||S(T)y||^2
  Miyadera,  // int <B S(t)y, J(S(t)y)> dt    >= delta ||y||^2
};

// Estimated admissibility constant: max over samples of the relevant ratio,
// with time integrals on steps aligned to the evaluator (dx for shifts,
// dt for steppers).
double estimate_admissibility(AdmissibilityKind kind, const ControlOperatorModel& model,
                              const SemigroupModel& S, double T,
                              const std::vector<GridFunction>& samples,
                              const std::vector<std::vector<double>>& time_profiles = {});

struct ObservabilityEstimate {
  double delta = 0.0;
  bool denom_reverted = false;  // ||S(T)y|| vanished; used ||y||^2 instead
};

// Min over samples of the observability ratio. Samples with zero denominator
// after reversion are skipped; throws if all are skipped.
ObservabilityEstimate estimate_observability(ObservabilityMode mode,
                                             const ControlOperatorModel& model,
                                             const SemigroupModel& S, double T,
                                             const std::vector<GridFunction>& samples);

struct LipschitzEstimate {
  double k1 = 0.0;
  double k2 = 0.0;
};

// Smallest (k1,k2) on a grid such that for all sampled pairs (y,z)
//   |F(y)-F(z)| <= k1 (||y||_{D(C)} + ||z||_{D(C)}) ||y-z||
//              + k2 (||y|| + ||z||) ||C(y-z)||
// where F(y) = <_X(BC)y, J(y)> and ||y||_{D(C)} = ||y|| + ||Cy||.
// Ties are broken by minimizing max(k1,k2), then k1+k2 (empirical lower
// bound on the true constants).
LipschitzEstimate estimate_lipschitz(const ControlOperatorModel& model,
                                     const std::vector<GridFunction>& samples);

// Max over samples y0 of
//   [int_0^T <_X(BC)S(t)y0, J(S(t)y0)> dt - int_0^T <BC y(t), J(y(t))> dt] / (mu ||y0||^2)
// clipped at 0; closed-loop trajectories supplied by the caller.
double estimate_proof_constant_c(const ControlOperatorModel& model, const SemigroupModel& S,
                                 double T, double mu, const std::vector<GridFunction>& samples,
                                 const std::function<Trajectory(const GridFunction&, double)>&
                                     simulate_closed_loop);

// q(mu) = (1 + 2 mu^2 (delta mu (M^2/(1-M mu))^2 + c)) / (1 + 2 mu delta).
// Requires 0 < mu < 1/M.
double compute_q(double mu, double delta, double M, double c);

struct GainWindow {
  double alpha = 0.0;
  bool pass = false;
};

// Largest mu_bar <= 1/(2M) with q(mu) < 1 on a grid in (0, mu_bar];
// alpha = 0 with pass = false when no grid point qualifies.
GainWindow gain_window(double M, double delta, double c, int grid_points = 400);

struct IterateVerdict {
  bool pass = false;
  double worst_margin = 0.0;  // max over k of norms(kT)^2 - q^k norms(0)^2
  int k_checked = 0;
};

// Checks norms(kT)^2 <= q^k norms(0)^2 (1 + 1e-6) at every stored multiple
// of T. Throws if the trajectory is shorter than 2T.
IterateVerdict verify_iterate_bound(const Trajectory& traj, double q, double T);

struct DecayFit {
  double sigma = 0.0;      // fitted decay rate (-slope of ln||y|| vs t)
  double prefactor = 0.0;  // e^{intercept} / ||y0||
  bool nilpotent = false;  // norms reached exact zero
};

// Least-squares line fit of ln(norm) vs t over [t_min, t_final]; requires
// at least 5 usable samples unless the trajectory is nilpotent.
DecayFit fit_decay_rate(const Trajectory& traj, double t_min);

// Estimated constants for one model, the derived gain window and decay
// factor, and the empirical decay fit of the closed-loop run at mu*.
struct CertificateReport {
  std::string model_id;
  double T = 0.0;
  double M_c = 0.0, M_o = 0.0, M_j = 0.0, M = 0.0;
  double delta = 0.0;
  double delta_T1 = 0.0;  // the same estimate at horizon T = 1
  bool delta_denom_reverted = false;
  double c = 0.0;
  double k1 = 0.0, k2 = 0.0;
  double alpha = 0.0;
  double mu_star = 0.0;
  double q_star = 0.0;
  bool iterate_pass = false;
  int iterate_k = 0;
  double sigma_emp = 0.0;
  double m_prime_emp = 0.0;
  bool nilpotent = false;
  bool stability_ok = true;
  double stability_drift = 0.0;  // worst relative change under sample doubling
  bool pass = false;             // delta > 0 and q(mu*) < 1

  std::string to_key_value_block() const;
  static std::string csv_header();
  std::string to_csv_row() const;
};

}  // namespace stabcert
