#pragma once

#include <iosfwd>

#include "stabcert/certificates.hpp"
#include "stabcert/config.hpp"

namespace stabcert {

// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 1,
  kExitCriterionFail = 2,
  kExitNumericalFailure = 3,
};

// Everything needed to run one configured model: grid, semigroup, operator,
// initial state and the closed-loop integrator.
struct ModelBundle {
  std::string model_id;
  Grid grid;
  NormTag tag = NormTag::L1;
  SemigroupModel S;
  ControlOperatorModel op;
  GridFunction y0;
  double mu = 0.0;
  double T = 1.0;
  double dt = 0.0;
  double t_final = 0.0;
  double t_min_fit = 0.0;
  int stride = 1;
  FeedbackLaw law;
  SampleSpec samples;
  ObservabilityMode obs_mode = ObservabilityMode::Miyadera;
  SampleBC domain_bc = SampleBC::None;
  double support_max = 0.0;  // sample support window for shift models
  double mu_cap = 0.0;       // well-posedness gain cap (0 = none)

  Trajectory simulate_closed_loop(const GridFunction& start, double gain, double step,
                                  double t_end, int out_stride,
                                  const FeedbackLaw* fl = nullptr) const;
};

ModelBundle build_bundle(const ExperimentConfig& cfg);

Trajectory run_trajectory(const ModelBundle& b);
CertificateReport run_certificate_chain(const ModelBundle& b);

void write_trajectory_csv(const std::string& path, const Trajectory& traj);

// CLI entry points; they write artifacts under the config's out directory
// and return an exit code.
int cmd_simulate(const ExperimentConfig& cfg, std::ostream& log);
int cmd_certify(const ExperimentConfig& cfg, std::ostream& log);
int cmd_reproduce(int example_id, const std::string& out_root, std::ostream& log);

}  // namespace stabcert
