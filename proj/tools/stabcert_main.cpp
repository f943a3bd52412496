// stabcert: simulate and certify bang-bang / output-feedback stabilization
// of the transport and heat model systems on L1 and sup-norm state spaces.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "stabcert/runner.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string model;
  std::string mu, T, dx, dt, t_final, y0, seed, out;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "configuration file (key = value)");
    cmd->add_option("--model", model, "model id: example1|example2|example3|matrix");
    cmd->add_option("--mu", mu, "gain");
    cmd->add_option("--T", T, "certificate horizon");
    cmd->add_option("--dx", dx, "grid spacing (overrides grid.n_cells)");
    cmd->add_option("--dt", dt, "time step");
    cmd->add_option("--t-final", t_final, "simulation end time");
    cmd->add_option("--y0", y0, "initial data: const:c | bump:center,width | random:seed");
    cmd->add_option("--seed", seed, "sample seed");
    cmd->add_option("--out", out, "output directory");
  }

  stabcert::ExperimentConfig build() const {
    stabcert::ExperimentConfig cfg;
    if (!config_path.empty()) {
      cfg = stabcert::ExperimentConfig::from_file(config_path);
    } else if (model.empty()) {
      throw stabcert::ConfigError("model: pass --model or --config");
    }
    if (!model.empty()) cfg.set("model", model);
    if (!mu.empty()) cfg.set("mu", mu);
    if (!T.empty()) cfg.set("time.T", T);
    if (!dx.empty()) cfg.set("grid.dx", dx);
    if (!dt.empty()) cfg.set("time.dt", dt);
    if (!t_final.empty()) cfg.set("time.t_final", t_final);
    if (!y0.empty()) cfg.set("y0", y0);
    if (!seed.empty()) cfg.set("samples.seed", seed);
    if (!out.empty()) cfg.set("out", out);
    cfg.finalize();
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"closed-loop simulation and stabilization certificates"};
  app.require_subcommand(1);

  CommonFlags sim_flags, cert_flags;
  CLI::App* sim = app.add_subcommand("simulate", "run one closed-loop trajectory, emit CSV");
  sim_flags.attach(sim);
  CLI::App* cert = app.add_subcommand("certify", "estimate constants, gain window and q");
  cert_flags.attach(cert);

  int example_id = 0;
  std::string repro_out = "runs";
  CLI::App* repro = app.add_subcommand("reproduce", "run the canonical setup of one example");
  repro->add_option("example", example_id, "example id (1, 2 or 3)")->required();
  repro->add_option("--out", repro_out, "output root directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : stabcert::kExitConfigError;
  }

  try {
    if (sim->parsed()) return stabcert::cmd_simulate(sim_flags.build(), std::cout);
    if (cert->parsed()) return stabcert::cmd_certify(cert_flags.build(), std::cout);
    return stabcert::cmd_reproduce(example_id, repro_out, std::cout);
  } catch (const stabcert::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return stabcert::kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return stabcert::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return stabcert::kExitNumericalFailure;
  }
}
