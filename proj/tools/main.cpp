#include <CLI11.hpp>

#include <iostream>

#include "stripspec/runner.hpp"

using namespace stripspec;

namespace {

int run(const std::string& command, const std::string& config_path,
        const std::string& output_dir, int jobs,
        const std::vector<double>& eps_sweep) {
  RunConfig cfg = load_config(config_path, command);
  if (!output_dir.empty()) cfg.output_dir = output_dir;
  if (jobs > 0) cfg.jobs = jobs;
  if (!eps_sweep.empty()) cfg.eps_sweep = eps_sweep;
  return run_command(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"strip-spectra: Dirichlet spectra and scattering phase on strip domains"};
  app.require_subcommand(1);

  std::string config_path, output_dir;
  int jobs = 0;
  std::vector<double> eps_sweep;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "JSON run configuration")->required();
    sub->add_option("-o,--output-dir", output_dir, "override the config output_dir");
    sub->add_option("-j,--jobs", jobs, "worker limit (STRIP_SPECTRA_JOBS overrides)");
    return sub;
  };

  add_common(app.add_subcommand("eigs", "eigenvalue sweep with extrapolation"));
  auto* phase = add_common(
      app.add_subcommand("phase", "scattering solve and a(phi) extraction"));
  phase->add_option("--eps-sweep", eps_sweep, "first-order-law sweep epsilons");
  add_common(app.add_subcommand("verify", "cross-validated expansion checks"));
  add_common(app.add_subcommand("features", "maximum and nodal-line reports"));
  add_common(app.add_subcommand("mesh-dump", "write the msh-lite triangulation"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, config_path, output_dir, jobs, eps_sweep);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
