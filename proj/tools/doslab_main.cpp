#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "doslab/config.hpp"
#include "doslab/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"doslab: finite-volume density-of-states laboratory for random contractions"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  int threads = 1;
  double tol = -1.0;
  app.add_option("--config", config_path, "JSON experiment configuration")->required();
  app.add_option("--out", out_dir, "output directory (overrides config 'outputs')");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--tol", tol, "tolerance override for cross-checks");

  CLI::App* cmd_spectrum = app.add_subcommand("spectrum", "eigenvalue scatters and spectral radii");
  CLI::App* cmd_dos = app.add_subcommand("dos", "DOS functional along all evaluation routes");
  CLI::App* cmd_converge = app.add_subcommand("converge", "window-sweep convergence tables");
  CLI::App* cmd_kernels = app.add_subcommand("kernels", "kernel representations and identities");
  CLI::App* cmd_validate = app.add_subcommand("validate", "invariant suite for the configured model");

  CLI11_PARSE(app, argc, argv);

  try {
    doslab::ExperimentConfig cfg = doslab::load_config(config_path);
    if (tol > 0.0) cfg.tol = tol;
    std::filesystem::path outdir = !out_dir.empty() ? out_dir
                                   : !cfg.outputs.empty() ? cfg.outputs
                                                          : std::string("out");
    int failures = 0;
    if (cmd_spectrum->parsed()) failures = doslab::run_spectrum(cfg, outdir, threads);
    else if (cmd_dos->parsed()) failures = doslab::run_dos(cfg, outdir, threads);
    else if (cmd_converge->parsed()) failures = doslab::run_converge(cfg, outdir, threads);
    else if (cmd_kernels->parsed()) failures = doslab::run_kernels(cfg, outdir, threads);
    else if (cmd_validate->parsed()) failures = doslab::run_validate(cfg, outdir, threads);

    if (failures > 0) {
      std::cerr << failures << " check(s) failed; see the CSV reports in " << outdir << "\n";
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
