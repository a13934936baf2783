#include <CLI11.hpp>
#include <thread>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"spatial risk measures for Gaussian fields over disks and squares"};
  app.require_subcommand(1);

  spatrisk::cli::CommonOptions options;
  options.threads = std::max(1u, std::thread::hardware_concurrency());
  bool inject_failure = false;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    if (needs_config)
      cmd->add_option("--config", options.config_path, "JSON config file")
          ->required();
    cmd->add_option("--seed", options.seed, "master RNG seed");
    cmd->add_option("--out", options.out_path, "output file (CSV or report)");
    cmd->add_option("--threads", options.threads, "worker thread count");
    cmd->add_option("--tolerance", options.tolerance,
                    "absolute quadrature tolerance");
  };

  CLI::App* risk = app.add_subcommand("risk", "compute (r0, r1) for one configuration");
  add_common(risk, true);
  CLI::App* curve = app.add_subcommand("curve", "parameter sweeps of G or r1 as CSV");
  add_common(curve, true);
  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo estimation / relative-error study");
  add_common(mc, true);
  CLI::App* validate = app.add_subcommand("validate", "run the cross-module oracle suite");
  add_common(validate, false);
  validate
      ->add_flag("--inject-failure", inject_failure,
                 "corrupt one tolerance; the suite must then fail (self-test)")
      ->group("");  // hidden test hook
  CLI::App* piemonte = app.add_subcommand("piemonte", "PM10 case study reproduction");
  add_common(piemonte, false);

  CLI11_PARSE(app, argc, argv);

  if (risk->parsed()) return spatrisk::cli::cmd_risk(options);
  if (curve->parsed()) return spatrisk::cli::cmd_curve(options);
  if (mc->parsed()) return spatrisk::cli::cmd_mc(options);
  if (validate->parsed()) return spatrisk::cli::cmd_validate(options, inject_failure);
  if (piemonte->parsed()) return spatrisk::cli::cmd_piemonte(options);
  return 1;
}
