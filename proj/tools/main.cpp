#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace cli = dynsis::cli;

int main(int argc, char** argv) {
  CLI::App app{"SIS epidemics on dynamic networks with a degree cap"};
  app.require_subcommand(1);

  std::string config_path;
  std::string degrees_path;
  std::string method_name;
  cli::Overrides overrides;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "INI run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", overrides.seed, "master seed (overrides run.seed)");
    sub->add_option("--out", overrides.out, "output path ('-' for stdout)");
    sub->add_option("--threads", overrides.threads, "worker threads, 0 = all cores");
  };

  auto* ode = app.add_subcommand("ode-run", "integrate the effective-degree ODE");
  add_common(ode);
  auto* sim = app.add_subcommand("sim-run", "run a Gillespie ensemble");
  add_common(sim);
  sim->add_option("--runs", overrides.runs, "number of realisations");
  auto* r0 = app.add_subcommand("r0", "basic reproduction number at the disease-free state");
  add_common(r0);
  auto* sweep = app.add_subcommand("threshold-sweep", "bisect the critical omega for each beta");
  add_common(sweep);
  sweep->add_option("--method", method_name, "ode-prevalence | ngm-r0 | simulation")
      ->check(CLI::IsMember({"ode-prevalence", "ngm-r0", "simulation"}));
  sweep->add_option("--runs", overrides.runs, "realisations per simulation vote");
  auto* netgen = app.add_subcommand("netgen", "write the configured initial network as an edge list");
  add_common(netgen);
  netgen->add_option("--degrees", degrees_path, "also write the degree sequence CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitConfig;
  }

  return cli::guarded(std::cerr, [&] {
    if (!method_name.empty()) overrides.method = dynsis::parse_method(method_name);
    const auto config = cli::resolve_config(config_path, overrides);
    if (ode->parsed()) cli::cmd_ode_run(config, std::cout);
    if (sim->parsed()) cli::cmd_sim_run(config, std::cout);
    if (r0->parsed()) cli::cmd_r0(config, std::cout);
    if (sweep->parsed()) cli::cmd_threshold_sweep(config, std::cout);
    if (netgen->parsed()) cli::cmd_netgen(config, degrees_path, std::cout);
  });
}
