#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>

#include "dynsis/csv.hpp"
#include "dynsis/error.hpp"
#include "dynsis/netgen.hpp"
#include "dynsis/ngm.hpp"
#include "dynsis/ode.hpp"
#include "dynsis/simulation.hpp"
#include "dynsis/sweep.hpp"

namespace dynsis::cli {

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  out.precision(17);
  return out;
}

template <typename Writer>
void emit(const std::string& path, std::ostream& console, Writer&& write) {
  if (path.empty() || path == "-") {
    write(console);
    return;
  }
  auto out = open_output(path);
  write(out);
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace

RunConfig resolve_config(const std::string& path, const Overrides& overrides) {
  RunConfig cfg = load_run_config(path);
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.out) cfg.out = *overrides.out;
  if (overrides.method) cfg.sweep.method = *overrides.method;
  if (overrides.runs) {
    cfg.runs = *overrides.runs;
    cfg.sweep.sim_runs = *overrides.runs;
  }
  if (overrides.threads) cfg.threads = *overrides.threads;
  cfg.validate();
  return cfg;
}

void cmd_ode_run(const RunConfig& config, std::ostream& console) {
  const auto& p = config.params;
  const auto dist = config.network.distribution(p.max_degree);
  const auto x0 = initial_state(dist, static_cast<double>(config.initial_infected) / p.population, p.population);
  Trajectory traj;
  if (config.t_max == 0.0)
    traj.append(0.0, x0);
  else
    traj = integrate(x0, p, config.t_max, config.sample_dt, config.integrator);
  emit(config.out, console, [&](std::ostream& out) { traj.write_csv(out); });
}

void cmd_sim_run(const RunConfig& config, std::ostream& console) {
  if (config.out.empty() || config.out == "-") throw ConfigError("sim-run needs an output path (run.out or --out)");
  EnsembleOptions options;
  options.threads = config.threads;
  const auto result = ensemble(make_graph_factory(config), config.params, config.runs, config.t_max,
                               config.sample_dt, config.seed, options);
  emit(config.out, console, [&](std::ostream& out) { result.write_runs_csv(out); });
  emit(config.out + ".summary.csv", console, [&](std::ostream& out) { result.write_summary_csv(out); });
  console << "wrote " << config.runs << " runs to " << config.out << '\n';
}

void cmd_r0(const RunConfig& config, std::ostream& console) {
  std::vector<double> betas = config.sweep.betas;
  if (betas.empty()) betas.push_back(config.params.beta);
  const int m = config.params.max_degree;
  const auto dist = config.network.distribution(m);
  emit(config.out, console, [&](std::ostream& out) {
    out << kR0CsvHeader << '\n';
    for (double beta : betas) {
      ModelParams p = config.params;
      p.beta = beta;
      const double dynamic = r0(config_dfe(config, p), p);
      const double fixed = static_r0(dist, beta, p.gamma, p.population, m);
      const double meanfield =
          p.alpha + p.omega > 0.0 ? meanfield_r0(p) : std::numeric_limits<double>::quiet_NaN();
      out << csv::format(p.beta) << ',' << csv::format(p.gamma) << ',' << csv::format(p.alpha) << ','
          << csv::format(p.omega) << ',' << m << ',' << csv::format(dynamic) << ',' << csv::format(fixed) << ','
          << csv::format(meanfield) << '\n';
    }
  });
}

void cmd_threshold_sweep(const RunConfig& config, std::ostream& console) {
  if (config.sweep.betas.empty()) throw ConfigError("threshold-sweep needs [sweep] betas");
  const auto points = threshold_sweep(config, config.sweep.betas, config.sweep.method);
  emit(config.out, console, [&](std::ostream& out) { write_threshold_csv(out, points); });
  std::size_t unbracketed = 0;
  for (const auto& p : points)
    if (!p.bracketed) ++unbracketed;
  if (unbracketed != 0) std::cerr << "dynsis: " << unbracketed << " beta value(s) not bracketed\n";
}

void cmd_netgen(const RunConfig& config, const std::string& degrees_path, std::ostream& console) {
  const auto& p = config.params;
  const Graph g = config.network.generate(p.population, p.max_degree, config.network.seed);
  emit(config.out, console, [&](std::ostream& out) { g.write_edge_list(out); });
  if (!degrees_path.empty()) {
    DegreeSequence seq{g.degrees()};
    emit(degrees_path, console, [&](std::ostream& out) { seq.write_csv(out); });
  }
}

int exit_code_for_current_exception(std::ostream& err) {
  try {
    throw;
  } catch (const ConfigError& e) {
    err << "dynsis: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "dynsis: invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "dynsis: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "dynsis: error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace dynsis::cli
