#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "dynsis/config.hpp"

namespace dynsis::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<ThresholdMethod> method;
  std::optional<std::size_t> runs;
  std::optional<unsigned> threads;
};

RunConfig resolve_config(const std::string& path, const Overrides& overrides);

inline constexpr const char* kR0CsvHeader = "beta,gamma,alpha,omega,M,r0,static_r0,meanfield_r0";

/// Writes `t,S,I,mean_degree,edges,phi` to config.out (stdout when empty).
void cmd_ode_run(const RunConfig& config, std::ostream& console);
/// Writes per-run rows to config.out and the ensemble summary to
/// `<out>.summary.csv`.
void cmd_sim_run(const RunConfig& config, std::ostream& console);
/// One record per beta in [sweep] betas, or for model.beta alone.
void cmd_r0(const RunConfig& config, std::ostream& console);
void cmd_threshold_sweep(const RunConfig& config, std::ostream& console);
/// Edge list of the configured initial network; optionally the realised
/// degree sequence as `node,degree`.
void cmd_netgen(const RunConfig& config, const std::string& degrees_path, std::ostream& console);

/// Reports the in-flight exception on `err` and returns its exit code.
int exit_code_for_current_exception(std::ostream& err);

/// Runs `body`, reporting failures on `err` and mapping them to exit codes.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    body();
    return kExitOk;
  } catch (...) {
    return exit_code_for_current_exception(err);
  }
}

}  // namespace dynsis::cli
