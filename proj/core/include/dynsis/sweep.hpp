#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "dynsis/config.hpp"
#include "dynsis/ngm.hpp"
#include "dynsis/simulation.hpp"

namespace dynsis {

/// Mean degree below which the stationary network is considered fragmented.
inline constexpr double kFragmentationDegree = 2.0;

struct ThresholdPoint {
  double beta = 0.0;
  /// NaN when the criterion does not change sign inside the bracket.
  double omega_critical = 0.0;
  ThresholdMethod method = ThresholdMethod::OdePrevalence;
  bool bracketed = true;
  /// When unbracketed: true if even omega_min gives no outbreak, false if
  /// omega_max still gives one.
  bool below_bracket = false;
  /// Stationary mean degree alpha M / (alpha + omega_critical).
  double k_star = 0.0;
  bool fragmented = false;

  /// `ok;k_star=<v>`, `fragmented;k_star=<v>`, `unbracketed;no_outbreak_at_omega_min`
  /// or `unbracketed;outbreak_at_omega_max`.
  std::string flag() const;
};

inline constexpr const char* kThresholdCsvHeader = "beta,omega_critical,method,flag";

void write_threshold_csv(std::ostream& out, const std::vector<ThresholdPoint>& points);
std::vector<ThresholdPoint> read_threshold_csv(std::istream& in);

/// Initial condition factory for simulations built from the config's
/// network spec and I0; each run gets its own network and seed set.
GraphFactory make_graph_factory(const RunConfig& config);

/// Disease-free profile used by the R0 calculation for this config.
DfeState config_dfe(const RunConfig& config, const ModelParams& params);

/// True when the chosen criterion reports an outbreak at (beta, omega).
bool outbreak(const RunConfig& config, ThresholdMethod method, double beta, double omega);

/// Bisects omega on [omega_min, omega_max] to the configured tolerance.
ThresholdPoint find_threshold(const RunConfig& config, ThresholdMethod method, double beta);

/// One threshold per beta; points are evaluated in parallel on
/// config.threads workers and returned sorted by (beta, method).
std::vector<ThresholdPoint> threshold_sweep(const RunConfig& config, const std::vector<double>& betas,
                                            ThresholdMethod method);

}  // namespace dynsis
