#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dynsis/compartments.hpp"
#include "dynsis/graph.hpp"
#include "dynsis/ode.hpp"

namespace dynsis {

/// INI-style document: `[section]` headers, `key = value` lines, `#` or `;`
/// comments. Every value remembers its source line for diagnostics.
class ConfigDocument {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static ConfigDocument parse(std::istream& in, const std::string& source = "<config>");
  static ConfigDocument load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  const Entry* find(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key,
                         std::optional<std::string> fallback = std::nullopt) const;
  double get_double(const std::string& section, const std::string& key, std::optional<double> fallback = std::nullopt) const;
  long long get_int(const std::string& section, const std::string& key,
                    std::optional<long long> fallback = std::nullopt) const;
  std::vector<double> get_list(const std::string& section, const std::string& key) const;

  /// Throws ConfigError naming the first key not in `known` ("section.key").
  void reject_unknown(const std::vector<std::string>& known) const;

  [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& message) const;

 private:
  std::string source_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

enum class NetworkKind { Regular, NegativeBinomial, EdgeList };

struct NetworkSpec {
  NetworkKind kind = NetworkKind::Regular;
  int k = 4;
  double mean = 6.0;
  double variance = 12.0;
  std::string path;
  std::uint64_t seed = 1;

  /// Degree profile of the initial network (exact for generators, empirical
  /// for an edge-list file).
  DegreeDistribution distribution(int max_degree) const;
  Graph generate(int nodes, int max_degree, std::uint64_t seed) const;
};

enum class ThresholdMethod { OdePrevalence, NgmR0, Simulation };

std::string to_string(ThresholdMethod method);
ThresholdMethod parse_method(const std::string& name);

enum class DfeChoice { InitialNetwork, NetworkEquilibrium };

struct SweepSpec {
  std::vector<double> betas;
  double omega_min = 0.0;
  double omega_max = 2.0;
  double tolerance = 1e-3;
  ThresholdMethod method = ThresholdMethod::OdePrevalence;
  /// ODE criterion: prevalence at ode_horizon above ode_level * N.
  double ode_horizon = 200.0;
  double ode_level = 1e-3;
  /// Simulation criterion: fraction of sim_runs with prevalence above
  /// sim_level * N at sim_horizon exceeds sim_vote.
  double sim_horizon = 100.0;
  double sim_level = 0.01;
  double sim_vote = 0.5;
  std::size_t sim_runs = 50;
};

struct RunConfig {
  ModelParams params;
  NetworkSpec network;
  int initial_infected = 0;
  std::uint64_t infection_seed = 1;
  double t_max = 100.0;
  double sample_dt = 1.0;
  std::size_t runs = 1;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out;
  IntegratorOptions integrator;
  DfeChoice dfe = DfeChoice::InitialNetwork;
  SweepSpec sweep;

  /// Throws ConfigError on out-of-domain values.
  void validate() const;
};

RunConfig parse_run_config(const ConfigDocument& doc);
RunConfig load_run_config(const std::string& path);

}  // namespace dynsis
