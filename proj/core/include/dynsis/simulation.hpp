#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dynsis/compartments.hpp"
#include "dynsis/graph.hpp"
#include "dynsis/rng.hpp"

namespace dynsis {

/// Fenwick tree over nonnegative integer node weights with weighted sampling.
class WeightTree {
 public:
  explicit WeightTree(std::size_t size = 0) : tree_(size + 1, 0), weights_(size, 0) {}

  std::size_t size() const noexcept { return weights_.size(); }
  long long weight(std::size_t k) const { return weights_[k]; }
  long long total() const noexcept { return total_; }

  void set(std::size_t k, long long w);
  /// Smallest k such that prefix(k + 1) > target; requires 0 <= target < total().
  std::size_t find(long long target) const;

 private:
  std::vector<long long> tree_;
  std::vector<long long> weights_;
  long long total_ = 0;
};

/// Edges of a graph held in a vector for O(1) uniform draws, with a hash
/// index for O(1) removal.
class EdgeSet {
 public:
  using Edge = std::pair<NodeId, NodeId>;

  std::size_t size() const noexcept { return items_.size(); }
  bool contains(NodeId u, NodeId v) const { return pos_.count(key(u, v)) != 0; }
  void insert(NodeId u, NodeId v);
  void erase(NodeId u, NodeId v);
  const Edge& operator[](std::size_t k) const { return items_[k]; }
  void clear();

 private:
  static std::uint64_t key(NodeId u, NodeId v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
  }
  std::vector<Edge> items_;
  std::unordered_map<std::uint64_t, std::size_t> pos_;
};

enum class EventKind { Infection, Recovery, LinkDeletion, LinkCreation };

struct EventRates {
  double infection = 0.0;
  double recovery = 0.0;
  double deletion = 0.0;
  double creation = 0.0;

  double total() const noexcept { return infection + recovery + deletion + creation; }
};

struct StepResult {
  EventKind kind = EventKind::Infection;
  double dt = 0.0;
  NodeId u = 0;
  NodeId v = 0;
  /// A creation draw that picked an already-linked pair (or found no
  /// partner) and changed nothing.
  bool no_op = false;
};

/// Network, node statuses and the incremental bookkeeping that makes each
/// Gillespie event O(M).
class SimState {
 public:
  SimState(Graph graph, const std::vector<NodeId>& infected);

  const Graph& graph() const noexcept { return graph_; }
  Status status(NodeId v) const { return status_[v]; }
  std::size_t infected_count() const noexcept { return infected_.size(); }
  std::size_t si_edge_count() const noexcept { return si_edges_.size(); }
  std::size_t edge_count() const noexcept { return graph_.edge_count(); }
  /// N M - 2E
  long long free_stubs() const noexcept { return free_.total(); }
  double mean_degree() const noexcept {
    return 2.0 * static_cast<double>(edge_count()) / static_cast<double>(graph_.size());
  }

  /// Empty string when all counters agree with a full rescan; otherwise a
  /// description of the first violation found.
  std::string check_consistency() const;

  // Mutations used by step(); each keeps every counter in sync.
  void infect(NodeId v);
  void recover(NodeId v);
  void unlink(NodeId u, NodeId v);
  bool link(NodeId u, NodeId v);

  const EdgeSet& si_edges() const noexcept { return si_edges_; }
  const EdgeSet& all_edges() const noexcept { return edges_; }
  const std::vector<NodeId>& infected_nodes() const noexcept { return infected_; }
  const WeightTree& free_stub_tree() const noexcept { return free_; }

 private:
  void set_free(NodeId v) { free_.set(v, graph_.free_stubs(v)); }
  void toggle_si(NodeId v);

  Graph graph_;
  std::vector<Status> status_;
  std::vector<NodeId> infected_;
  std::vector<std::size_t> infected_pos_;
  EdgeSet edges_;
  EdgeSet si_edges_;
  WeightTree free_;
};

EventRates total_rates(const SimState& state, const ModelParams& params);

/// One Gillespie direct-method event. Returns nullopt in an absorbing state
/// (total rate zero).
std::optional<StepResult> step(SimState& state, const ModelParams& params, Rng& rng);

/// Simulated observables on the sample grid.
struct SimTrajectory {
  std::vector<double> times;
  std::vector<double> infected;
  std::vector<double> mean_degree;
  std::vector<double> edges;
};

struct SimOptions {
  /// Full consistency rescan every this many events; 0 disables.
  std::uint64_t check_interval = 0;
  /// Optional per-sample hook (sample index, state), e.g. for degree histograms.
  std::function<void(std::size_t, const SimState&)> on_sample;
};

/// Runs to t_max (continuing after extinction) and samples the state in
/// force at each grid time.
SimTrajectory run(const Graph& graph0, const std::vector<NodeId>& infected0, const ModelParams& params,
                  double t_max, double sample_dt, std::uint64_t seed, const SimOptions& options = {});

struct InitialCondition {
  Graph graph;
  std::vector<NodeId> infected;
};

/// Builds the starting network and seed set of run `run_index` from a seed
/// reserved for that run.
using GraphFactory = std::function<InitialCondition(std::size_t run_index, std::uint64_t seed)>;

struct EnsembleResult {
  std::vector<double> times;
  std::vector<SimTrajectory> runs;
  std::vector<double> infected_mean;
  std::vector<double> infected_std;
  std::vector<double> degree_mean;
  std::vector<double> degree_std;
  std::vector<double> edges_mean;

  /// CSV `t,run_id,I,mean_degree,edges`.
  void write_runs_csv(std::ostream& out) const;
  /// CSV `t,I_mean,I_std,k_mean,k_std,edges_mean`.
  void write_summary_csv(std::ostream& out) const;
};

inline constexpr const char* kRunsCsvHeader = "t,run_id,I,mean_degree,edges";
inline constexpr const char* kSummaryCsvHeader = "t,I_mean,I_std,k_mean,k_std,edges_mean";

struct EnsembleOptions {
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 1;
  SimOptions sim;
};

/// Seed tags separating per-run substreams.
inline constexpr std::uint64_t kGraphStreamTag = 1;
inline constexpr std::uint64_t kEventStreamTag = 2;

/// Runs `runs` independent simulations; run r draws its network from
/// derive_seed(master, r, kGraphStreamTag) and its events from
/// derive_seed(master, r, kEventStreamTag). Output is independent of the
/// thread count.
EnsembleResult ensemble(const GraphFactory& factory, const ModelParams& params, std::size_t runs, double t_max,
                        double sample_dt, std::uint64_t master_seed, const EnsembleOptions& options = {});

/// Recomputes the across-run statistics from `result.runs`.
void aggregate(EnsembleResult& result);

std::vector<SimTrajectory> read_runs_csv(std::istream& in);

DegreeDistribution empirical_degree_distribution(const Graph& graph);
inline DegreeDistribution empirical_degree_distribution(const SimState& state) {
  return empirical_degree_distribution(state.graph());
}

}  // namespace dynsis
