#include "dynsis/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "dynsis/csv.hpp"
#include "dynsis/error.hpp"
#include "dynsis/ode.hpp"

namespace dynsis {

void WeightTree::set(std::size_t k, long long w) {
  const long long delta = w - weights_[k];
  if (delta == 0) return;
  weights_[k] = w;
  total_ += delta;
  for (std::size_t j = k + 1; j < tree_.size(); j += j & (~j + 1)) tree_[j] += delta;
}

std::size_t WeightTree::find(long long target) const {
  std::size_t pos = 0;
  std::size_t step = 1;
  while (step * 2 < tree_.size()) step *= 2;
  for (; step > 0; step /= 2) {
    const std::size_t next = pos + step;
    if (next < tree_.size() && tree_[next] <= target) {
      pos = next;
      target -= tree_[next];
    }
  }
  return pos;
}

void EdgeSet::insert(NodeId u, NodeId v) {
  const auto [it, inserted] = pos_.emplace(key(u, v), items_.size());
  if (inserted) items_.emplace_back(std::min(u, v), std::max(u, v));
}

void EdgeSet::erase(NodeId u, NodeId v) {
  const auto it = pos_.find(key(u, v));
  if (it == pos_.end()) return;
  const std::size_t slot = it->second;
  pos_.erase(it);
  if (slot + 1 != items_.size()) {
    items_[slot] = items_.back();
    pos_[key(items_[slot].first, items_[slot].second)] = slot;
  }
  items_.pop_back();
}

void EdgeSet::clear() {
  items_.clear();
  pos_.clear();
}

SimState::SimState(Graph graph, const std::vector<NodeId>& infected)
    : graph_(std::move(graph)),
      status_(static_cast<std::size_t>(graph_.size()), Status::S),
      infected_pos_(static_cast<std::size_t>(graph_.size()), 0),
      free_(static_cast<std::size_t>(graph_.size())) {
  if (!graph_.is_valid()) throw DomainError("initial graph violates simple-graph or degree-cap invariants");
  for (NodeId v : infected) {
    if (v >= static_cast<NodeId>(graph_.size())) throw DomainError("infected node id out of range");
    if (status_[v] == Status::I) throw DomainError("duplicate node in initial infected set");
    status_[v] = Status::I;
    infected_pos_[v] = infected_.size();
    infected_.push_back(v);
  }
  for (const auto& [u, v] : graph_.edges()) {
    edges_.insert(u, v);
    if (status_[u] != status_[v]) si_edges_.insert(u, v);
  }
  for (NodeId v = 0; v < static_cast<NodeId>(graph_.size()); ++v) set_free(v);
}

void SimState::toggle_si(NodeId v) {
  for (NodeId w : graph_.neighbours(v)) {
    if (status_[w] != status_[v])
      si_edges_.insert(v, w);
    else
      si_edges_.erase(v, w);
  }
}

void SimState::infect(NodeId v) {
  if (status_[v] == Status::I) return;
  status_[v] = Status::I;
  infected_pos_[v] = infected_.size();
  infected_.push_back(v);
  toggle_si(v);
}

void SimState::recover(NodeId v) {
  if (status_[v] == Status::S) return;
  status_[v] = Status::S;
  const std::size_t slot = infected_pos_[v];
  const NodeId last = infected_.back();
  infected_[slot] = last;
  infected_pos_[last] = slot;
  infected_.pop_back();
  toggle_si(v);
}

void SimState::unlink(NodeId u, NodeId v) {
  if (!graph_.remove_edge(u, v)) return;
  edges_.erase(u, v);
  si_edges_.erase(u, v);
  set_free(u);
  set_free(v);
}

bool SimState::link(NodeId u, NodeId v) {
  if (!graph_.add_edge(u, v)) return false;
  edges_.insert(u, v);
  if (status_[u] != status_[v]) si_edges_.insert(u, v);
  set_free(u);
  set_free(v);
  return true;
}

std::string SimState::check_consistency() const {
  const int n = graph_.size();
  const int m = graph_.max_degree();
  std::size_t stubs = 0;
  std::size_t si = 0;
  std::size_t infected = 0;
  long long free_total = 0;
  for (NodeId u = 0; u < static_cast<NodeId>(n); ++u) {
    const auto nb = graph_.neighbours(u);
    if (static_cast<int>(nb.size()) > m) return "degree cap exceeded at node " + std::to_string(u);
    if (free_.weight(u) != m - static_cast<long long>(nb.size()))
      return "free-stub weight out of sync at node " + std::to_string(u);
    free_total += m - static_cast<long long>(nb.size());
    stubs += nb.size();
    if (status_[u] == Status::I) {
      ++infected;
      if (infected_pos_[u] >= infected_.size() || infected_[infected_pos_[u]] != u)
        return "infected index out of sync at node " + std::to_string(u);
    }
    for (std::size_t a = 0; a < nb.size(); ++a) {
      const NodeId v = nb[a];
      if (v == u) return "self-loop at node " + std::to_string(u);
      for (std::size_t b = a + 1; b < nb.size(); ++b)
        if (nb[b] == v) return "multi-edge " + std::to_string(u) + "-" + std::to_string(v);
      const auto back = graph_.neighbours(v);
      if (std::find(back.begin(), back.end(), u) == back.end())
        return "asymmetric adjacency " + std::to_string(u) + "-" + std::to_string(v);
      if (!edges_.contains(u, v)) return "edge index missing " + std::to_string(u) + "-" + std::to_string(v);
      if ((status_[u] != status_[v]) != si_edges_.contains(u, v))
        return "SI index wrong for " + std::to_string(u) + "-" + std::to_string(v);
      if (u < v && status_[u] != status_[v]) ++si;
    }
  }
  if (stubs != 2 * graph_.edge_count()) return "edge count out of sync";
  if (edges_.size() != graph_.edge_count()) return "edge index size out of sync";
  if (si != si_edges_.size()) return "SI edge count out of sync";
  if (infected != infected_.size()) return "infected count out of sync";
  if (free_total != free_.total()) return "free-stub total out of sync";
  if (free_.total() != static_cast<long long>(n) * m - 2 * static_cast<long long>(graph_.edge_count()))
    return "free stubs differ from N M - 2E";
  return {};
}

EventRates total_rates(const SimState& state, const ModelParams& params) {
  EventRates r;
  r.infection = params.beta * static_cast<double>(state.si_edge_count());
  r.recovery = params.gamma * static_cast<double>(state.infected_count());
  r.deletion = params.omega * static_cast<double>(state.edge_count());
  r.creation = params.alpha * static_cast<double>(state.free_stubs()) / 2.0;
  return r;
}

namespace {

// Picks the event category proportionally to its rate and applies it.
void apply_event(SimState& state, const EventRates& rates, Rng& rng, StepResult& out) {
  const double by_kind[4] = {rates.infection, rates.recovery, rates.deletion, rates.creation};
  double pick = rng.uniform() * rates.total();
  int kind = 0;
  while (kind < 3 && pick >= by_kind[kind]) pick -= by_kind[kind++];
  // Rounding can land past the last positive rate.
  while (by_kind[kind] <= 0.0) --kind;
  out.kind = static_cast<EventKind>(kind);

  switch (out.kind) {
    case EventKind::Infection: {
      const auto [a, b] = state.si_edges()[rng.below(state.si_edge_count())];
      out.u = state.status(a) == Status::S ? a : b;
      out.v = out.u == a ? b : a;
      state.infect(out.u);
      return;
    }
    case EventKind::Recovery:
      out.u = out.v = state.infected_nodes()[rng.below(state.infected_count())];
      state.recover(out.u);
      return;
    case EventKind::LinkDeletion: {
      const auto [a, b] = state.all_edges()[rng.below(state.edge_count())];
      out.u = a;
      out.v = b;
      state.unlink(a, b);
      return;
    }
    case EventKind::LinkCreation:
      break;
  }

  // Initiator and partner are both drawn proportionally to free stubs; the
  // partner draw skips the initiator's block of weight.
  const auto& tree = state.free_stub_tree();
  const long long total = tree.total();
  const auto initiator = static_cast<NodeId>(tree.find(static_cast<long long>(rng.below(static_cast<std::uint64_t>(total)))));
  out.u = out.v = initiator;
  const long long rest = total - tree.weight(initiator);
  if (rest <= 0) {
    out.no_op = true;
    return;
  }
  const auto target = static_cast<long long>(rng.below(static_cast<std::uint64_t>(rest)));
  auto partner = static_cast<NodeId>(tree.find(target));
  if (partner >= initiator) partner = static_cast<NodeId>(tree.find(target + tree.weight(initiator)));
  out.v = partner;
  if (!state.link(initiator, partner)) out.no_op = true;
}

}  // namespace

std::optional<StepResult> step(SimState& state, const ModelParams& params, Rng& rng) {
  const EventRates rates = total_rates(state, params);
  const double total = rates.total();
  if (!(total > 0.0)) return std::nullopt;
  StepResult out;
  out.dt = rng.exponential(total);
  apply_event(state, rates, rng, out);
  return out;
}

SimTrajectory run(const Graph& graph0, const std::vector<NodeId>& infected0, const ModelParams& params,
                  double t_max, double sample_dt, std::uint64_t seed, const SimOptions& options) {
  params.validate();
  if (graph0.max_degree() != params.max_degree) throw DomainError("graph cap and parameter M differ");
  const auto grid = sample_grid(t_max, sample_dt);
  SimState state(graph0, infected0);
  Rng rng(seed);

  SimTrajectory traj;
  traj.times = grid;
  traj.infected.reserve(grid.size());
  traj.mean_degree.reserve(grid.size());
  traj.edges.reserve(grid.size());
  auto record = [&](std::size_t g) {
    traj.infected.push_back(static_cast<double>(state.infected_count()));
    traj.mean_degree.push_back(state.mean_degree());
    traj.edges.push_back(static_cast<double>(state.edge_count()));
    if (options.on_sample) options.on_sample(g, state);
  };

  double t = 0.0;
  std::size_t next = 0;
  std::uint64_t events = 0;
  while (next < grid.size()) {
    const EventRates rates = total_rates(state, params);
    const double total = rates.total();
    const double t_event = total > 0.0 ? t + rng.exponential(total) : std::numeric_limits<double>::infinity();
    while (next < grid.size() && grid[next] < t_event) record(next++);
    if (next == grid.size()) break;
    StepResult result;
    apply_event(state, rates, rng, result);
    t = t_event;
    ++events;
    if (options.check_interval != 0 && events % options.check_interval == 0) {
      if (auto err = state.check_consistency(); !err.empty())
        throw std::logic_error("simulation invariant violated after event " + std::to_string(events) + ": " + err);
    }
  }
  return traj;
}

namespace {

void mean_std(const std::vector<SimTrajectory>& runs, std::vector<double> SimTrajectory::*series,
              std::vector<double>& mean, std::vector<double>* sd) {
  const std::size_t samples = (runs.front().*series).size();
  mean.assign(samples, 0.0);
  if (sd) sd->assign(samples, 0.0);
  const double n = static_cast<double>(runs.size());
  for (std::size_t j = 0; j < samples; ++j) {
    double sum = 0.0;
    for (const auto& r : runs) sum += (r.*series)[j];
    const double mu = sum / n;
    mean[j] = mu;
    if (sd) {
      double ss = 0.0;
      for (const auto& r : runs) ss += ((r.*series)[j] - mu) * ((r.*series)[j] - mu);
      (*sd)[j] = std::sqrt(ss / n);
    }
  }
}

}  // namespace

void aggregate(EnsembleResult& result) {
  if (result.runs.empty()) throw DomainError("ensemble has no runs");
  result.times = result.runs.front().times;
  mean_std(result.runs, &SimTrajectory::infected, result.infected_mean, &result.infected_std);
  mean_std(result.runs, &SimTrajectory::mean_degree, result.degree_mean, &result.degree_std);
  mean_std(result.runs, &SimTrajectory::edges, result.edges_mean, nullptr);
}

EnsembleResult ensemble(const GraphFactory& factory, const ModelParams& params, std::size_t runs, double t_max,
                        double sample_dt, std::uint64_t master_seed, const EnsembleOptions& options) {
  if (runs < 1) throw DomainError("ensemble needs at least one run");
  EnsembleResult result;
  result.runs.resize(runs);

  auto do_run = [&](std::size_t r) {
    InitialCondition ic = factory(r, derive_seed(master_seed, r, kGraphStreamTag));
    result.runs[r] = run(ic.graph, ic.infected, params, t_max, sample_dt,
                         derive_seed(master_seed, r, kEventStreamTag), options.sim);
  };

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, runs));
  if (threads <= 1) {
    for (std::size_t r = 0; r < runs; ++r) do_run(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < runs; r = next++) {
          try {
            do_run(r);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }
  aggregate(result);
  return result;
}

void EnsembleResult::write_runs_csv(std::ostream& out) const {
  out << kRunsCsvHeader << '\n';
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& tr = runs[r];
    for (std::size_t j = 0; j < tr.times.size(); ++j)
      out << csv::format(tr.times[j]) << ',' << r << ',' << csv::format(tr.infected[j]) << ','
          << csv::format(tr.mean_degree[j]) << ',' << csv::format(tr.edges[j]) << '\n';
  }
}

void EnsembleResult::write_summary_csv(std::ostream& out) const {
  out << kSummaryCsvHeader << '\n';
  for (std::size_t j = 0; j < times.size(); ++j)
    out << csv::format(times[j]) << ',' << csv::format(infected_mean[j]) << ',' << csv::format(infected_std[j]) << ','
        << csv::format(degree_mean[j]) << ',' << csv::format(degree_std[j]) << ',' << csv::format(edges_mean[j])
        << '\n';
}

std::vector<SimTrajectory> read_runs_csv(std::istream& in) {
  std::map<long long, SimTrajectory> by_run;
  for (const auto& f : csv::read_table(in, kRunsCsvHeader)) {
    auto& tr = by_run[csv::parse_int(f[1])];
    tr.times.push_back(csv::parse_double(f[0]));
    tr.infected.push_back(csv::parse_double(f[2]));
    tr.mean_degree.push_back(csv::parse_double(f[3]));
    tr.edges.push_back(csv::parse_double(f[4]));
  }
  std::vector<SimTrajectory> out;
  long long expected = 0;
  for (auto& [id, tr] : by_run) {
    if (id != expected++) throw DomainError("run ids must be contiguous from 0");
    out.push_back(std::move(tr));
  }
  return out;
}

DegreeDistribution empirical_degree_distribution(const Graph& graph) {
  if (graph.size() == 0) throw DomainError("empty graph has no degree distribution");
  std::vector<double> counts(static_cast<std::size_t>(graph.max_degree()) + 1, 0.0);
  for (int d : graph.degrees()) counts[static_cast<std::size_t>(d)] += 1.0;
  for (double& c : counts) c /= graph.size();
  // Renormalise away rounding so the sum check in DegreeDistribution holds.
  double sum = 0.0;
  for (double c : counts) sum += c;
  for (double& c : counts) c /= sum;
  return DegreeDistribution(std::move(counts));
}

}  // namespace dynsis
