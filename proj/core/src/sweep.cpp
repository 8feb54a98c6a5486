#include "dynsis/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "dynsis/csv.hpp"
#include "dynsis/error.hpp"
#include "dynsis/netgen.hpp"
#include "dynsis/ode.hpp"

namespace dynsis {

std::string ThresholdPoint::flag() const {
  if (!bracketed) return below_bracket ? "unbracketed;no_outbreak_at_omega_min" : "unbracketed;outbreak_at_omega_max";
  std::ostringstream out;
  out << (fragmented ? "fragmented" : "ok") << ";k_star=" << csv::format(k_star);
  return out.str();
}

void write_threshold_csv(std::ostream& out, const std::vector<ThresholdPoint>& points) {
  out << kThresholdCsvHeader << '\n';
  for (const auto& p : points)
    out << csv::format(p.beta) << ',' << (p.bracketed ? csv::format(p.omega_critical) : std::string("nan")) << ','
        << to_string(p.method) << ',' << p.flag() << '\n';
}

std::vector<ThresholdPoint> read_threshold_csv(std::istream& in) {
  std::vector<ThresholdPoint> out;
  for (const auto& f : csv::read_table(in, kThresholdCsvHeader)) {
    ThresholdPoint p;
    p.beta = csv::parse_double(f[0]);
    p.omega_critical = csv::parse_double(f[1]);
    p.method = parse_method(f[2]);
    const std::string& flag = f[3];
    p.bracketed = flag.rfind("unbracketed", 0) != 0;
    if (p.bracketed) {
      const auto eq = flag.find("k_star=");
      if (eq == std::string::npos) throw DomainError("threshold flag lacks k_star: '" + flag + "'");
      p.k_star = csv::parse_double(std::string_view(flag).substr(eq + 7));
      p.fragmented = flag.rfind("fragmented", 0) == 0;
    } else {
      p.k_star = std::numeric_limits<double>::quiet_NaN();
      p.below_bracket = flag.find("omega_min") != std::string::npos;
    }
    out.push_back(p);
  }
  return out;
}

GraphFactory make_graph_factory(const RunConfig& config) {
  const NetworkSpec network = config.network;
  const int n = config.params.population;
  const int m = config.params.max_degree;
  const int i0 = config.initial_infected;
  const std::uint64_t infection_seed = config.infection_seed;
  return [network, n, m, i0, infection_seed](std::size_t, std::uint64_t seed) {
    InitialCondition ic{network.generate(n, m, derive_seed(seed, network.seed, 11)), {}};
    ic.infected = seed_infection(n, i0, derive_seed(seed, infection_seed, 12));
    return ic;
  };
}

DfeState config_dfe(const RunConfig& config, const ModelParams& params) {
  if (config.dfe == DfeChoice::NetworkEquilibrium) return dfe_network_equilibrium(params);
  return dfe_from_distribution(config.network.distribution(params.max_degree), params.population);
}

bool outbreak(const RunConfig& config, ThresholdMethod method, double beta, double omega) {
  ModelParams params = config.params;
  params.beta = beta;
  params.omega = omega;
  const double n = params.population;
  const auto& sw = config.sweep;
  switch (method) {
    case ThresholdMethod::OdePrevalence: {
      const auto dist = config.network.distribution(params.max_degree);
      const auto x0 = initial_state(dist, config.initial_infected / n, n);
      const auto traj = integrate(x0, params, sw.ode_horizon, sw.ode_horizon, config.integrator);
      return traj.back().infected() > sw.ode_level * n;
    }
    case ThresholdMethod::NgmR0:
      return r0(config_dfe(config, params), params) > 1.0;
    case ThresholdMethod::Simulation: {
      // Same master seed at every omega: common random numbers keep the vote
      // close to monotone along the bisection.
      const auto result = ensemble(make_graph_factory(config), params, sw.sim_runs, sw.sim_horizon, sw.sim_horizon,
                                   config.seed, EnsembleOptions{1, {}});
      std::size_t outbreaks = 0;
      for (const auto& r : result.runs)
        if (r.infected.back() > sw.sim_level * n) ++outbreaks;
      return static_cast<double>(outbreaks) / static_cast<double>(result.runs.size()) > sw.sim_vote;
    }
  }
  return false;
}

ThresholdPoint find_threshold(const RunConfig& config, ThresholdMethod method, double beta) {
  const auto& sw = config.sweep;
  ThresholdPoint point;
  point.beta = beta;
  point.method = method;
  double lo = sw.omega_min;
  double hi = sw.omega_max;
  const bool low = outbreak(config, method, beta, lo);
  if (!low || outbreak(config, method, beta, hi)) {
    point.bracketed = false;
    point.below_bracket = !low;
    point.omega_critical = std::numeric_limits<double>::quiet_NaN();
    point.k_star = std::numeric_limits<double>::quiet_NaN();
    return point;
  }
  while (hi - lo > sw.tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (outbreak(config, method, beta, mid))
      lo = mid;
    else
      hi = mid;
  }
  point.omega_critical = 0.5 * (lo + hi);
  ModelParams at = config.params;
  at.omega = point.omega_critical;
  point.k_star = equilibrium_mean_degree(at);
  point.fragmented = point.k_star < kFragmentationDegree;
  return point;
}

std::vector<ThresholdPoint> threshold_sweep(const RunConfig& config, const std::vector<double>& betas,
                                            ThresholdMethod method) {
  std::vector<ThresholdPoint> points(betas.size());
  unsigned threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(betas.size(), 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t j = next++; j < betas.size(); j = next++) {
      try {
        points[j] = find_threshold(config, method, betas[j]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  std::sort(points.begin(), points.end(), [](const ThresholdPoint& a, const ThresholdPoint& b) {
    if (a.beta != b.beta) return a.beta < b.beta;
    return static_cast<int>(a.method) < static_cast<int>(b.method);
  });
  return points;
}

}  // namespace dynsis
