#include "dynsis/ode.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "dynsis/csv.hpp"
#include "dynsis/error.hpp"

namespace dynsis {

namespace {

double ratio_or_zero(double num, double den) {
  return den < kMixingDenominatorFloor ? 0.0 : num / den;
}

}  // namespace

MixingCoefficients compute_mixing(const CompartmentIndex& index, const ModelParams& params,
                                  std::span<const double> x) {
  const int m = index.max_degree();
  double s_jl = 0.0;        // sum j l S_jl
  double s_j = 0.0;         // sum j S_jl
  double s_ll = 0.0;        // sum l^2 S_jl
  double i_j = 0.0;         // sum j I_jl
  double free_s = 0.0;      // sum (M - k) S_jl
  double free_i = 0.0;      // sum (M - k) I_jl
  for (int k = 0; k <= m; ++k) {
    for (int j = k; j >= 0; --j) {
      const int l = k - j;
      const double sv = x[index.index_unchecked(Status::S, j, l)];
      const double iv = x[index.index_unchecked(Status::I, j, l)];
      s_jl += static_cast<double>(j) * l * sv;
      s_j += j * sv;
      s_ll += static_cast<double>(l) * l * sv;
      i_j += j * iv;
      free_s += (m - k) * sv;
      free_i += (m - k) * iv;
    }
  }
  MixingCoefficients out;
  out.g_s = params.beta * ratio_or_zero(s_jl, s_j);
  out.g_i = params.beta * ratio_or_zero(s_ll, i_j);
  const double phi = free_s + free_i;
  out.p_s = ratio_or_zero(free_s, phi);
  out.p_i = ratio_or_zero(free_i, phi);
  return out;
}

MixingCoefficients compute_mixing(const StateVector& state, const ModelParams& params) {
  return compute_mixing(state.index(), params, state.values());
}

void rhs_with_mixing(const CompartmentIndex& index, const ModelParams& params, const MixingCoefficients& mixing,
                     std::span<const double> x, std::span<double> dxdt) {
  std::fill(dxdt.begin(), dxdt.end(), 0.0);
  const int m = index.max_degree();
  for (int k = 0; k <= m; ++k) {
    for (int s = k; s >= 0; --s) {
      for (Status status : {Status::S, Status::I}) {
        const Compartment from{status, s, k - s};
        const std::size_t src = index.index_unchecked(status, s, k - s);
        const double pop = x[src];
        if (pop == 0.0) continue;
        for_each_transition(from, params, mixing, [&](TransitionKind, const Compartment& to, double rate) {
          const double flux = rate * pop;
          dxdt[src] -= flux;
          dxdt[index.index_unchecked(to.status, to.s, to.i)] += flux;
        });
      }
    }
  }
}

void rhs_into(const CompartmentIndex& index, const ModelParams& params, std::span<const double> x,
              std::span<double> dxdt) {
  rhs_with_mixing(index, params, compute_mixing(index, params, x), x, dxdt);
}

std::vector<double> rhs(const StateVector& state, const ModelParams& params) {
  std::vector<double> out(state.values().size());
  rhs_into(state.index(), params, state.values(), out);
  return out;
}

void Trajectory::append(double t, StateVector state) {
  if (!times_.empty() && !(t > times_.back())) throw DomainError("trajectory times must be strictly increasing");
  times_.push_back(t);
  states_.push_back(std::move(state));
}

TrajectoryRow Trajectory::row(std::size_t k) const {
  const auto& st = states_.at(k);
  const auto net = network_stats(st);
  TrajectoryRow r;
  r.t = times_[k];
  r.infected = st.infected();
  r.susceptible = st.total() - r.infected;
  r.mean_degree = net.mean_degree;
  r.edges = net.edges;
  r.phi = net.phi;
  return r;
}

std::vector<double> Trajectory::prevalence() const {
  std::vector<double> out;
  out.reserve(size());
  for (const auto& st : states_) out.push_back(st.infected());
  return out;
}

std::vector<double> Trajectory::mean_degree() const {
  std::vector<double> out;
  out.reserve(size());
  for (const auto& st : states_) out.push_back(network_stats(st).mean_degree);
  return out;
}

std::vector<double> Trajectory::edges() const {
  std::vector<double> out;
  out.reserve(size());
  for (const auto& st : states_) out.push_back(network_stats(st).edges);
  return out;
}

void Trajectory::write_csv(std::ostream& out) const {
  out << kTrajectoryCsvHeader << '\n';
  for (std::size_t k = 0; k < size(); ++k) {
    const auto r = row(k);
    out << csv::format(r.t) << ',' << csv::format(r.susceptible) << ',' << csv::format(r.infected) << ','
        << csv::format(r.mean_degree) << ',' << csv::format(r.edges) << ',' << csv::format(r.phi) << '\n';
  }
}

std::vector<TrajectoryRow> read_trajectory_csv(std::istream& in) {
  std::vector<TrajectoryRow> out;
  for (const auto& f : csv::read_table(in, kTrajectoryCsvHeader)) {
    out.push_back({csv::parse_double(f[0]), csv::parse_double(f[1]), csv::parse_double(f[2]),
                   csv::parse_double(f[3]), csv::parse_double(f[4]), csv::parse_double(f[5])});
  }
  return out;
}

std::vector<double> sample_grid(double t_end, double sample_dt) {
  if (!(t_end >= 0.0)) throw DomainError("end time must be nonnegative");
  if (!(sample_dt > 0.0)) throw DomainError("sample interval must be positive");
  std::vector<double> grid;
  const auto n = static_cast<long long>(std::floor(t_end / sample_dt + 1e-9));
  grid.reserve(static_cast<std::size_t>(n) + 2);
  for (long long j = 0; j <= n; ++j) grid.push_back(static_cast<double>(j) * sample_dt);
  if (grid.back() < t_end * (1.0 - 1e-12)) grid.push_back(t_end);
  return grid;
}

namespace {

namespace odeint = boost::numeric::odeint;
using OdeState = std::vector<double>;

struct System {
  const CompartmentIndex* index;
  const ModelParams* params;
  void operator()(const OdeState& x, OdeState& dxdt, double /*t*/) const {
    rhs_into(*index, *params, x, dxdt);
  }
};

Trajectory integrate_adaptive(const StateVector& initial, const ModelParams& params, const std::vector<double>& grid,
                              const IntegratorOptions& options) {
  const double population = initial.population();
  System sys{&initial.index(), &params};
  auto stepper = odeint::make_dense_output(options.abs_tol_per_node * population, options.rel_tol,
                                           odeint::runge_kutta_dopri5<OdeState>());
  OdeState x(initial.values().begin(), initial.values().end());
  Trajectory traj;
  traj.append(grid.front(), initial);
  stepper.initialize(x, grid.front(), 1e-3);
  OdeState sample(x.size());
  for (std::size_t g = 1; g < grid.size(); ++g) {
    const double target = grid[g];
    while (stepper.current_time() < target) {
      try {
        stepper.do_step(sys);
      } catch (const odeint::step_adjustment_error&) {
        throw IntegrationError("step-size control failed", stepper.current_time());
      }
      const double t = stepper.current_time();
      if (!std::isfinite(t) || stepper.current_time_step() < options.min_step * std::max(1.0, std::abs(t)))
        throw IntegrationError("step size underflow at t=" + csv::format(t), t);
      for (double v : stepper.current_state())
        if (!std::isfinite(v)) throw IntegrationError("non-finite state at t=" + csv::format(t), t);
    }
    stepper.calc_state(target, sample);
    traj.append(target, StateVector(initial.max_degree(), population, sample));
  }
  return traj;
}

Trajectory integrate_rk4(const StateVector& initial, const ModelParams& params, const std::vector<double>& grid,
                         const IntegratorOptions& options) {
  if (!(options.rk4_step > 0.0)) throw DomainError("RK4 step must be positive");
  System sys{&initial.index(), &params};
  odeint::runge_kutta4<OdeState> stepper;
  OdeState x(initial.values().begin(), initial.values().end());
  Trajectory traj;
  traj.append(grid.front(), initial);
  double t = grid.front();
  for (std::size_t g = 1; g < grid.size(); ++g) {
    const double target = grid[g];
    while (t < target) {
      const double h = std::min(options.rk4_step, target - t);
      stepper.do_step(sys, x, t, h);
      t = (target - t - h) <= 0.0 ? target : t + h;
    }
    traj.append(target, StateVector(initial.max_degree(), initial.population(), x));
  }
  return traj;
}

}  // namespace

Trajectory integrate(const StateVector& initial, const ModelParams& params, double t_end, double sample_dt,
                     const IntegratorOptions& options) {
  params.validate();
  if (params.max_degree != initial.max_degree()) throw DomainError("state and parameters disagree on M");
  if (!(t_end > 0.0)) throw DomainError("t_end must be positive");
  const auto grid = sample_grid(t_end, sample_dt);
  if (options.method == IntegratorMethod::ClassicalRK4) return integrate_rk4(initial, params, grid, options);
  return integrate_adaptive(initial, params, grid, options);
}

}  // namespace dynsis
