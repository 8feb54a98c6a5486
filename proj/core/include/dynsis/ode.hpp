#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "dynsis/compartments.hpp"
#include "dynsis/transitions.hpp"

namespace dynsis {

/// Denominators below this value make the corresponding coefficient zero.
inline constexpr double kMixingDenominatorFloor = 1e-12;

MixingCoefficients compute_mixing(const StateVector& state, const ModelParams& params);
MixingCoefficients compute_mixing(const CompartmentIndex& index, const ModelParams& params,
                                  std::span<const double> x);

/// Time derivative of the dynamic SIS effective degree model.
std::vector<double> rhs(const StateVector& state, const ModelParams& params);

/// Writes dx/dt into `dxdt` (same length as x), computing mixing from x.
void rhs_into(const CompartmentIndex& index, const ModelParams& params, std::span<const double> x,
              std::span<double> dxdt);

/// Same as rhs_into with caller-supplied mixing coefficients.
void rhs_with_mixing(const CompartmentIndex& index, const ModelParams& params, const MixingCoefficients& mixing,
                     std::span<const double> x, std::span<double> dxdt);

enum class IntegratorMethod { DormandPrince45, ClassicalRK4 };

struct IntegratorOptions {
  IntegratorMethod method = IntegratorMethod::DormandPrince45;
  double rel_tol = 1e-6;
  /// Absolute tolerance per unit of population. 1e-8 lets sub-tolerance
  /// compartments dip below -1e-9 N between steps; 1e-10 keeps them above.
  double abs_tol_per_node = 1e-10;
  /// Fixed step for ClassicalRK4.
  double rk4_step = 1e-2;
  /// Steps smaller than this (relative to max(1, t)) count as underflow.
  double min_step = 1e-12;
};

struct TrajectoryRow {
  double t = 0.0;
  double susceptible = 0.0;
  double infected = 0.0;
  double mean_degree = 0.0;
  double edges = 0.0;
  double phi = 0.0;
};

class Trajectory {
 public:
  void append(double t, StateVector state);

  std::size_t size() const noexcept { return times_.size(); }
  std::span<const double> times() const noexcept { return times_; }
  const StateVector& state(std::size_t k) const { return states_.at(k); }
  const StateVector& back() const { return states_.back(); }

  TrajectoryRow row(std::size_t k) const;
  std::vector<double> prevalence() const;
  std::vector<double> mean_degree() const;
  std::vector<double> edges() const;

  /// CSV with header `t,S,I,mean_degree,edges,phi`.
  void write_csv(std::ostream& out) const;

 private:
  std::vector<double> times_;
  std::vector<StateVector> states_;
};

inline constexpr const char* kTrajectoryCsvHeader = "t,S,I,mean_degree,edges,phi";

std::vector<TrajectoryRow> read_trajectory_csv(std::istream& in);

/// Sample grid 0, dt, 2dt, ... up to t_end, with t_end appended when it is
/// not itself a grid point.
std::vector<double> sample_grid(double t_end, double sample_dt);

/// Integrates from t = 0 and samples the solution on sample_grid(t_end, sample_dt).
/// Throws IntegrationError if the step size underflows.
Trajectory integrate(const StateVector& initial, const ModelParams& params, double t_end, double sample_dt,
                     const IntegratorOptions& options = {});

}  // namespace dynsis
