#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "dynsis/compartments.hpp"
#include "dynsis/transitions.hpp"

namespace dynsis {

/// Indexing of the (M+1)^2 disease states: every I_{s,i} and every S_{s,i}
/// with i >= 1.
///
/// States are grouped by degree class k ascending. Within class k the S
/// states S_{k-1,1} .. S_{0,k} come first, then I_{k,0} .. I_{0,k}; both runs
/// are ordered by s descending, so class k occupies [k^2, (k+1)^2).
class DiseaseStateIndex {
 public:
  explicit DiseaseStateIndex(int max_degree);

  int max_degree() const noexcept { return max_degree_; }
  std::size_t size() const noexcept { return size_; }
  static std::size_t class_offset(int k) noexcept { return static_cast<std::size_t>(k) * static_cast<std::size_t>(k); }

  /// Position of `c`, or nullopt when c is not a disease state (S_{s,0}).
  std::optional<std::size_t> find(const Compartment& c) const noexcept;
  Compartment state(std::size_t position) const;

 private:
  int max_degree_;
  std::size_t size_;
};

/// Disease-free network profile S_{k,0}, k = 0..M.
struct DfeState {
  std::vector<double> s_k0;

  int max_degree() const noexcept { return static_cast<int>(s_k0.size()) - 1; }
  double population() const noexcept;
  /// sum k S_{k,0}
  double stubs() const noexcept;
  /// sum (M - k) S_{k,0}
  double free_stubs() const noexcept;
};

DfeState dfe_from_distribution(const DegreeDistribution& dist, double population);

/// DFE at the network's own stationary state, Binomial(M, alpha/(alpha+omega)).
DfeState dfe_network_equilibrium(const ModelParams& params);

/// Mixing coefficients of the linearisation at the DFE.
///
/// Near the DFE a susceptible neighbour of an infected node has exactly one
/// infected neighbour, so G_I tends to beta. G_S and P_I vanish and P_S = 1
/// whenever the DFE has free stubs.
MixingCoefficients dfe_limit_mixing(const DfeState& dfe, const ModelParams& params);

struct NgmMatrices {
  Eigen::MatrixXd F;
  Eigen::MatrixXd V;
};

/// New-infection matrix F = F_s + F_d (two rank-one outer products).
Eigen::MatrixXd assemble_F(const DfeState& dfe, const ModelParams& params);

/// Linearised transitions among disease states, generated from the
/// transition catalog at the DFE-limit mixing coefficients.
Eigen::MatrixXd assemble_V(const DfeState& dfe, const ModelParams& params);

NgmMatrices assemble_ngm(const DfeState& dfe, const ModelParams& params);

struct SpectralRadius {
  double value = 0.0;
  int iterations = 0;
};

/// rho(F V^{-1}) by power iteration on w -> F (V^{-1} w), V factorised once.
/// Throws NumericalError if V is singular or the iteration stalls.
SpectralRadius spectral_radius_power(const NgmMatrices& ngm);

double r0(const DfeState& dfe, const ModelParams& params);

/// Static-network R0 from per-degree-class solves V_k x = u_k.
double static_r0(const DegreeDistribution& dist, double beta, double gamma, double population, int max_degree);

/// Homogeneous-mixing limit beta <k>* / gamma.
double meanfield_r0(const ModelParams& params);

/// Central finite-difference Jacobian of the ODE right-hand side at the
/// DFE, restricted to disease states, with step 1e-6 N.
///
/// G_I is a ratio of two quantities that both vanish at the DFE and is not
/// differentiable there, so the oracle holds it at its DFE limit; all other
/// mixing terms are recomputed from each perturbed state.
Eigen::MatrixXd jacobian_oracle(const DfeState& dfe, const ModelParams& params);

}  // namespace dynsis
