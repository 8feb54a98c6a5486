#include "dynsis/ngm.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "dynsis/csv.hpp"
#include "dynsis/error.hpp"
#include "dynsis/ode.hpp"

namespace dynsis {

DiseaseStateIndex::DiseaseStateIndex(int max_degree)
    : max_degree_(max_degree), size_(class_offset(max_degree + 1)) {
  if (max_degree < 0) throw DomainError("maximum degree must be nonnegative");
}

std::optional<std::size_t> DiseaseStateIndex::find(const Compartment& c) const noexcept {
  const int k = c.s + c.i;
  if (c.s < 0 || c.i < 0 || k > max_degree_) return std::nullopt;
  if (c.status == Status::S) {
    if (c.i == 0) return std::nullopt;
    return class_offset(k) + static_cast<std::size_t>(k - 1 - c.s);
  }
  return class_offset(k) + static_cast<std::size_t>(k + (k - c.s));
}

Compartment DiseaseStateIndex::state(std::size_t position) const {
  if (position >= size_) throw DomainError("disease state position out of range");
  const auto k = static_cast<int>(std::sqrt(static_cast<double>(position)) + 1e-9);
  const int local = static_cast<int>(position - class_offset(k));
  if (local < k) {
    const int s = k - 1 - local;
    return {Status::S, s, k - s};
  }
  const int s = k - (local - k);
  return {Status::I, s, k - s};
}

double DfeState::population() const noexcept { return std::accumulate(s_k0.begin(), s_k0.end(), 0.0); }

double DfeState::stubs() const noexcept {
  double sum = 0.0;
  for (std::size_t k = 0; k < s_k0.size(); ++k) sum += static_cast<double>(k) * s_k0[k];
  return sum;
}

double DfeState::free_stubs() const noexcept {
  const int m = max_degree();
  double sum = 0.0;
  for (int k = 0; k <= m; ++k) sum += (m - k) * s_k0[static_cast<std::size_t>(k)];
  return sum;
}

DfeState dfe_from_distribution(const DegreeDistribution& dist, double population) {
  if (!(population > 0.0)) throw DomainError("population must be positive");
  DfeState dfe;
  dfe.s_k0.reserve(dist.probabilities().size());
  for (double p : dist.probabilities()) dfe.s_k0.push_back(population * p);
  return dfe;
}

DfeState dfe_network_equilibrium(const ModelParams& params) {
  params.validate();
  const double q = equilibrium_mean_degree(params) / params.max_degree;
  return dfe_from_distribution(DegreeDistribution::binomial(params.max_degree, q), params.population);
}

MixingCoefficients dfe_limit_mixing(const DfeState& dfe, const ModelParams& params) {
  MixingCoefficients mix;
  mix.g_s = 0.0;
  mix.g_i = params.beta;
  mix.p_s = dfe.free_stubs() > kMixingDenominatorFloor ? 1.0 : 0.0;
  mix.p_i = 0.0;
  return mix;
}

namespace {

void check_compatible(const DfeState& dfe, const ModelParams& params) {
  params.validate();
  if (dfe.max_degree() != params.max_degree) throw DomainError("DFE profile and parameters disagree on M");
  for (double v : dfe.s_k0)
    if (!(v >= 0.0)) throw DomainError("DFE populations must be nonnegative");
}

}  // namespace

Eigen::MatrixXd assemble_F(const DfeState& dfe, const ModelParams& params) {
  check_compatible(dfe, params);
  const int m = params.max_degree;
  const DiseaseStateIndex index(m);
  const auto n = static_cast<Eigen::Index>(index.size());
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n, n);

  // Static route: a susceptible neighbour of an S_{k,0} node is infected,
  // moving the node to S_{k-1,1}.
  const double stubs = dfe.stubs();
  if (params.beta > 0.0 && stubs > kMixingDenominatorFloor) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    for (int k = 1; k <= m; ++k) {
      const auto off = static_cast<Eigen::Index>(DiseaseStateIndex::class_offset(k));
      u(off) = k * dfe.s_k0[static_cast<std::size_t>(k)];
      for (int s = k - 1; s >= 1; --s) v(off + (k - 1 - s)) = static_cast<double>(s) * (k - s);
    }
    f += (params.beta / stubs) * u * v.transpose();
  }

  // Dynamic route: an S_{k-1,0} node links to a free stub of an infected node.
  const double free = dfe.free_stubs();
  if (params.alpha > 0.0 && free > kMixingDenominatorFloor) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    for (int k = 0; k <= m; ++k) {
      const auto off = static_cast<Eigen::Index>(DiseaseStateIndex::class_offset(k));
      if (k >= 1) u(off) = (m - (k - 1)) * dfe.s_k0[static_cast<std::size_t>(k - 1)];
      for (int j = 0; j <= k; ++j) v(off + k + j) = m - k;
    }
    f += (params.alpha / free) * u * v.transpose();
  }
  return f;
}

Eigen::MatrixXd assemble_V(const DfeState& dfe, const ModelParams& params) {
  check_compatible(dfe, params);
  const DiseaseStateIndex index(params.max_degree);
  const auto n = static_cast<Eigen::Index>(index.size());
  const auto mix = dfe_limit_mixing(dfe, params);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t col = 0; col < index.size(); ++col) {
    const auto from = index.state(col);
    const auto c = static_cast<Eigen::Index>(col);
    for_each_transition(from, params, mix, [&](TransitionKind, const Compartment& to, double rate) {
      v(c, c) += rate;
      if (auto row = index.find(to)) v(static_cast<Eigen::Index>(*row), c) -= rate;
    });
  }
  return v;
}

NgmMatrices assemble_ngm(const DfeState& dfe, const ModelParams& params) {
  return {assemble_F(dfe, params), assemble_V(dfe, params)};
}

SpectralRadius spectral_radius_power(const NgmMatrices& ngm) {
  constexpr int kMaxIterations = 100000;
  constexpr double kRelTol = 1e-10;

  if (ngm.F.isZero(0.0)) return {0.0, 0};
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(ngm.V);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) throw NumericalError("transition matrix V is singular (rcond=" + csv::format(rcond) + ")");

  const auto n = ngm.F.rows();
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  double previous = 0.0;
  for (int it = 1; it <= kMaxIterations; ++it) {
    Eigen::VectorXd y = ngm.F * lu.solve(w);
    const double norm = y.lpNorm<1>();
    // w has unit 1-norm, so the growth factor is the eigenvalue estimate.
    const double estimate = norm;
    if (norm == 0.0) return {0.0, it};
    if (it > 1 && std::abs(estimate - previous) < kRelTol * estimate) return {estimate, it};
    previous = estimate;
    w = y / norm;
  }
  throw NumericalError("power iteration did not converge in " + std::to_string(kMaxIterations) +
                       " iterations (last estimate " + csv::format(previous) + ")");
}

double r0(const DfeState& dfe, const ModelParams& params) {
  return spectral_radius_power(assemble_ngm(dfe, params)).value;
}

double static_r0(const DegreeDistribution& dist, double beta, double gamma, double population, int max_degree) {
  if (dist.max_degree() != max_degree) throw DomainError("distribution support does not match M");
  if (!(beta >= 0.0) || !(gamma >= 0.0)) throw DomainError("rates must be nonnegative");
  double stubs = 0.0;
  for (int k = 1; k <= max_degree; ++k) stubs += k * population * dist[k];
  if (!(stubs > 0.0)) throw DomainError("static R0 needs a network with at least one link");
  if (beta == 0.0) return 0.0;

  double total = 0.0;
  for (int k = 1; k <= max_degree; ++k) {
    const double s_k0 = population * dist[k];
    if (s_k0 == 0.0) continue;
    // Block for class k: positions 0..k-1 hold S_{k-1-p, 1+p}, positions
    // k..2k hold I_{k-q, q}.
    const int n = 2 * k + 1;
    auto s_pos = [k](int s) { return k - 1 - s; };
    auto i_pos = [k](int s) { return k + (k - s); };
    Eigen::MatrixXd vk = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    u(0) = k * s_k0;
    for (int s = k - 1; s >= 0; --s) {
      const int i = k - s;
      const int c = s_pos(s);
      v(c) = static_cast<double>(s) * i;
      vk(c, c) += beta * i + gamma * i;
      vk(i_pos(s), c) -= beta * i;                    // becomes infected
      if (i > 1) vk(s_pos(s + 1), c) -= gamma * i;    // neighbour recovers, stays in class
    }
    for (int s = k; s >= 0; --s) {
      const int i = k - s;
      const int c = i_pos(s);
      vk(c, c) += gamma + gamma * i + beta * s;
      if (i >= 1) vk(s_pos(s), c) -= gamma;          // recovers to S_{s,i}
      if (i >= 1) vk(i_pos(s + 1), c) -= gamma * i;
      if (s >= 1) vk(i_pos(s - 1), c) -= beta * s;
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(vk);
    if (!(lu.rcond() > 1e-14)) throw NumericalError("static block V_" + std::to_string(k) + " is singular");
    total += v.dot(lu.solve(u));
  }
  return beta / stubs * total;
}

double meanfield_r0(const ModelParams& params) {
  return params.beta * equilibrium_mean_degree(params) / params.gamma;
}

Eigen::MatrixXd jacobian_oracle(const DfeState& dfe, const ModelParams& params) {
  check_compatible(dfe, params);
  const int m = params.max_degree;
  const CompartmentIndex full(m);
  const DiseaseStateIndex disease(m);
  const double population = dfe.population();
  const double h = 1e-6 * population;

  std::vector<double> base(full.size(), 0.0);
  for (int k = 0; k <= m; ++k) base[full.index_unchecked(Status::S, k, 0)] = dfe.s_k0[static_cast<std::size_t>(k)];

  std::vector<std::size_t> rows(disease.size());
  for (std::size_t p = 0; p < disease.size(); ++p) rows[p] = full.index_of(disease.state(p));

  const double g_i_limit = dfe_limit_mixing(dfe, params).g_i;
  auto eval = [&](const std::vector<double>& x, std::vector<double>& out) {
    auto mix = compute_mixing(full, params, x);
    mix.g_i = g_i_limit;
    rhs_with_mixing(full, params, mix, x, out);
  };

  const auto n = static_cast<Eigen::Index>(disease.size());
  Eigen::MatrixXd jac(n, n);
  std::vector<double> plus(base), minus(base), f_plus(full.size()), f_minus(full.size());
  for (Eigen::Index c = 0; c < n; ++c) {
    const std::size_t col = rows[static_cast<std::size_t>(c)];
    plus = base;
    minus = base;
    plus[col] += h;
    minus[col] -= h;
    eval(plus, f_plus);
    eval(minus, f_minus);
    for (Eigen::Index r = 0; r < n; ++r) {
      const std::size_t row = rows[static_cast<std::size_t>(r)];
      jac(r, c) = (f_plus[row] - f_minus[row]) / (2.0 * h);
    }
  }
  return jac;
}

}  // namespace dynsis
