#include "dynsis/compartments.hpp"

#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include "dynsis/csv.hpp"
#include "dynsis/error.hpp"

namespace dynsis {

void ModelParams::validate() const {
  if (!(beta >= 0.0) || !(gamma >= 0.0) || !(alpha >= 0.0) || !(omega >= 0.0))
    throw DomainError("model rates must be nonnegative");
  if (max_degree < 1) throw DomainError("maximum degree M must be at least 1");
  if (population < 1) throw DomainError("population N must be at least 1");
}

CompartmentIndex::CompartmentIndex(int max_degree)
    : max_degree_(max_degree), size_(0) {
  if (max_degree < 0) throw DomainError("maximum degree must be nonnegative");
  size_ = domain_size(max_degree);
}

std::size_t CompartmentIndex::index_of(Status status, int s, int i) const {
  if (!contains(s, i))
    throw DomainError("compartment (" + std::to_string(s) + "," + std::to_string(i) +
                      ") outside domain for M=" + std::to_string(max_degree_));
  return index_unchecked(status, s, i);
}

Compartment CompartmentIndex::compartment_of(std::size_t index) const {
  if (index >= size_) throw DomainError("compartment index out of range");
  const auto pair = static_cast<long>(index / 2);
  auto k = static_cast<long>((std::sqrt(8.0 * static_cast<double>(pair) + 1.0) - 1.0) / 2.0);
  while (k * (k + 1) / 2 > pair) --k;
  while ((k + 1) * (k + 2) / 2 <= pair) ++k;
  const long offset = pair - k * (k + 1) / 2;
  const int s = static_cast<int>(k - offset);
  const int i = static_cast<int>(k) - s;
  return {index % 2 == 0 ? Status::S : Status::I, s, i};
}

StateVector::StateVector(int max_degree, double population)
    : index_(max_degree), population_(population), values_(index_.size(), 0.0) {}

StateVector::StateVector(int max_degree, double population, std::vector<double> values)
    : index_(max_degree), population_(population), values_(std::move(values)) {
  if (values_.size() != index_.size())
    throw DomainError("state vector length does not match (M+1)(M+2)");
}

double StateVector::total() const noexcept {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

double StateVector::infected() const noexcept {
  double sum = 0.0;
  for (std::size_t k = 1; k < values_.size(); k += 2) sum += values_[k];
  return sum;
}

bool StateVector::is_valid() const noexcept {
  const double tol = 1e-9 * population_;
  for (double v : values_)
    if (!(v >= -tol)) return false;
  return std::abs(total() - population_) <= 1e-6 * population_;
}

DegreeDistribution::DegreeDistribution(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) throw DomainError("degree distribution is empty");
  double sum = 0.0;
  for (double v : p_) {
    if (!(v >= 0.0)) throw DomainError("degree probabilities must be nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw DomainError("degree probabilities sum to " + csv::format(sum) + ", not 1");
}

DegreeDistribution DegreeDistribution::point_mass(int k, int max_degree) {
  if (max_degree < 0 || k < 0 || k > max_degree) throw DomainError("point mass degree outside [0, M]");
  std::vector<double> p(static_cast<std::size_t>(max_degree) + 1, 0.0);
  p[static_cast<std::size_t>(k)] = 1.0;
  return DegreeDistribution(std::move(p));
}

DegreeDistribution DegreeDistribution::binomial(int max_degree, double q) {
  if (max_degree < 0 || !(q >= 0.0 && q <= 1.0)) throw DomainError("binomial needs M >= 0 and q in [0,1]");
  std::vector<double> p(static_cast<std::size_t>(max_degree) + 1);
  for (int k = 0; k <= max_degree; ++k) {
    // lgamma keeps C(M,k) finite for large M.
    const double log_choose = std::lgamma(max_degree + 1.0) - std::lgamma(k + 1.0) - std::lgamma(max_degree - k + 1.0);
    const double a = k == 0 ? 1.0 : std::pow(q, k);
    const double b = k == max_degree ? 1.0 : std::pow(1.0 - q, max_degree - k);
    p[static_cast<std::size_t>(k)] = std::exp(log_choose) * a * b;
  }
  const double sum = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= sum;
  return DegreeDistribution(std::move(p));
}

DegreeDistribution DegreeDistribution::negative_binomial(double mean, double variance, int max_degree) {
  if (!(mean > 0.0) || !(variance > mean))
    throw DomainError("negative binomial requires variance > mean > 0");
  const double r = mean * mean / (variance - mean);
  const double prob = mean / variance;
  std::vector<double> p(static_cast<std::size_t>(max_degree) + 1);
  double term = std::pow(prob, r);
  for (int k = 0; k <= max_degree; ++k) {
    p[static_cast<std::size_t>(k)] = term;
    term *= (k + r) / (k + 1.0) * (1.0 - prob);
  }
  const double sum = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= sum;
  return DegreeDistribution(std::move(p));
}

double DegreeDistribution::mean() const noexcept {
  double m = 0.0;
  for (std::size_t k = 0; k < p_.size(); ++k) m += static_cast<double>(k) * p_[k];
  return m;
}

double DegreeDistribution::variance() const noexcept {
  const double m = mean();
  double v = 0.0;
  for (std::size_t k = 0; k < p_.size(); ++k) v += (static_cast<double>(k) - m) * (static_cast<double>(k) - m) * p_[k];
  return v;
}

void DegreeDistribution::write_csv(std::ostream& out) const {
  out << "k,p_k\n";
  for (std::size_t k = 0; k < p_.size(); ++k) out << k << ',' << csv::format(p_[k]) << '\n';
}

DegreeDistribution DegreeDistribution::read_csv(std::istream& in) {
  const auto rows = csv::read_table(in, "k,p_k");
  std::vector<double> p(rows.size(), 0.0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (csv::parse_int(rows[r][0]) != static_cast<long long>(r))
      throw DomainError("degree distribution rows must list k = 0..M in order");
    p[r] = csv::parse_double(rows[r][1]);
  }
  return DegreeDistribution(std::move(p));
}

NetworkStats network_stats(const StateVector& state) {
  const int m = state.max_degree();
  const auto& idx = state.index();
  NetworkStats out;
  for (int k = 0; k <= m; ++k) {
    for (int s = k; s >= 0; --s) {
      const int i = k - s;
      const double nodes = state[idx.index_unchecked(Status::S, s, i)] + state[idx.index_unchecked(Status::I, s, i)];
      out.lambda += k * nodes;
      out.phi += (m - k) * nodes;
    }
  }
  out.edges = out.lambda / 2.0;
  out.mean_degree = out.lambda / state.population();
  return out;
}

double equilibrium_mean_degree(const ModelParams& params) {
  if (!(params.alpha + params.omega > 0.0))
    throw DomainError("equilibrium degree undefined when alpha = omega = 0");
  return params.alpha * params.max_degree / (params.alpha + params.omega);
}

double omega_for_target_degree(double alpha, int max_degree, double k_star) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  if (!(k_star > 0.0) || k_star > max_degree) throw DomainError("target degree must lie in (0, M]");
  return alpha * (max_degree - k_star) / k_star;
}

StateVector initial_state(const DegreeDistribution& dist, double rho0, double population) {
  if (!(rho0 >= 0.0 && rho0 <= 1.0)) throw DomainError("initial infected fraction must lie in [0,1]");
  if (!(population > 0.0)) throw DomainError("population must be positive");
  const int m = dist.max_degree();
  StateVector state(m, population);
  const auto& idx = state.index();
  for (int k = 0; k <= m; ++k) {
    const double pk = dist[k];
    if (pk == 0.0) continue;
    double choose = 1.0;  // C(k, i), updated incrementally
    for (int i = 0; i <= k; ++i) {
      const int s = k - i;
      const double mix = pk * choose * std::pow(rho0, i) * std::pow(1.0 - rho0, s);
      state[idx.index_unchecked(Status::S, s, i)] = population * (1.0 - rho0) * mix;
      state[idx.index_unchecked(Status::I, s, i)] = population * rho0 * mix;
      choose = choose * (k - i) / (i + 1);
    }
  }
  return state;
}

}  // namespace dynsis
