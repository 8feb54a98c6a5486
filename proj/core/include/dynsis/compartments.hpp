#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace dynsis {

enum class Status : unsigned char { S = 0, I = 1 };

/// Disease and network rates of the dynamic SIS model.
///
/// beta is the per-link infection rate, gamma the per-node recovery rate,
/// alpha the creation rate per free stub and omega the deletion rate per
/// link. No node ever holds more than max_degree links.
struct ModelParams {
  double beta = 0.0;
  double gamma = 0.0;
  double alpha = 0.0;
  double omega = 0.0;
  int max_degree = 1;
  int population = 1;

  /// Throws DomainError on negative rates or non-positive M, N.
  void validate() const;
};

/// A node class of the effective degree model: its own status plus the
/// number of susceptible and infected neighbours.
struct Compartment {
  Status status = Status::S;
  int s = 0;
  int i = 0;

  int degree() const noexcept { return s + i; }
  friend bool operator==(const Compartment&, const Compartment&) = default;
};

/// Flat indexing of the (M+1)(M+2) compartments.
///
/// Pairs (s, i) are ordered by degree class k = s + i ascending, then by s
/// descending; the S compartment of a pair immediately precedes its I
/// compartment.
class CompartmentIndex {
 public:
  explicit CompartmentIndex(int max_degree);

  int max_degree() const noexcept { return max_degree_; }
  std::size_t size() const noexcept { return size_; }

  bool contains(int s, int i) const noexcept {
    return s >= 0 && i >= 0 && s + i <= max_degree_;
  }

  /// Throws DomainError if (s, i) lies outside the domain.
  std::size_t index_of(Status status, int s, int i) const;
  std::size_t index_of(const Compartment& c) const { return index_of(c.status, c.s, c.i); }

  /// Unchecked variant for hot loops; caller guarantees contains(s, i).
  std::size_t index_unchecked(Status status, int s, int i) const noexcept {
    const int k = s + i;
    const auto pair = static_cast<std::size_t>(k * (k + 1) / 2 + (k - s));
    return 2 * pair + static_cast<std::size_t>(status);
  }

  Compartment compartment_of(std::size_t index) const;

  static std::size_t domain_size(int max_degree) {
    const auto m = static_cast<std::size_t>(max_degree);
    return (m + 1) * (m + 2);
  }

 private:
  int max_degree_;
  std::size_t size_;
};

/// Expected compartment counts laid out per CompartmentIndex.
class StateVector {
 public:
  StateVector(int max_degree, double population);
  StateVector(int max_degree, double population, std::vector<double> values);

  const CompartmentIndex& index() const noexcept { return index_; }
  int max_degree() const noexcept { return index_.max_degree(); }
  double population() const noexcept { return population_; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double operator[](std::size_t k) const { return values_[k]; }
  double& operator[](std::size_t k) { return values_[k]; }

  double at(Status status, int s, int i) const { return values_[index_.index_of(status, s, i)]; }
  double& at(Status status, int s, int i) { return values_[index_.index_of(status, s, i)]; }

  double total() const noexcept;
  double infected() const noexcept;
  double susceptible() const noexcept { return total() - infected(); }

  /// Checks nonnegativity (to 1e-9 N) and node conservation (to 1e-6 N).
  bool is_valid() const noexcept;

 private:
  CompartmentIndex index_;
  double population_;
  std::vector<double> values_;
};

/// Degree profile p_0..p_M.
class DegreeDistribution {
 public:
  /// Throws DomainError unless entries are nonnegative and sum to 1 (1e-12).
  explicit DegreeDistribution(std::vector<double> p);

  static DegreeDistribution point_mass(int k, int max_degree);
  static DegreeDistribution binomial(int max_degree, double q);
  /// Negative binomial with the given moments, truncated at max_degree and renormalised.
  static DegreeDistribution negative_binomial(double mean, double variance, int max_degree);

  int max_degree() const noexcept { return static_cast<int>(p_.size()) - 1; }
  double operator[](int k) const { return p_[static_cast<std::size_t>(k)]; }
  std::span<const double> probabilities() const noexcept { return p_; }

  double mean() const noexcept;
  double variance() const noexcept;

  /// CSV with header `k,p_k`.
  void write_csv(std::ostream& out) const;
  static DegreeDistribution read_csv(std::istream& in);

 private:
  std::vector<double> p_;
};

struct NetworkStats {
  double lambda = 0.0;  ///< total occupied stubs, twice the edge count
  double phi = 0.0;     ///< total free stubs
  double edges = 0.0;
  double mean_degree = 0.0;
};

NetworkStats network_stats(const StateVector& state);

/// Stationary mean degree alpha M / (alpha + omega).
double equilibrium_mean_degree(const ModelParams& params);

/// Deletion rate that makes k_star the stationary mean degree.
double omega_for_target_degree(double alpha, int max_degree, double k_star);

/// Initial state in which every neighbour is independently infected with
/// probability rho0, consistent with nodes seeded uniformly at random.
StateVector initial_state(const DegreeDistribution& dist, double rho0, double population);

}  // namespace dynsis
