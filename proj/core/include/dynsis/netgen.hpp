#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dynsis/graph.hpp"
#include "dynsis/rng.hpp"

namespace dynsis {

/// Target degree per node.
struct DegreeSequence {
  std::vector<int> degrees;

  long long sum() const noexcept;
  /// CSV `node,degree`.
  void write_csv(std::ostream& out) const;
  static DegreeSequence read_csv(std::istream& in);
};

/// Random k-regular graph on n nodes by stub matching with swap repair.
Graph regular_random(int nodes, int k, int max_degree, std::uint64_t seed);

/// Negative binomial parameters (r, p) matching mean = r(1-p)/p and
/// variance = mean/p.
struct NegativeBinomialShape {
  double r = 0.0;
  double p = 0.0;
};
NegativeBinomialShape negative_binomial_shape(double mean, double variance);

/// Draws one value from NB(r, p) by CDF inversion.
int sample_negative_binomial(const NegativeBinomialShape& shape, Rng& rng);

/// i.i.d. negative binomial degrees; draws above max_degree are redrawn and an
/// odd total is fixed by redrawing one uniformly chosen entry.
DegreeSequence negative_binomial_degrees(int nodes, double mean, double variance, int max_degree,
                                         std::uint64_t seed);

/// Realises `seq` exactly as a simple graph: random stub matching, then
/// degree-preserving double-edge swaps until no self-loops or multi-edges
/// remain. Throws GenerationError after 10^4 fruitless sweeps.
Graph configuration_model(const DegreeSequence& seq, int max_degree, std::uint64_t seed);

/// Uniformly random I0-subset of {0..N-1}, sorted.
std::vector<NodeId> seed_infection(int nodes, int count, std::uint64_t seed);

}  // namespace dynsis
