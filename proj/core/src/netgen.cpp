#include "dynsis/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>

#include "dynsis/csv.hpp"
#include "dynsis/error.hpp"

namespace dynsis {

long long DegreeSequence::sum() const noexcept {
  long long total = 0;
  for (int d : degrees) total += d;
  return total;
}

void DegreeSequence::write_csv(std::ostream& out) const {
  out << "node,degree\n";
  for (std::size_t v = 0; v < degrees.size(); ++v) out << v << ',' << degrees[v] << '\n';
}

DegreeSequence DegreeSequence::read_csv(std::istream& in) {
  DegreeSequence seq;
  const auto rows = csv::read_table(in, "node,degree");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (csv::parse_int(rows[r][0]) != static_cast<long long>(r)) throw DomainError("node ids must be 0..N-1 in order");
    seq.degrees.push_back(static_cast<int>(csv::parse_int(rows[r][1])));
  }
  return seq;
}

NegativeBinomialShape negative_binomial_shape(double mean, double variance) {
  if (!(mean > 0.0) || !(variance > mean))
    throw DomainError("negative binomial needs variance > mean > 0 (overdispersion)");
  return {mean * mean / (variance - mean), mean / variance};
}

int sample_negative_binomial(const NegativeBinomialShape& shape, Rng& rng) {
  const double u = rng.uniform();
  double pmf = std::pow(shape.p, shape.r);
  double cdf = pmf;
  int k = 0;
  while (cdf <= u) {
    pmf *= (k + shape.r) / (k + 1.0) * (1.0 - shape.p);
    ++k;
    cdf += pmf;
    // The tail mass left is below double resolution.
    if (pmf == 0.0 && k > 0) break;
  }
  return k;
}

DegreeSequence negative_binomial_degrees(int nodes, double mean, double variance, int max_degree,
                                         std::uint64_t seed) {
  const auto shape = negative_binomial_shape(mean, variance);
  if (nodes < 1) throw DomainError("need at least one node");
  if (max_degree < 1) throw DomainError("degree cap must be at least 1");
  Rng rng(seed);
  auto draw = [&] {
    for (;;) {
      const int k = sample_negative_binomial(shape, rng);
      if (k <= max_degree) return k;
    }
  };
  DegreeSequence seq;
  seq.degrees.resize(static_cast<std::size_t>(nodes));
  for (int& d : seq.degrees) d = draw();
  while (seq.sum() % 2 != 0) {
    const auto v = rng.below(static_cast<std::uint64_t>(nodes));
    seq.degrees[v] = draw();
  }
  return seq;
}

namespace {

std::uint64_t edge_key(NodeId u, NodeId v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

}  // namespace

Graph configuration_model(const DegreeSequence& seq, int max_degree, std::uint64_t seed) {
  const auto n = static_cast<int>(seq.degrees.size());
  for (int d : seq.degrees)
    if (d < 0 || d > max_degree) throw DomainError("degree sequence entry outside [0, M]");
  if (seq.sum() % 2 != 0) throw DomainError("degree sequence has an odd sum");
  for (int d : seq.degrees)
    if (d >= n && d > 0) throw DomainError("degree " + std::to_string(d) + " infeasible on " + std::to_string(n) + " nodes");

  Rng rng(seed);
  std::vector<NodeId> stubs;
  stubs.reserve(static_cast<std::size_t>(seq.sum()));
  for (int v = 0; v < n; ++v)
    for (int j = 0; j < seq.degrees[static_cast<std::size_t>(v)]; ++j) stubs.push_back(static_cast<NodeId>(v));
  for (std::size_t j = stubs.size(); j > 1; --j) std::swap(stubs[j - 1], stubs[rng.below(j)]);

  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(stubs.size() / 2);
  std::unordered_map<std::uint64_t, int> multiplicity;
  for (std::size_t j = 0; j + 1 < stubs.size(); j += 2) {
    edges.emplace_back(stubs[j], stubs[j + 1]);
    ++multiplicity[edge_key(stubs[j], stubs[j + 1])];
  }
  auto is_bad = [&](const std::pair<NodeId, NodeId>& e) {
    return e.first == e.second || multiplicity[edge_key(e.first, e.second)] > 1;
  };

  constexpr int kMaxSweeps = 10000;
  bool clean = false;
  for (int sweep = 0; sweep < kMaxSweeps && !clean; ++sweep) {
    std::vector<std::size_t> bad;
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (is_bad(edges[e])) bad.push_back(e);
    if (bad.empty()) {
      clean = true;
      break;
    }
    if (edges.size() < 2) break;
    for (std::size_t e : bad) {
      if (!is_bad(edges[e])) continue;
      const std::size_t f = rng.below(edges.size());
      if (f == e) continue;
      auto [a, b] = edges[e];
      auto [c, d] = edges[f];
      if (rng.below(2) == 1) std::swap(c, d);
      if (a == c || b == d) continue;
      const auto k1 = edge_key(a, c);
      const auto k2 = edge_key(b, d);
      if (k1 == k2 || multiplicity[k1] > 0 || multiplicity[k2] > 0) continue;
      --multiplicity[edge_key(a, b)];
      --multiplicity[edge_key(c, d)];
      ++multiplicity[k1];
      ++multiplicity[k2];
      edges[e] = {a, c};
      edges[f] = {b, d};
    }
  }
  if (!clean) {
    clean = std::none_of(edges.begin(), edges.end(), is_bad);
    if (!clean) throw GenerationError("configuration model repair did not converge");
  }

  Graph g(n, max_degree);
  for (const auto& [u, v] : edges)
    if (!g.add_edge(u, v)) throw GenerationError("configuration model produced an invalid edge");
  return g;
}

Graph regular_random(int nodes, int k, int max_degree, std::uint64_t seed) {
  if (nodes < 1) throw DomainError("need at least one node");
  if (k < 0 || k > max_degree) throw DomainError("regular degree must lie in [0, M]");
  if (k > 0 && k >= nodes) throw DomainError("k-regular graph needs k < N");
  if ((static_cast<long long>(nodes) * k) % 2 != 0) throw DomainError("N k must be even");
  DegreeSequence seq{std::vector<int>(static_cast<std::size_t>(nodes), k)};
  return configuration_model(seq, max_degree, seed);
}

std::vector<NodeId> seed_infection(int nodes, int count, std::uint64_t seed) {
  if (count < 0 || count > nodes) throw DomainError("I0 must lie in [0, N]");
  Rng rng(seed);
  std::vector<NodeId> pool(static_cast<std::size_t>(nodes));
  for (int v = 0; v < nodes; ++v) pool[static_cast<std::size_t>(v)] = static_cast<NodeId>(v);
  for (int j = 0; j < count; ++j) {
    const auto pick = static_cast<std::size_t>(j) + rng.below(static_cast<std::uint64_t>(nodes - j));
    std::swap(pool[static_cast<std::size_t>(j)], pool[pick]);
  }
  pool.resize(static_cast<std::size_t>(count));
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace dynsis
