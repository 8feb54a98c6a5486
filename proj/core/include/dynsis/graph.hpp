#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace dynsis {

using NodeId = std::uint32_t;

/// Undirected simple graph with a hard per-node degree cap.
class Graph {
 public:
  Graph(int nodes, int max_degree);

  int size() const noexcept { return static_cast<int>(adjacency_.size()); }
  int max_degree() const noexcept { return max_degree_; }
  int degree(NodeId v) const { return static_cast<int>(adjacency_[v].size()); }
  int free_stubs(NodeId v) const { return max_degree_ - degree(v); }
  std::span<const NodeId> neighbours(NodeId v) const { return adjacency_[v]; }
  std::size_t edge_count() const noexcept { return edges_; }

  bool has_edge(NodeId u, NodeId v) const;
  /// Returns false (and changes nothing) for self-loops, existing edges or
  /// when either endpoint is at the cap.
  bool add_edge(NodeId u, NodeId v);
  bool remove_edge(NodeId u, NodeId v);

  /// All edges as (u, v) with u < v, sorted.
  std::vector<std::pair<NodeId, NodeId>> edges() const;
  std::vector<int> degrees() const;

  /// Symmetric adjacency, no self-loops or multi-edges, degrees within the cap.
  bool is_valid() const;

  /// Edge list: header `# N=<n> M=<m>`, then one `u,v` line per edge.
  void write_edge_list(std::ostream& out) const;
  static Graph read_edge_list(std::istream& in);

 private:
  int max_degree_;
  std::size_t edges_ = 0;
  std::vector<std::vector<NodeId>> adjacency_;
};

}  // namespace dynsis
