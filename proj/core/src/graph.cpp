#include "dynsis/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "dynsis/csv.hpp"
#include "dynsis/error.hpp"

namespace dynsis {

Graph::Graph(int nodes, int max_degree) : max_degree_(max_degree) {
  if (nodes < 0) throw DomainError("node count must be nonnegative");
  if (max_degree < 0) throw DomainError("degree cap must be nonnegative");
  adjacency_.resize(static_cast<std::size_t>(nodes));
  for (auto& nb : adjacency_) nb.reserve(static_cast<std::size_t>(max_degree));
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (adjacency_[u].size() > adjacency_[v].size()) std::swap(u, v);
  const auto& a = adjacency_[u];
  return std::find(a.begin(), a.end(), v) != a.end();
}

bool Graph::add_edge(NodeId u, NodeId v) {
  if (u == v || u >= adjacency_.size() || v >= adjacency_.size()) return false;
  if (degree(u) >= max_degree_ || degree(v) >= max_degree_) return false;
  if (has_edge(u, v)) return false;
  adjacency_[u].push_back(v);
  adjacency_[v].push_back(u);
  ++edges_;
  return true;
}

namespace {

bool erase_one(std::vector<NodeId>& list, NodeId x) {
  auto it = std::find(list.begin(), list.end(), x);
  if (it == list.end()) return false;
  *it = list.back();
  list.pop_back();
  return true;
}

}  // namespace

bool Graph::remove_edge(NodeId u, NodeId v) {
  if (u >= adjacency_.size() || v >= adjacency_.size()) return false;
  if (!erase_one(adjacency_[u], v)) return false;
  erase_one(adjacency_[v], u);
  --edges_;
  return true;
}

std::vector<std::pair<NodeId, NodeId>> Graph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(edges_);
  for (NodeId u = 0; u < adjacency_.size(); ++u)
    for (NodeId v : adjacency_[u])
      if (u < v) out.emplace_back(u, v);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> Graph::degrees() const {
  std::vector<int> out(adjacency_.size());
  for (std::size_t v = 0; v < adjacency_.size(); ++v) out[v] = static_cast<int>(adjacency_[v].size());
  return out;
}

bool Graph::is_valid() const {
  std::size_t stubs = 0;
  for (NodeId u = 0; u < adjacency_.size(); ++u) {
    const auto& nb = adjacency_[u];
    if (static_cast<int>(nb.size()) > max_degree_) return false;
    stubs += nb.size();
    for (std::size_t a = 0; a < nb.size(); ++a) {
      const NodeId v = nb[a];
      if (v == u || v >= adjacency_.size()) return false;
      for (std::size_t b = a + 1; b < nb.size(); ++b)
        if (nb[b] == v) return false;
      const auto& back = adjacency_[v];
      if (std::find(back.begin(), back.end(), u) == back.end()) return false;
    }
  }
  return stubs == 2 * edges_;
}

void Graph::write_edge_list(std::ostream& out) const {
  out << "# N=" << size() << " M=" << max_degree_ << '\n';
  for (const auto& [u, v] : edges()) out << u << ',' << v << '\n';
}

Graph Graph::read_edge_list(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DomainError("empty edge list");
  int n = -1;
  int m = -1;
  if (std::sscanf(line.c_str(), "# N=%d M=%d", &n, &m) != 2 || n < 0 || m < 0)
    throw DomainError("edge list header must be '# N=<n> M=<m>', got '" + line + "'");
  Graph g(n, m);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = csv::split(line);
    if (f.size() != 2) throw DomainError("edge list line " + std::to_string(lineno) + ": expected 'u,v'");
    const auto u = csv::parse_int(f[0]);
    const auto v = csv::parse_int(f[1]);
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw DomainError("edge list line " + std::to_string(lineno) + ": node id out of range");
    if (!g.add_edge(static_cast<NodeId>(u), static_cast<NodeId>(v)))
      throw DomainError("edge list line " + std::to_string(lineno) + ": invalid edge (loop, duplicate or cap)");
  }
  return g;
}

}  // namespace dynsis
