#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace netform {

/// All-pairs hop counts. Unreachable pairs are a distinct state queried via
/// reachable(); hops() refuses to answer for them so that "infinity" can
/// never leak into arithmetic.
class DistanceMatrix {
 public:
  DistanceMatrix(int n, std::vector<int> hops);

  int size() const { return n_; }
  bool reachable(int i, int j) const;
  /// Hop count between reachable i and j (0 when i == j). Throws
  /// std::logic_error for unreachable pairs.
  int hops(int i, int j) const;
  /// Largest finite hop count over all pairs (0 for an edgeless graph).
  int diameter() const;

 private:
  int raw(int i, int j) const { return d_[static_cast<std::size_t>(i) * n_ + j]; }
  void check(int i, int j) const;

  int n_;
  std::vector<int> d_;  // -1 marks unreachable
};

/// Undirected simple graph over nodes 0..n-1. Values are immutable: edge
/// mutation returns a new graph, so candidate structures g+ij / g-ij can be
/// explored without aliasing. Node count is capped at 64 to allow bitmask
/// adjacency rows.
class Graph {
 public:
  static constexpr int kMaxNodes = 64;

  static Graph empty(int n);
  static Graph complete(int n);
  static Graph star(int n, int hub);
  static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

  int node_count() const { return n_; }
  int edge_count() const { return edge_count_; }
  int max_edges() const { return n_ * (n_ - 1) / 2; }

  bool has_edge(int i, int j) const;
  int degree(int i) const;
  std::uint64_t neighbor_mask(int i) const;
  std::vector<int> neighbors(int i) const;
  /// Edges as (i, j) pairs with i < j, ascending.
  std::vector<std::pair<int, int>> edges() const;

  /// Copy of this graph with edge {i,j} present (no-op if already there).
  Graph with_edge(int i, int j) const;
  /// Copy of this graph with edge {i,j} absent (no-op if already absent).
  Graph without_edge(int i, int j) const;

  /// Per-source breadth-first hop counts for all pairs.
  DistanceMatrix distances() const;
  /// Nodes j != i with d(i,j) <= max_hops, ascending. Requires
  /// 1 <= max_hops <= n-1.
  std::vector<int> neighborhood(int i, int max_hops) const;

  // Canonical bitset encoding: bit index of pair (i,j), i<j, is
  // i*n - i*(i+1)/2 + (j-i-1). Gives enumeration a deterministic total order.
  static int pair_count(int n) { return n * (n - 1) / 2; }
  static int pair_bit(int n, int i, int j);
  std::uint64_t code() const;
  static Graph from_code(int n, std::uint64_t code);

  bool operator==(const Graph& other) const = default;

 private:
  explicit Graph(int n);
  void check_node(int i) const;

  int n_ = 0;
  int edge_count_ = 0;
  std::vector<std::uint64_t> adj_;
};

}  // namespace netform
