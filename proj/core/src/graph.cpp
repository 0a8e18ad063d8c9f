#include "netform/graph.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace netform {

namespace {

int checked_size(int n) {
  if (n < 1) throw std::invalid_argument("graph size must be at least 1");
  if (n > Graph::kMaxNodes)
    throw std::invalid_argument("graph size exceeds supported limit of " +
                                std::to_string(Graph::kMaxNodes) + " nodes");
  return n;
}

}  // namespace

DistanceMatrix::DistanceMatrix(int n, std::vector<int> hops) : n_(n), d_(std::move(hops)) {
  if (d_.size() != static_cast<std::size_t>(n_) * n_)
    throw std::invalid_argument("distance matrix size mismatch");
}

void DistanceMatrix::check(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_)
    throw std::out_of_range("node index out of range");
}

bool DistanceMatrix::reachable(int i, int j) const {
  check(i, j);
  return raw(i, j) >= 0;
}

int DistanceMatrix::hops(int i, int j) const {
  check(i, j);
  const int d = raw(i, j);
  if (d < 0) throw std::logic_error("hops() queried for an unreachable pair");
  return d;
}

int DistanceMatrix::diameter() const {
  int result = 0;
  for (const int d : d_)
    if (d > result) result = d;
  return result;
}

Graph::Graph(int n) : n_(checked_size(n)), adj_(static_cast<std::size_t>(n), 0) {}

Graph Graph::empty(int n) { return Graph(n); }

Graph Graph::complete(int n) {
  Graph g(n);
  const std::uint64_t all = (n == 64) ? ~0ull : ((1ull << n) - 1);
  for (int i = 0; i < n; ++i) g.adj_[i] = all & ~(1ull << i);
  g.edge_count_ = g.max_edges();
  return g;
}

Graph Graph::star(int n, int hub) {
  Graph g(n);
  if (hub < 0 || hub >= n) throw std::out_of_range("star hub out of range");
  for (int i = 0; i < n; ++i) {
    if (i == hub) continue;
    g.adj_[hub] |= 1ull << i;
    g.adj_[i] |= 1ull << hub;
  }
  g.edge_count_ = n - 1;
  return g;
}

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  Graph g(n);
  for (const auto& [i, j] : edges) g = g.with_edge(i, j);
  return g;
}

void Graph::check_node(int i) const {
  if (i < 0 || i >= n_) throw std::out_of_range("node index out of range");
}

bool Graph::has_edge(int i, int j) const {
  check_node(i);
  check_node(j);
  return i != j && (adj_[i] >> j) & 1ull;
}

int Graph::degree(int i) const {
  check_node(i);
  return std::popcount(adj_[i]);
}

std::uint64_t Graph::neighbor_mask(int i) const {
  check_node(i);
  return adj_[i];
}

std::vector<int> Graph::neighbors(int i) const {
  std::uint64_t m = neighbor_mask(i);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(std::popcount(m)));
  while (m) {
    out.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return out;
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(edge_count_));
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if ((adj_[i] >> j) & 1ull) out.emplace_back(i, j);
  return out;
}

Graph Graph::with_edge(int i, int j) const {
  check_node(i);
  check_node(j);
  if (i == j) throw std::invalid_argument("self-loops are not allowed");
  Graph g = *this;
  if (!((g.adj_[i] >> j) & 1ull)) {
    g.adj_[i] |= 1ull << j;
    g.adj_[j] |= 1ull << i;
    ++g.edge_count_;
  }
  return g;
}

Graph Graph::without_edge(int i, int j) const {
  check_node(i);
  check_node(j);
  Graph g = *this;
  if (i != j && ((g.adj_[i] >> j) & 1ull)) {
    g.adj_[i] &= ~(1ull << j);
    g.adj_[j] &= ~(1ull << i);
    --g.edge_count_;
  }
  return g;
}

DistanceMatrix Graph::distances() const {
  std::vector<int> d(static_cast<std::size_t>(n_) * n_, -1);
  for (int src = 0; src < n_; ++src) {
    int* row = d.data() + static_cast<std::size_t>(src) * n_;
    row[src] = 0;
    std::uint64_t visited = 1ull << src;
    std::uint64_t frontier = visited;
    for (int depth = 1; frontier && depth < n_; ++depth) {
      std::uint64_t next = 0;
      std::uint64_t f = frontier;
      while (f) {
        next |= adj_[std::countr_zero(f)];
        f &= f - 1;
      }
      next &= ~visited;
      if (!next) break;
      std::uint64_t reached = next;
      while (reached) {
        row[std::countr_zero(reached)] = depth;
        reached &= reached - 1;
      }
      visited |= next;
      frontier = next;
    }
  }
  return DistanceMatrix(n_, std::move(d));
}

std::vector<int> Graph::neighborhood(int i, int max_hops) const {
  check_node(i);
  if (max_hops < 1 || max_hops > n_ - 1)
    throw std::invalid_argument("neighborhood radius must be in [1, n-1]");
  std::uint64_t visited = 1ull << i;
  std::uint64_t frontier = visited;
  for (int depth = 1; frontier && depth <= max_hops; ++depth) {
    std::uint64_t next = 0;
    std::uint64_t f = frontier;
    while (f) {
      next |= adj_[std::countr_zero(f)];
      f &= f - 1;
    }
    next &= ~visited;
    visited |= next;
    frontier = next;
  }
  std::uint64_t reached = visited & ~(1ull << i);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(std::popcount(reached)));
  while (reached) {
    out.push_back(std::countr_zero(reached));
    reached &= reached - 1;
  }
  return out;
}

int Graph::pair_bit(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::uint64_t Graph::code() const {
  if (pair_count(n_) > 64)
    throw std::logic_error("bitset encoding requires n(n-1)/2 <= 64");
  std::uint64_t code = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if ((adj_[i] >> j) & 1ull) code |= 1ull << pair_bit(n_, i, j);
  return code;
}

Graph Graph::from_code(int n, std::uint64_t code) {
  if (pair_count(n) > 64)
    throw std::logic_error("bitset encoding requires n(n-1)/2 <= 64");
  Graph g(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((code >> pair_bit(n, i, j)) & 1ull) {
        g.adj_[i] |= 1ull << j;
        g.adj_[j] |= 1ull << i;
        ++g.edge_count_;
      }
    }
  }
  return g;
}

}  // namespace netform
