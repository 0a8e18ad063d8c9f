#pragma once

// Internal helpers for exhaustive graph enumeration. Graphs are identified by
// their canonical bitset code; workers scan disjoint contiguous code ranges
// and results are merged in range order, which keeps every outcome identical
// regardless of the thread count.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <thread>
#include <utility>
#include <vector>

#include "netform/graph.hpp"

namespace netform::detail {

/// Bit index -> node pair, for decoding graph codes without division.
struct PairTable {
  explicit PairTable(int n) {
    pairs.reserve(static_cast<std::size_t>(Graph::pair_count(n)));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::vector<std::pair<int, int>> pairs;
};

inline void build_adjacency(std::uint64_t code, const PairTable& table, int n,
                            std::uint64_t* adj) {
  std::fill(adj, adj + n, 0ull);
  while (code) {
    const auto [i, j] = table.pairs[std::countr_zero(code)];
    code &= code - 1;
    adj[i] |= 1ull << j;
    adj[j] |= 1ull << i;
  }
}

/// Runs fn(chunk_index, begin, end) over a partition of [0, total) and
/// returns the number of chunks. Chunks are contiguous and ascending.
template <typename Fn>
int for_each_chunk(std::uint64_t total, int threads, Fn&& fn) {
  int chunks = std::max(1, std::min<int>(threads, 64));
  if (static_cast<std::uint64_t>(chunks) > total) chunks = static_cast<int>(std::max<std::uint64_t>(total, 1));
  if (chunks == 1) {
    fn(0, std::uint64_t{0}, total);
    return 1;
  }
  const std::uint64_t per = total / chunks;
  const std::uint64_t extra = total % chunks;
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(chunks));
  std::uint64_t begin = 0;
  for (int c = 0; c < chunks; ++c) {
    const std::uint64_t len = per + (static_cast<std::uint64_t>(c) < extra ? 1 : 0);
    const std::uint64_t end = begin + len;
    workers.emplace_back([&fn, c, begin, end] { fn(c, begin, end); });
    begin = end;
  }
  for (auto& w : workers) w.join();
  return chunks;
}

}  // namespace netform::detail
