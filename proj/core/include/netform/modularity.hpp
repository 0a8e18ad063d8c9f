#pragma once

#include <vector>

#include "netform/graph.hpp"

namespace netform {

/// Newman modularity of a partition: sum over communities of (fraction of
/// edges inside) minus (fraction of edge endpoints inside)^2. Zero for the
/// single-community partition and for edgeless graphs. `community_of` maps
/// each node to an arbitrary nonnegative community id.
double modularity_q(const Graph& g, const std::vector<int>& community_of);

struct ModularityResult {
  std::vector<int> community_of;  // dense ids 0..community_count-1
  double q = 0.0;
  int community_count = 0;
};

/// Greedy agglomerative modularity maximization: start from singletons,
/// repeatedly merge the community pair with the largest Q gain, stop when no
/// merge improves Q. Ties break toward the smallest community-id pair, so the
/// result is deterministic.
ModularityResult detect_communities(const Graph& g);

}  // namespace netform
