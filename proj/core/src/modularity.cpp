#include "netform/modularity.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <stdexcept>

#include "netform/rng.hpp"
#include <vector>

namespace netform {

namespace {

std::vector<int> normalize_labels(const std::vector<int>& community_of) {
  std::vector<int> dense(community_of.size());
  std::map<int, int> remap;
  for (std::size_t i = 0; i < community_of.size(); ++i) {
    const auto it = remap.try_emplace(community_of[i], static_cast<int>(remap.size())).first;
    dense[i] = it->second;
  }
  return dense;
}

// Single-node moves: shift each node to whichever community (or a fresh one)
// improves Q the most, until a full pass changes nothing. Returns the Q of
// the refined partition. Labels are node ids; `partition` is edited in place.
double refine_partition(const Graph& g, std::vector<int>& partition) {
  const int n = g.node_count();
  const int m = g.edge_count();
  std::vector<double> share(static_cast<std::size_t>(n), 0.0);  // a_c per label
  std::vector<int> members(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    share[partition[i]] += g.degree(i) * 0.5 / m;
    ++members[partition[i]];
  }
  std::vector<double> attached(static_cast<std::size_t>(n), 0.0);  // e_{v,c} per label
  bool moved = true;
  while (moved) {
    moved = false;
    for (int v = 0; v < n; ++v) {
      const int from = partition[v];
      const double k_v = g.degree(v) * 0.5 / m;
      std::fill(attached.begin(), attached.end(), 0.0);
      for (const int u : g.neighbors(v)) attached[partition[u]] += 1.0 / m;

      int fresh = -1;  // one unused label offered as a "split off" target
      for (int label = 0; label < n; ++label) {
        if (members[label] == 0) {
          fresh = label;
          break;
        }
      }

      double best_gain = 1e-12;
      int target = -1;
      for (int label = 0; label < n; ++label) {
        if (label == from) continue;
        if (members[label] == 0 && (label != fresh || members[from] == 1)) continue;
        const double gain = attached[label] - attached[from] +
                            2.0 * k_v * (share[from] - share[label] - k_v);
        if (gain > best_gain) {
          best_gain = gain;
          target = label;
        }
      }
      if (target >= 0) {
        share[from] -= k_v;
        --members[from];
        share[target] += k_v;
        ++members[target];
        partition[v] = target;
        moved = true;
      }
    }
  }
  return modularity_q(g, partition);
}

}  // namespace

double modularity_q(const Graph& g, const std::vector<int>& community_of) {
  const int n = g.node_count();
  if (community_of.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("partition must assign a community to every node");
  for (const int c : community_of)
    if (c < 0) throw std::invalid_argument("community ids must be nonnegative");
  const int m = g.edge_count();
  if (m == 0) return 0.0;

  const std::vector<int> label = normalize_labels(community_of);
  const int k = 1 + *std::max_element(label.begin(), label.end());
  std::vector<double> inside(static_cast<std::size_t>(k), 0.0);     // e_cc
  std::vector<double> endpoints(static_cast<std::size_t>(k), 0.0);  // a_c
  for (const auto& [i, j] : g.edges()) {
    if (label[i] == label[j]) inside[label[i]] += 1.0;
    endpoints[label[i]] += 1.0;
    endpoints[label[j]] += 1.0;
  }
  double q = 0.0;
  for (int c = 0; c < k; ++c) {
    const double e_cc = inside[c] / m;
    const double a_c = endpoints[c] / (2.0 * m);
    q += e_cc - a_c * a_c;
  }
  return q;
}

// One agglomeration sweep. between[c][d]: fraction of edges with one endpoint
// in c, the other in d; a[c]: fraction of edge endpoints in c. Merging c and
// d changes Q by between[c][d] - 2 a[c] a[d]. The dendrogram is built all the
// way down to one community; every level is polished with local node moves
// and the best polished partition wins, so a plateau early in the merge path
// cannot trap the result.
double agglomerate(const Graph& g, std::vector<int>& best_partition) {
  const int n = g.node_count();
  const int m = g.edge_count();
  std::vector<std::vector<double>> between(static_cast<std::size_t>(n),
                                           std::vector<double>(static_cast<std::size_t>(n), 0.0));
  std::vector<double> a(static_cast<std::size_t>(n), 0.0);
  std::vector<bool> alive(static_cast<std::size_t>(n), true);
  std::vector<int> community(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) community[i] = i;
  for (const auto& [i, j] : g.edges()) {
    between[i][j] += 1.0 / m;
    between[j][i] += 1.0 / m;
    a[i] += 0.5 / m;
    a[j] += 0.5 / m;
  }

  best_partition = community;
  double best_q = refine_partition(g, best_partition);

  for (int merges = 0; merges < n - 1; ++merges) {
    double best_gain = -std::numeric_limits<double>::infinity();
    int best_c = -1;
    int best_d = -1;
    for (int c = 0; c < n; ++c) {
      if (!alive[c]) continue;
      for (int d = c + 1; d < n; ++d) {
        if (!alive[d]) continue;
        const double gain = between[c][d] - 2.0 * a[c] * a[d];
        if (gain > best_gain) {
          best_gain = gain;
          best_c = c;
          best_d = d;
        }
      }
    }
    if (best_c < 0) break;

    // Fold d into c (c < d, so labels stay the smallest member id).
    for (int w = 0; w < n; ++w) {
      if (!alive[w] || w == best_c || w == best_d) continue;
      between[best_c][w] += between[best_d][w];
      between[w][best_c] = between[best_c][w];
    }
    between[best_c][best_c] = 0.0;
    a[best_c] += a[best_d];
    alive[best_d] = false;
    for (int i = 0; i < n; ++i)
      if (community[i] == best_d) community[i] = best_c;

    std::vector<int> candidate = community;
    const double q = refine_partition(g, candidate);
    if (q > best_q + 1e-15) {
      best_q = q;
      best_partition = std::move(candidate);
    }
  }
  return best_q;
}

// Exact maximum-modularity partition by dynamic programming over node
// subsets: best(S) optimizes the block containing S's lowest node. 3^n subset
// splits, so only sensible for small n.
std::vector<int> exact_partition(const Graph& g) {
  const int n = g.node_count();
  const int m = g.edge_count();
  const int full = (1 << n) - 1;
  std::vector<double> q(static_cast<std::size_t>(full) + 1, 0.0);
  for (int mask = 1; mask <= full; ++mask) {
    int inside2 = 0;
    int degsum = 0;
    for (int v = 0; v < n; ++v) {
      if (!((mask >> v) & 1)) continue;
      const std::uint64_t nb = g.neighbor_mask(v);
      inside2 += std::popcount(nb & static_cast<std::uint64_t>(mask));
      degsum += std::popcount(nb);
    }
    const double e_cc = (inside2 / 2.0) / m;
    const double a_c = degsum / (2.0 * m);
    q[mask] = e_cc - a_c * a_c;
  }
  std::vector<double> best(static_cast<std::size_t>(full) + 1, 0.0);
  std::vector<int> block(static_cast<std::size_t>(full) + 1, 0);
  for (int mask = 1; mask <= full; ++mask) {
    const int low = mask & -mask;
    double value = q[mask];
    int choice = mask;
    for (int sub = (mask - 1) & mask; sub; sub = (sub - 1) & mask) {
      if (!(sub & low)) continue;
      const double candidate = q[sub] + best[mask ^ sub];
      if (candidate > value) {
        value = candidate;
        choice = sub;
      }
    }
    best[mask] = value;
    block[mask] = choice;
  }
  std::vector<int> partition(static_cast<std::size_t>(n), 0);
  int label = 0;
  for (int rest = full; rest;) {
    const int chosen = block[rest];
    for (int v = 0; v < n; ++v)
      if ((chosen >> v) & 1) partition[v] = label;
    ++label;
    rest ^= chosen;
  }
  return partition;
}

ModularityResult detect_communities(const Graph& g) {
  const int n = g.node_count();
  const int m = g.edge_count();
  ModularityResult out;
  out.community_of.resize(static_cast<std::size_t>(n));
  if (m == 0) {
    for (int i = 0; i < n; ++i) out.community_of[i] = i;
    out.community_count = n;
    out.q = 0.0;
    return out;
  }

  // Small graphs get the exact optimum; the greedy search below can land a
  // few hundredths of Q short on adversarially symmetric instances.
  constexpr int kExactLimit = 12;
  if (n <= kExactLimit) {
    out.community_of = normalize_labels(exact_partition(g));
    out.community_count =
        1 + *std::max_element(out.community_of.begin(), out.community_of.end());
    out.q = modularity_q(g, out.community_of);
    return out;
  }

  // Greedy tie-breaking is order-sensitive on symmetric graphs, so the sweep
  // runs once on the original labeling and again under a few fixed seeded
  // relabelings; the best polished partition wins. Fixed seeds keep the
  // result deterministic.
  constexpr int kRestarts = 8;
  constexpr std::uint64_t kRestartSeed = 0x6d6f64756c6172ull;  // arbitrary constant

  std::vector<int> best_partition;
  double best_q = agglomerate(g, best_partition);

  for (int restart = 1; restart < kRestarts; ++restart) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[i] = i;
    Xoshiro256StarStar rng(derive_seed(kRestartSeed, static_cast<std::uint64_t>(restart)));
    rng.shuffle(perm);

    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (const auto& [i, j] : g.edges()) edges.emplace_back(perm[i], perm[j]);
    const Graph relabeled = Graph::from_edges(n, edges);

    std::vector<int> partition;
    const double q = agglomerate(relabeled, partition);
    if (q > best_q + 1e-15) {
      best_q = q;
      best_partition.resize(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) best_partition[i] = partition[perm[i]];
    }
  }

  out.community_of = normalize_labels(best_partition);
  out.community_count =
      1 + *std::max_element(out.community_of.begin(), out.community_of.end());
  out.q = modularity_q(g, out.community_of);
  return out;
}

}  // namespace netform
