#include "netform/efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "enumeration.hpp"

namespace netform {

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::kComplete: return "complete";
    case Regime::kStar: return "star";
    case Regime::kEmpty: return "empty";
  }
  return "unknown";
}

RegimeClassification classify_homogeneous(int n, const BenefitFunction& benefit, double cost,
                                          double eps) {
  if (n < 2) throw std::invalid_argument("regime classification requires n >= 2");
  const double b1 = benefit.at(1);
  const double b2 = benefit.at(2);
  RegimeClassification out;
  out.complete_star_threshold = b1 - b2;
  out.star_empty_threshold = b1 + 0.5 * (n - 2) * b2;
  out.boundary = std::abs(cost - out.complete_star_threshold) <= eps ||
                 std::abs(cost - out.star_empty_threshold) <= eps;
  if (cost < out.complete_star_threshold)
    out.regime = Regime::kComplete;
  else if (cost < out.star_empty_threshold)
    out.regime = Regime::kStar;
  else
    out.regime = Regime::kEmpty;
  return out;
}

ConstructedEfficient construct_efficient_homogeneous(int n, const BenefitFunction& benefit,
                                                     double cost, double eps) {
  const RegimeClassification cls = classify_homogeneous(n, benefit, cost, eps);
  switch (cls.regime) {
    case Regime::kComplete: return {Graph::complete(n), cls};
    case Regime::kStar: return {Graph::star(n, 0), cls};
    case Regime::kEmpty: break;
  }
  return {Graph::empty(n), cls};
}

namespace {

void check_enumeration_size(int n, const EnumOptions& opts, const char* what) {
  if (n < 1) throw std::invalid_argument("node count must be at least 1");
  if (n > opts.node_cap)
    throw CapExceededError(std::string(what) + " over " + std::to_string(n) +
                           " nodes exceeds the cap of " + std::to_string(opts.node_cap) +
                           " (2^" + std::to_string(Graph::pair_count(n)) + " graphs)");
  if (Graph::pair_count(n) > 64)
    throw CapExceededError("bitset enumeration supports at most n(n-1)/2 <= 64 pairs");
}

}  // namespace

EfficientSet enumerate_efficient(int n, const BenefitFunction& benefit, const CostModel& cost,
                                 const std::vector<double>* states, const EnumOptions& opts) {
  check_enumeration_size(n, opts, "efficiency enumeration");
  const auto b = benefit.by_hops(n);
  const auto pc = cost.pair_matrix(n, states);
  const detail::PairTable table(n);
  const std::uint64_t total = 1ull << Graph::pair_count(n);

  // Single pass per chunk: track the exact running maximum and every graph
  // within eps of it, pruning as the maximum rises. A pruned graph can never
  // re-qualify (the maximum only grows), so for chunks whose candidate list
  // never hit the cap this yields exactly the graphs within eps of the chunk
  // maximum. The merge below then filters against the global maximum, which
  // makes the outcome independent of the chunk layout and thread count.
  struct ChunkScan {
    double best = -std::numeric_limits<double>::infinity();
    std::vector<std::pair<std::uint64_t, double>> kept;  // ascending codes
    bool overflowed = false;
  };
  std::vector<ChunkScan> scans(64);
  detail::for_each_chunk(total, opts.threads, [&](int chunk, std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t adj[Graph::kMaxNodes];
    ChunkScan& mine = scans[chunk];
    for (std::uint64_t code = lo; code < hi; ++code) {
      detail::build_adjacency(code, table, n, adj);
      const double u = detail::total_utility_masks(adj, n, b.data(), pc.data());
      if (u > mine.best) {
        mine.best = u;
        const double cutoff = mine.best - opts.eps;
        std::erase_if(mine.kept, [cutoff](const auto& entry) { return entry.second < cutoff; });
      }
      if (u >= mine.best - opts.eps) {
        if (mine.kept.size() < opts.max_kept)
          mine.kept.emplace_back(code, u);
        else
          mine.overflowed = true;
      }
    }
  });

  double best_total = -std::numeric_limits<double>::infinity();
  bool overflowed = false;
  for (const ChunkScan& scan : scans) {
    best_total = std::max(best_total, scan.best);
    overflowed = overflowed || scan.overflowed;
  }

  EfficientSet out;
  out.best_total = best_total;
  const double cutoff = best_total - opts.eps;

  if (!overflowed) {
    for (const ChunkScan& scan : scans) {
      for (const auto& [code, u] : scan.kept) {
        if (u < cutoff) continue;
        ++out.optimizer_count;
        if (out.optimizers.size() < opts.max_kept)
          out.optimizers.push_back(Graph::from_code(n, code));
      }
    }
    return out;
  }

  // Degenerate tie-heavy case (a capped list dropped candidates): rescan
  // against the now-known maximum for exact counts and the canonical prefix.
  struct Collected {
    std::vector<std::uint64_t> codes;
    std::uint64_t count = 0;
  };
  std::vector<Collected> collected(64);
  detail::for_each_chunk(total, opts.threads, [&](int chunk, std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t adj[Graph::kMaxNodes];
    Collected& mine = collected[chunk];
    for (std::uint64_t code = lo; code < hi; ++code) {
      detail::build_adjacency(code, table, n, adj);
      if (detail::total_utility_masks(adj, n, b.data(), pc.data()) >= cutoff) {
        ++mine.count;
        if (mine.codes.size() < opts.max_kept) mine.codes.push_back(code);
      }
    }
  });
  for (const Collected& c : collected) {
    out.optimizer_count += c.count;
    for (const std::uint64_t code : c.codes) {
      if (out.optimizers.size() >= opts.max_kept) break;
      out.optimizers.push_back(Graph::from_code(n, code));
    }
  }
  return out;
}

SeparableEfficientStructure construct_efficient_separable(int n, const BenefitFunction& benefit,
                                                          const std::vector<double>& costs,
                                                          double eps) {
  if (n < 2) throw std::invalid_argument("separable construction requires n >= 2");
  if (costs.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("cost vector length must equal node count");
  for (const double c : costs)
    if (!(c >= 0.0) || !std::isfinite(c))
      throw std::invalid_argument("separable costs must be nonnegative and finite");

  const double b1 = benefit.at(1);
  const double b2 = benefit.at(2);

  // Cost-ascending order; equal costs fall back to the original node id.
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (costs[a] != costs[b]) return costs[a] < costs[b];
    return a < b;
  });

  SeparableEfficientStructure out{0, order[0], {}, {}, false, Graph::empty(n)};

  // Participation cutoff m over the cost-ascending order. Adding node idx to
  // the structure changes total utility by its spoke marginal
  // 2 b(1) + 2 (idx-2) b(2) - c_(idx) - c_(1) plus whatever core links with
  // cheaper spokes pay off; m maximizes the cumulative value. When the spoke
  // marginals are single-crossing in idx (the usual case) this is the largest
  // index whose marginal stays positive.
  std::vector<double> value(static_cast<std::size_t>(n) + 1, 0.0);
  double cumulative = 0.0;
  for (int idx = 2; idx <= n; ++idx) {
    const double spoke =
        2.0 * b1 + 2.0 * (idx - 2) * b2 - costs[order[idx - 1]] - costs[order[0]];
    if (std::abs(spoke) <= eps) out.boundary = true;
    double core_gain = 0.0;
    for (int p = 1; p < idx - 1; ++p) {
      const double gain = 2.0 * (b1 - b2) - (costs[order[p]] + costs[order[idx - 1]]);
      if (gain > 0.0) core_gain += gain;
    }
    cumulative += spoke + core_gain;
    value[idx] = cumulative;
  }
  int m = 1;
  double best_value = 0.0;
  for (int idx = 2; idx <= n; ++idx) {
    if (value[idx] > best_value) {
      best_value = value[idx];
      m = idx;
    }
  }
  for (int idx = 1; idx <= n; ++idx)
    if (idx != m && std::abs(value[idx] - best_value) <= eps) out.boundary = true;
  out.participant_count = m;

  for (int pos = m; pos < n; ++pos) out.isolated.push_back(order[pos]);
  std::sort(out.isolated.begin(), out.isolated.end());

  Graph g = Graph::empty(n);
  for (int pos = 1; pos < m; ++pos) g = g.with_edge(out.hub, order[pos]);

  // Direct link between two participating spokes pays off when it beats the
  // two-hop detour through the hub: b(1) - b(2) > (c_i + c_j) / 2.
  for (int p = 1; p < m; ++p) {
    for (int q = p + 1; q < m; ++q) {
      const int i = order[p];
      const int j = order[q];
      const double gain = b1 - b2;
      const double price = 0.5 * (costs[i] + costs[j]);
      if (std::abs(gain - price) <= eps) out.boundary = true;
      if (gain > price) {
        g = g.with_edge(i, j);
        out.core_edges.emplace_back(std::min(i, j), std::max(i, j));
      }
    }
  }
  std::sort(out.core_edges.begin(), out.core_edges.end());
  out.graph = g;
  return out;
}

EfficiencyReport verify_efficiency(const Graph& g, const BenefitFunction& benefit,
                                   const CostModel& cost, const std::vector<double>* states,
                                   const EnumOptions& opts) {
  const EfficientSet best = enumerate_efficient(g.node_count(), benefit, cost, states, opts);
  EfficiencyReport report;
  report.graph_total = total_utility(g, benefit, cost, states).total;
  report.best_total = best.best_total;
  report.gap = report.best_total - report.graph_total;
  report.optimal = report.gap <= opts.eps;
  return report;
}

}  // namespace netform
