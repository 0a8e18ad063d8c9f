#include "netform/stability.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "enumeration.hpp"

namespace netform {

const char* violation_kind_name(ViolationKind k) {
  return k == ViolationKind::kSeverProfitable ? "sever_profitable" : "add_profitable";
}

namespace {

// Scans all pairs against the base utilities; toggling one pair only needs
// two single-source evaluations. With early_exit the first violation settles
// the verdict.
bool scan_violations(std::uint64_t* adj, int n, const double* b, const double* pc, double eps,
                     bool early_exit, std::vector<StabilityViolation>* out) {
  double base[Graph::kMaxNodes];
  for (int i = 0; i < n; ++i) base[i] = detail::node_utility_masks(adj, n, i, b, pc);
  bool stable = true;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool present = (adj[i] >> j) & 1ull;
      adj[i] ^= 1ull << j;
      adj[j] ^= 1ull << i;
      const double gain_i = detail::node_utility_masks(adj, n, i, b, pc) - base[i];
      const double gain_j = detail::node_utility_masks(adj, n, j, b, pc) - base[j];
      adj[i] ^= 1ull << j;
      adj[j] ^= 1ull << i;
      if (present) {
        if (severance_improves(gain_i, eps) || severance_improves(gain_j, eps)) {
          stable = false;
          if (out)
            out->push_back({i, j, ViolationKind::kSeverProfitable, gain_i, gain_j});
          if (early_exit) return false;
        }
      } else {
        if (addition_improves(gain_i, gain_j, eps)) {
          stable = false;
          if (out) out->push_back({i, j, ViolationKind::kAddProfitable, gain_i, gain_j});
          if (early_exit) return false;
        }
      }
    }
  }
  return stable;
}

}  // namespace

StabilityVerdict check_pairwise_stable(const Graph& g, const BenefitFunction& benefit,
                                       const CostModel& cost, const std::vector<double>* states,
                                       double eps) {
  const int n = g.node_count();
  const auto b = benefit.by_hops(n);
  const auto pc = cost.pair_matrix(n, states);
  std::uint64_t adj[Graph::kMaxNodes];
  for (int i = 0; i < n; ++i) adj[i] = g.neighbor_mask(i);
  StabilityVerdict verdict;
  verdict.stable = scan_violations(adj, n, b.data(), pc.data(), eps, false, &verdict.violations);
  return verdict;
}

StableSet enumerate_stable(int n, const BenefitFunction& benefit, const CostModel& cost,
                           const std::vector<double>* states, const EnumOptions& opts) {
  if (n < 1) throw std::invalid_argument("node count must be at least 1");
  if (n > opts.node_cap)
    throw CapExceededError("stability enumeration over " + std::to_string(n) +
                           " nodes exceeds the cap of " + std::to_string(opts.node_cap));
  if (Graph::pair_count(n) > 64)
    throw CapExceededError("bitset enumeration supports at most n(n-1)/2 <= 64 pairs");

  const auto b = benefit.by_hops(n);
  const auto pc = cost.pair_matrix(n, states);
  const detail::PairTable table(n);
  const std::uint64_t total_codes = 1ull << Graph::pair_count(n);

  struct ChunkResult {
    std::vector<std::uint64_t> codes;
    std::vector<double> totals;
    std::uint64_t count = 0;
    double worst = std::numeric_limits<double>::infinity();
    double best = -std::numeric_limits<double>::infinity();
  };
  std::vector<ChunkResult> results(64);

  detail::for_each_chunk(total_codes, opts.threads,
                         [&](int chunk, std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t adj[Graph::kMaxNodes];
    ChunkResult& mine = results[chunk];
    for (std::uint64_t code = lo; code < hi; ++code) {
      detail::build_adjacency(code, table, n, adj);
      if (!scan_violations(adj, n, b.data(), pc.data(), opts.eps, true, nullptr)) continue;
      const double total = detail::total_utility_masks(adj, n, b.data(), pc.data());
      ++mine.count;
      mine.worst = std::min(mine.worst, total);
      mine.best = std::max(mine.best, total);
      if (mine.codes.size() < opts.max_kept) {
        mine.codes.push_back(code);
        mine.totals.push_back(total);
      }
    }
  });

  StableSet out;
  out.worst_total = std::numeric_limits<double>::infinity();
  out.best_total = -std::numeric_limits<double>::infinity();
  for (const ChunkResult& r : results) {
    out.stable_count += r.count;
    if (r.count > 0) {
      out.worst_total = std::min(out.worst_total, r.worst);
      out.best_total = std::max(out.best_total, r.best);
    }
    for (std::size_t k = 0; k < r.codes.size() && out.graphs.size() < opts.max_kept; ++k) {
      out.graphs.push_back(Graph::from_code(n, r.codes[k]));
      out.totals.push_back(r.totals[k]);
    }
  }
  if (out.stable_count == 0) {
    out.worst_total = 0.0;
    out.best_total = 0.0;
  }
  return out;
}

bool min_degree_property(const StableSet& set, const BenefitFunction& benefit,
                         double homogeneous_cost) {
  if (!(homogeneous_cost > benefit.at(1)))
    throw std::invalid_argument(
        "the minimum-degree property applies to the regime b(1) < c");
  for (const Graph& g : set.graphs) {
    if (g.edge_count() == 0) continue;
    for (int i = 0; i < g.node_count(); ++i) {
      const int d = g.degree(i);
      if (d == 1) return false;
    }
  }
  return true;
}

PriceOfAnarchy price_of_anarchy(int n, const BenefitFunction& benefit, const CostModel& cost,
                                const std::vector<double>* states, const EnumOptions& opts) {
  const EfficientSet efficient = enumerate_efficient(n, benefit, cost, states, opts);
  const StableSet stable = enumerate_stable(n, benefit, cost, states, opts);
  PriceOfAnarchy out;
  out.efficient_total = efficient.best_total;
  out.worst_stable_total = stable.worst_total;
  out.best_stable_total = stable.best_total;
  out.stable_count = stable.stable_count;
  if (stable.stable_count > 0 && stable.worst_total > opts.eps)
    out.value = efficient.best_total / stable.worst_total;
  return out;
}

}  // namespace netform
