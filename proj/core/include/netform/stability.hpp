#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "netform/efficiency.hpp"
#include "netform/graph.hpp"
#include "netform/model.hpp"

namespace netform {

// The two link-formation tests, written once so that the static check and the
// dynamic engine can never drift apart.
//
// Severing is unilateral: an endpoint deviates when it strictly gains.
inline bool severance_improves(double gain, double eps) { return gain > eps; }
// Adding needs mutual consent: one endpoint strictly gains while the other
// does not lose. (Equivalently: both gains >= -eps and at least one > eps.)
inline bool addition_improves(double gain_i, double gain_j, double eps) {
  return (gain_i >= -eps && gain_j > eps) || (gain_j >= -eps && gain_i > eps);
}

enum class ViolationKind { kSeverProfitable, kAddProfitable };

const char* violation_kind_name(ViolationKind k);

struct StabilityViolation {
  int i = 0;
  int j = 0;
  ViolationKind kind = ViolationKind::kSeverProfitable;
  // Utility change each endpoint would see from performing the move.
  double gain_i = 0.0;
  double gain_j = 0.0;
};

struct StabilityVerdict {
  bool stable = false;
  std::vector<StabilityViolation> violations;
};

/// Pairwise stability of g: no existing link worth severing for either
/// endpoint, no absent link whose addition one endpoint strictly wants while
/// the other does not object. Reports every violating pair.
StabilityVerdict check_pairwise_stable(const Graph& g, const BenefitFunction& benefit,
                                       const CostModel& cost,
                                       const std::vector<double>* states = nullptr,
                                       double eps = kDefaultEpsilon);

struct StableSet {
  std::vector<Graph> graphs;        // canonical code order, up to max_kept
  std::vector<double> totals;       // total utility of each kept graph
  std::uint64_t stable_count = 0;   // exact count of stable graphs
  double worst_total = 0.0;         // exact min/max over *all* stable graphs
  double best_total = 0.0;
  bool truncated() const { return stable_count > graphs.size(); }
};

inline EnumOptions stable_enum_defaults() {
  EnumOptions opts;
  opts.node_cap = 7;
  opts.max_kept = 256;
  return opts;
}

/// All pairwise-stable graphs among the 2^(n(n-1)/2) candidates.
StableSet enumerate_stable(int n, const BenefitFunction& benefit, const CostModel& cost,
                           const std::vector<double>* states = nullptr,
                           const EnumOptions& opts = stable_enum_defaults());

/// In the high-cost regime b(1) < c every non-empty stable graph keeps its
/// non-isolated nodes at degree >= 2. Throws std::invalid_argument when
/// called outside that regime.
bool min_degree_property(const StableSet& set, const BenefitFunction& benefit,
                         double homogeneous_cost);

struct PriceOfAnarchy {
  double efficient_total = 0.0;
  double worst_stable_total = 0.0;
  double best_stable_total = 0.0;
  std::uint64_t stable_count = 0;
  /// efficient_total / worst_stable_total; empty when no stable graph exists
  /// or the worst stable total is not positive.
  std::optional<double> value;
};

PriceOfAnarchy price_of_anarchy(int n, const BenefitFunction& benefit, const CostModel& cost,
                                const std::vector<double>* states = nullptr,
                                const EnumOptions& opts = stable_enum_defaults());

}  // namespace netform
