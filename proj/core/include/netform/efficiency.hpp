#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "netform/graph.hpp"
#include "netform/model.hpp"

namespace netform {

/// Thrown when an exhaustive operation is asked to run above its node cap.
class CapExceededError : public std::runtime_error {
 public:
  explicit CapExceededError(const std::string& what) : std::runtime_error(what) {}
};

struct EnumOptions {
  int node_cap = 8;      // enumerations refuse n above this
  double eps = kDefaultEpsilon;
  int threads = 1;       // results are identical for any thread count
  std::size_t max_kept = 64;  // graphs retained in result lists; counts stay exact
};

enum class Regime { kComplete, kStar, kEmpty };

const char* regime_name(Regime r);

/// Homogeneous-cost efficient-structure classification. The two thresholds
/// split the cost axis into complete / star / empty regions; costs within eps
/// of a threshold set `boundary` and callers should fall back to the
/// enumerator rather than trust the label.
struct RegimeClassification {
  Regime regime = Regime::kEmpty;
  double complete_star_threshold = 0.0;  // b(1) - b(2)
  double star_empty_threshold = 0.0;     // b(1) + 0.5 (n-2) b(2)
  bool boundary = false;
};

RegimeClassification classify_homogeneous(int n, const BenefitFunction& benefit, double cost,
                                          double eps = kDefaultEpsilon);

struct ConstructedEfficient {
  Graph graph;
  RegimeClassification classification;  // boundary flag doubles as tie warning
};

/// Builds the efficient structure for the classified regime: complete(n),
/// star(n, hub 0) or empty(n). On a boundary the returned graph is one of the
/// co-optimal structures and classification.boundary is set.
ConstructedEfficient construct_efficient_homogeneous(int n, const BenefitFunction& benefit,
                                                     double cost,
                                                     double eps = kDefaultEpsilon);

struct EfficientSet {
  double best_total = 0.0;
  std::vector<Graph> optimizers;      // ascending canonical code, up to max_kept
  std::uint64_t optimizer_count = 0;  // exact count of graphs within eps of best
  bool truncated() const { return optimizer_count > optimizers.size(); }
};

/// Exhaustive search over all 2^(n(n-1)/2) edge subsets for the maximum total
/// utility. Ground-truth oracle for the closed-form constructors.
EfficientSet enumerate_efficient(int n, const BenefitFunction& benefit, const CostModel& cost,
                                 const std::vector<double>* states = nullptr,
                                 const EnumOptions& opts = {});

/// Efficient structure under separable per-node costs: participants up to the
/// cutoff index m form a generalized star around the cheapest node, pairs
/// cheap enough to beat the indirect detour are also linked directly, and
/// everything beyond m stays isolated.
struct SeparableEfficientStructure {
  int participant_count = 0;               // m, counted in cost-ascending order
  int hub = 0;                             // original id of the minimum-cost node
  std::vector<int> isolated;               // original ids, ascending
  std::vector<std::pair<int, int>> core_edges;  // original ids (i<j), ascending
  bool boundary = false;                   // some threshold landed within eps
  Graph graph;
};

SeparableEfficientStructure construct_efficient_separable(int n, const BenefitFunction& benefit,
                                                          const std::vector<double>& costs,
                                                          double eps = kDefaultEpsilon);

struct EfficiencyReport {
  double graph_total = 0.0;
  double best_total = 0.0;
  double gap = 0.0;  // best_total - graph_total, >= 0 up to eps
  bool optimal = false;
};

/// Compares U(g) against the enumerated optimum.
EfficiencyReport verify_efficiency(const Graph& g, const BenefitFunction& benefit,
                                   const CostModel& cost,
                                   const std::vector<double>* states = nullptr,
                                   const EnumOptions& opts = {});

}  // namespace netform
