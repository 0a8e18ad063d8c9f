#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "netform/graph.hpp"

namespace netform {

/// Absolute tolerance used for every utility comparison, tie detection and
/// stability inequality in the library.
inline constexpr double kDefaultEpsilon = 1e-9;

/// Benefit of a connection as a function of hop distance. Either a geometric
/// decay delta^k with delta in (0,1), or an explicit table b(1..L) validated
/// strictly decreasing and positive. Hop distances beyond the end of a table
/// yield zero benefit (a connection that far carries no value).
class BenefitFunction {
 public:
  static BenefitFunction decay(double delta);
  static BenefitFunction table(std::vector<double> values);

  /// b(hops); hops >= 1.
  double at(int hops) const;
  /// Benefit indexed by hop count for graphs on n nodes: entry d holds b(d),
  /// entry 0 is unused (zero).
  std::vector<double> by_hops(int n) const;

  bool is_decay() const { return decay_.has_value(); }
  double decay_delta() const { return *decay_; }
  const std::vector<double>& table_values() const { return table_; }

  bool operator==(const BenefitFunction& other) const = default;

 private:
  BenefitFunction() = default;
  std::optional<double> decay_;
  std::vector<double> table_;
};

struct HomogeneousCost {
  double c = 0.0;
  bool operator==(const HomogeneousCost&) const = default;
};
/// Per-node cost: node i pays c[i] for each of its direct links.
struct SeparableCost {
  std::vector<double> c;
  bool operator==(const SeparableCost&) const = default;
};
/// Explicit pair costs; symmetric with zero diagonal.
struct MatrixCost {
  std::vector<std::vector<double>> c;
  bool operator==(const MatrixCost&) const = default;
};
/// Cost from node states: base + alpha * |s_i - s_j|.
struct StateDependentCost {
  double base = 0.0;
  double alpha = 0.0;
  bool operator==(const StateDependentCost&) const = default;
};

/// Potential connection cost c_ij for every node pair. Only costs of realized
/// direct links enter utilities.
class CostModel {
 public:
  CostModel() : form_(HomogeneousCost{0.0}) {}

  static CostModel homogeneous(double c);
  static CostModel separable(std::vector<double> per_node);
  static CostModel matrix(std::vector<std::vector<double>> pair_costs);
  static CostModel state_dependent(double base, double alpha);

  /// Cost node i pays when directly linked to j. StateDependent form requires
  /// `states`; the other forms ignore it.
  double potential_cost(int i, int j, const std::vector<double>* states = nullptr) const;

  /// Row-major n*n matrix of potential costs, zero diagonal. Materializing
  /// once turns every cost form into a plain lookup for the hot loops.
  std::vector<double> pair_matrix(int n, const std::vector<double>* states = nullptr) const;

  /// Checks dimensions against a node count; throws std::invalid_argument.
  void validate_for(int n) const;

  bool is_homogeneous() const { return std::holds_alternative<HomogeneousCost>(form_); }
  bool is_separable() const { return std::holds_alternative<SeparableCost>(form_); }
  bool is_matrix() const { return std::holds_alternative<MatrixCost>(form_); }
  bool is_state_dependent() const { return std::holds_alternative<StateDependentCost>(form_); }

  const HomogeneousCost& as_homogeneous() const { return std::get<HomogeneousCost>(form_); }
  const SeparableCost& as_separable() const { return std::get<SeparableCost>(form_); }
  const MatrixCost& as_matrix() const { return std::get<MatrixCost>(form_); }
  const StateDependentCost& as_state_dependent() const {
    return std::get<StateDependentCost>(form_);
  }

  bool operator==(const CostModel& other) const = default;

 private:
  std::variant<HomogeneousCost, SeparableCost, MatrixCost, StateDependentCost> form_;
};

struct UtilityVector {
  std::vector<double> per_node;
  double total = 0.0;
};

/// u_i(g): distance-discounted benefit from every reachable node minus the
/// cost of i's direct links. Unreachable nodes contribute nothing.
double node_utility(const Graph& g, int node, const BenefitFunction& benefit,
                    const CostModel& cost, const std::vector<double>* states = nullptr);

/// All node utilities and their sum U(g).
UtilityVector total_utility(const Graph& g, const BenefitFunction& benefit,
                            const CostModel& cost, const std::vector<double>* states = nullptr);

namespace detail {

// Mask-level evaluators shared by the enumeration and dynamics hot paths.
// `adj` is an array of n neighbor bitmasks, `benefit_by_hops` has n entries
// (index = hop count), `pair_cost` is row-major n*n.
double node_utility_masks(const std::uint64_t* adj, int n, int node,
                          const double* benefit_by_hops, const double* pair_cost);
double total_utility_masks(const std::uint64_t* adj, int n, const double* benefit_by_hops,
                           const double* pair_cost);

}  // namespace detail

}  // namespace netform
