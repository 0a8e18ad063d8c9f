#include "netform/model.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace netform {

BenefitFunction BenefitFunction::decay(double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("decay parameter must lie in (0, 1)");
  BenefitFunction bf;
  bf.decay_ = delta;
  return bf;
}

BenefitFunction BenefitFunction::table(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("benefit table must not be empty");
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!(values[k] > 0.0) || !std::isfinite(values[k]))
      throw std::invalid_argument("benefit table entries must be positive and finite");
    if (k + 1 < values.size() && !(values[k] > values[k + 1]))
      throw std::invalid_argument("benefit table must be strictly decreasing: b(k) > b(k+1)");
  }
  BenefitFunction bf;
  bf.table_ = std::move(values);
  return bf;
}

double BenefitFunction::at(int hops) const {
  if (hops < 1) throw std::invalid_argument("benefit is defined for hop counts >= 1");
  if (decay_) return std::pow(*decay_, hops);
  const auto k = static_cast<std::size_t>(hops);
  return k <= table_.size() ? table_[k - 1] : 0.0;
}

std::vector<double> BenefitFunction::by_hops(int n) const {
  std::vector<double> b(static_cast<std::size_t>(n > 0 ? n : 1), 0.0);
  for (int d = 1; d < n; ++d) b[d] = at(d);
  return b;
}

CostModel CostModel::homogeneous(double c) {
  if (!(c >= 0.0) || !std::isfinite(c))
    throw std::invalid_argument("connection cost must be nonnegative and finite");
  CostModel m;
  m.form_ = HomogeneousCost{c};
  return m;
}

CostModel CostModel::separable(std::vector<double> per_node) {
  for (const double c : per_node)
    if (!(c >= 0.0) || !std::isfinite(c))
      throw std::invalid_argument("separable costs must be nonnegative and finite");
  CostModel m;
  m.form_ = SeparableCost{std::move(per_node)};
  return m;
}

CostModel CostModel::matrix(std::vector<std::vector<double>> pair_costs) {
  const std::size_t n = pair_costs.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (pair_costs[i].size() != n) throw std::invalid_argument("cost matrix must be square");
    if (pair_costs[i][i] != 0.0)
      throw std::invalid_argument("cost matrix diagonal must be zero");
    for (std::size_t j = 0; j < n; ++j) {
      if (!(pair_costs[i][j] >= 0.0) || !std::isfinite(pair_costs[i][j]))
        throw std::invalid_argument("cost matrix entries must be nonnegative and finite");
      if (pair_costs[i][j] != pair_costs[j][i])
        throw std::invalid_argument("cost matrix must be symmetric");
    }
  }
  CostModel m;
  m.form_ = MatrixCost{std::move(pair_costs)};
  return m;
}

CostModel CostModel::state_dependent(double base, double alpha) {
  if (!(base >= 0.0) || !std::isfinite(base))
    throw std::invalid_argument("base cost must be nonnegative and finite");
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("state sensitivity must be nonnegative and finite");
  CostModel m;
  m.form_ = StateDependentCost{base, alpha};
  return m;
}

double CostModel::potential_cost(int i, int j, const std::vector<double>* states) const {
  if (i == j) throw std::invalid_argument("potential cost is defined for distinct nodes");
  if (const auto* h = std::get_if<HomogeneousCost>(&form_)) return h->c;
  if (const auto* s = std::get_if<SeparableCost>(&form_)) {
    if (i < 0 || static_cast<std::size_t>(i) >= s->c.size())
      throw std::out_of_range("node index out of range for separable costs");
    return s->c[i];
  }
  if (const auto* m = std::get_if<MatrixCost>(&form_)) {
    if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= m->c.size() ||
        static_cast<std::size_t>(j) >= m->c.size())
      throw std::out_of_range("node index out of range for cost matrix");
    return m->c[i][j];
  }
  const auto& sd = std::get<StateDependentCost>(form_);
  if (states == nullptr)
    throw std::invalid_argument("state-dependent cost requires node states");
  if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= states->size() ||
      static_cast<std::size_t>(j) >= states->size())
    throw std::out_of_range("node index out of range for states");
  return sd.base + sd.alpha * std::abs((*states)[i] - (*states)[j]);
}

std::vector<double> CostModel::pair_matrix(int n, const std::vector<double>* states) const {
  validate_for(n);
  if (is_state_dependent() && states == nullptr)
    throw std::invalid_argument("state-dependent cost requires node states");
  std::vector<double> out(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) out[static_cast<std::size_t>(i) * n + j] = potential_cost(i, j, states);
  return out;
}

void CostModel::validate_for(int n) const {
  const auto expected = static_cast<std::size_t>(n);
  if (const auto* s = std::get_if<SeparableCost>(&form_)) {
    if (s->c.size() != expected)
      throw std::invalid_argument("separable cost vector length must equal node count");
  } else if (const auto* m = std::get_if<MatrixCost>(&form_)) {
    if (m->c.size() != expected)
      throw std::invalid_argument("cost matrix dimension must equal node count");
  }
}

namespace detail {

double node_utility_masks(const std::uint64_t* adj, int n, int node,
                          const double* benefit_by_hops, const double* pair_cost) {
  double u = 0.0;
  std::uint64_t visited = 1ull << node;
  std::uint64_t frontier = visited;
  for (int depth = 1; frontier && depth < n; ++depth) {
    std::uint64_t next = 0;
    std::uint64_t f = frontier;
    while (f) {
      next |= adj[std::countr_zero(f)];
      f &= f - 1;
    }
    next &= ~visited;
    if (!next) break;
    u += benefit_by_hops[depth] * std::popcount(next);
    visited |= next;
    frontier = next;
  }
  std::uint64_t direct = adj[node];
  const double* row = pair_cost + static_cast<std::size_t>(node) * n;
  while (direct) {
    u -= row[std::countr_zero(direct)];
    direct &= direct - 1;
  }
  return u;
}

double total_utility_masks(const std::uint64_t* adj, int n, const double* benefit_by_hops,
                           const double* pair_cost) {
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    total += node_utility_masks(adj, n, i, benefit_by_hops, pair_cost);
  return total;
}

}  // namespace detail

namespace {

std::vector<std::uint64_t> adjacency_rows(const Graph& g) {
  std::vector<std::uint64_t> adj(static_cast<std::size_t>(g.node_count()));
  for (int i = 0; i < g.node_count(); ++i) adj[i] = g.neighbor_mask(i);
  return adj;
}

}  // namespace

double node_utility(const Graph& g, int node, const BenefitFunction& benefit,
                    const CostModel& cost, const std::vector<double>* states) {
  if (node < 0 || node >= g.node_count()) throw std::out_of_range("node index out of range");
  const auto adj = adjacency_rows(g);
  const auto b = benefit.by_hops(g.node_count());
  const auto c = cost.pair_matrix(g.node_count(), states);
  return detail::node_utility_masks(adj.data(), g.node_count(), node, b.data(), c.data());
}

UtilityVector total_utility(const Graph& g, const BenefitFunction& benefit,
                            const CostModel& cost, const std::vector<double>* states) {
  const int n = g.node_count();
  const auto adj = adjacency_rows(g);
  const auto b = benefit.by_hops(n);
  const auto c = cost.pair_matrix(n, states);
  UtilityVector result;
  result.per_node.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    result.per_node[i] = detail::node_utility_masks(adj.data(), n, i, b.data(), c.data());
    result.total += result.per_node[i];
  }
  return result;
}

}  // namespace netform
