#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "netform/graph.hpp"
#include "netform/model.hpp"
#include "netform/modularity.hpp"
#include "netform/rng.hpp"
#include "netform/stability.hpp"

namespace netform {

/// Per-node simulation state: internal state in [0,1], the total direct-link
/// cost the node can sustain, and how strongly its environment drifts the
/// state each round.
struct AgentProfile {
  double state = 0.5;
  double capacity = std::numeric_limits<double>::infinity();
  double drift = 0.1;
  bool operator==(const AgentProfile&) const = default;
};

struct EnvironmentConfig {
  double heterogeneity = 0.0;  // h: scale of per-round state drift
  int rounds = 500;
  std::uint64_t seed = 0;
  double base_cost = 0.05;     // link cost = base + alpha * |s_i - s_j|
  double cost_alpha = 0.5;
  BenefitFunction benefit = BenefitFunction::decay(0.5);
  double diversity_beta = 1.0;  // benefit multiplier 1 + beta * |s_i - s_j|
  double eps = kDefaultEpsilon;
};

/// Utility under heterogeneous states: reachable nodes contribute
/// b(d) * (1 + beta * |s_i - s_j|), direct links cost base + alpha * |s_i - s_j|.
/// With beta = 0 this is exactly the plain utility with state-dependent cost.
double dynamic_utility(const Graph& g, int node, const std::vector<AgentProfile>& profiles,
                       const EnvironmentConfig& cfg);

/// Total direct-link cost currently borne by `node`; the capacity constraint
/// is load <= capacity.
double link_cost_load(const Graph& g, int node, const std::vector<AgentProfile>& profiles,
                      const EnvironmentConfig& cfg);

struct StepResult {
  Graph graph;
  std::vector<std::pair<int, int>> added;
  std::vector<std::pair<int, int>> removed;         // voluntary severances
  std::vector<std::pair<int, int>> forced_removed;  // capacity repairs
  bool changed = false;
};

/// One round: drift states, sever over-capacity links (highest cost first),
/// then visit every pair in seeded random order applying the myopic add /
/// sever rules. Deterministic given the RNG state.
StepResult step(const Graph& g, std::vector<AgentProfile>& profiles,
                const EnvironmentConfig& cfg, Xoshiro256StarStar& rng);

struct RoundRecord {
  int round = 0;  // 1-based
  std::vector<std::pair<int, int>> added;
  std::vector<std::pair<int, int>> removed;
  std::vector<std::pair<int, int>> forced_removed;
  std::vector<double> utilities;
  double total_utility = 0.0;
  double q = 0.0;
};

enum class TraceDetail { kFull, kSummary };

struct DynamicsTrace {
  std::vector<RoundRecord> rounds;  // empty under kSummary
  Graph final_graph;
  std::vector<AgentProfile> final_profiles;
  bool converged = false;
  std::optional<int> convergence_round;
  int rounds_executed = 0;
  std::uint64_t forced_severances = 0;
  double final_q = 0.0;
};

/// Iterates step() from `initial`; stops early once a full round makes no
/// change (no voluntary move and no forced severance).
DynamicsTrace run(const Graph& initial, std::vector<AgentProfile> profiles,
                  const EnvironmentConfig& cfg, TraceDetail detail = TraceDetail::kFull);

struct CapacityStabilityReport {
  bool stable = false;       // no profitable feasible move exists
  bool capacity_ok = false;  // every load within capacity
  std::vector<StabilityViolation> violations;
};

/// Pairwise stability under dynamic utilities with capacity-feasible
/// additions; the oracle for converged traces.
CapacityStabilityReport check_capacity_stable(const Graph& g,
                                              const std::vector<AgentProfile>& profiles,
                                              const EnvironmentConfig& cfg);

struct SweepPoint {
  double heterogeneity = 0.0;
  double capacity = 0.0;
  double mean_q = 0.0;
  double sd_q = 0.0;  // sample standard deviation; 0 with one replication
  int replications = 0;
  int converged_runs = 0;
};

/// Runs `replications` seeded simulations per (heterogeneity, capacity) grid
/// point, starting from the empty graph, and aggregates the final modularity.
/// Replication seeds derive from cfg.seed, so the table is reproducible and
/// independent of the thread count.
std::vector<SweepPoint> heterogeneity_sweep(const std::vector<AgentProfile>& base_profiles,
                                            const EnvironmentConfig& base_cfg,
                                            const std::vector<std::pair<double, double>>& grid,
                                            int replications, int threads = 1);

}  // namespace netform
