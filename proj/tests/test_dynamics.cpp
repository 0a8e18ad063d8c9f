#include <cmath>
#include <doctest.h>
#include <limits>

#include "netform/dynamics.hpp"
#include "netform/stability.hpp"
#include "test_helpers.hpp"

using namespace netform;
using doctest::Approx;

namespace {

EnvironmentConfig base_config() {
  EnvironmentConfig cfg;
  cfg.heterogeneity = 0.0;
  cfg.rounds = 50;
  cfg.seed = 7;
  cfg.base_cost = 0.1;
  cfg.cost_alpha = 0.2;
  cfg.benefit = BenefitFunction::decay(0.5);
  cfg.diversity_beta = 1.0;
  return cfg;
}

std::vector<AgentProfile> profiles_with_states(const std::vector<double>& states,
                                               double capacity = 1e18, double drift = 0.1) {
  std::vector<AgentProfile> out;
  for (const double s : states) out.push_back({s, capacity, drift});
  return out;
}

}  // namespace

TEST_CASE("dynamic utility on a linked heterogeneous pair") {
  const Graph g = Graph::complete(2);
  const auto profiles = profiles_with_states({0.0, 1.0});
  EnvironmentConfig cfg = base_config();
  // b(1)(1 + beta) - (base + alpha) = 0.5 * 2 - 0.3
  CHECK(dynamic_utility(g, 0, profiles, cfg) == Approx(0.7).epsilon(1e-12));
  CHECK(dynamic_utility(g, 1, profiles, cfg) == Approx(0.7).epsilon(1e-12));
}

TEST_CASE("isolated nodes have zero dynamic utility and load") {
  const Graph g = Graph::empty(3);
  const auto profiles = profiles_with_states({0.1, 0.5, 0.9});
  const EnvironmentConfig cfg = base_config();
  for (int i = 0; i < 3; ++i) {
    CHECK(dynamic_utility(g, i, profiles, cfg) == 0.0);
    CHECK(link_cost_load(g, i, profiles, cfg) == 0.0);
  }
}

TEST_CASE("with beta zero the dynamic utility reduces to the plain model") {
  Xoshiro256StarStar rng(314);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(6));
    const Graph g = test::random_graph(n, 0.4, rng);
    std::vector<double> states(static_cast<std::size_t>(n));
    for (auto& s : states) s = rng.uniform01();
    EnvironmentConfig cfg = base_config();
    cfg.diversity_beta = 0.0;
    cfg.base_cost = 0.07;
    cfg.cost_alpha = 0.9;
    const auto cm = CostModel::state_dependent(cfg.base_cost, cfg.cost_alpha);
    for (int i = 0; i < n; ++i)
      CHECK(dynamic_utility(g, i, profiles_with_states(states), cfg) ==
            Approx(node_utility(g, i, cfg.benefit, cm, &states)).epsilon(1e-9));
  }
}

TEST_CASE("link cost load sums the per-link transaction costs") {
  const Graph g = Graph::star(3, 0);
  EnvironmentConfig cfg = base_config();
  cfg.base_cost = 0.1;
  cfg.cost_alpha = 1.0;
  const auto same = profiles_with_states({0.5, 0.5, 0.5});
  CHECK(link_cost_load(g, 0, same, cfg) == Approx(0.2).epsilon(1e-12));
  CHECK(link_cost_load(g, 1, same, cfg) == Approx(0.1).epsilon(1e-12));
}

TEST_CASE("zero capacity forbids every link") {
  EnvironmentConfig cfg = base_config();
  cfg.rounds = 20;
  const DynamicsTrace trace =
      run(Graph::empty(4), profiles_with_states({0.1, 0.4, 0.6, 0.9}, 0.0), cfg);
  CHECK(trace.final_graph.edge_count() == 0);
  CHECK(trace.converged);
}

TEST_CASE("a mutually profitable pair links up in one round") {
  EnvironmentConfig cfg = base_config();
  cfg.rounds = 1;
  Xoshiro256StarStar rng(cfg.seed);
  auto profiles = profiles_with_states({0.5, 0.5});
  const StepResult res = step(Graph::empty(2), profiles, cfg, rng);
  CHECK(res.graph.has_edge(0, 1));
  CHECK(res.added.size() == 1);
  CHECK(res.changed);
}

TEST_CASE("one round produces one trace record") {
  EnvironmentConfig cfg = base_config();
  cfg.rounds = 1;
  const DynamicsTrace trace = run(Graph::empty(3), profiles_with_states({0.2, 0.5, 0.8}), cfg);
  CHECK(trace.rounds.size() == 1);
  CHECK(trace.rounds_executed == 1);
}

TEST_CASE("identical seeds give identical traces") {
  EnvironmentConfig cfg = base_config();
  cfg.heterogeneity = 1.5;
  cfg.rounds = 40;
  const auto profiles = profiles_with_states({0.1, 0.3, 0.5, 0.7, 0.9}, 0.6);
  const DynamicsTrace a = run(Graph::empty(5), profiles, cfg);
  const DynamicsTrace b = run(Graph::empty(5), profiles, cfg);
  CHECK(a.final_graph == b.final_graph);
  CHECK(a.converged == b.converged);
  CHECK(a.rounds_executed == b.rounds_executed);
  REQUIRE(a.rounds.size() == b.rounds.size());
  for (std::size_t r = 0; r < a.rounds.size(); ++r) {
    CHECK(a.rounds[r].added == b.rounds[r].added);
    CHECK(a.rounds[r].removed == b.rounds[r].removed);
    CHECK(a.rounds[r].forced_removed == b.rounds[r].forced_removed);
    CHECK(a.rounds[r].total_utility == b.rounds[r].total_utility);
    CHECK(a.rounds[r].q == b.rounds[r].q);
    CHECK(a.rounds[r].utilities == b.rounds[r].utilities);
  }
  for (std::size_t i = 0; i < a.final_profiles.size(); ++i)
    CHECK(a.final_profiles[i].state == b.final_profiles[i].state);
}

TEST_CASE("loads respect capacities after every round") {
  EnvironmentConfig cfg = base_config();
  cfg.heterogeneity = 2.0;
  cfg.rounds = 30;
  const double kappa = 0.45;
  auto profiles = profiles_with_states({0.05, 0.2, 0.45, 0.6, 0.85, 0.95}, kappa);
  Xoshiro256StarStar rng(cfg.seed);
  Graph g = Graph::empty(6);
  for (int round = 0; round < cfg.rounds; ++round) {
    const StepResult res = step(g, profiles, cfg, rng);
    g = res.graph;
    for (int i = 0; i < 6; ++i)
      CHECK(link_cost_load(g, i, profiles, cfg) <= kappa + 1e-9);
  }
}

TEST_CASE("a converged run is capacity-constrained pairwise stable") {
  EnvironmentConfig cfg = base_config();
  cfg.heterogeneity = 0.0;  // frozen states so the final check sees the same world
  cfg.rounds = 200;
  const auto profiles = profiles_with_states({0.05, 0.3, 0.55, 0.8}, 0.5);
  const DynamicsTrace trace = run(Graph::empty(4), profiles, cfg, TraceDetail::kSummary);
  REQUIRE(trace.converged);
  const auto report = check_capacity_stable(trace.final_graph, trace.final_profiles, cfg);
  CHECK(report.capacity_ok);
  CHECK(report.stable);
}

TEST_CASE("homogeneous reduction matches the static stability oracle") {
  Xoshiro256StarStar rng(2718);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(4));
    const auto table = test::random_benefit_table(n, rng);
    const double t1 = table[0] - table[1];
    const double cost = (trial % 3 == 0)   ? t1 * 0.5
                        : (trial % 3 == 1) ? t1 + (table[0] - t1) * 0.5
                                           : table[0] * 1.5;
    EnvironmentConfig cfg;
    cfg.heterogeneity = 0.0;
    cfg.diversity_beta = 0.0;
    cfg.base_cost = cost;
    cfg.cost_alpha = 0.0;
    cfg.benefit = BenefitFunction::table(table);
    cfg.rounds = 500;
    cfg.seed = rng.next();
    const DynamicsTrace trace =
        run(Graph::empty(n),
            std::vector<AgentProfile>(static_cast<std::size_t>(n),
                                      {0.5, std::numeric_limits<double>::infinity(), 0.1}),
            cfg, TraceDetail::kSummary);
    CAPTURE(n);
    CAPTURE(cost);
    REQUIRE(trace.converged);
    CHECK(check_pairwise_stable(trace.final_graph, cfg.benefit,
                                CostModel::homogeneous(cost))
              .stable);
  }
}

TEST_CASE("sweep is reproducible and thread-count independent") {
  EnvironmentConfig cfg;
  cfg.rounds = 25;
  cfg.seed = 99;
  cfg.base_cost = 0.05;
  cfg.cost_alpha = 0.5;
  cfg.benefit = BenefitFunction::decay(0.7);
  cfg.diversity_beta = 1.0;
  const auto profiles =
      std::vector<AgentProfile>(8, {0.5, std::numeric_limits<double>::infinity(), 0.1});
  const std::vector<std::pair<double, double>> grid{{0.0, 0.4}, {1.5, 0.4}};

  const auto a = heterogeneity_sweep(profiles, cfg, grid, 3, 1);
  const auto b = heterogeneity_sweep(profiles, cfg, grid, 3, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].mean_q == b[k].mean_q);
    CHECK(a[k].sd_q == b[k].sd_q);
    CHECK(a[k].converged_runs == b[k].converged_runs);
  }

  const auto again = heterogeneity_sweep(profiles, cfg, grid, 3, 1);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].mean_q == again[k].mean_q);

  // single replication is a plain deterministic run
  const auto single = heterogeneity_sweep(profiles, cfg, grid, 1, 1);
  CHECK(single[0].sd_q == 0.0);
}
