#include <cmath>
#include <doctest.h>
#include <stdexcept>

#include "netform/model.hpp"
#include "test_helpers.hpp"

using namespace netform;
using doctest::Approx;

TEST_CASE("benefit functions") {
  CHECK(BenefitFunction::decay(0.5).at(2) == Approx(0.25).epsilon(1e-12));
  CHECK(BenefitFunction::table({1.0, 0.4}).at(1) == 1.0);
  CHECK_THROWS_AS(BenefitFunction::table({1.0, 1.1}), std::invalid_argument);
  CHECK_THROWS_AS(BenefitFunction::table({1.0, -0.1}), std::invalid_argument);
  CHECK_THROWS_AS(BenefitFunction::table({}), std::invalid_argument);
  CHECK_THROWS_AS(BenefitFunction::decay(0.0), std::invalid_argument);
  CHECK_THROWS_AS(BenefitFunction::decay(1.0), std::invalid_argument);
  CHECK_THROWS_AS(BenefitFunction::decay(0.5).at(0), std::invalid_argument);

  // hops past the end of a table carry no benefit
  CHECK(BenefitFunction::table({1.0, 0.5}).at(3) == 0.0);

  const auto by_hops = BenefitFunction::table({1.0, 0.5}).by_hops(5);
  CHECK(by_hops == std::vector<double>{0.0, 1.0, 0.5, 0.0, 0.0});
}

TEST_CASE("potential costs") {
  const std::vector<double> states{0.2, 0.7};
  CHECK(CostModel::homogeneous(0.3).potential_cost(0, 1) == 0.3);
  CHECK(CostModel::homogeneous(0.3).potential_cost(1, 0) == 0.3);
  CHECK(CostModel::separable({0.1, 0.5, 0.2}).potential_cost(1, 0) == 0.5);
  CHECK(CostModel::separable({0.1, 0.5, 0.2}).potential_cost(0, 1) == 0.1);
  CHECK(CostModel::state_dependent(0.1, 1.0).potential_cost(0, 1, &states) ==
        Approx(0.6).epsilon(1e-12));
  CHECK_THROWS_AS(CostModel::state_dependent(0.1, 1.0).potential_cost(0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(CostModel::homogeneous(0.3).potential_cost(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(CostModel::homogeneous(-0.1), std::invalid_argument);

  const std::vector<std::vector<double>> ok{{0.0, 1.0}, {1.0, 0.0}};
  CHECK(CostModel::matrix(ok).potential_cost(0, 1) == 1.0);
  CHECK_THROWS_AS(CostModel::matrix({{0.0, 1.0}, {2.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(CostModel::matrix({{1.0, 1.0}, {1.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(CostModel::matrix({{0.0, 1.0}}), std::invalid_argument);
}

TEST_CASE("node utility on a 3-star") {
  const Graph g = Graph::star(3, 0);
  const auto bf = BenefitFunction::table({1.0, 0.5});
  const auto cm = CostModel::homogeneous(0.4);
  CHECK(node_utility(g, 0, bf, cm) == Approx(1.2).epsilon(1e-12));
  CHECK(node_utility(g, 1, bf, cm) == Approx(1.1).epsilon(1e-12));
  CHECK(node_utility(g, 2, bf, cm) == Approx(1.1).epsilon(1e-12));
  CHECK(total_utility(g, bf, cm).total == Approx(3.4).epsilon(1e-12));
}

TEST_CASE("utilities on empty and complete graphs") {
  const auto bf = BenefitFunction::table({1.0, 0.5});
  for (int i = 0; i < 4; ++i)
    CHECK(node_utility(Graph::empty(4), i, bf, CostModel::homogeneous(0.7)) == 0.0);
  CHECK(total_utility(Graph::empty(4), bf, CostModel::homogeneous(0.7)).total == 0.0);

  const Graph k3 = Graph::complete(3);
  const auto cm = CostModel::homogeneous(0.4);
  for (int i = 0; i < 3; ++i)
    CHECK(node_utility(k3, i, bf, cm) == Approx(1.2).epsilon(1e-12));
  CHECK(total_utility(k3, bf, cm).total == Approx(3.6).epsilon(1e-12));
}

TEST_CASE("total equals the sum of node utilities") {
  Xoshiro256StarStar rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(7));
    const Graph g = test::random_graph(n, 0.4, rng);
    const auto bf = BenefitFunction::table(test::random_benefit_table(n, rng));
    const auto cm = CostModel::homogeneous(rng.uniform01());
    const UtilityVector uv = total_utility(g, bf, cm);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      CHECK(uv.per_node[i] == Approx(node_utility(g, i, bf, cm)).epsilon(1e-12));
      sum += uv.per_node[i];
    }
    CHECK(uv.total == Approx(sum).epsilon(1e-12));
  }
}

// Independent route for homogeneous cost: sum b(d_ij) over ordered reachable
// pairs via the public distance matrix, minus 2 c |E|.
TEST_CASE("homogeneous utility decomposition") {
  Xoshiro256StarStar rng(501);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(8));
    const Graph g = test::random_graph(n, 0.35, rng);
    const auto table = test::random_benefit_table(n, rng);
    const auto bf = BenefitFunction::table(table);
    const double c = rng.uniform01();
    const DistanceMatrix d = g.distances();
    double expected = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && d.reachable(i, j)) expected += bf.at(d.hops(i, j));
    expected -= 2.0 * c * g.edge_count();
    CHECK(total_utility(g, bf, CostModel::homogeneous(c)).total ==
          Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("relabeling invariance") {
  Xoshiro256StarStar rng(909);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(6));
    const Graph g = test::random_graph(n, 0.4, rng);
    const auto bf = BenefitFunction::table(test::random_benefit_table(n, rng));
    const auto perm = test::random_permutation(n, rng);
    const Graph h = test::relabel(g, perm);

    SUBCASE("separable costs") {
      std::vector<double> costs(static_cast<std::size_t>(n));
      for (auto& c : costs) c = rng.uniform01();
      std::vector<double> permuted(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) permuted[perm[i]] = costs[i];
      const UtilityVector a = total_utility(g, bf, CostModel::separable(costs));
      const UtilityVector b = total_utility(h, bf, CostModel::separable(permuted));
      CHECK(a.total == Approx(b.total).epsilon(1e-9));
      for (int i = 0; i < n; ++i)
        CHECK(a.per_node[i] == Approx(b.per_node[perm[i]]).epsilon(1e-9));
    }
    SUBCASE("state-dependent costs") {
      std::vector<double> states(static_cast<std::size_t>(n));
      for (auto& s : states) s = rng.uniform01();
      std::vector<double> permuted(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) permuted[perm[i]] = states[i];
      const auto cm = CostModel::state_dependent(0.1, 0.8);
      const UtilityVector a = total_utility(g, bf, cm, &states);
      const UtilityVector b = total_utility(h, bf, cm, &permuted);
      CHECK(a.total == Approx(b.total).epsilon(1e-9));
      for (int i = 0; i < n; ++i)
        CHECK(a.per_node[i] == Approx(b.per_node[perm[i]]).epsilon(1e-9));
    }
    SUBCASE("matrix costs") {
      std::vector<std::vector<double>> costs(static_cast<std::size_t>(n),
                                             std::vector<double>(static_cast<std::size_t>(n)));
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) costs[i][j] = costs[j][i] = rng.uniform01();
      std::vector<std::vector<double>> permuted(
          static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) permuted[perm[i]][perm[j]] = costs[i][j];
      const UtilityVector a = total_utility(g, bf, CostModel::matrix(costs));
      const UtilityVector b = total_utility(h, bf, CostModel::matrix(permuted));
      CHECK(a.total == Approx(b.total).epsilon(1e-9));
      for (int i = 0; i < n; ++i)
        CHECK(a.per_node[i] == Approx(b.per_node[perm[i]]).epsilon(1e-9));
    }
  }
}

TEST_CASE("pointwise-larger benefits never decrease total utility") {
  Xoshiro256StarStar rng(404);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(6));
    const Graph g = test::random_graph(n, 0.4, rng);
    auto table = test::random_benefit_table(n, rng);
    const auto cm = CostModel::homogeneous(rng.uniform01());
    const double before = total_utility(g, BenefitFunction::table(table), cm).total;
    for (auto& b : table) b += 0.05;  // stays strictly decreasing
    const double after = total_utility(g, BenefitFunction::table(table), cm).total;
    CHECK(after >= before - 1e-12);
  }
}

TEST_CASE("isolated nodes have exactly zero utility") {
  Xoshiro256StarStar rng(606);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(6));
    Graph g = test::random_graph(n, 0.5, rng);
    const int isolated = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    for (int j = 0; j < n; ++j)
      if (j != isolated) g = g.without_edge(isolated, j);
    const auto bf = BenefitFunction::decay(0.6);
    CHECK(node_utility(g, isolated, bf, CostModel::homogeneous(0.2)) == 0.0);
  }
}
