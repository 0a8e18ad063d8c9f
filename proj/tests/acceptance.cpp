// Acceptance suite: one pass/fail line per criterion. Usage:
//   netform_acceptance <path-to-netform-binary> [--only N]
// Exit code is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "modularity_oracle.hpp"
#include "netform/dynamics.hpp"
#include "netform/efficiency.hpp"
#include "netform/modularity.hpp"
#include "netform/rng.hpp"
#include "netform/stability.hpp"
#include "test_helpers.hpp"

using namespace netform;

namespace {

constexpr double kEps = 1e-9;

struct Outcome {
  bool pass = true;
  std::string note;

  void fail(const std::string& why) {
    pass = false;
    if (note.empty()) note = why;
  }
};

double seconds_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::set<std::uint64_t> codes_of(const std::vector<Graph>& graphs) {
  std::set<std::uint64_t> out;
  for (const Graph& g : graphs) out.insert(g.code());
  return out;
}

std::set<std::uint64_t> star_codes(int n) {
  std::set<std::uint64_t> out;
  for (int hub = 0; hub < n; ++hub) out.insert(Graph::star(n, hub).code());
  return out;
}

// Benefit table plus a cost inside the requested homogeneous regime, at least
// `margin` away from both thresholds.
struct HomogeneousDraw {
  std::vector<double> table;
  double cost = 0.0;
};

HomogeneousDraw draw_homogeneous(int n, Regime regime, Xoshiro256StarStar& rng,
                                 double margin = 1e-5) {
  while (true) {
    const auto table = test::random_benefit_table(n, rng);
    const double t1 = table[0] - table[1];
    const double t2 = table[0] + 0.5 * (n - 2) * table[1];
    double cost = 0.0;
    switch (regime) {
      case Regime::kComplete:
        cost = t1 * (0.1 + 0.8 * rng.uniform01());
        break;
      case Regime::kStar:
        cost = t1 + (t2 - t1) * (0.1 + 0.8 * rng.uniform01());
        break;
      case Regime::kEmpty:
        cost = t2 * (1.1 + rng.uniform01());
        break;
    }
    if (cost <= margin) continue;
    if (std::abs(cost - t1) <= margin || std::abs(cost - t2) <= margin) continue;
    return {table, cost};
  }
}

// ---------------------------------------------------------------------------
// 1. Homogeneous efficiency: enumerated maximizers match the classified
//    structure class for every draw; n=7 enumeration under 60 s.
// ---------------------------------------------------------------------------
Outcome criterion1() {
  Outcome out;
  Xoshiro256StarStar rng(101);
  const Regime regimes[] = {Regime::kComplete, Regime::kStar, Regime::kEmpty};
  std::optional<double> timed_n7;
  for (int n = 3; n <= 7 && out.pass; ++n) {
    for (int draw = 0; draw < 50 && out.pass; ++draw) {
      const Regime regime = regimes[draw % 3];
      const auto [table, cost] = draw_homogeneous(n, regime, rng);
      const auto bf = BenefitFunction::table(table);
      if (classify_homogeneous(n, bf, cost).regime != regime) {
        out.fail("classification disagrees with the drawn regime at n=" + std::to_string(n));
        break;
      }
      const auto started = std::chrono::steady_clock::now();
      const EfficientSet set = enumerate_efficient(n, bf, CostModel::homogeneous(cost));
      if (n == 7 && !timed_n7) timed_n7 = seconds_since(started);
      bool match = false;
      switch (regime) {
        case Regime::kComplete:
          match = set.optimizer_count == 1 && set.optimizers.front() == Graph::complete(n);
          break;
        case Regime::kStar:
          match = set.optimizer_count == static_cast<std::uint64_t>(n) &&
                  codes_of(set.optimizers) == star_codes(n);
          break;
        case Regime::kEmpty:
          match = set.optimizer_count == 1 && set.optimizers.front() == Graph::empty(n);
          break;
      }
      if (!match)
        out.fail("maximizers differ from the predicted class at n=" + std::to_string(n) +
                 " draw " + std::to_string(draw));
    }
  }
  if (out.pass && (!timed_n7 || *timed_n7 >= 60.0))
    out.fail("n=7 enumeration took " + std::to_string(timed_n7.value_or(-1.0)) + " s");
  if (out.pass)
    out.note = "250/250 draws matched; n=7 enumeration " +
               std::to_string(*timed_n7).substr(0, 5) + " s";
  return out;
}

// ---------------------------------------------------------------------------
// 2. Separable-cost structure: the closed-form construction attains the
//    enumerated optimum and has the stated shape.
// ---------------------------------------------------------------------------
Outcome criterion2() {
  Outcome out;
  Xoshiro256StarStar rng(202);
  for (int n = 3; n <= 6 && out.pass; ++n) {
    int accepted = 0;
    while (accepted < 50 && out.pass) {
      const auto table = test::random_benefit_table(n, rng);
      const double b1 = table[0];
      const double b2 = table[1];
      std::vector<double> costs(static_cast<std::size_t>(n));
      for (auto& c : costs) c = 0.02 + 1.8 * rng.uniform01();
      std::sort(costs.begin(), costs.end());
      bool tied = false;
      for (int k = 1; k < n; ++k)
        if (costs[k] - costs[k - 1] <= 1e-5) tied = true;
      for (int idx = 2; idx <= n && !tied; ++idx)
        if (std::abs(2 * b1 + 2 * (idx - 2) * b2 - (costs[idx - 1] + costs[0])) <= 1e-5)
          tied = true;
      for (int i = 1; i < n && !tied; ++i)
        for (int j = i + 1; j < n && !tied; ++j)
          if (std::abs(b1 - b2 - 0.5 * (costs[i] + costs[j])) <= 1e-5) tied = true;
      if (tied) continue;
      ++accepted;

      const auto bf = BenefitFunction::table(table);
      const auto s = construct_efficient_separable(n, bf, costs);
      const double built = total_utility(s.graph, bf, CostModel::separable(costs)).total;
      const EfficientSet best = enumerate_efficient(n, bf, CostModel::separable(costs));
      if (std::abs(built - best.best_total) > kEps) {
        out.fail("construction misses the optimum at n=" + std::to_string(n));
        break;
      }
      // shape: costs ascend with node id here, so participants are 0..m-1
      const int m = s.participant_count;
      for (int i = 0; i < n; ++i) {
        if (i >= m && s.graph.degree(i) != 0) out.fail("isolated node has links");
        if (i >= 1 && i < m && !s.graph.has_edge(s.hub, i)) out.fail("missing hub spoke");
      }
      for (int i = 1; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
          const bool wanted = b1 - b2 > 0.5 * (costs[i] + costs[j]);
          if (s.graph.has_edge(i, j) != wanted) out.fail("core rule violated");
        }
    }
  }
  if (out.pass) out.note = "200/200 draws matched the oracle and the stated shape";
  return out;
}

// ---------------------------------------------------------------------------
// 3. Stability regimes; 4. price-of-anarchy sanity (computed on the same
//    draws, n <= 5 to keep the double enumeration cheap).
// ---------------------------------------------------------------------------
Outcome criterion3_state;
Outcome criterion4_state;

void run_criteria_3_4() {
  Outcome& c3 = criterion3_state;
  Outcome& c4 = criterion4_state;
  Xoshiro256StarStar rng(303);
  int poa_defined = 0;
  for (int n = 3; n <= 6; ++n) {
    for (int draw = 0; draw < 50; ++draw) {
      // (a) low cost: unique stable network is the complete graph
      {
        const auto [table, cost] = draw_homogeneous(n, Regime::kComplete, rng);
        const auto bf = BenefitFunction::table(table);
        const StableSet set = enumerate_stable(n, bf, CostModel::homogeneous(cost));
        if (!(set.stable_count == 1 && set.graphs.front() == Graph::complete(n)))
          c3.fail("low-cost stable set is not exactly the complete graph at n=" +
                  std::to_string(n));
        if (n <= 5) {
          const PriceOfAnarchy poa = price_of_anarchy(n, bf, CostModel::homogeneous(cost));
          if (!poa.value)
            c4.fail("poa undefined in the coincidence regime");
          else if (std::abs(*poa.value - 1.0) > 1e-6)
            c4.fail("poa != 1 in the coincidence regime");
          else
            ++poa_defined;
        }
      }
      // (b) moderate cost below b(1): every labeled star is stable. The kept
      // list is uncapped here; this regime can hold thousands of stable
      // graphs and a truncated list would hide the stars.
      {
        while (true) {
          const auto table = test::random_benefit_table(n, rng);
          const double t1 = table[0] - table[1];
          const double cost = t1 + (table[0] - t1) * (0.1 + 0.8 * rng.uniform01());
          if (std::abs(cost - t1) <= 1e-5 || std::abs(cost - table[0]) <= 1e-5) continue;
          const auto bf = BenefitFunction::table(table);
          EnumOptions opts = stable_enum_defaults();
          opts.max_kept = 1u << 16;
          const StableSet set = enumerate_stable(n, bf, CostModel::homogeneous(cost), nullptr,
                                                 opts);
          if (set.truncated()) {
            c3.fail("stable set unexpectedly truncated");
            break;
          }
          const auto codes = codes_of(set.graphs);
          for (int hub = 0; hub < n; ++hub) {
            const Graph star = Graph::star(n, hub);
            if (!codes.count(star.code()) ||
                !check_pairwise_stable(star, bf, CostModel::homogeneous(cost)).stable)
              c3.fail("a labeled star is missing from the stable set at n=" +
                      std::to_string(n));
          }
          if (n <= 5) {
            const PriceOfAnarchy poa = price_of_anarchy(n, bf, CostModel::homogeneous(cost));
            if (poa.value) {
              ++poa_defined;
              if (*poa.value < 1.0 - kEps) c4.fail("poa below one");
            }
          }
          break;
        }
      }
      // (c) high cost: non-empty stable graphs have min degree >= 2. The kept
      // list is uncapped so the property is judged over the whole set.
      {
        while (true) {
          const auto table = test::random_benefit_table(n, rng);
          const double cost = table[0] * (1.0 + 0.02 + 1.5 * rng.uniform01());
          if (std::abs(cost - table[0]) <= 1e-5) continue;
          const auto bf = BenefitFunction::table(table);
          EnumOptions opts = stable_enum_defaults();
          opts.max_kept = 1u << 16;
          const StableSet set =
              enumerate_stable(n, bf, CostModel::homogeneous(cost), nullptr, opts);
          if (set.truncated()) {
            c3.fail("stable set unexpectedly truncated");
            break;
          }
          if (!min_degree_property(set, bf, cost))
            c3.fail("a stable graph with a degree-1 node appeared at n=" + std::to_string(n));
          break;
        }
      }
    }
  }
  if (c3.pass) c3.note = "600/600 regime draws matched";
  if (c4.pass)
    c4.note = "poa = 1 in every coincidence draw; >= 1 in all " +
              std::to_string(poa_defined) + " defined cases";
}

// ---------------------------------------------------------------------------
// 5. Dynamics reduction: with h=0, beta=0, alpha=0 and unbounded capacity,
//    converged runs pass the homogeneous pairwise-stability check.
// ---------------------------------------------------------------------------
Outcome criterion5() {
  Outcome out;
  Xoshiro256StarStar rng(505);
  const Regime regimes[] = {Regime::kComplete, Regime::kStar, Regime::kEmpty};
  for (const Regime regime : regimes) {
    for (int run_idx = 0; run_idx < 20 && out.pass; ++run_idx) {
      const int n = 3 + static_cast<int>(rng.below(4));  // 3..6
      const auto [table, cost] = draw_homogeneous(n, regime, rng);
      EnvironmentConfig cfg;
      cfg.heterogeneity = 0.0;
      cfg.diversity_beta = 0.0;
      cfg.base_cost = cost;
      cfg.cost_alpha = 0.0;
      cfg.benefit = BenefitFunction::table(table);
      cfg.rounds = 2000;
      cfg.seed = rng.next();
      const DynamicsTrace trace =
          run(Graph::empty(n),
              std::vector<AgentProfile>(static_cast<std::size_t>(n),
                                        {0.5, std::numeric_limits<double>::infinity(), 0.1}),
              cfg, TraceDetail::kSummary);
      if (!trace.converged) {
        out.fail("run did not converge (n=" + std::to_string(n) + ")");
        break;
      }
      if (!check_pairwise_stable(trace.final_graph, cfg.benefit,
                                 CostModel::homogeneous(cost))
               .stable)
        out.fail("converged graph fails the homogeneous stability check");
    }
  }
  if (out.pass) out.note = "60/60 converged runs are pairwise stable";
  return out;
}

// ---------------------------------------------------------------------------
// 6. Heterogeneity/capacity sweep: modularity rises with h, falls with
//    capacity, within the runtime budget.
// ---------------------------------------------------------------------------
std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

Outcome criterion6() {
  Outcome out;
  const auto started = std::chrono::steady_clock::now();

  EnvironmentConfig cfg;
  cfg.rounds = 500;
  cfg.seed = 20240101;
  cfg.base_cost = 0.05;
  cfg.cost_alpha = 0.5;
  cfg.benefit = BenefitFunction::decay(0.7);
  cfg.diversity_beta = 1.0;
  const std::vector<AgentProfile> profiles(
      30, {0.5, std::numeric_limits<double>::infinity(), 0.1});

  std::vector<std::pair<double, double>> grid;
  for (const double h : {0.0, 0.5, 1.0, 2.0})
    for (const double kappa : {0.3, 0.6, 1.2}) grid.emplace_back(h, kappa);

  const auto points = heterogeneity_sweep(profiles, cfg, grid, 10, 1);
  const double elapsed = seconds_since(started);

  std::vector<double> hs, kappas, qs;
  for (const SweepPoint& p : points) {
    hs.push_back(p.heterogeneity);
    kappas.push_back(p.capacity);
    qs.push_back(p.mean_q);
  }
  const double rho_h = spearman(hs, qs);
  const double rho_kappa = spearman(kappas, qs);

  if (!(rho_h > 0.0)) out.fail("Spearman(mean Q, h) = " + std::to_string(rho_h));
  if (!(rho_kappa < 0.0)) out.fail("Spearman(mean Q, capacity) = " + std::to_string(rho_kappa));
  if (elapsed >= 300.0) out.fail("sweep took " + std::to_string(elapsed) + " s");
  if (out.pass) {
    std::ostringstream note;
    note.precision(3);
    note << "rho(h)=" << rho_h << ", rho(capacity)=" << rho_kappa << ", " << elapsed << " s";
    out.note = note.str();
  }
  return out;
}

// ---------------------------------------------------------------------------
// 7. Modularity correctness: exact value on the two triangles, zero for the
//    single community, greedy within 0.02 of the exhaustive optimum for every
//    graph up to n = 7.
// ---------------------------------------------------------------------------
Outcome criterion7() {
  Outcome out;

  if (modularity_q(test::two_triangles(), {0, 0, 0, 1, 1, 1}) != 0.5)
    out.fail("two-triangle modularity is not exactly 0.5");

  Xoshiro256StarStar rng(707);
  for (int trial = 0; trial < 100 && out.pass; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(11));
    const Graph g = test::random_graph(n, 0.1 + 0.8 * rng.uniform01(), rng);
    if (modularity_q(g, std::vector<int>(static_cast<std::size_t>(n), 0)) != 0.0)
      out.fail("single-community modularity is not zero");
  }

  double worst_gap = 0.0;
  for (int n = 1; n <= 7 && out.pass; ++n) {
    const std::uint64_t total = 1ull << Graph::pair_count(n);
    for (std::uint64_t code = 0; code < total; ++code) {
      const Graph g = Graph::from_code(n, code);
      const double greedy = detect_communities(g).q;
      const double exact = test::max_modularity(g);
      worst_gap = std::max(worst_gap, exact - greedy);
      if (greedy < exact - 0.02) {
        out.fail("greedy gap " + std::to_string(exact - greedy) + " at n=" +
                 std::to_string(n) + " code " + std::to_string(code));
        break;
      }
      if (greedy > exact + 1e-9) {
        out.fail("greedy exceeded the exhaustive optimum (oracle bug)");
        break;
      }
    }
  }
  if (out.pass) {
    std::ostringstream note;
    note.precision(4);
    note << "all graphs n<=7 within 0.02 (worst greedy gap " << worst_gap << ")";
    out.note = note.str();
  }
  return out;
}

// ---------------------------------------------------------------------------
// 8. Determinism: byte-identical CLI reports for the same scenario and seed,
//    across repeated runs and across --threads values.
// ---------------------------------------------------------------------------
struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_command(const std::string& command) {
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return result;
  char buffer[4096];
  std::size_t got = 0;
  while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) result.out.append(buffer, got);
  const int status = pclose(pipe);
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  return result;
}

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream file(path);
  file << content;
  return path.string();
}

Outcome criterion8(const std::string& bin) {
  Outcome out;
  if (bin.empty()) {
    out.fail("no CLI binary path provided");
    return out;
  }

  const std::vector<std::pair<std::string, std::string>> scenarios = {
      {"netform_acc_eff.json",
       R"({"n":6,"benefit":{"table":[1.0,0.6,0.3,0.15,0.05]},"cost":{"homogeneous":0.7},
           "analysis":"efficient"})"},
      {"netform_acc_stable.json",
       R"({"n":5,"benefit":{"table":[1.0,0.5,0.2,0.05]},"cost":{"homogeneous":0.8},
           "analysis":"stable"})"},
      {"netform_acc_poa.json",
       R"({"n":5,"benefit":{"table":[1.0,0.5,0.2,0.05]},"cost":{"homogeneous":0.3},
           "analysis":"poa"})"},
      {"netform_acc_dyn.json",
       R"({"n":12,"benefit":{"delta":0.7},"cost":{"state_dependent":{"base":0.05,"alpha":0.5}},
           "analysis":"dynamics","params":{"seed":77,"rounds":60,"h":1.0},
           "profiles":{"capacities":[0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5]}})"},
      {"netform_acc_sweep.json",
       R"({"n":10,"benefit":{"delta":0.7},"cost":{"state_dependent":{"base":0.05,"alpha":0.5}},
           "analysis":"sweep","params":{"seed":5,"rounds":40,
           "grid":[[0.0,0.4],[1.5,0.4]],"replications":2}})"},
  };
  const std::vector<std::string> commands = {"efficient", "stable", "poa", "dynamics", "sweep"};

  for (std::size_t k = 0; k < scenarios.size() && out.pass; ++k) {
    const std::string path = write_temp(scenarios[k].first, scenarios[k].second);
    const std::string base = bin + " " + commands[k] + " " + path;
    const RunResult a = run_command(base + " --threads 1 2>/dev/null");
    const RunResult b = run_command(base + " --threads 1 2>/dev/null");
    const RunResult c = run_command(base + " --threads 3 2>/dev/null");
    if (a.exit_code != 0 || b.exit_code != 0 || c.exit_code != 0) {
      out.fail(commands[k] + " exited nonzero");
      break;
    }
    if (a.out.empty() || a.out != b.out) {
      out.fail(commands[k] + " stdout differs between identical runs");
      break;
    }
    if (a.out != c.out) {
      out.fail(commands[k] + " stdout differs across --threads values");
      break;
    }
  }
  if (out.pass) out.note = "5 analyses byte-identical across runs and thread counts";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::string bin;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc)
      only = std::atoi(argv[++i]);
    else
      bin = arg;
  }

  struct Entry {
    int id;
    const char* title;
    Outcome outcome;
  };
  std::vector<Entry> entries;
  const auto want = [&](int id) { return only == 0 || only == id; };

  if (want(1)) entries.push_back({1, "homogeneous efficiency regimes vs enumeration", criterion1()});
  if (want(2)) entries.push_back({2, "separable-cost efficient structure vs enumeration", criterion2()});
  if (want(3) || want(4)) {
    run_criteria_3_4();
    if (want(3)) entries.push_back({3, "pairwise-stable sets per homogeneous regime", criterion3_state});
    if (want(4)) entries.push_back({4, "price-of-anarchy sanity", criterion4_state});
  }
  if (want(5)) entries.push_back({5, "dynamics reduction to the static stability oracle", criterion5()});
  if (want(6)) entries.push_back({6, "heterogeneity/capacity sweep modularity trend", criterion6()});
  if (want(7)) entries.push_back({7, "modularity correctness and greedy optimality gap", criterion7()});
  if (want(8)) entries.push_back({8, "byte-identical reports across runs and threads", criterion8(bin)});

  int failed = 0;
  for (const Entry& e : entries) {
    if (!e.outcome.pass) ++failed;
    std::cout << (e.outcome.pass ? "PASS" : "FAIL") << "  criterion " << e.id << ": " << e.title;
    if (!e.outcome.note.empty()) std::cout << "  [" << e.outcome.note << "]";
    std::cout << '\n';
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << '\n';
  return failed;
}
