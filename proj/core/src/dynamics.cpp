#include "netform/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace netform {

namespace {

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

double pair_cost(const EnvironmentConfig& cfg, double s_i, double s_j) {
  return cfg.base_cost + cfg.cost_alpha * std::abs(s_i - s_j);
}

// Mask-level evaluation; benefit carries the per-pair diversity multiplier so
// the BFS accumulates node by node rather than level by level.
double utility_masks(const std::uint64_t* adj, int n, int node, const double* b,
                     const double* states, const EnvironmentConfig& cfg) {
  const double s_i = states[node];
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
    std::uint64_t reached = next;
    while (reached) {
      const int j = std::countr_zero(reached);
      reached &= reached - 1;
      u += b[depth] * (1.0 + cfg.diversity_beta * std::abs(s_i - states[j]));
    }
    visited |= next;
    frontier = next;
  }
  std::uint64_t direct = adj[node];
  while (direct) {
    const int j = std::countr_zero(direct);
    direct &= direct - 1;
    u -= pair_cost(cfg, s_i, states[j]);
  }
  return u;
}

double load_masks(const std::uint64_t* adj, int node, const double* states,
                  const EnvironmentConfig& cfg) {
  double load = 0.0;
  std::uint64_t direct = adj[node];
  while (direct) {
    const int j = std::countr_zero(direct);
    direct &= direct - 1;
    load += pair_cost(cfg, states[node], states[j]);
  }
  return load;
}

struct Workspace {
  std::vector<std::uint64_t> adj;
  std::vector<double> states;
  std::vector<double> benefit;

  Workspace(const Graph& g, const std::vector<AgentProfile>& profiles,
            const EnvironmentConfig& cfg) {
    const int n = g.node_count();
    adj.resize(static_cast<std::size_t>(n));
    states.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      adj[i] = g.neighbor_mask(i);
      states[i] = profiles[i].state;
    }
    benefit = cfg.benefit.by_hops(n);
  }
};

void check_profiles(const Graph& g, const std::vector<AgentProfile>& profiles) {
  if (profiles.size() != static_cast<std::size_t>(g.node_count()))
    throw std::invalid_argument("profile count must equal node count");
}

}  // namespace

double dynamic_utility(const Graph& g, int node, const std::vector<AgentProfile>& profiles,
                       const EnvironmentConfig& cfg) {
  check_profiles(g, profiles);
  if (node < 0 || node >= g.node_count()) throw std::out_of_range("node index out of range");
  Workspace ws(g, profiles, cfg);
  return utility_masks(ws.adj.data(), g.node_count(), node, ws.benefit.data(),
                       ws.states.data(), cfg);
}

double link_cost_load(const Graph& g, int node, const std::vector<AgentProfile>& profiles,
                      const EnvironmentConfig& cfg) {
  check_profiles(g, profiles);
  if (node < 0 || node >= g.node_count()) throw std::out_of_range("node index out of range");
  Workspace ws(g, profiles, cfg);
  return load_masks(ws.adj.data(), node, ws.states.data(), cfg);
}

StepResult step(const Graph& g, std::vector<AgentProfile>& profiles,
                const EnvironmentConfig& cfg, Xoshiro256StarStar& rng) {
  check_profiles(g, profiles);
  const int n = g.node_count();
  const double eps = cfg.eps;

  // (a) every state takes a bounded random-walk step scaled by h and the
  // node's own drift rate; nodes draw even when h = 0 so the stream layout
  // does not depend on parameters.
  for (int i = 0; i < n; ++i) {
    const double xi = rng.uniform_signed();
    profiles[i].state = clamp01(profiles[i].state + cfg.heterogeneity * profiles[i].drift * xi);
  }

  Workspace ws(g, profiles, cfg);
  std::uint64_t* adj = ws.adj.data();
  const double* b = ws.benefit.data();
  const double* states = ws.states.data();

  StepResult result{g, {}, {}, {}, false};

  std::vector<double> load(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) load[i] = load_masks(adj, i, states, cfg);

  auto drop_edge = [&](int i, int j) {
    adj[i] &= ~(1ull << j);
    adj[j] &= ~(1ull << i);
    const double c = pair_cost(cfg, states[i], states[j]);
    load[i] -= c;
    load[j] -= c;
  };
  auto put_edge = [&](int i, int j) {
    adj[i] |= 1ull << j;
    adj[j] |= 1ull << i;
    const double c = pair_cost(cfg, states[i], states[j]);
    load[i] += c;
    load[j] += c;
  };

  // (b) capacity repair: after drifting, a node over its budget sheds its
  // most expensive link until feasible. Removals only lower loads, so one
  // ascending pass settles every node.
  for (int i = 0; i < n; ++i) {
    while (load[i] > profiles[i].capacity + eps) {
      int worst = -1;
      double worst_cost = -1.0;
      std::uint64_t direct = adj[i];
      while (direct) {
        const int j = std::countr_zero(direct);
        direct &= direct - 1;
        const double c = pair_cost(cfg, states[i], states[j]);
        if (c > worst_cost + eps) {  // ties keep the smallest partner id
          worst_cost = c;
          worst = j;
        }
      }
      if (worst < 0) break;  // no links left yet still "over": capacity < 0 case
      drop_edge(i, worst);
      result.forced_removed.emplace_back(std::min(i, worst), std::max(i, worst));
    }
  }

  // (c) myopic moves over all pairs in seeded random order.
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  rng.shuffle(pairs);

  for (const auto& [i, j] : pairs) {
    if ((adj[i] >> j) & 1ull) {
      const double u_i = utility_masks(adj, n, i, b, states, cfg);
      const double u_j = utility_masks(adj, n, j, b, states, cfg);
      drop_edge(i, j);
      const double gain_i = utility_masks(adj, n, i, b, states, cfg) - u_i;
      const double gain_j = utility_masks(adj, n, j, b, states, cfg) - u_j;
      if (severance_improves(gain_i, eps) || severance_improves(gain_j, eps)) {
        result.removed.emplace_back(i, j);
      } else {
        put_edge(i, j);  // keep it
      }
    } else {
      const double c = pair_cost(cfg, states[i], states[j]);
      if (load[i] + c > profiles[i].capacity + eps ||
          load[j] + c > profiles[j].capacity + eps)
        continue;  // infeasible for at least one endpoint
      const double u_i = utility_masks(adj, n, i, b, states, cfg);
      const double u_j = utility_masks(adj, n, j, b, states, cfg);
      put_edge(i, j);
      const double gain_i = utility_masks(adj, n, i, b, states, cfg) - u_i;
      const double gain_j = utility_masks(adj, n, j, b, states, cfg) - u_j;
      if (addition_improves(gain_i, gain_j, eps)) {
        result.added.emplace_back(i, j);
      } else {
        drop_edge(i, j);
      }
    }
  }

  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if ((adj[i] >> j) & 1ull) edges.emplace_back(i, j);
  result.graph = Graph::from_edges(n, edges);
  result.changed = !result.added.empty() || !result.removed.empty() ||
                   !result.forced_removed.empty();
  return result;
}

DynamicsTrace run(const Graph& initial, std::vector<AgentProfile> profiles,
                  const EnvironmentConfig& cfg, TraceDetail detail) {
  check_profiles(initial, profiles);
  if (cfg.rounds < 1) throw std::invalid_argument("round count must be at least 1");
  const int n = initial.node_count();

  Xoshiro256StarStar rng(cfg.seed);
  Graph g = initial;
  DynamicsTrace trace{{}, g, profiles, false, std::nullopt, 0, 0, 0.0};

  // A quiet round is absorbing only when states cannot move; with live drift
  // the run must play out all rounds and "converged" reports whether the
  // final round was quiet.
  bool static_world = cfg.heterogeneity == 0.0;
  if (!static_world) {
    static_world = true;
    for (const AgentProfile& p : profiles)
      if (p.drift != 0.0) static_world = false;
  }

  for (int round = 1; round <= cfg.rounds; ++round) {
    StepResult res = step(g, profiles, cfg, rng);
    g = res.graph;
    trace.rounds_executed = round;
    trace.forced_severances += res.forced_removed.size();

    if (detail == TraceDetail::kFull) {
      RoundRecord rec;
      rec.round = round;
      rec.added = res.added;
      rec.removed = res.removed;
      rec.forced_removed = res.forced_removed;
      rec.utilities.resize(static_cast<std::size_t>(n));
      Workspace ws(g, profiles, cfg);
      for (int i = 0; i < n; ++i) {
        rec.utilities[i] =
            utility_masks(ws.adj.data(), n, i, ws.benefit.data(), ws.states.data(), cfg);
        rec.total_utility += rec.utilities[i];
      }
      rec.q = detect_communities(g).q;
      trace.rounds.push_back(std::move(rec));
    }

    if (!res.changed) {
      trace.converged = true;
      trace.convergence_round = round;
      if (static_world) break;
    } else {
      trace.converged = false;
      trace.convergence_round.reset();
    }
  }

  trace.final_graph = g;
  trace.final_profiles = profiles;
  trace.final_q = detect_communities(g).q;
  return trace;
}

CapacityStabilityReport check_capacity_stable(const Graph& g,
                                              const std::vector<AgentProfile>& profiles,
                                              const EnvironmentConfig& cfg) {
  check_profiles(g, profiles);
  const int n = g.node_count();
  const double eps = cfg.eps;
  Workspace ws(g, profiles, cfg);
  std::uint64_t* adj = ws.adj.data();
  const double* b = ws.benefit.data();
  const double* states = ws.states.data();

  CapacityStabilityReport report;
  report.capacity_ok = true;
  std::vector<double> load(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    load[i] = load_masks(adj, i, states, cfg);
    if (load[i] > profiles[i].capacity + eps) report.capacity_ok = false;
  }

  double base[Graph::kMaxNodes];
  for (int i = 0; i < n; ++i) base[i] = utility_masks(adj, n, i, b, states, cfg);

  report.stable = true;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool present = (adj[i] >> j) & 1ull;
      if (!present) {
        const double c = pair_cost(cfg, states[i], states[j]);
        if (load[i] + c > profiles[i].capacity + eps ||
            load[j] + c > profiles[j].capacity + eps)
          continue;  // addition infeasible, cannot destabilize
      }
      adj[i] ^= 1ull << j;
      adj[j] ^= 1ull << i;
      const double gain_i = utility_masks(adj, n, i, b, states, cfg) - base[i];
      const double gain_j = utility_masks(adj, n, j, b, states, cfg) - base[j];
      adj[i] ^= 1ull << j;
      adj[j] ^= 1ull << i;
      if (present) {
        if (severance_improves(gain_i, eps) || severance_improves(gain_j, eps)) {
          report.stable = false;
          report.violations.push_back({i, j, ViolationKind::kSeverProfitable, gain_i, gain_j});
        }
      } else if (addition_improves(gain_i, gain_j, eps)) {
        report.stable = false;
        report.violations.push_back({i, j, ViolationKind::kAddProfitable, gain_i, gain_j});
      }
    }
  }
  report.stable = report.stable && report.capacity_ok;
  return report;
}

std::vector<SweepPoint> heterogeneity_sweep(const std::vector<AgentProfile>& base_profiles,
                                            const EnvironmentConfig& base_cfg,
                                            const std::vector<std::pair<double, double>>& grid,
                                            int replications, int threads) {
  if (replications < 1) throw std::invalid_argument("replications must be at least 1");
  if (grid.empty()) throw std::invalid_argument("sweep grid must not be empty");
  const int n = static_cast<int>(base_profiles.size());
  if (n < 1) throw std::invalid_argument("sweep needs at least one agent profile");

  struct Task {
    std::size_t grid_index;
    int replication;
  };
  std::vector<Task> tasks;
  tasks.reserve(grid.size() * static_cast<std::size_t>(replications));
  for (std::size_t gi = 0; gi < grid.size(); ++gi)
    for (int r = 0; r < replications; ++r) tasks.push_back({gi, r});

  std::vector<double> final_q(tasks.size(), 0.0);
  std::vector<char> converged(tasks.size(), 0);

  auto run_task = [&](std::size_t t) {
    const auto [h, kappa] = grid[tasks[t].grid_index];
    EnvironmentConfig cfg = base_cfg;
    cfg.heterogeneity = h;
    cfg.seed = derive_seed(base_cfg.seed, static_cast<std::uint64_t>(t));
    std::vector<AgentProfile> profiles = base_profiles;
    for (auto& p : profiles) p.capacity = kappa;
    const DynamicsTrace trace =
        run(Graph::empty(n), std::move(profiles), cfg, TraceDetail::kSummary);
    final_q[t] = trace.final_q;
    converged[t] = trace.converged ? 1 : 0;
  };

  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(tasks.size())));
  if (workers == 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) run_task(t);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = static_cast<std::size_t>(w); t < tasks.size();
             t += static_cast<std::size_t>(workers))
          run_task(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  // Aggregate in grid order; every task wrote to its own slot, so the result
  // does not depend on the thread count.
  std::vector<SweepPoint> out;
  out.reserve(grid.size());
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    SweepPoint point;
    point.heterogeneity = grid[gi].first;
    point.capacity = grid[gi].second;
    point.replications = replications;
    double sum = 0.0;
    for (int r = 0; r < replications; ++r) {
      const std::size_t t = gi * static_cast<std::size_t>(replications) + r;
      sum += final_q[t];
      point.converged_runs += converged[t];
    }
    point.mean_q = sum / replications;
    if (replications > 1) {
      double ss = 0.0;
      for (int r = 0; r < replications; ++r) {
        const std::size_t t = gi * static_cast<std::size_t>(replications) + r;
        const double d = final_q[t] - point.mean_q;
        ss += d * d;
      }
      point.sd_q = std::sqrt(ss / (replications - 1));
    }
    out.push_back(point);
  }
  return out;
}

}  // namespace netform
