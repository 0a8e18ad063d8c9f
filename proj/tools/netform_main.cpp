// netform: strategic network-formation analysis on scenario files.
//
// Subcommands: efficient, stable, poa, dynamics, sweep, check. Reports go to
// stdout as deterministic JSON; progress and timing go to stderr. Exit codes:
// 0 success, 1 validation/input error, 2 capability error (e.g. node count
// over an enumeration cap).

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "netform/dynamics.hpp"
#include "netform/efficiency.hpp"
#include "netform/graph_io.hpp"
#include "netform/report.hpp"
#include "netform/scenario.hpp"
#include "netform/stability.hpp"
#include "netform/version.hpp"

namespace {

using namespace netform;

struct CliOptions {
  std::string scenario_path;
  std::string out_path;
  std::string export_path;
  std::string format = "edgelist";
  std::string graph_path;  // check only
  std::string trace_path;  // dynamics only
  std::string csv_path;    // sweep only
  std::optional<std::uint64_t> seed;
  std::optional<double> epsilon;
  int threads = 0;  // 0: resolve from NETFORM_THREADS or hardware
  bool verbose = false;
  bool timings = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

int resolve_threads(const CliOptions& cli) {
  if (cli.threads > 0) return cli.threads;
  if (const char* env = std::getenv("NETFORM_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

EnumOptions efficiency_options(const Scenario& s, int threads) {
  EnumOptions opts;
  opts.node_cap = scenario_efficiency_cap(s);
  opts.eps = s.params.epsilon;
  opts.threads = threads;
  return opts;
}

EnumOptions stability_options(const Scenario& s, int threads) {
  EnumOptions opts = stable_enum_defaults();
  opts.node_cap = scenario_stability_cap(s);
  opts.eps = s.params.epsilon;
  opts.threads = threads;
  return opts;
}

const std::vector<double>* scenario_states(const Scenario& s) {
  return s.states ? &*s.states : nullptr;
}

std::optional<Graph> run_efficient(const Scenario& s, int threads, AnalysisReport& report) {
  std::optional<Graph> principal;
  if (s.cost.is_homogeneous() && s.n >= 2) {
    const auto constructed = construct_efficient_homogeneous(
        s.n, s.benefit, s.cost.as_homogeneous().c, s.params.epsilon);
    report.regime = constructed.classification;
    principal = constructed.graph;
  } else if (s.cost.is_separable() && s.n >= 2) {
    report.separable =
        construct_efficient_separable(s.n, s.benefit, s.cost.as_separable().c, s.params.epsilon);
    principal = report.separable->graph;
  }

  const EnumOptions opts = efficiency_options(s, threads);
  if (s.n <= opts.node_cap) {
    report.efficient = enumerate_efficient(s.n, s.benefit, s.cost, scenario_states(s), opts);
    if (!report.efficient->optimizers.empty())
      principal = report.efficient->optimizers.front();
  } else if (!principal) {
    throw CapExceededError("no closed form for this cost model and n = " + std::to_string(s.n) +
                           " exceeds the enumeration cap of " + std::to_string(opts.node_cap));
  }

  if (principal)
    report.utilities = total_utility(*principal, s.benefit, s.cost, scenario_states(s));
  return principal;
}

std::optional<Graph> run_stable(const Scenario& s, int threads, AnalysisReport& report) {
  const EnumOptions opts = stability_options(s, threads);
  report.stable = enumerate_stable(s.n, s.benefit, s.cost, scenario_states(s), opts);
  // only meaningful when the kept list covers the whole stable set
  if (s.cost.is_homogeneous() && s.cost.as_homogeneous().c > s.benefit.at(1) &&
      !report.stable->truncated())
    report.min_degree_two = min_degree_property(*report.stable, s.benefit,
                                                s.cost.as_homogeneous().c);
  if (!report.stable->graphs.empty()) return report.stable->graphs.front();
  return std::nullopt;
}

void run_poa(const Scenario& s, int threads, AnalysisReport& report) {
  report.poa =
      price_of_anarchy(s.n, s.benefit, s.cost, scenario_states(s), stability_options(s, threads));
}

DynamicsTrace run_dynamics(const Scenario& s, AnalysisReport& report) {
  const EnvironmentConfig cfg = scenario_environment(s);
  DynamicsTrace trace =
      run(Graph::empty(s.n), scenario_profiles(s), cfg, TraceDetail::kFull);

  DynamicsSummary summary{trace.final_graph, {}, {}, 0.0, detect_communities(trace.final_graph),
                          trace.converged,   trace.convergence_round,
                          trace.rounds_executed, trace.forced_severances};
  summary.final_states.reserve(trace.final_profiles.size());
  for (const AgentProfile& p : trace.final_profiles) summary.final_states.push_back(p.state);
  summary.final_utilities.resize(static_cast<std::size_t>(s.n));
  for (int i = 0; i < s.n; ++i) {
    summary.final_utilities[i] = dynamic_utility(trace.final_graph, i, trace.final_profiles, cfg);
    summary.final_total_utility += summary.final_utilities[i];
  }
  report.dynamics = std::move(summary);
  return trace;
}

void run_sweep(const Scenario& s, int threads, AnalysisReport& report) {
  const EnvironmentConfig cfg = scenario_environment(s);
  const auto grid = s.params.grid.empty() ? default_sweep_grid() : s.params.grid;
  report.sweep =
      heterogeneity_sweep(scenario_profiles(s), cfg, grid, s.params.replications, threads);
}

Graph run_check(const Scenario& s, const CliOptions& cli, int threads, AnalysisReport& report) {
  if (cli.graph_path.empty())
    throw std::runtime_error("check requires --graph FILE");
  const Graph g = import_graph(read_file(cli.graph_path), s.n);
  if (g.node_count() != s.n)
    throw std::invalid_argument("graph has " + std::to_string(g.node_count()) +
                                " nodes but the scenario declares n = " + std::to_string(s.n));
  CheckReport check{g,
                    total_utility(g, s.benefit, s.cost, scenario_states(s)),
                    verify_efficiency(g, s.benefit, s.cost, scenario_states(s),
                                      efficiency_options(s, threads)),
                    check_pairwise_stable(g, s.benefit, s.cost, scenario_states(s),
                                          s.params.epsilon)};
  report.check = std::move(check);
  return g;
}

std::string trace_ndjson(const DynamicsTrace& trace) {
  std::ostringstream out;
  for (const RoundRecord& rec : trace.rounds) {
    nlohmann::json removed = nlohmann::json::array();
    {
      auto all = rec.forced_removed;
      all.insert(all.end(), rec.removed.begin(), rec.removed.end());
      std::sort(all.begin(), all.end());
      for (const auto& [i, j] : all) removed.push_back({i, j});
    }
    nlohmann::json added = nlohmann::json::array();
    for (const auto& [i, j] : rec.added) added.push_back({i, j});
    const nlohmann::json line = {{"round", rec.round},
                                 {"added", std::move(added)},
                                 {"removed", std::move(removed)},
                                 {"total_utility", rec.total_utility},
                                 {"q", rec.q}};
    out << line.dump() << '\n';
  }
  return out.str();
}

int dispatch(const std::string& subcommand, const CliOptions& cli) {
  const auto started = std::chrono::steady_clock::now();

  std::string text;
  try {
    text = read_file(cli.scenario_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  ParseResult parsed = parse_scenario(text);
  if (!parsed.ok()) {
    for (const ParseIssue& issue : parsed.errors)
      std::cerr << "scenario error at " << (issue.path.empty() ? "/" : issue.path) << ": "
                << issue.message << '\n';
    return 1;
  }
  Scenario scenario = std::move(*parsed.scenario);

  const AnalysisKind requested = *analysis_from_name(subcommand == "check" ? "efficient"
                                                                           : subcommand);
  if (subcommand != "check" && scenario.analysis != requested)
    std::cerr << "note: scenario declares analysis \"" << analysis_name(scenario.analysis)
              << "\"; running \"" << subcommand << "\"\n";
  if (subcommand != "check") scenario.analysis = requested;

  if (cli.seed) scenario.params.seed = *cli.seed;
  if (cli.epsilon) {
    if (!(*cli.epsilon > 0.0)) {
      std::cerr << "error: --epsilon must be positive\n";
      return 1;
    }
    scenario.params.epsilon = *cli.epsilon;
  }
  const int threads = resolve_threads(cli);

  AnalysisReport report;
  report.scenario = scenario;
  std::optional<Graph> principal;
  std::optional<DynamicsTrace> trace;

  try {
    if (subcommand == "efficient") {
      principal = run_efficient(scenario, threads, report);
    } else if (subcommand == "stable") {
      principal = run_stable(scenario, threads, report);
    } else if (subcommand == "poa") {
      run_poa(scenario, threads, report);
    } else if (subcommand == "dynamics") {
      trace = run_dynamics(scenario, report);
      principal = trace->final_graph;
    } else if (subcommand == "sweep") {
      run_sweep(scenario, threads, report);
    } else if (subcommand == "check") {
      principal = run_check(scenario, cli, threads, report);
    }
  } catch (const CapExceededError& e) {
    std::cerr << "capability error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (cli.timings) report.wall_seconds = elapsed;

  try {
    const std::string text_out = emit_report(report);
    if (cli.out_path.empty())
      std::cout << text_out;
    else
      write_file(cli.out_path, text_out);

    if (!cli.export_path.empty()) {
      const auto format = graph_format_from_name(cli.format);
      if (!format) {
        std::cerr << "error: unknown graph format \"" << cli.format << "\"\n";
        return 1;
      }
      if (principal)
        write_file(cli.export_path, export_graph(*principal, *format));
      else
        std::cerr << "note: no principal graph for this analysis; --export skipped\n";
    }
    if (!cli.trace_path.empty() && trace) write_file(cli.trace_path, trace_ndjson(*trace));
    if (!cli.csv_path.empty()) {
      if (report.sweep)
        write_file(cli.csv_path, sweep_csv(*report.sweep));
      else
        std::cerr << "note: --csv applies to sweep only; skipped\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  if (cli.verbose) std::cerr << "elapsed: " << elapsed << " s\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"strategic network formation: efficiency, stability and dynamics analyses"};
  app.set_version_flag("--version", std::string("netform ") + netform::kVersion);
  app.require_subcommand(1);

  CliOptions cli;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("scenario", cli.scenario_path, "Scenario JSON file")->required();
    sub->add_option("--out", cli.out_path, "Write the report here instead of stdout");
    sub->add_option("--export", cli.export_path, "Write the principal graph to this file");
    sub->add_option("--format", cli.format, "Graph export format: edgelist|dot|json")
        ->default_str("edgelist");
    sub->add_option("--seed", cli.seed, "Override the scenario seed");
    sub->add_option("--threads", cli.threads,
                    "Worker threads (default: NETFORM_THREADS or hardware)");
    sub->add_option("--epsilon", cli.epsilon, "Override the comparison tolerance");
    sub->add_flag("-v,--verbose", cli.verbose, "Progress and timing on stderr");
    sub->add_flag("--timings", cli.timings, "Embed wall-clock timing in the report");
  };

  add_common(app.add_subcommand("efficient",
                                "Efficient (total-utility-maximizing) structures"));
  add_common(app.add_subcommand("stable", "Enumerate pairwise-stable structures"));
  add_common(app.add_subcommand("poa", "Price of anarchy: efficient vs worst stable"));
  CLI::App* dynamics = app.add_subcommand("dynamics", "Seeded agent-based link dynamics");
  add_common(dynamics);
  dynamics->add_option("--trace", cli.trace_path, "Write per-round NDJSON trace to this file");
  CLI::App* sweep = app.add_subcommand("sweep", "Heterogeneity/capacity sweep of final modularity");
  add_common(sweep);
  sweep->add_option("--csv", cli.csv_path, "Write the sweep table as CSV to this file");
  CLI::App* check = app.add_subcommand("check",
                                       "Check a graph file for efficiency gap and stability");
  add_common(check);
  check->add_option("--graph", cli.graph_path, "Graph file (edge list or JSON export)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the parse diagnostic
    return code == 0 ? 0 : 1;
  }

  return dispatch(app.get_subcommands().front()->get_name(), cli);
}
