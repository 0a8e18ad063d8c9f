#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "netform/dynamics.hpp"
#include "netform/model.hpp"

namespace netform {

enum class AnalysisKind { kEfficient, kStable, kPoa, kDynamics, kSweep };

const char* analysis_name(AnalysisKind kind);
std::optional<AnalysisKind> analysis_from_name(const std::string& name);

struct ScenarioParams {
  double epsilon = kDefaultEpsilon;
  std::optional<int> enum_cap;  // defaults: 8 for efficiency, 7 for stability
  std::uint64_t seed = 0;
  int rounds = 500;
  double beta = 1.0;
  double heterogeneity = 0.0;
  std::vector<std::pair<double, double>> grid;  // (h, capacity); empty -> default
  int replications = 10;
  bool operator==(const ScenarioParams&) const = default;
};

/// One self-contained analysis request: the node set, benefit and cost
/// models, optional per-node profiles, the analysis to run, and engine
/// parameters. Parsed from / serialized to a JSON document.
struct Scenario {
  int n = 1;
  BenefitFunction benefit = BenefitFunction::decay(0.5);
  CostModel cost;
  std::optional<std::vector<double>> states;
  std::optional<std::vector<double>> capacities;
  std::optional<std::vector<double>> drift;
  AnalysisKind analysis = AnalysisKind::kEfficient;
  ScenarioParams params;
  std::vector<std::string> names;  // optional node labels, index-aligned
  bool operator==(const Scenario&) const = default;
};

struct ParseIssue {
  std::string path;  // JSON-pointer style, e.g. "/cost/separable"
  std::string message;
};

struct ParseResult {
  std::optional<Scenario> scenario;
  std::vector<ParseIssue> errors;  // every problem found, not just the first
  bool ok() const { return scenario.has_value(); }
};

/// Validates a scenario document; on failure reports all errors with field
/// paths.
ParseResult parse_scenario(const std::string& text);

/// Canonical JSON for a scenario; parse_scenario(emit_scenario(s)) == s.
std::string emit_scenario(const Scenario& scenario);

/// The (h, capacity) grid used when a sweep scenario does not provide one:
/// h in {0, 0.5, 1, 2} crossed with capacity in {0.3, 0.6, 1.2}.
std::vector<std::pair<double, double>> default_sweep_grid();

/// Materializes per-node profiles: given values, or state 0.5, unlimited
/// capacity and drift rate 0.1 where the scenario is silent.
std::vector<AgentProfile> scenario_profiles(const Scenario& scenario);

/// Environment for dynamics/sweep runs. The cost must be state-dependent
/// (base, alpha) or homogeneous (base = c, alpha = 0); other forms throw.
EnvironmentConfig scenario_environment(const Scenario& scenario);

/// Caps for enumeration-backed analyses, honoring params.enum_cap.
int scenario_efficiency_cap(const Scenario& scenario);
int scenario_stability_cap(const Scenario& scenario);

}  // namespace netform
