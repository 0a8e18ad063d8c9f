#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netform/dynamics.hpp"
#include "netform/efficiency.hpp"
#include "netform/modularity.hpp"
#include "netform/scenario.hpp"
#include "netform/stability.hpp"

namespace netform {

struct CheckReport {
  Graph graph;
  UtilityVector utilities;
  EfficiencyReport efficiency;
  StabilityVerdict verdict;
};

struct DynamicsSummary {
  Graph final_graph;
  std::vector<double> final_states;
  std::vector<double> final_utilities;
  double final_total_utility = 0.0;
  ModularityResult communities;
  bool converged = false;
  std::optional<int> convergence_round;
  int rounds_executed = 0;
  std::uint64_t forced_severances = 0;
};

/// Everything one analysis produced, plus the scenario echo that reproduces
/// it. Sections are filled according to the analysis that ran.
struct AnalysisReport {
  Scenario scenario;
  std::optional<RegimeClassification> regime;
  std::optional<EfficientSet> efficient;
  std::optional<SeparableEfficientStructure> separable;
  std::optional<UtilityVector> utilities;  // of the principal graph
  std::optional<StableSet> stable;
  std::optional<bool> min_degree_two;  // only in the b(1) < c homogeneous regime
  std::optional<PriceOfAnarchy> poa;
  std::optional<DynamicsSummary> dynamics;
  std::optional<std::vector<SweepPoint>> sweep;
  std::optional<CheckReport> check;
  std::optional<double> wall_seconds;  // omitted from the text when absent
};

/// Deterministic JSON: sorted keys, graphs as sorted edge lists. Two runs of
/// the same scenario and seed produce identical text (timings, when embedded,
/// are the only exception).
std::string emit_report(const AnalysisReport& report);

/// Sweep table as CSV: h,capacity,mean_q,sd_q,replications,converged_runs.
std::string sweep_csv(const std::vector<SweepPoint>& points);

}  // namespace netform
