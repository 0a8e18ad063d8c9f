#include "netform/report.hpp"

#include <sstream>

#include "netform/version.hpp"
#include "scenario_json.hpp"

namespace netform {

namespace {

using nlohmann::json;

json edges_json(const Graph& g) {
  json edges = json::array();
  for (const auto& [i, j] : g.edges()) edges.push_back({i, j});
  return edges;
}

json graphs_json(const std::vector<Graph>& graphs) {
  json out = json::array();
  for (const Graph& g : graphs) out.push_back(edges_json(g));
  return out;
}

json utilities_json(const std::vector<double>& per_node, double total) {
  return {{"per_node", per_node}, {"total", total}};
}

json regime_json(const RegimeClassification& c) {
  return {{"regime", regime_name(c.regime)},
          {"complete_star_threshold", c.complete_star_threshold},
          {"star_empty_threshold", c.star_empty_threshold},
          {"boundary", c.boundary}};
}

json violations_json(const std::vector<StabilityViolation>& violations) {
  json out = json::array();
  for (const auto& viol : violations)
    out.push_back({{"pair", {viol.i, viol.j}},
                   {"kind", violation_kind_name(viol.kind)},
                   {"gain_i", viol.gain_i},
                   {"gain_j", viol.gain_j}});
  return out;
}

}  // namespace

std::string emit_report(const AnalysisReport& r) {
  json results = json::object();

  if (r.regime) results["regime"] = regime_json(*r.regime);

  if (r.efficient) {
    results["efficient"] = {{"best_total", r.efficient->best_total},
                            {"optimizer_count", r.efficient->optimizer_count},
                            {"optimizers", graphs_json(r.efficient->optimizers)},
                            {"truncated", r.efficient->truncated()}};
  }

  if (r.separable) {
    json core = json::array();
    for (const auto& [i, j] : r.separable->core_edges) core.push_back({i, j});
    results["separable_structure"] = {{"m", r.separable->participant_count},
                                      {"hub", r.separable->hub},
                                      {"isolated", r.separable->isolated},
                                      {"core_edges", std::move(core)},
                                      {"boundary", r.separable->boundary},
                                      {"edges", edges_json(r.separable->graph)}};
  }

  if (r.utilities)
    results["utilities"] = utilities_json(r.utilities->per_node, r.utilities->total);

  if (r.stable) {
    results["stable"] = {{"count", r.stable->stable_count},
                         {"graphs", graphs_json(r.stable->graphs)},
                         {"totals", r.stable->totals},
                         {"worst_total", r.stable->worst_total},
                         {"best_total", r.stable->best_total},
                         {"truncated", r.stable->truncated()}};
  }

  if (r.min_degree_two) results["min_degree_two"] = *r.min_degree_two;

  if (r.poa) {
    json poa = {{"efficient_total", r.poa->efficient_total},
                {"worst_stable_total", r.poa->worst_stable_total},
                {"best_stable_total", r.poa->best_stable_total},
                {"stable_count", r.poa->stable_count}};
    if (r.poa->value)
      poa["value"] = *r.poa->value;
    else
      poa["value"] = "undefined";
    results["price_of_anarchy"] = std::move(poa);
  }

  if (r.dynamics) {
    const DynamicsSummary& d = *r.dynamics;
    json dyn = {{"edges", edges_json(d.final_graph)},
                {"final_states", d.final_states},
                {"utilities", utilities_json(d.final_utilities, d.final_total_utility)},
                {"modularity",
                 {{"q", d.communities.q},
                  {"communities", d.communities.community_of},
                  {"community_count", d.communities.community_count}}},
                {"converged", d.converged},
                {"rounds_executed", d.rounds_executed},
                {"forced_severances", d.forced_severances}};
    if (d.convergence_round)
      dyn["convergence_round"] = *d.convergence_round;
    else
      dyn["convergence_round"] = nullptr;
    results["dynamics"] = std::move(dyn);
  }

  if (r.sweep) {
    json points = json::array();
    for (const SweepPoint& p : *r.sweep)
      points.push_back({{"h", p.heterogeneity},
                        {"capacity", p.capacity},
                        {"mean_q", p.mean_q},
                        {"sd_q", p.sd_q},
                        {"replications", p.replications},
                        {"converged_runs", p.converged_runs}});
    results["sweep"] = std::move(points);
  }

  if (r.check) {
    results["check"] = {
        {"edges", edges_json(r.check->graph)},
        {"utilities", utilities_json(r.check->utilities.per_node, r.check->utilities.total)},
        {"efficiency",
         {{"graph_total", r.check->efficiency.graph_total},
          {"best_total", r.check->efficiency.best_total},
          {"gap", r.check->efficiency.gap},
          {"optimal", r.check->efficiency.optimal}}},
        {"stability",
         {{"stable", r.check->verdict.stable},
          {"violations", violations_json(r.check->verdict.violations)}}}};
  }

  json doc;
  doc["analysis"] = r.check ? "check" : analysis_name(r.scenario.analysis);
  doc["results"] = std::move(results);
  doc["scenario"] = scenario_to_json(r.scenario);
  if (r.wall_seconds) doc["timings"] = {{"wall_seconds", *r.wall_seconds}};
  doc["version"] = kVersion;
  return doc.dump(2) + "\n";
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::ostringstream out;
  out << "h,capacity,mean_q,sd_q,replications,converged_runs\n";
  out.precision(17);
  for (const SweepPoint& p : points)
    out << p.heterogeneity << ',' << p.capacity << ',' << p.mean_q << ',' << p.sd_q << ','
        << p.replications << ',' << p.converged_runs << '\n';
  return out.str();
}

}  // namespace netform
