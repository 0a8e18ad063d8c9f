#include "netform/scenario.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "scenario_json.hpp"

namespace netform {

const char* analysis_name(AnalysisKind kind) {
  switch (kind) {
    case AnalysisKind::kEfficient: return "efficient";
    case AnalysisKind::kStable: return "stable";
    case AnalysisKind::kPoa: return "poa";
    case AnalysisKind::kDynamics: return "dynamics";
    case AnalysisKind::kSweep: return "sweep";
  }
  return "unknown";
}

std::optional<AnalysisKind> analysis_from_name(const std::string& name) {
  if (name == "efficient") return AnalysisKind::kEfficient;
  if (name == "stable") return AnalysisKind::kStable;
  if (name == "poa") return AnalysisKind::kPoa;
  if (name == "dynamics") return AnalysisKind::kDynamics;
  if (name == "sweep") return AnalysisKind::kSweep;
  return std::nullopt;
}

std::vector<std::pair<double, double>> default_sweep_grid() {
  std::vector<std::pair<double, double>> grid;
  for (const double h : {0.0, 0.5, 1.0, 2.0})
    for (const double kappa : {0.3, 0.6, 1.2}) grid.emplace_back(h, kappa);
  return grid;
}

std::vector<AgentProfile> scenario_profiles(const Scenario& s) {
  std::vector<AgentProfile> profiles(static_cast<std::size_t>(s.n));
  for (int i = 0; i < s.n; ++i) {
    if (s.states) profiles[i].state = (*s.states)[i];
    if (s.capacities) profiles[i].capacity = (*s.capacities)[i];
    if (s.drift) profiles[i].drift = (*s.drift)[i];
  }
  return profiles;
}

EnvironmentConfig scenario_environment(const Scenario& s) {
  EnvironmentConfig cfg;
  cfg.heterogeneity = s.params.heterogeneity;
  cfg.rounds = s.params.rounds;
  cfg.seed = s.params.seed;
  cfg.benefit = s.benefit;
  cfg.diversity_beta = s.params.beta;
  cfg.eps = s.params.epsilon;
  if (s.cost.is_state_dependent()) {
    cfg.base_cost = s.cost.as_state_dependent().base;
    cfg.cost_alpha = s.cost.as_state_dependent().alpha;
  } else if (s.cost.is_homogeneous()) {
    cfg.base_cost = s.cost.as_homogeneous().c;
    cfg.cost_alpha = 0.0;
  } else {
    throw std::invalid_argument(
        "dynamics requires a homogeneous or state_dependent cost model");
  }
  return cfg;
}

int scenario_efficiency_cap(const Scenario& s) { return s.params.enum_cap.value_or(8); }
int scenario_stability_cap(const Scenario& s) { return s.params.enum_cap.value_or(7); }

// ---------------------------------------------------------------------------
// Parsing. Every check appends to `errors` instead of bailing out, so a bad
// document reports all of its problems in one pass.
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

class Validator {
 public:
  explicit Validator(std::vector<ParseIssue>& errors) : errors_(errors) {}

  void fail(const std::string& path, const std::string& message) {
    errors_.push_back({path, message});
  }

  bool expect_keys(const json& obj, const std::string& path,
                   const std::set<std::string>& allowed) {
    bool ok = true;
    for (const auto& [key, value] : obj.items()) {
      (void)value;
      if (!allowed.count(key)) {
        fail(path + "/" + key, "unknown key");
        ok = false;
      }
    }
    return ok;
  }

  std::optional<double> number(const json& obj, const std::string& path) {
    if (!obj.is_number()) {
      fail(path, "expected a number");
      return std::nullopt;
    }
    const double v = obj.get<double>();
    if (!std::isfinite(v)) {
      fail(path, "must be finite");
      return std::nullopt;
    }
    return v;
  }

  std::optional<int> integer(const json& obj, const std::string& path) {
    if (!obj.is_number_integer()) {
      fail(path, "expected an integer");
      return std::nullopt;
    }
    const auto wide = obj.get<std::int64_t>();
    if (wide < std::numeric_limits<int>::min() || wide > std::numeric_limits<int>::max()) {
      fail(path, "integer out of range");
      return std::nullopt;
    }
    return static_cast<int>(wide);
  }

  std::optional<std::vector<double>> number_array(const json& obj, const std::string& path,
                                                  std::size_t expected_len) {
    if (!obj.is_array()) {
      fail(path, "expected an array");
      return std::nullopt;
    }
    std::vector<double> out;
    out.reserve(obj.size());
    for (std::size_t k = 0; k < obj.size(); ++k) {
      const auto v = number(obj[k], path + "/" + std::to_string(k));
      if (!v) return std::nullopt;
      out.push_back(*v);
    }
    if (expected_len != 0 && out.size() != expected_len) {
      fail(path, "expected " + std::to_string(expected_len) + " entries, got " +
                     std::to_string(out.size()));
      return std::nullopt;
    }
    return out;
  }

 private:
  std::vector<ParseIssue>& errors_;
};

}  // namespace

ParseResult parse_scenario(const std::string& text) {
  ParseResult result;
  Validator v(result.errors);

  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    v.fail("/", "malformed JSON document");
    return result;
  }
  if (!doc.is_object()) {
    v.fail("/", "scenario must be a JSON object");
    return result;
  }

  Scenario s;
  v.expect_keys(doc, "", {"n", "benefit", "cost", "profiles", "analysis", "params", "names"});

  // n
  int n = 0;
  if (!doc.contains("n")) {
    v.fail("/n", "required field missing");
  } else if (const auto val = v.integer(doc["n"], "/n")) {
    if (*val < 1 || *val > Graph::kMaxNodes)
      v.fail("/n", "node count must be between 1 and " + std::to_string(Graph::kMaxNodes));
    else
      n = *val;
  }
  s.n = n > 0 ? n : 1;

  // benefit
  if (doc.contains("benefit")) {
    const json& b = doc["benefit"];
    if (!b.is_object()) {
      v.fail("/benefit", "expected an object");
    } else {
      v.expect_keys(b, "/benefit", {"delta", "table"});
      const bool has_delta = b.contains("delta");
      const bool has_table = b.contains("table");
      if (has_delta == has_table) {
        v.fail("/benefit", "exactly one of delta or table is required");
      } else if (has_delta) {
        if (const auto d = v.number(b["delta"], "/benefit/delta")) {
          if (!(*d > 0.0 && *d < 1.0))
            v.fail("/benefit/delta", "decay parameter must lie in (0, 1)");
          else
            s.benefit = BenefitFunction::decay(*d);
        }
      } else {
        if (const auto t = v.number_array(b["table"], "/benefit/table", 0)) {
          bool ok = !t->empty();
          if (t->empty()) v.fail("/benefit/table", "must not be empty");
          for (std::size_t k = 0; ok && k < t->size(); ++k) {
            if (!((*t)[k] > 0.0)) {
              v.fail("/benefit/table/" + std::to_string(k), "entries must be positive");
              ok = false;
            } else if (k + 1 < t->size() && !((*t)[k] > (*t)[k + 1])) {
              v.fail("/benefit/table", "must be strictly decreasing: b(k) > b(k+1)");
              ok = false;
            }
          }
          if (ok) s.benefit = BenefitFunction::table(*t);
        }
      }
    }
  }

  // cost
  if (!doc.contains("cost")) {
    v.fail("/cost", "required field missing");
  } else if (!doc["cost"].is_object()) {
    v.fail("/cost", "expected an object");
  } else {
    const json& c = doc["cost"];
    v.expect_keys(c, "/cost", {"homogeneous", "separable", "matrix", "state_dependent"});
    const int forms = static_cast<int>(c.contains("homogeneous")) +
                      static_cast<int>(c.contains("separable")) +
                      static_cast<int>(c.contains("matrix")) +
                      static_cast<int>(c.contains("state_dependent"));
    if (forms != 1) {
      v.fail("/cost", "exactly one cost form is required");
    } else if (c.contains("homogeneous")) {
      if (const auto x = v.number(c["homogeneous"], "/cost/homogeneous")) {
        if (!(*x >= 0.0))
          v.fail("/cost/homogeneous", "cost must be nonnegative");
        else
          s.cost = CostModel::homogeneous(*x);
      }
    } else if (c.contains("separable")) {
      if (const auto x =
              v.number_array(c["separable"], "/cost/separable", static_cast<std::size_t>(s.n))) {
        bool ok = true;
        for (std::size_t k = 0; k < x->size(); ++k) {
          if (!((*x)[k] >= 0.0)) {
            v.fail("/cost/separable/" + std::to_string(k), "cost must be nonnegative");
            ok = false;
          }
        }
        if (ok) s.cost = CostModel::separable(*x);
      }
    } else if (c.contains("matrix")) {
      const json& mj = c["matrix"];
      if (!mj.is_array() || mj.size() != static_cast<std::size_t>(s.n)) {
        v.fail("/cost/matrix", "expected an n x n array");
      } else {
        std::vector<std::vector<double>> rows;
        bool ok = true;
        for (std::size_t r = 0; r < mj.size(); ++r) {
          const auto row = v.number_array(mj[r], "/cost/matrix/" + std::to_string(r),
                                          static_cast<std::size_t>(s.n));
          if (!row) {
            ok = false;
            break;
          }
          rows.push_back(*row);
        }
        if (ok) {
          for (std::size_t i = 0; ok && i < rows.size(); ++i) {
            if (rows[i][i] != 0.0) {
              v.fail("/cost/matrix", "diagonal must be zero");
              ok = false;
            }
            for (std::size_t j = 0; ok && j < rows.size(); ++j) {
              if (rows[i][j] < 0.0) {
                v.fail("/cost/matrix", "entries must be nonnegative");
                ok = false;
              } else if (rows[i][j] != rows[j][i]) {
                v.fail("/cost/matrix", "must be symmetric");
                ok = false;
              }
            }
          }
          if (ok) s.cost = CostModel::matrix(rows);
        }
      }
    } else {
      const json& sd = c["state_dependent"];
      if (!sd.is_object()) {
        v.fail("/cost/state_dependent", "expected an object");
      } else {
        v.expect_keys(sd, "/cost/state_dependent", {"base", "alpha"});
        double base = 0.0;
        double alpha = 0.0;
        bool ok = true;
        if (!sd.contains("base")) {
          v.fail("/cost/state_dependent/base", "required field missing");
          ok = false;
        } else if (const auto x = v.number(sd["base"], "/cost/state_dependent/base")) {
          if (!(*x >= 0.0)) {
            v.fail("/cost/state_dependent/base", "must be nonnegative");
            ok = false;
          } else {
            base = *x;
          }
        } else {
          ok = false;
        }
        if (!sd.contains("alpha")) {
          v.fail("/cost/state_dependent/alpha", "required field missing");
          ok = false;
        } else if (const auto x = v.number(sd["alpha"], "/cost/state_dependent/alpha")) {
          if (!(*x >= 0.0)) {
            v.fail("/cost/state_dependent/alpha", "must be nonnegative");
            ok = false;
          } else {
            alpha = *x;
          }
        } else {
          ok = false;
        }
        if (ok) s.cost = CostModel::state_dependent(base, alpha);
      }
    }
  }

  // profiles
  if (doc.contains("profiles")) {
    const json& p = doc["profiles"];
    if (!p.is_object()) {
      v.fail("/profiles", "expected an object");
    } else {
      v.expect_keys(p, "/profiles", {"states", "capacities", "drift"});
      if (p.contains("states")) {
        if (const auto x =
                v.number_array(p["states"], "/profiles/states", static_cast<std::size_t>(s.n))) {
          bool ok = true;
          for (std::size_t k = 0; k < x->size(); ++k) {
            if ((*x)[k] < 0.0 || (*x)[k] > 1.0) {
              v.fail("/profiles/states/" + std::to_string(k), "states must lie in [0, 1]");
              ok = false;
            }
          }
          if (ok) s.states = *x;
        }
      }
      if (p.contains("capacities")) {
        if (const auto x = v.number_array(p["capacities"], "/profiles/capacities",
                                          static_cast<std::size_t>(s.n))) {
          bool ok = true;
          for (std::size_t k = 0; k < x->size(); ++k) {
            if ((*x)[k] < 0.0) {
              v.fail("/profiles/capacities/" + std::to_string(k),
                     "capacities must be nonnegative");
              ok = false;
            }
          }
          if (ok) s.capacities = *x;
        }
      }
      if (p.contains("drift")) {
        if (const auto x =
                v.number_array(p["drift"], "/profiles/drift", static_cast<std::size_t>(s.n)))
          s.drift = *x;
      }
    }
  }

  // analysis
  if (!doc.contains("analysis")) {
    v.fail("/analysis", "required field missing");
  } else if (!doc["analysis"].is_string()) {
    v.fail("/analysis", "expected a string");
  } else if (const auto kind = analysis_from_name(doc["analysis"].get<std::string>())) {
    s.analysis = *kind;
  } else {
    v.fail("/analysis", "expected one of: efficient, stable, poa, dynamics, sweep");
  }

  // params
  if (doc.contains("params")) {
    const json& p = doc["params"];
    if (!p.is_object()) {
      v.fail("/params", "expected an object");
    } else {
      v.expect_keys(p, "/params",
                    {"epsilon", "enum_cap", "seed", "rounds", "beta", "h", "grid",
                     "replications"});
      if (p.contains("epsilon")) {
        if (const auto x = v.number(p["epsilon"], "/params/epsilon")) {
          if (!(*x > 0.0))
            v.fail("/params/epsilon", "must be positive");
          else
            s.params.epsilon = *x;
        }
      }
      if (p.contains("enum_cap")) {
        if (const auto x = v.integer(p["enum_cap"], "/params/enum_cap")) {
          if (*x < 1 || *x > 11)
            v.fail("/params/enum_cap", "must be between 1 and 11");
          else
            s.params.enum_cap = *x;
        }
      }
      if (p.contains("seed")) {
        if (p["seed"].is_number_unsigned())
          s.params.seed = p["seed"].get<std::uint64_t>();
        else if (p["seed"].is_number_integer() && p["seed"].get<std::int64_t>() >= 0)
          s.params.seed = static_cast<std::uint64_t>(p["seed"].get<std::int64_t>());
        else
          v.fail("/params/seed", "expected a nonnegative integer");
      }
      if (p.contains("rounds")) {
        if (const auto x = v.integer(p["rounds"], "/params/rounds")) {
          if (*x < 1)
            v.fail("/params/rounds", "must be at least 1");
          else
            s.params.rounds = *x;
        }
      }
      if (p.contains("beta")) {
        if (const auto x = v.number(p["beta"], "/params/beta")) {
          if (!(*x >= 0.0))
            v.fail("/params/beta", "must be nonnegative");
          else
            s.params.beta = *x;
        }
      }
      if (p.contains("h")) {
        if (const auto x = v.number(p["h"], "/params/h")) {
          if (!(*x >= 0.0))
            v.fail("/params/h", "must be nonnegative");
          else
            s.params.heterogeneity = *x;
        }
      }
      if (p.contains("grid")) {
        const json& gj = p["grid"];
        if (!gj.is_array() || gj.empty()) {
          v.fail("/params/grid", "expected a nonempty array of [h, capacity] pairs");
        } else {
          bool ok = true;
          std::vector<std::pair<double, double>> grid;
          for (std::size_t k = 0; ok && k < gj.size(); ++k) {
            const std::string path = "/params/grid/" + std::to_string(k);
            const auto pt = v.number_array(gj[k], path, 2);
            if (!pt) {
              ok = false;
            } else if ((*pt)[0] < 0.0 || (*pt)[1] < 0.0) {
              v.fail(path, "h and capacity must be nonnegative");
              ok = false;
            } else {
              grid.emplace_back((*pt)[0], (*pt)[1]);
            }
          }
          if (ok) s.params.grid = std::move(grid);
        }
      }
      if (p.contains("replications")) {
        if (const auto x = v.integer(p["replications"], "/params/replications")) {
          if (*x < 1)
            v.fail("/params/replications", "must be at least 1");
          else
            s.params.replications = *x;
        }
      }
    }
  }

  // names
  if (doc.contains("names")) {
    const json& nj = doc["names"];
    if (!nj.is_array() || nj.size() != static_cast<std::size_t>(s.n)) {
      v.fail("/names", "expected an array of n strings");
    } else {
      bool ok = true;
      std::vector<std::string> names;
      for (std::size_t k = 0; k < nj.size(); ++k) {
        if (!nj[k].is_string()) {
          v.fail("/names/" + std::to_string(k), "expected a string");
          ok = false;
        } else {
          names.push_back(nj[k].get<std::string>());
        }
      }
      if (ok) s.names = std::move(names);
    }
  }

  // cross-field rules
  if (result.errors.empty()) {
    if (s.cost.is_state_dependent() && !s.states &&
        (s.analysis == AnalysisKind::kEfficient || s.analysis == AnalysisKind::kStable ||
         s.analysis == AnalysisKind::kPoa)) {
      v.fail("/profiles/states", "required for state_dependent cost with this analysis");
    }
    if ((s.analysis == AnalysisKind::kDynamics || s.analysis == AnalysisKind::kSweep) &&
        !s.cost.is_state_dependent() && !s.cost.is_homogeneous()) {
      v.fail("/cost", "dynamics and sweep require a homogeneous or state_dependent cost");
    }
  }

  if (result.errors.empty()) result.scenario = std::move(s);
  return result;
}

std::string emit_scenario(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

nlohmann::json scenario_to_json(const Scenario& s) {
  json doc;
  doc["n"] = s.n;
  if (s.benefit.is_decay())
    doc["benefit"] = {{"delta", s.benefit.decay_delta()}};
  else
    doc["benefit"] = {{"table", s.benefit.table_values()}};
  if (s.cost.is_homogeneous())
    doc["cost"] = {{"homogeneous", s.cost.as_homogeneous().c}};
  else if (s.cost.is_separable())
    doc["cost"] = {{"separable", s.cost.as_separable().c}};
  else if (s.cost.is_matrix())
    doc["cost"] = {{"matrix", s.cost.as_matrix().c}};
  else
    doc["cost"] = {{"state_dependent",
                    {{"base", s.cost.as_state_dependent().base},
                     {"alpha", s.cost.as_state_dependent().alpha}}}};
  if (s.states || s.capacities || s.drift) {
    json p = json::object();
    if (s.states) p["states"] = *s.states;
    if (s.capacities) p["capacities"] = *s.capacities;
    if (s.drift) p["drift"] = *s.drift;
    doc["profiles"] = std::move(p);
  }
  doc["analysis"] = analysis_name(s.analysis);
  json params;
  params["epsilon"] = s.params.epsilon;
  if (s.params.enum_cap) params["enum_cap"] = *s.params.enum_cap;
  params["seed"] = s.params.seed;
  params["rounds"] = s.params.rounds;
  params["beta"] = s.params.beta;
  params["h"] = s.params.heterogeneity;
  if (!s.params.grid.empty()) {
    json grid = json::array();
    for (const auto& [h, kappa] : s.params.grid) grid.push_back({h, kappa});
    params["grid"] = std::move(grid);
  }
  params["replications"] = s.params.replications;
  doc["params"] = std::move(params);
  if (!s.names.empty()) doc["names"] = s.names;
  return doc;
}

}  // namespace netform
