#pragma once

// Internal: JSON conversion shared between the scenario parser and the
// report writer. Not installed.

#include <json.hpp>

#include "netform/scenario.hpp"

namespace netform {

nlohmann::json scenario_to_json(const Scenario& scenario);

}  // namespace netform
