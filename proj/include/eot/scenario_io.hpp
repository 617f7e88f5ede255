#pragma once

#include <string>

#include <json.hpp>

#include "eot/simulator.hpp"

namespace eot {

/// Builds a scenario from its JSON description: either {"builtin": "a"|"b"|
/// "c"|"circle"|"dense", ...} or a custom one with piecewise-segment
/// trajectories for ego and targets.
Scenario scenario_from_json(const nlohmann::json& j);

Scenario load_scenario(const std::string& path);

/// Resolves "a"/"b"/"c"/... names or a path to a scenario file.
Scenario resolve_scenario(const std::string& name_or_path);

}  // namespace eot
