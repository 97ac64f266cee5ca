#pragma once

#include <string>
#include <vector>

#include "coupledrd/scenario.hpp"

#include "json.hpp"

namespace crd {

/// Names of the shipped scenarios.
std::vector<std::string> builtin_scenario_names();

/// JSON text of a shipped scenario.
nlohmann::json builtin_scenario(const std::string& name);

/// Loads a scenario from parsed JSON (see README for the schema).
Scenario scenario_from_json(const nlohmann::json& j);

/// Loads from a file path, or from the built-in set when the argument matches
/// a shipped scenario name.
Scenario load_scenario(const std::string& path_or_name);
nlohmann::json load_scenario_json(const std::string& path_or_name);

/// Applies a dotted-key override ("solver.epsilon=0.25") to scenario JSON.
void apply_override(nlohmann::json& j, const std::string& assignment);

/// Default interface anchors and radii for the partition of unity.
void default_anchors(const Geometry& g, std::vector<Vec2>& anchors, std::vector<double>& radii);

}  // namespace crd
