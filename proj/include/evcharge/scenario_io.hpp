#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "evcharge/model.hpp"

namespace evcharge {

/// Scenario interchange document:
///
///   {"format": "evcharge-scenario/1", "scenario_id": ..., "horizon_steps": T,
///    "step_hours": ..., "load": [N], "capacity": [T], "socket_limit": [T],
///    "waste": [T], "prices": [T], "occupancy": [[0|1] * N] * T,
///    "vehicle_ids": [N] (optional)}
nlohmann::json scenario_to_json(const Scenario& scenario);

/// Throws InvalidArgument on a malformed document, then runs check_scenario.
Scenario scenario_from_json(const nlohmann::json& doc);

Scenario read_scenario_file(const std::filesystem::path& path);
void write_scenario_file(const Scenario& scenario, const std::filesystem::path& path);

}  // namespace evcharge
