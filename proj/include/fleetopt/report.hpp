#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "fleetopt/dataset.hpp"
#include "fleetopt/fleet.hpp"

namespace fleetopt {

/// {"instance_digest", "config", "rows": [...], "totals": {...}}. Totals are
/// row sums except tests_remaining, which is the last row's value.
nlohmann::json report_json(const std::vector<IterationRecord>& trace, const std::string& instance_digest,
                           const nlohmann::json& config);

/// Columns iter,vehicles,tests_remaining,wall_ms,status.
std::string report_csv(const std::vector<IterationRecord>& trace);

/// Vehicles by name, the test assignment and the solution flags. No timings,
/// so identical runs give identical files.
nlohmann::json fleet_json(const Dataset& d, const FleetSolution& fleet);

/// Inverse of fleet_json; throws std::invalid_argument on unknown names.
FleetSolution fleet_from_json(const Dataset& d, const nlohmann::json& j);

}  // namespace fleetopt
