#pragma once

#include "fleetroute/model.hpp"
#include "fleetroute/osmnet.hpp"
#include "json.hpp"

namespace fleetroute::detail {

nlohmann::json matrix_to_json(const CostMatrixSet& m);
CostMatrixSet matrix_from_json(const nlohmann::json& doc);

nlohmann::json instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const nlohmann::json& doc);

// Rounds to 6 decimals (about 0.1 m) so emitted coordinates diff cleanly.
double round6(double v);

}  // namespace fleetroute::detail
