#pragma once

#include <json.hpp>

#include "revdft/circuit.hpp"
#include "revdft/faultsim.hpp"
#include "revdft/metrics.hpp"

namespace revdft {

nlohmann::json to_json(const CostReport &report);
nlohmann::json to_json(const MetricDelta &delta);
nlohmann::json to_json(const CostDelta &delta);

/// Fault descriptor encoding: {"kind": "...", <site fields>}; lines by name.
nlohmann::json to_json(const Fault &fault, const Circuit &circuit);
Fault fault_from_json(const nlohmann::json &j, const Circuit &circuit);

/// {"total", "detected", "coverage", "undetected": [[fault, ...], ...]}
nlohmann::json to_json(const CoverageReport &report, const Circuit &circuit);

}  // namespace revdft
