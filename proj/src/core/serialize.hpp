#pragma once

#include <json.hpp>

#include "core/coverage.hpp"
#include "core/types.hpp"

namespace semfuzz {

// JSON encodings used by campaign.json and the replay/report tooling.
// Payloads are hex strings; coverage edge bitmaps are sparse index:mask maps.

nlohmann::ordered_json test_case_to_json(const TestCase& tc);
TestCase test_case_from_json(const nlohmann::json& j);

nlohmann::ordered_json outcome_to_json(const ExecutionOutcome& o);
ExecutionOutcome outcome_from_json(const nlohmann::json& j);

nlohmann::ordered_json coverage_map_to_json(const CoverageMap& m);
CoverageMap coverage_map_from_json(const nlohmann::json& j);

}  // namespace semfuzz
