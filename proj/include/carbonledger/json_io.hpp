// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "json.hpp"

#include "carbonledger/analysis.hpp"
#include "carbonledger/catalog.hpp"
#include "carbonledger/estimator.hpp"
#include "carbonledger/fleet.hpp"
#include "carbonledger/placement.hpp"

// JSON mirrors of the domain types. Serialization is total; the parsers
// throw ValidationError naming the offending field. Keys come out sorted
// because nlohmann::json objects are ordered maps.
namespace carbonledger {

using json = nlohmann::json;

void to_json(json& j, const HardwareProfile& hw);
void to_json(json& j, const DatacenterProfile& dc);
void to_json(json& j, const RegionIntensity& region);
void to_json(json& j, const WorkloadSpec& workload);
void to_json(json& j, const Scenario& scenario);
void to_json(json& j, const EnergyEstimate& energy);
void to_json(json& j, const EmissionsEstimate& emissions);
void to_json(json& j, const ScenarioEstimate& estimate);
void to_json(json& j, const WaterfallStep& step);
void to_json(json& j, const WaterfallReport& report);
void to_json(json& j, const ComparisonReport& report);
void to_json(json& j, const AuditReport& report);
void to_json(json& j, const BreakevenReport& report);
void to_json(json& j, const FleetSnapshot& snapshot);
void to_json(json& j, const FleetReport& report);
void to_json(json& j, const MobileBoundReport& report);
void to_json(json& j, const PlacementQuery& query);
void to_json(json& j, const PlacementResult& result);

/// Breakeven report plus the signed net saving at each requested count.
json breakeven_to_json(const BreakevenReport& report, const std::vector<long long>& evaluate_at);

WorkloadSpec parse_workload(const json& j);
Scenario parse_scenario(const json& j);
WaterfallStep parse_waterfall_step(const json& j);
std::vector<WaterfallStep> parse_waterfall_steps(const json& j);
std::vector<AuditFactor> parse_audit_factors(const json& j);
FleetSnapshot parse_fleet_snapshot(const json& j);
PlacementQuery parse_placement_query(const json& j);

/// Parses text, mapping syntax errors to ValidationError.
json parse_json_text(const std::string& text, const std::string& what);

/// Rounds every floating-point number in `j` to `digits` significant digits.
/// Integers and non-numeric values are untouched.
void round_significant(json& j, int digits = 6);

}  // namespace carbonledger
