// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "carbonledger/analysis.hpp"
#include "carbonledger/fleet.hpp"
#include "carbonledger/placement.hpp"

// Named inputs that reproduce the published case studies without hand-built
// files. Lookups throw ReferenceError("preset", name) for unknown names.
namespace carbonledger::presets {

/// Map factor implied by the 747x emissions and 83x energy totals.
inline constexpr double kMapFactor2021 = 747.0 / 83.0;
/// Map factor from the quoted 2017 average and Oklahoma intensities.
inline constexpr double kQuotedMapFactor = 0.488 / 0.088;
/// Map factor implied by 65x emissions over ~10.4x energy for 2019.
inline constexpr double kMapFactor2019 = 65.0 / 10.4;

struct WaterfallPreset {
    std::string baseline_label;
    std::vector<WaterfallStep> steps;
    std::optional<std::pair<Scenario, Scenario>> scenario_pair;  // set for comparison-backed presets
};

std::vector<std::string> waterfall_names();
WaterfallPreset waterfall(const std::string& name, const CatalogBundle& catalog);

std::vector<std::string> comparison_names();
std::pair<Scenario, Scenario> comparison(const std::string& name);

struct AuditInput {
    double published_tco2e = 0.0;
    std::vector<AuditFactor> factors;
    std::optional<double> actual_tco2e;
};

std::vector<std::string> audit_names();
AuditInput audit(const std::string& name);

struct BreakevenInput {
    double search_cost = 0.0;
    double per_training_saving = 0.0;
    std::string unit;
};

std::vector<std::string> breakeven_names();
BreakevenInput breakeven(const std::string& name);

std::vector<std::string> estimate_names();
Scenario estimate(const std::string& name);

std::vector<std::string> placement_names();
PlacementQuery placement(const std::string& name);

std::vector<std::string> fleet_names();
FleetSnapshot fleet(const std::string& name);

struct MobileInput {
    double phones = 0.0;
    double global_phone_twh = 0.0;
    double ml_share_bound = 0.0;
    double server_ml_twh = 0.0;
};

std::vector<std::string> mobile_names();
MobileInput mobile(const std::string& name);

}  // namespace carbonledger::presets
