// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "carbonledger/catalog.hpp"
#include "carbonledger/estimator.hpp"

namespace carbonledger {

/// One point in the 4M design space: what runs (workload and hardware),
/// where it runs (datacenter PUE) and on which grid (region).
struct Scenario {
    std::string label;
    WorkloadSpec workload;
    std::string datacenter_id;
    std::string region_id;
    std::optional<int> start_hour;  // hourly method only; defaults to 0
    EmissionsMethod emissions_method = EmissionsMethod::flat;
};

struct ScenarioEstimate {
    EnergyEstimate energy;
    EmissionsEstimate emissions;
};

ScenarioEstimate evaluate_scenario(const Scenario& scenario, const CatalogBundle& catalog);

// ---------------------------------------------------------------------------
// Waterfall

enum class Dimension { model, machine, mechanization, map };

std::string_view to_string(Dimension dimension);
std::optional<Dimension> parse_dimension(std::string_view text);

/// A lever in the waterfall. Energy is divided by `energy_factor`; emissions
/// are divided by `energy_factor * emissions_only_factor`. Map steps move
/// emissions only, so their energy factor must be 1.
struct WaterfallStep {
    Dimension dimension = Dimension::model;
    std::string description;
    double energy_factor = 1.0;
    double emissions_only_factor = 1.0;

    double emissions_factor() const { return energy_factor * emissions_only_factor; }
};

struct WaterfallRow {
    WaterfallStep step;
    double cumulative_energy_reduction = 1.0;
    double cumulative_emissions_reduction = 1.0;
};

struct WaterfallReport {
    std::string baseline_label;
    std::vector<WaterfallRow> steps;
    double total_energy_reduction = 1.0;
    double total_emissions_reduction = 1.0;
};

/// Throws ValidationError for an empty step list, a factor below 1 or a
/// non-finite factor, or a map step with an energy factor other than 1.
WaterfallReport waterfall(std::string baseline_label, const std::vector<WaterfallStep>& steps);

// ---------------------------------------------------------------------------
// Comparison

struct ComparisonReport {
    std::string baseline_label;
    std::string candidate_label;
    double energy_ratio = 1.0;     // baseline / candidate total MWh
    double compute_ratio = 1.0;    // baseline / candidate accelerator-years
    double intensity_ratio = 1.0;  // baseline / candidate effective intensity
    double emissions_ratio = 1.0;  // baseline / candidate gross tCO2e
    ScenarioEstimate baseline;
    ScenarioEstimate candidate;
};

ComparisonReport compare(const Scenario& baseline, const Scenario& candidate, const CatalogBundle& catalog);

/// Builds waterfall steps from a scenario pair: processor-hours (model),
/// per-processor power (machine), PUE (mechanization) and effective intensity
/// (map, emissions only). When any energy lever regresses (factor < 1) the
/// three energy levers collapse into one combined model step so the totals
/// still equal the comparison's energy and emissions ratios. Throws
/// ValidationError when the combined energy or the map factor is below 1.
std::vector<WaterfallStep> waterfall_steps_from(const ComparisonReport& comparison, const Scenario& baseline,
                                                const Scenario& candidate, const CatalogBundle& catalog);

// ---------------------------------------------------------------------------
// Audit of a published estimate

struct AuditFactor {
    std::string name;
    double factor = 1.0;
};

struct AuditReport {
    double published_tco2e = 0.0;
    std::vector<AuditFactor> factors;
    double combined_factor = 1.0;
    double recomputed_tco2e = 0.0;  // published / combined_factor
    std::optional<double> actual_tco2e;
    std::optional<double> residual_ratio;   // recomputed / actual
    std::optional<double> overshoot_ratio;  // published / actual
};

AuditReport audit(double published_tco2e, const std::vector<AuditFactor>& factors,
                  std::optional<double> actual_tco2e = std::nullopt);

// ---------------------------------------------------------------------------
// Search amortization

struct BreakevenReport {
    double search_cost = 0.0;
    double per_training_saving = 0.0;
    std::string unit;  // "MWh" or "tCO2e"
    long long breakeven_count = 1;

    /// Signed saving after `n` downstream trainings.
    double net_at(long long n) const { return static_cast<double>(n) * per_training_saving - search_cost; }
};

/// Smallest n >= 1 with n * saving >= cost. Exact division resolves to the
/// quotient. Throws ValidationError for non-positive or non-finite inputs.
BreakevenReport breakeven(double search_cost, double per_training_saving, std::string unit = "MWh");

/// Ratio of a one-time search footprint to one downstream training.
double nas_to_training_ratio(double search_tco2e, double one_training_tco2e);

}  // namespace carbonledger
