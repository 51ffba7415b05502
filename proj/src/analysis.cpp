// SPDX-License-Identifier: Apache-2.0
#include "carbonledger/analysis.hpp"

#include <cmath>

#include "carbonledger/error.hpp"

namespace carbonledger {

ScenarioEstimate evaluate_scenario(const Scenario& scenario, const CatalogBundle& catalog)
{
    const auto& hardware = catalog.hardware_at(scenario.workload.hardware_id);
    const auto& datacenter = catalog.datacenter_at(scenario.datacenter_id);
    const auto& region = catalog.region_at(scenario.region_id);

    ScenarioEstimate out;
    out.energy = estimate_energy(scenario.workload, hardware, datacenter);
    if (scenario.emissions_method == EmissionsMethod::hourly) {
        out.emissions = estimate_emissions_hourly(out.energy, region, scenario.start_hour.value_or(0),
                                                  scenario.workload.duration_hours);
    } else {
        out.emissions = estimate_emissions_flat(out.energy, region);
    }
    return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Dimension dimension)
{
    switch (dimension) {
    case Dimension::model: return "model";
    case Dimension::machine: return "machine";
    case Dimension::mechanization: return "mechanization";
    case Dimension::map: return "map";
    }
    return "model";
}

std::optional<Dimension> parse_dimension(std::string_view text)
{
    if (text == "model") return Dimension::model;
    if (text == "machine") return Dimension::machine;
    if (text == "mechanization") return Dimension::mechanization;
    if (text == "map") return Dimension::map;
    return std::nullopt;
}

namespace {

void require_factor(double value, const std::string& what)
{
    if (!std::isfinite(value) || value < 1.0) {
        throw ValidationError(what + " must be a finite factor >= 1");
    }
}

}  // namespace

WaterfallReport waterfall(std::string baseline_label, const std::vector<WaterfallStep>& steps)
{
    if (steps.empty()) {
        throw ValidationError("waterfall needs at least one step");
    }

    WaterfallReport report;
    report.baseline_label = std::move(baseline_label);
    double energy = 1.0;
    double emissions = 1.0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const auto& step = steps[i];
        const std::string where = "step " + std::to_string(i + 1) + " (" + std::string(to_string(step.dimension)) + ")";
        require_factor(step.energy_factor, where + " energy_factor");
        require_factor(step.emissions_only_factor, where + " emissions_only_factor");
        if (step.dimension == Dimension::map && step.energy_factor != 1.0) {
            throw ValidationError(where + ": map steps change emissions only; energy_factor must be 1");
        }
        energy *= step.energy_factor;
        emissions *= step.emissions_factor();
        report.steps.push_back({step, energy, emissions});
    }
    report.total_energy_reduction = energy;
    report.total_emissions_reduction = emissions;
    return report;
}

// ---------------------------------------------------------------------------

ComparisonReport compare(const Scenario& baseline, const Scenario& candidate, const CatalogBundle& catalog)
{
    ComparisonReport report;
    report.baseline_label = baseline.label;
    report.candidate_label = candidate.label;
    report.baseline = evaluate_scenario(baseline, catalog);
    report.candidate = evaluate_scenario(candidate, catalog);

    const auto& b = report.baseline;
    const auto& c = report.candidate;
    if (c.emissions.effective_intensity <= 0.0 || c.emissions.gross_tco2e <= 0.0) {
        throw ValidationError("candidate '" + candidate.label + "' has zero emissions; ratios are undefined");
    }
    report.energy_ratio = b.energy.total_mwh / c.energy.total_mwh;
    report.compute_ratio = baseline.workload.accelerator_years() / candidate.workload.accelerator_years();
    report.intensity_ratio = b.emissions.effective_intensity / c.emissions.effective_intensity;
    report.emissions_ratio = b.emissions.gross_tco2e / c.emissions.gross_tco2e;
    return report;
}

std::vector<WaterfallStep> waterfall_steps_from(const ComparisonReport& comparison, const Scenario& baseline,
                                                const Scenario& candidate, const CatalogBundle& catalog)
{
    const auto processor_hours = [](const WorkloadSpec& w) {
        return static_cast<double>(w.processor_count) * w.duration_hours;
    };
    const double model = processor_hours(baseline.workload) / processor_hours(candidate.workload);
    const double machine = catalog.hardware_at(baseline.workload.hardware_id).avg_system_power_watts
                           / catalog.hardware_at(candidate.workload.hardware_id).avg_system_power_watts;
    const double mechanization = comparison.baseline.energy.pue_used / comparison.candidate.energy.pue_used;
    const double map = comparison.intensity_ratio;

    if (!(map >= 1.0)) {
        throw ValidationError("candidate has higher carbon intensity than baseline (map factor < 1)");
    }

    std::vector<WaterfallStep> steps;
    if (model >= 1.0 && machine >= 1.0 && mechanization >= 1.0) {
        steps.push_back({Dimension::model, "processor-hours", model, 1.0});
        steps.push_back({Dimension::machine, "per-processor power", machine, 1.0});
        steps.push_back({Dimension::mechanization, "PUE", mechanization, 1.0});
    } else {
        const double combined = comparison.energy_ratio;
        if (!(combined >= 1.0)) {
            throw ValidationError("candidate uses more energy than baseline (energy factor < 1)");
        }
        steps.push_back({Dimension::model, "model+machine+mechanization combined", combined, 1.0});
    }
    steps.push_back({Dimension::map, "carbon intensity", 1.0, map});
    return steps;
}

// ---------------------------------------------------------------------------

AuditReport audit(double published_tco2e, const std::vector<AuditFactor>& factors, std::optional<double> actual_tco2e)
{
    if (!std::isfinite(published_tco2e) || published_tco2e <= 0.0) {
        throw ValidationError("published_tco2e must be > 0");
    }
    if (actual_tco2e && (!std::isfinite(*actual_tco2e) || *actual_tco2e <= 0.0)) {
        throw ValidationError("actual_tco2e must be > 0 when given");
    }

    AuditReport report;
    report.published_tco2e = published_tco2e;
    report.factors = factors;
    for (const auto& f : factors) {
        require_factor(f.factor, "audit factor '" + f.name + "'");
        report.combined_factor *= f.factor;
    }
    report.recomputed_tco2e = published_tco2e / report.combined_factor;
    if (actual_tco2e) {
        report.actual_tco2e = actual_tco2e;
        report.residual_ratio = report.recomputed_tco2e / *actual_tco2e;
        report.overshoot_ratio = published_tco2e / *actual_tco2e;
    }
    return report;
}

// ---------------------------------------------------------------------------

BreakevenReport breakeven(double search_cost, double per_training_saving, std::string unit)
{
    if (!std::isfinite(search_cost) || search_cost <= 0.0) {
        throw ValidationError("search_cost must be > 0");
    }
    if (!std::isfinite(per_training_saving) || per_training_saving <= 0.0) {
        throw ValidationError("per_training_saving must be > 0");
    }
    const double quotient = search_cost / per_training_saving;
    if (quotient > 1e15) {
        throw ValidationError("search_cost / per_training_saving is too large to count");
    }

    // The quotient can land one ulp on either side of an integer; settle on the
    // smallest n whose product actually covers the cost.
    long long n = static_cast<long long>(std::ceil(quotient));
    if (n < 1) {
        n = 1;
    }
    while (n > 1 && static_cast<double>(n - 1) * per_training_saving >= search_cost) {
        --n;
    }
    while (static_cast<double>(n) * per_training_saving < search_cost) {
        ++n;
    }

    BreakevenReport report;
    report.search_cost = search_cost;
    report.per_training_saving = per_training_saving;
    report.unit = std::move(unit);
    report.breakeven_count = n;
    return report;
}

double nas_to_training_ratio(double search_tco2e, double one_training_tco2e)
{
    if (!std::isfinite(search_tco2e) || search_tco2e <= 0.0) {
        throw ValidationError("search_tco2e must be > 0");
    }
    if (!std::isfinite(one_training_tco2e) || one_training_tco2e <= 0.0) {
        throw ValidationError("one_training_tco2e must be > 0");
    }
    return search_tco2e / one_training_tco2e;
}

}  // namespace carbonledger
