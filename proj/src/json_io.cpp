// SPDX-License-Identifier: Apache-2.0
#include "carbonledger/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "carbonledger/error.hpp"

namespace carbonledger {

namespace {

json optional_number(const std::optional<double>& value)
{
    return value ? json(*value) : json(nullptr);
}

}  // namespace

void to_json(json& j, const HardwareProfile& hw)
{
    j = json{{"id", hw.id},
             {"name", hw.name},
             {"year", hw.year},
             {"kind", std::string(to_string(hw.kind))},
             {"avg_system_power_watts", hw.avg_system_power_watts},
             {"notes", hw.notes}};
}

void to_json(json& j, const DatacenterProfile& dc)
{
    j = json{{"id", dc.id}, {"name", dc.name}, {"region_id", dc.region_id}, {"pue", dc.pue}};
}

void to_json(json& j, const RegionIntensity& region)
{
    j = json{{"region_id", region.region_id},
             {"name", region.name},
             {"annual_avg_intensity", region.annual_avg_intensity},
             {"hourly", nullptr}};
    if (region.hourly) {
        json hours = json::array();
        for (const auto& entry : *region.hourly) {
            hours.push_back({{"hour", entry.hour},
                             {"cfe_percent", optional_number(entry.cfe_percent)},
                             {"intensity", optional_number(entry.intensity)}});
        }
        j["hourly"] = std::move(hours);
    }
}

void to_json(json& j, const WorkloadSpec& workload)
{
    j = json{{"label", workload.label},
             {"processor_count", workload.processor_count},
             {"duration_hours", workload.duration_hours},
             {"hardware_id", workload.hardware_id},
             {"accelerator_years", workload.accelerator_years()}};
}

void to_json(json& j, const Scenario& scenario)
{
    j = json{{"label", scenario.label},
             {"workload", scenario.workload},
             {"datacenter_id", scenario.datacenter_id},
             {"region_id", scenario.region_id},
             {"emissions_method", std::string(to_string(scenario.emissions_method))},
             {"start_hour", scenario.start_hour ? json(*scenario.start_hour) : json(nullptr)}};
}

void to_json(json& j, const EnergyEstimate& energy)
{
    j = json{{"it_mwh", energy.it_mwh}, {"total_mwh", energy.total_mwh}, {"pue_used", energy.pue_used}};
}

void to_json(json& j, const EmissionsEstimate& emissions)
{
    j = json{{"gross_tco2e", emissions.gross_tco2e},
             {"total_mwh", emissions.total_mwh},
             {"effective_intensity", emissions.effective_intensity},
             {"method", std::string(to_string(emissions.method))},
             {"start_hour", emissions.start_hour ? json(*emissions.start_hour) : json(nullptr)}};
}

void to_json(json& j, const ScenarioEstimate& estimate)
{
    j = json{{"energy", estimate.energy}, {"emissions", estimate.emissions}};
}

void to_json(json& j, const WaterfallStep& step)
{
    j = json{{"dimension", std::string(to_string(step.dimension))},
             {"description", step.description},
             {"energy_factor", step.energy_factor},
             {"emissions_only_factor", step.emissions_only_factor}};
}

void to_json(json& j, const WaterfallReport& report)
{
    json steps = json::array();
    for (const auto& row : report.steps) {
        steps.push_back({{"step", row.step},
                         {"cumulative_energy_reduction", row.cumulative_energy_reduction},
                         {"cumulative_emissions_reduction", row.cumulative_emissions_reduction}});
    }
    j = json{{"baseline_label", report.baseline_label},
             {"steps", std::move(steps)},
             {"total_energy_reduction", report.total_energy_reduction},
             {"total_emissions_reduction", report.total_emissions_reduction}};
}

void to_json(json& j, const ComparisonReport& report)
{
    j = json{{"baseline_label", report.baseline_label},
             {"candidate_label", report.candidate_label},
             {"energy_ratio", report.energy_ratio},
             {"compute_ratio", report.compute_ratio},
             {"intensity_ratio", report.intensity_ratio},
             {"emissions_ratio", report.emissions_ratio},
             {"baseline", report.baseline},
             {"candidate", report.candidate}};
}

void to_json(json& j, const AuditReport& report)
{
    json factors = json::array();
    for (const auto& f : report.factors) {
        factors.push_back({{"name", f.name}, {"factor", f.factor}});
    }
    j = json{{"published_tco2e", report.published_tco2e},
             {"factors", std::move(factors)},
             {"combined_factor", report.combined_factor},
             {"recomputed_tco2e", report.recomputed_tco2e},
             {"actual_tco2e", optional_number(report.actual_tco2e)},
             {"residual_ratio", optional_number(report.residual_ratio)},
             {"overshoot_ratio", optional_number(report.overshoot_ratio)}};
}

void to_json(json& j, const BreakevenReport& report)
{
    j = breakeven_to_json(report, {1, report.breakeven_count});
}

json breakeven_to_json(const BreakevenReport& report, const std::vector<long long>& evaluate_at)
{
    json net = json::array();
    for (long long n : evaluate_at) {
        net.push_back({{"n", n}, {"net_saving", report.net_at(n)}});
    }
    return json{{"search_cost", report.search_cost},
                {"per_training_saving", report.per_training_saving},
                {"unit", report.unit},
                {"breakeven_count", report.breakeven_count},
                {"net_at", std::move(net)}};
}

void to_json(json& j, const FleetSnapshot& snapshot)
{
    j = json{{"period_label", snapshot.period_label},
             {"total_energy_twh", snapshot.total_energy_twh},
             {"accelerator_training_twh", snapshot.accelerator_training_twh},
             {"accelerator_inference_twh", snapshot.accelerator_inference_twh},
             {"cpu_inference_twh", snapshot.cpu_inference_twh}};
}

void to_json(json& j, const FleetReport& report)
{
    j = json{{"period_label", report.period_label},
             {"ml_total_twh", report.ml_total_twh},
             {"ml_fraction", report.ml_fraction},
             {"training_share", report.training_share},
             {"inference_share", report.inference_share}};
}

void to_json(json& j, const MobileBoundReport& report)
{
    j = json{{"phones", report.phones},
             {"global_phone_twh", report.global_phone_twh},
             {"ml_share_bound", report.ml_share_bound},
             {"client_ml_bound_twh", report.client_ml_bound_twh},
             {"server_ml_twh", report.server_ml_twh},
             {"server_to_client_ratio", optional_number(report.server_to_client_ratio)}};
}

void to_json(json& j, const PlacementQuery& query)
{
    j = json{{"workload", query.workload},
             {"candidate_region_ids", query.candidate_region_ids},
             {"datacenter_id", query.datacenter_id},
             {"objective", std::string(to_string(query.objective))},
             {"start_hours", query.window.allowed()}};
}

void to_json(json& j, const PlacementResult& result)
{
    json ranking = json::array();
    for (const auto& entry : result.ranking) {
        ranking.push_back({{"region_id", entry.region_id},
                           {"best_start_hour", entry.best_start_hour},
                           {"objective_value", entry.objective_value},
                           {"gross_tco2e", optional_number(entry.gross_tco2e)}});
    }
    j = json{{"objective", std::string(to_string(result.objective))},
             {"ranking", ranking},
             {"chosen", ranking.empty() ? json(nullptr) : ranking.front()}};
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

const json& field(const json& j, const char* key, const char* context)
{
    if (!j.is_object()) {
        throw ValidationError(std::string(context) + " must be a JSON object");
    }
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
        throw ValidationError(std::string(context) + ": missing field '" + key + "'");
    }
    return *it;
}

bool has(const json& j, const char* key)
{
    return j.is_object() && j.contains(key) && !j.at(key).is_null();
}

std::string text(const json& j, const char* key, const char* context)
{
    const auto& value = field(j, key, context);
    if (!value.is_string()) {
        throw ValidationError(std::string(context) + ": field '" + key + "' must be a string");
    }
    return value.get<std::string>();
}

double number(const json& j, const char* key, const char* context)
{
    const auto& value = field(j, key, context);
    if (!value.is_number()) {
        throw ValidationError(std::string(context) + ": field '" + key + "' must be a number");
    }
    return value.get<double>();
}

long long integer(const json& j, const char* key, const char* context)
{
    const auto& value = field(j, key, context);
    if (value.is_number_integer()) {
        return value.get<long long>();
    }
    if (value.is_number_float()) {
        const double d = value.get<double>();
        if (std::isfinite(d) && std::floor(d) == d && std::abs(d) < 9e15) {
            return static_cast<long long>(d);
        }
    }
    throw ValidationError(std::string(context) + ": field '" + key + "' must be an integer");
}

}  // namespace

WorkloadSpec parse_workload(const json& j)
{
    constexpr const char* ctx = "workload";
    WorkloadSpec workload;
    workload.label = has(j, "label") ? text(j, "label", ctx) : std::string();
    workload.processor_count = integer(j, "processor_count", ctx);
    workload.duration_hours = number(j, "duration_hours", ctx);
    workload.hardware_id = text(j, "hardware_id", ctx);
    validate(workload);
    return workload;
}

Scenario parse_scenario(const json& j)
{
    constexpr const char* ctx = "scenario";
    Scenario scenario;
    scenario.workload = parse_workload(field(j, "workload", ctx));
    scenario.label = has(j, "label") ? text(j, "label", ctx) : scenario.workload.label;
    scenario.datacenter_id = text(j, "datacenter_id", ctx);
    scenario.region_id = text(j, "region_id", ctx);
    const char* method_key = has(j, "emissions_method") ? "emissions_method" : "method";
    if (has(j, method_key)) {
        auto method = parse_emissions_method(text(j, method_key, ctx));
        if (!method) {
            throw ValidationError("scenario: emissions_method must be 'flat' or 'hourly'");
        }
        scenario.emissions_method = *method;
    }
    if (has(j, "start_hour")) {
        const auto hour = integer(j, "start_hour", ctx);
        if (hour < 0 || hour > 23) {
            throw ValidationError("scenario: start_hour must be within 0..23");
        }
        scenario.start_hour = static_cast<int>(hour);
    }
    return scenario;
}

WaterfallStep parse_waterfall_step(const json& j)
{
    constexpr const char* ctx = "waterfall step";
    WaterfallStep step;
    auto dimension = parse_dimension(text(j, "dimension", ctx));
    if (!dimension) {
        throw ValidationError("waterfall step: dimension must be model, machine, mechanization or map");
    }
    step.dimension = *dimension;
    step.description = has(j, "description") ? text(j, "description", ctx) : std::string();
    step.energy_factor = has(j, "energy_factor") ? number(j, "energy_factor", ctx) : 1.0;
    step.emissions_only_factor = has(j, "emissions_only_factor") ? number(j, "emissions_only_factor", ctx) : 1.0;
    return step;
}

std::vector<WaterfallStep> parse_waterfall_steps(const json& j)
{
    if (!j.is_array()) {
        throw ValidationError("steps must be a JSON array");
    }
    std::vector<WaterfallStep> steps;
    for (const auto& item : j) {
        steps.push_back(parse_waterfall_step(item));
    }
    return steps;
}

std::vector<AuditFactor> parse_audit_factors(const json& j)
{
    if (!j.is_array()) {
        throw ValidationError("factors must be a JSON array");
    }
    std::vector<AuditFactor> factors;
    for (const auto& item : j) {
        factors.push_back({has(item, "name") ? text(item, "name", "audit factor") : std::string(),
                           number(item, "factor", "audit factor")});
    }
    return factors;
}

FleetSnapshot parse_fleet_snapshot(const json& j)
{
    constexpr const char* ctx = "fleet snapshot";
    FleetSnapshot snapshot;
    snapshot.period_label = has(j, "period_label") ? text(j, "period_label", ctx) : std::string();
    snapshot.total_energy_twh = number(j, "total_energy_twh", ctx);
    snapshot.accelerator_training_twh = number(j, "accelerator_training_twh", ctx);
    snapshot.accelerator_inference_twh = number(j, "accelerator_inference_twh", ctx);
    snapshot.cpu_inference_twh = number(j, "cpu_inference_twh", ctx);
    return snapshot;
}

PlacementQuery parse_placement_query(const json& j)
{
    constexpr const char* ctx = "placement query";
    PlacementQuery query;
    query.workload = parse_workload(field(j, "workload", ctx));
    const auto& ids = field(j, "candidate_region_ids", ctx);
    if (!ids.is_array()) {
        throw ValidationError("placement query: candidate_region_ids must be an array of strings");
    }
    for (const auto& id : ids) {
        if (!id.is_string()) {
            throw ValidationError("placement query: candidate_region_ids must be an array of strings");
        }
        query.candidate_region_ids.push_back(id.get<std::string>());
    }
    if (query.candidate_region_ids.empty()) {
        throw ValidationError("placement query: candidate_region_ids is empty");
    }
    query.datacenter_id = text(j, "datacenter_id", ctx);
    if (has(j, "objective")) {
        auto objective = parse_placement_objective(text(j, "objective", ctx));
        if (!objective) {
            throw ValidationError("placement query: objective must be 'min_intensity' or 'max_cfe'");
        }
        query.objective = *objective;
    }
    if (has(j, "start_hours")) {
        const auto& list = field(j, "start_hours", ctx);
        if (!list.is_array()) {
            throw ValidationError("placement query: start_hours must be an array");
        }
        std::vector<int> hours;
        for (const auto& h : list) {
            if (!h.is_number_integer()) {
                throw ValidationError("placement query: start_hours must hold integers");
            }
            hours.push_back(h.get<int>());
        }
        query.window = StartWindow::hours(std::move(hours));
    } else if (has(j, "earliest_start") || has(j, "latest_start")) {
        const auto earliest = has(j, "earliest_start") ? integer(j, "earliest_start", ctx) : 0;
        const auto latest = has(j, "latest_start") ? integer(j, "latest_start", ctx) : 23;
        if (earliest < 0 || earliest > 23 || latest < 0 || latest > 23) {
            throw ValidationError("placement query: start hours must be within 0..23");
        }
        query.window = StartWindow::range(static_cast<int>(earliest), static_cast<int>(latest));
    }
    return query;
}

json parse_json_text(const std::string& body, const std::string& what)
{
    try {
        return json::parse(body);
    } catch (const json::parse_error& e) {
        throw ValidationError(what + " is not valid JSON: " + e.what());
    }
}

void round_significant(json& j, int digits)
{
    if (j.is_object() || j.is_array()) {
        for (auto& item : j) {
            round_significant(item, digits);
        }
        return;
    }
    if (j.is_number_float()) {
        const double value = j.get<double>();
        if (std::isfinite(value) && value != 0.0) {
            char buffer[64];
            std::snprintf(buffer, sizeof(buffer), "%.*g", digits, value);
            j = std::strtod(buffer, nullptr);
        }
    }
}

}  // namespace carbonledger
