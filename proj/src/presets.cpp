// SPDX-License-Identifier: Apache-2.0
#include "carbonledger/presets.hpp"

#include "carbonledger/error.hpp"

namespace carbonledger::presets {

namespace {

constexpr double kHoursPerYear = 8760.0;

[[noreturn]] void unknown(const std::string& name)
{
    throw ReferenceError("preset", name);
}

WorkloadSpec accelerator_years(std::string label, long long processors, double years, std::string hardware_id)
{
    return WorkloadSpec{std::move(label), processors, years * kHoursPerYear / static_cast<double>(processors),
                        std::move(hardware_id)};
}

}  // namespace

std::vector<std::string> waterfall_names()
{
    return {"figure1-2019", "figure1-2021", "figure1-2021-quoted", "figure3"};
}

WaterfallPreset waterfall(const std::string& name, const CatalogBundle& catalog)
{
    const std::string baseline = "Transformer on P100, average 2017 datacenter";
    if (name == "figure1-2019") {
        return {baseline,
                {{Dimension::model, "Evolved Transformer", 1.3, 1.0},
                 {Dimension::machine, "TPUv2 vs P100", 5.7, 1.0},
                 {Dimension::mechanization, "cloud PUE vs average", 1.4, 1.0},
                 {Dimension::map, "low-carbon region (65x / 10.4x)", 1.0, kMapFactor2019}},
                std::nullopt};
    }
    if (name == "figure1-2021" || name == "figure1-2021-quoted") {
        const bool quoted = name == "figure1-2021-quoted";
        return {baseline,
                {{Dimension::model, "Primer", 4.2, 1.0},
                 {Dimension::machine, "TPUv4 vs P100", 13.7, 1.0},
                 {Dimension::mechanization, "cloud PUE vs average", 1.4, 1.0},
                 {Dimension::map, quoted ? "0.488 -> 0.088 tCO2e/MWh" : "low-carbon region (747x / 83x)", 1.0,
                  quoted ? kQuotedMapFactor : kMapFactor2021}},
                std::nullopt};
    }
    if (name == "figure3") {
        auto pair = comparison("figure3");
        const auto report = carbonledger::compare(pair.first, pair.second, catalog);
        return {pair.first.label, waterfall_steps_from(report, pair.first, pair.second, catalog), std::move(pair)};
    }
    unknown(name);
}

std::vector<std::string> comparison_names()
{
    return {"figure3"};
}

std::pair<Scenario, Scenario> comparison(const std::string& name)
{
    if (name != "figure3") {
        unknown(name);
    }
    constexpr double gpt3_years = 405.0;
    constexpr double glam_speedup = 2.8;
    Scenario gpt3{"GPT-3", accelerator_years("GPT-3", 10000, gpt3_years, "v100"), "msft-cloud", "avg2020",
                  std::nullopt, EmissionsMethod::flat};
    Scenario glam{"GLaM", accelerator_years("GLaM", 1024, gpt3_years / glam_speedup, "tpu4"), "google-oklahoma",
                  "oklahoma", std::nullopt, EmissionsMethod::flat};
    return {std::move(gpt3), std::move(glam)};
}

std::vector<std::string> audit_names()
{
    return {"umass-audit", "every-time-confusion"};
}

AuditInput audit(const std::string& name)
{
    if (name == "umass-audit") {
        return {284.0, {{"hardware+datacenter", 5.0}, {"proxy-task", 18.7}}, 3.2};
    }
    if (name == "every-time-confusion") {
        // One-time search footprint (kg -> t) mistaken for one training run.
        return {284.019, {}, 0.0024};
    }
    unknown(name);
}

std::vector<std::string> breakeven_names()
{
    return {"evolved-transformer-nas"};
}

BreakevenInput breakeven(const std::string& name)
{
    if (name == "evolved-transformer-nas") {
        constexpr double search_mwh = 7.5;
        return {search_mwh, 15.0 * search_mwh, "MWh"};
    }
    unknown(name);
}

std::vector<std::string> estimate_names()
{
    return {"evolved-transformer-medium", "gpt3", "glam"};
}

Scenario estimate(const std::string& name)
{
    if (name == "evolved-transformer-medium") {
        return {"Evolved Transformer (medium)", {"Evolved Transformer (medium)", 1, 120.0, "tpu2"}, "google-oklahoma",
                "oklahoma", std::nullopt, EmissionsMethod::flat};
    }
    if (name == "gpt3") {
        return comparison("figure3").first;
    }
    if (name == "glam") {
        return comparison("figure3").second;
    }
    unknown(name);
}

std::vector<std::string> placement_names()
{
    return {"chile-10h", "nevada-vs-iowa", "oklahoma-vs-average"};
}

PlacementQuery placement(const std::string& name)
{
    PlacementQuery query;
    query.datacenter_id = "google-cloud";
    if (name == "chile-10h") {
        query.workload = {"10 h job", 64, 10.0, "tpu4"};
        query.candidate_region_ids = {"chile-synthetic"};
        query.objective = PlacementObjective::max_cfe;
        return query;
    }
    if (name == "nevada-vs-iowa") {
        query.workload = {"10 h job", 64, 10.0, "tpu4"};
        query.candidate_region_ids = {"nevada", "iowa"};
        query.objective = PlacementObjective::max_cfe;
        return query;
    }
    if (name == "oklahoma-vs-average") {
        // 1000 P100 x 333.3 h x 300 W = 100 MWh of IT energy.
        query.workload = {"100 MWh job", 1000, 1000.0 / 3.0, "p100"};
        query.candidate_region_ids = {"oklahoma", "avg2020"};
        query.objective = PlacementObjective::min_intensity;
        return query;
    }
    unknown(name);
}

std::vector<std::string> fleet_names()
{
    return {"fleet-2021"};
}

FleetSnapshot fleet(const std::string& name)
{
    if (name == "fleet-2021") {
        // Constructed to match the published aggregates: 15.4 TWh total, a 15% ML
        // share, one third training. Component values are not published; CPU
        // inference may double count hosts already under accelerators.
        return {"2021 (constructed)", 15.4, 0.77, 1.23, 0.31};
    }
    unknown(name);
}

std::vector<std::string> mobile_names()
{
    return {"mobile-2021"};
}

MobileInput mobile(const std::string& name)
{
    if (name == "mobile-2021") {
        return {3.8e9, 7.9, 0.05, 2.31};
    }
    unknown(name);
}

}  // namespace carbonledger::presets
