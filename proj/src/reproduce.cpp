// SPDX-License-Identifier: Apache-2.0
#include "carbonledger/reproduce.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "carbonledger/analysis.hpp"
#include "carbonledger/catalog.hpp"
#include "carbonledger/error.hpp"
#include "carbonledger/estimator.hpp"
#include "carbonledger/fleet.hpp"
#include "carbonledger/json_io.hpp"
#include "carbonledger/placement.hpp"
#include "carbonledger/presets.hpp"

namespace carbonledger::reproduce {

namespace {

bool within_rel(double value, double target, double tolerance)
{
    if (target == 0.0) {
        return std::abs(value) <= tolerance;
    }
    return std::abs(value - target) <= tolerance * std::abs(target);
}

std::string num(double value)
{
    std::ostringstream out;
    out << std::setprecision(6) << value;
    return out.str();
}

// Collects failed expectations; the row passes when none were recorded.
class Checker {
public:
    void expect(bool ok, const std::string& what)
    {
        ++checks_;
        if (!ok && failures_.size() < 5) {
            failures_.push_back(what);
        }
        failed_ = failed_ || !ok;
    }

    void near(double value, double target, double tolerance, const std::string& what)
    {
        expect(within_rel(value, target, tolerance),
               what + " = " + num(value) + ", want " + num(target) + " +/- " + num(tolerance * 100) + "%");
    }

    void note(const std::string& text) { notes_ += (notes_.empty() ? "" : "; ") + text; }

    bool passed() const { return !failed_; }

    std::string detail() const
    {
        if (failed_) {
            std::string out;
            for (const auto& f : failures_) {
                out += (out.empty() ? "" : "; ") + f;
            }
            return out;
        }
        return notes_.empty() ? std::to_string(checks_) + " checks" : notes_;
    }

private:
    bool failed_ = false;
    std::size_t checks_ = 0;
    std::vector<std::string> failures_;
    std::string notes_;
};

// --- independent oracles ----------------------------------------------------

double oracle_energy_total_mwh(double hours, double processors, double watts, double pue)
{
    const double watt_hours = hours * processors * watts;
    return watt_hours / 1.0e6 * pue;
}

// Walks the run one wall-clock hour at a time, no folding of whole days.
double oracle_window_mean(const std::array<double, 24>& curve, int start, double duration)
{
    double total = 0.0;
    double remaining = duration;
    int hour = start;
    while (remaining > 0.0) {
        const double weight = std::min(1.0, remaining);
        total += weight * curve[static_cast<std::size_t>(hour)];
        remaining -= weight;
        hour = hour == 23 ? 0 : hour + 1;
    }
    return total / duration;
}

int oracle_best_hour(const std::array<double, 24>& curve, double duration, const std::vector<int>& hours, bool minimize)
{
    int best_hour = -1;
    double best_value = 0.0;
    for (int h : hours) {
        const double value = oracle_window_mean(curve, h, duration);
        if (best_hour < 0) {
            best_hour = h;
            best_value = value;
            continue;
        }
        const double scale = std::max(std::abs(value), std::abs(best_value));
        if (std::abs(value - best_value) <= 1e-12 * scale) {
            continue;  // tie keeps the earlier (smaller) hour
        }
        if (minimize ? value < best_value : value > best_value) {
            best_hour = h;
            best_value = value;
        }
    }
    return best_hour;
}

long long oracle_breakeven(double cost, double saving)
{
    long long n = 1;
    while (static_cast<double>(n) * saving < cost) {
        ++n;
    }
    return n;
}

RegionIntensity region_from_curve(const std::string& id, const std::array<double, 24>& intensity,
                                  const std::array<double, 24>& cfe)
{
    RegionIntensity region;
    region.region_id = id;
    region.name = id;
    DailyProfile profile{};
    double sum = 0.0;
    for (int h = 0; h < 24; ++h) {
        profile[h] = HourlyEntry{h, cfe[h], intensity[h]};
        sum += intensity[h];
    }
    region.annual_avg_intensity = sum / 24.0;
    region.hourly = profile;
    return region;
}

// --- rows ---------------------------------------------------------------------

void energy_properties(Checker& c)
{
    std::mt19937_64 rng(20220101);
    std::uniform_int_distribution<long long> procs(1, 100000);
    std::uniform_real_distribution<double> hours(0.001, 10000.0);
    std::uniform_real_distribution<double> watts(50.0, 1000.0);
    std::uniform_real_distribution<double> pue(1.0, 2.0);

    for (int i = 0; i < 200; ++i) {
        const WorkloadSpec w{"w", procs(rng), hours(rng), "hw"};
        const HardwareProfile hw{"hw", "hw", 2020, ProcessorKind::gpu, watts(rng), ""};
        const DatacenterProfile dc{"dc", "dc", "r", pue(rng)};
        const auto e = estimate_energy(w, hw, dc);

        c.expect(within_rel(e.total_mwh,
                            oracle_energy_total_mwh(w.duration_hours, static_cast<double>(w.processor_count),
                                                    hw.avg_system_power_watts, dc.pue),
                            1e-9),
                 "total_mwh vs direct formula");
        c.expect(within_rel(e.total_mwh, e.it_mwh * e.pue_used, 1e-9), "total = it x pue");

        auto w2 = w;
        w2.duration_hours *= 2.0;
        c.expect(within_rel(estimate_energy(w2, hw, dc).it_mwh, 2.0 * e.it_mwh, 1e-9), "linear in hours");
        w2 = w;
        w2.processor_count *= 2;
        c.expect(within_rel(estimate_energy(w2, hw, dc).it_mwh, 2.0 * e.it_mwh, 1e-9), "linear in processors");
        auto hw2 = hw;
        hw2.avg_system_power_watts *= 2.0;
        c.expect(within_rel(estimate_energy(w, hw2, dc).it_mwh, 2.0 * e.it_mwh, 1e-9), "linear in power");

        auto dc1 = dc;
        dc1.pue = 1.0;
        const auto e1 = estimate_energy(w, hw, dc1);
        c.expect(within_rel(e1.total_mwh, e1.it_mwh, 1e-9), "PUE 1 gives total = IT");
    }
    c.note("200 random workloads, linearity and PUE identity at 1e-9");
}

void waterfall_2021(Checker& c)
{
    const auto& seed = seed_paper_defaults();
    const auto preset = presets::waterfall("figure1-2021", seed);
    const auto report = waterfall(preset.baseline_label, preset.steps);
    c.near(report.total_energy_reduction, 83.0, 0.05, "energy reduction");
    c.near(report.total_emissions_reduction, 747.0, 0.05, "emissions reduction");
    c.note("energy " + num(report.total_energy_reduction) + "x, emissions " + num(report.total_emissions_reduction) + "x");
}

void waterfall_2019(Checker& c)
{
    const auto preset = presets::waterfall("figure1-2019", seed_paper_defaults());
    const auto report = waterfall(preset.baseline_label, preset.steps);
    c.near(report.total_energy_reduction, 10.4, 0.01, "energy reduction");
    c.near(report.total_emissions_reduction, 65.0, 0.15, "emissions reduction");
    c.note("energy " + num(report.total_energy_reduction) + "x, emissions " + num(report.total_emissions_reduction) + "x");
}

void gpt3_vs_glam(Checker& c)
{
    const auto [gpt3, glam] = presets::comparison("figure3");
    const auto report = compare(gpt3, glam, seed_paper_defaults());
    c.near(report.emissions_ratio, 14.0, 0.05, "emissions ratio");
    c.near(report.intensity_ratio, 0.429 / 0.088, 0.01, "intensity ratio");
    c.near(report.compute_ratio, 2.8, 1e-9, "compute ratio");
    c.near(gpt3.workload.accelerator_years(), 405.0, 1e-9, "GPT-3 accelerator-years");
    c.note("emissions " + num(report.emissions_ratio) + "x, intensity " + num(report.intensity_ratio) + "x");
}

void umass_audit(Checker& c)
{
    const auto input = presets::audit("umass-audit");
    const auto report = audit(input.published_tco2e, input.factors, input.actual_tco2e);
    c.expect(report.overshoot_ratio.has_value(), "overshoot present");
    const double overshoot = report.overshoot_ratio.value_or(0.0);
    c.near(overshoot, 284.0 / 3.2, 1e-9, "published / actual");
    c.near(overshoot, 88.0, 0.02, "published / actual vs 88x");
    c.near(report.combined_factor, 93.5, 1e-9, "combined factor");
    c.near(report.combined_factor, overshoot, 0.10, "factors vs overshoot");
    c.near(report.recomputed_tco2e * report.combined_factor, report.published_tco2e, 1e-9, "reconstruction");
    c.note("overshoot " + num(overshoot) + "x, factors " + num(report.combined_factor) + "x");
}

void every_time_confusion(Checker& c)
{
    const auto input = presets::audit("every-time-confusion");
    const auto report = audit(input.published_tco2e, input.factors, input.actual_tco2e);
    const double ratio = report.overshoot_ratio.value_or(0.0);
    c.near(ratio, 118341.0, 0.02, "284,019 kg / 2.4 kg");
    c.near(ratio, 120000.0, 0.05, "vs 120,000x");
    c.note("ratio " + num(ratio) + "x");
}

void search_vs_training(Checker& c)
{
    const double ratio = nas_to_training_ratio(3.2, 0.0024);
    c.near(ratio, 1333.3333333, 1e-6, "3.2 t / 2.4 kg");
    c.near(ratio, 1347.0, 0.02, "vs 1347x");
    c.note("ratio " + num(ratio) + "x");
}

void backsolve(Checker& c)
{
    // 2.4 kg = hours x processors x watts x 1e-6 x PUE x intensity, solved for watts.
    const double independent_watts = 2.4 / 1000.0 / (120.0 * 1.0 * 1e-6 * 1.11 * 0.088);
    const auto& seed = seed_paper_defaults();
    const double seeded = seed.hardware_at("tpu2").avg_system_power_watts;
    c.near(seeded, independent_watts, 1e-9, "seeded TPUv2 watts vs back-solve");
    c.near(seeded, 205.0, 0.01, "TPUv2 watts ~205");

    const auto scenario = presets::estimate("evolved-transformer-medium");
    c.expect(seed.datacenter_at(scenario.datacenter_id).pue == 1.11, "PUE 1.11");
    c.expect(seed.region_at(scenario.region_id).annual_avg_intensity == 0.088, "intensity 0.088");
    const auto estimate = evaluate_scenario(scenario, seed);
    c.near(estimate.emissions.gross_tco2e, 0.0024, 0.01, "pipeline tCO2e");
    c.note("TPUv2 " + num(seeded) + " W, emits " + num(estimate.emissions.gross_tco2e * 1000.0) + " kg");
}

void breakeven_row(Checker& c)
{
    const auto input = presets::breakeven("evolved-transformer-nas");
    const auto report = breakeven(input.search_cost, input.per_training_saving, input.unit);
    c.expect(report.breakeven_count == 1, "Evolved Transformer NAS breaks even after 1 training");
    c.near(report.net_at(1), 105.0, 1e-9, "net after 1 training");

    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> cost(0.01, 100.0);
    std::uniform_real_distribution<double> log_ratio(-3.0, 4.0);
    std::uniform_int_distribution<int> multiple(1, 500);
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        double search = cost(rng);
        double saving = search / std::pow(10.0, log_ratio(rng));
        if (i % 5 == 0) {
            // exact multiples: dyadic saving so the product is exact
            saving = std::ldexp(1.0, -(i % 7));
            search = saving * multiple(rng);
        }
        const auto got = breakeven(search, saving).breakeven_count;
        if (got != oracle_breakeven(search, saving)) {
            ++mismatches;
        }
        if (got != static_cast<long long>(std::ceil(search / saving)) && i % 5 == 0) {
            ++mismatches;
        }
        const auto bigger = breakeven(search, saving * 1.5).breakeven_count;
        if (bigger > got) {
            ++mismatches;
        }
    }
    c.expect(mismatches == 0, std::to_string(mismatches) + " of 1000 random pairs disagree with brute force");
    c.note("count 1 for 7.5 MWh vs 112.5 MWh; 1000 random pairs match brute force");
}

void fleet_row(Checker& c)
{
    const auto report = fleet_report(presets::fleet("fleet-2021"));
    c.expect(std::abs(report.ml_fraction - 0.15) <= 1e-9, "ml_fraction = " + num(report.ml_fraction));
    c.expect(std::abs(report.inference_share - 2.0 / 3.0) <= 1e-9, "inference_share = " + num(report.inference_share));
    c.expect(std::abs(report.training_share + report.inference_share - 1.0) <= 1e-9, "shares sum to 1");
    c.note("fraction " + num(report.ml_fraction) + ", inference " + num(report.inference_share));
}

void mobile_row(Checker& c)
{
    const auto input = presets::mobile("mobile-2021");
    const auto report = mobile_bound(input.phones, input.global_phone_twh, input.ml_share_bound, input.server_ml_twh);
    c.near(report.client_ml_bound_twh, 0.395, 1e-9, "client bound TWh");
    c.expect(report.server_to_client_ratio.has_value(), "ratio present");
    c.near(report.server_to_client_ratio.value_or(0.0), 6.0, 0.05, "server / client");
    c.note("bound " + num(report.client_ml_bound_twh) + " TWh, ratio " + num(report.server_to_client_ratio.value_or(0)));
}

void placement_oracle(Checker& c)
{
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> intensity(0.0, 0.8);
    std::uniform_real_distribution<double> cfe(0.0, 100.0);
    std::uniform_real_distribution<double> real_duration(1.0, 48.0);
    std::uniform_int_distribution<int> int_duration(1, 48);
    std::uniform_int_distribution<int> hour(0, 23);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    std::uniform_real_distribution<double> bump(0.0, 0.2);

    CatalogBundle catalog = seed_paper_defaults();
    int hour_mismatch = 0;
    int scale_mismatch = 0;
    int dominance_violation = 0;

    for (int i = 0; i < 500; ++i) {
        std::array<double, 24> intensities{};
        std::array<double, 24> cfes{};
        for (int h = 0; h < 24; ++h) {
            intensities[h] = intensity(rng);
            cfes[h] = cfe(rng);
        }
        const double duration = i % 2 == 0 ? static_cast<double>(int_duration(rng)) : real_duration(rng);
        const StartWindow window = i % 3 == 0 ? StartWindow() : StartWindow::range(hour(rng), hour(rng));
        const auto region = region_from_curve("a", intensities, cfes);

        for (auto objective : {PlacementObjective::min_intensity, PlacementObjective::max_cfe}) {
            const bool minimize = objective == PlacementObjective::min_intensity;
            const auto got = best_start_hour(region, duration, objective, window);
            const int want = oracle_best_hour(minimize ? intensities : cfes, duration, window.allowed(), minimize);
            hour_mismatch += got.hour != want;
        }

        // Scaling intensities by c > 0 keeps the argmin.
        std::array<double, 24> scaled = intensities;
        const double factor = scale(rng);
        for (auto& v : scaled) {
            v *= factor;
        }
        const auto base_choice = best_start_hour(region, duration, PlacementObjective::min_intensity, window);
        const auto scaled_choice =
            best_start_hour(region_from_curve("a", scaled, cfes), duration, PlacementObjective::min_intensity, window);
        scale_mismatch += base_choice.hour != scaled_choice.hour;

        // b is a everywhere plus a non-negative bump, strictly worse at one hour.
        std::array<double, 24> worse = intensities;
        for (auto& v : worse) {
            v += (rng() % 3 == 0) ? bump(rng) : 0.0;
        }
        worse[static_cast<std::size_t>(hour(rng))] += 0.05;
        catalog.regions["dominant-a"] = region_from_curve("dominant-a", intensities, cfes);
        catalog.regions["dominant-a"].region_id = "dominant-a";
        catalog.regions["b-dominated"] = region_from_curve("b-dominated", worse, cfes);

        PlacementQuery query;
        query.workload = {"job", 8, duration, "tpu4"};
        query.datacenter_id = "google-cloud";
        query.objective = PlacementObjective::min_intensity;
        query.window = window;
        // ids chosen so the lexicographic tie-break alone would favour b
        query.candidate_region_ids = {"dominant-a", "b-dominated"};
        const auto result = rank_regions(query, catalog);
        const auto& first = result.ranking.at(0);
        const auto& second = result.ranking.at(1);
        const bool tie = objective_tie(first.objective_value, second.objective_value);
        if (first.region_id != "dominant-a" && !tie) {
            ++dominance_violation;
        }
        if (first.region_id != "dominant-a" && tie && first.objective_value < second.objective_value) {
            ++dominance_violation;
        }
    }
    c.expect(hour_mismatch == 0, std::to_string(hour_mismatch) + " start-hour mismatches vs brute force");
    c.expect(scale_mismatch == 0, std::to_string(scale_mismatch) + " scale-invariance failures");
    c.expect(dominance_violation == 0, std::to_string(dominance_violation) + " dominance violations");
    c.note("500 curves x 2 objectives match brute force; scale and dominance hold");
}

void hourly_flat(Checker& c)
{
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> intensity(0.01, 1.0);
    std::uniform_int_distribution<int> hours(1, 500);
    std::uniform_int_distribution<long long> procs(1, 4096);
    std::uniform_int_distribution<int> start(0, 23);
    std::uniform_real_distribution<double> pue(1.0, 1.8);
    std::uniform_real_distribution<double> watts(100.0, 500.0);

    for (int i = 0; i < 100; ++i) {
        const double level = intensity(rng);
        std::array<double, 24> flat{};
        flat.fill(level);
        auto region = region_from_curve("flat", flat, flat);
        region.annual_avg_intensity = level;

        const WorkloadSpec w{"w", procs(rng), static_cast<double>(hours(rng)), "hw"};
        const HardwareProfile hw{"hw", "hw", 2020, ProcessorKind::tpu, watts(rng), ""};
        const DatacenterProfile dc{"dc", "dc", "flat", pue(rng)};
        const auto energy = estimate_energy(w, hw, dc);
        const auto flat_est = estimate_emissions_flat(energy, region);
        const auto hourly_est = estimate_emissions_hourly(energy, region, start(rng), w.duration_hours);
        c.expect(within_rel(hourly_est.gross_tco2e, flat_est.gross_tco2e, 1e-9), "hourly vs flat, workload " + std::to_string(i));
    }
    c.note("100 random workloads agree at 1e-9");
}

// Returns an empty string when `got` matches `want` structurally with numbers
// within `tolerance` relative; otherwise the first differing path.
std::string json_mismatch(const json& got, const json& want, double tolerance, const std::string& path = "$")
{
    if (want.is_number() && got.is_number()) {
        const double a = got.get<double>();
        const double b = want.get<double>();
        return within_rel(a, b, tolerance) || a == b ? "" : path + ": " + num(a) + " != " + num(b);
    }
    if (want.type() != got.type()) {
        return path + ": type differs";
    }
    if (want.is_object()) {
        if (want.size() != got.size()) {
            return path + ": key count differs";
        }
        for (const auto& [key, value] : want.items()) {
            if (!got.contains(key)) {
                return path + "." + key + ": missing";
            }
            if (auto m = json_mismatch(got.at(key), value, tolerance, path + "." + key); !m.empty()) {
                return m;
            }
        }
        return "";
    }
    if (want.is_array()) {
        if (want.size() != got.size()) {
            return path + ": length differs";
        }
        for (std::size_t i = 0; i < want.size(); ++i) {
            if (auto m = json_mismatch(got.at(i), want.at(i), tolerance, path + "[" + std::to_string(i) + "]"); !m.empty()) {
                return m;
            }
        }
        return "";
    }
    return got == want ? "" : path + ": value differs";
}

void service_parity(Checker& c, const Transport& api)
{
    const auto& seed = seed_paper_defaults();
    int endpoints = 0;

    auto check = [&](std::string_view method, std::string_view path, const json& body, const json& want) {
        ++endpoints;
        const auto response = api(method, path, body.is_null() ? std::string() : body.dump());
        const std::string where = std::string(method) + " " + std::string(path) + " " + (body.is_null() ? "" : body.dump());
        if (response.status != 200) {
            c.expect(false, where + " -> HTTP " + std::to_string(response.status) + " " + response.body);
            return;
        }
        json got;
        try {
            got = json::parse(response.body);
        } catch (const std::exception& e) {
            c.expect(false, where + ": unparseable body");
            return;
        }
        const auto mismatch = json_mismatch(got, want, 1e-9);
        c.expect(mismatch.empty(), where + ": " + mismatch);
    };
    auto check_error = [&](std::string_view path, const json& body, int status, const std::string& code) {
        const auto response = api("POST", path, body.dump());
        bool ok = response.status == status;
        try {
            const auto parsed = json::parse(response.body);
            ok = ok && parsed.at("code") == code && parsed.contains("message");
        } catch (const std::exception&) {
            ok = false;
        }
        c.expect(ok, std::string(path) + " error -> HTTP " + std::to_string(response.status) + " " + response.body);
    };

    check("GET", "/v1/health", nullptr, json{{"status", "ok"}});

    json hardware = json::array(), datacenters = json::array(), regions = json::array();
    for (const auto& [id, v] : seed.hardware) hardware.push_back(v);
    for (const auto& [id, v] : seed.datacenters) datacenters.push_back(v);
    for (const auto& [id, v] : seed.regions) regions.push_back(v);
    check("GET", "/v1/catalog/hardware", nullptr, hardware);
    check("GET", "/v1/catalog/datacenters", nullptr, datacenters);
    check("GET", "/v1/catalog/regions", nullptr, regions);

    for (const auto& name : presets::estimate_names()) {
        const auto est = evaluate_scenario(presets::estimate(name), seed);
        check("POST", "/v1/estimate", json{{"preset", name}}, json{{"energy", est.energy}, {"emissions", est.emissions}});
    }
    {
        Scenario s{"hourly", {"hourly", 256, 30.5, "tpu4"}, "avg2020", "chile-synthetic", 5, EmissionsMethod::hourly};
        const auto est = evaluate_scenario(s, seed);
        json body{{"workload", s.workload},
                  {"datacenter_id", s.datacenter_id},
                  {"region_id", s.region_id},
                  {"method", "hourly"},
                  {"start_hour", 5}};
        check("POST", "/v1/estimate", body, json{{"energy", est.energy}, {"emissions", est.emissions}});
    }

    for (const auto& name : presets::waterfall_names()) {
        const auto preset = presets::waterfall(name, seed);
        json want = waterfall(preset.baseline_label, preset.steps);
        if (preset.scenario_pair) {
            want["comparison"] = compare(preset.scenario_pair->first, preset.scenario_pair->second, seed);
        }
        check("POST", "/v1/waterfall", json{{"preset", name}}, want);
    }
    {
        const auto preset = presets::waterfall("figure1-2021", seed);
        json steps = json::array();
        for (const auto& s : preset.steps) steps.push_back(s);
        check("POST", "/v1/waterfall", json{{"baseline_label", "custom"}, {"steps", steps}}, waterfall("custom", preset.steps));
    }

    for (const auto& name : presets::comparison_names()) {
        const auto pair = presets::comparison(name);
        check("POST", "/v1/compare", json{{"preset", name}}, compare(pair.first, pair.second, seed));
        check("POST", "/v1/compare", json{{"baseline", pair.first}, {"candidate", pair.second}},
              compare(pair.first, pair.second, seed));
    }

    for (const auto& name : presets::audit_names()) {
        const auto input = presets::audit(name);
        check("POST", "/v1/audit", json{{"preset", name}}, audit(input.published_tco2e, input.factors, input.actual_tco2e));
    }

    for (const auto& name : presets::breakeven_names()) {
        const auto input = presets::breakeven(name);
        check("POST", "/v1/breakeven", json{{"preset", name}},
              breakeven(input.search_cost, input.per_training_saving, input.unit));
    }
    check("POST", "/v1/breakeven", json{{"search_cost", 6.2}, {"per_training_saving", 0.5}, {"evaluate_at", {1, 13, 100}}},
          breakeven_to_json(breakeven(6.2, 0.5), {1, 13, 100}));

    for (const auto& name : presets::placement_names()) {
        const auto query = presets::placement(name);
        check("POST", "/v1/place", json{{"preset", name}}, rank_regions(query, seed));
        check("POST", "/v1/place", json(query), rank_regions(query, seed));
    }

    check_error("/v1/estimate",
                json{{"workload", {{"processor_count", 1}, {"duration_hours", 1.0}, {"hardware_id", "tpu2"}}},
                     {"datacenter_id", "avg2020"},
                     {"region_id", "atlantis"}},
                404, "reference_error");
    check_error("/v1/place",
                json{{"workload", {{"processor_count", 1}, {"duration_hours", 3.0}, {"hardware_id", "tpu2"}}},
                     {"candidate_region_ids", {"nevada"}},
                     {"datacenter_id", "google-cloud"},
                     {"objective", "min_intensity"}},
                422, "missing_hourly_data");
    check_error("/v1/waterfall", json{{"steps", json::array({{{"dimension", "model"}, {"energy_factor", 0.5}}})}}, 400,
                "validation_error");

    c.note(std::to_string(endpoints) + " endpoint calls match the library at 1e-9; error codes verified");
}

}  // namespace

Transport in_process_transport()
{
    auto router = std::make_shared<service::Router>(std::make_shared<const CatalogBundle>(seed_paper_defaults()));
    return [router](std::string_view method, std::string_view path, const std::string& body) {
        return router->handle(method, path, body);
    };
}

std::vector<CriterionResult> run_all(const Transport& api)
{
    struct Row {
        int id;
        const char* title;
        std::function<void(Checker&)> run;
    };
    const std::vector<Row> rows{
        {1, "Energy formula: linearity and PUE identity", energy_properties},
        {2, "4M waterfall (2021): 83x energy, 747x emissions within 5%", waterfall_2021},
        {3, "4M waterfall (2019): 65x emissions within 15%", waterfall_2019},
        {4, "GPT-3 vs GLaM: ~14x emissions within 5%, intensity ratio within 1%", gpt3_vs_glam},
        {5, "NAS audit: 284 vs 3.2 tCO2e, 88x within 2%, 5 x 18.7 within 10%", umass_audit},
        {6, "Every-time confusion: 284,019 kg / 2.4 kg", every_time_confusion},
        {7, "Search vs training: 3.2 t / 2.4 kg within 2% of 1347x", search_vs_training},
        {8, "Back-solved TPUv2 power: 120 h run emits 2.4 kg within 1%", backsolve},
        {9, "Break-even: count 1 for 7.5 / 112.5 MWh; ceiling vs brute force", breakeven_row},
        {10, "Fleet fixture: 15% ML share, 2/3 inference", fleet_row},
        {11, "Mobile bound: 0.395 TWh, server ~6x within 5%", mobile_row},
        {12, "Placement: brute-force oracle, dominance, scale invariance", placement_oracle},
        {13, "Hourly/flat consistency on constant curves", hourly_flat},
        {14, "Service parity with library calls at 1e-9", [&api](Checker& c) { service_parity(c, api); }},
    };

    std::vector<CriterionResult> results;
    for (const auto& row : rows) {
        Checker checker;
        const auto start = std::chrono::steady_clock::now();
        try {
            row.run(checker);
        } catch (const std::exception& e) {
            checker.expect(false, std::string("exception: ") + e.what());
        }
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        // each row must finish in under a second
        checker.expect(elapsed.count() < 1.0, "took " + num(elapsed.count()) + " s");
        results.push_back({row.id, row.title, checker.passed(), checker.detail(), elapsed.count()});
    }
    return results;
}

bool print(const std::vector<CriterionResult>& results, std::ostream& out)
{
    int passed = 0;
    for (const auto& r : results) {
        out << (r.passed ? "[PASS] " : "[FAIL] ") << std::setw(2) << r.id << "  " << r.title << "  (" << r.detail
            << ", " << std::fixed << std::setprecision(3) << r.seconds << " s)" << std::defaultfloat << "\n";
        passed += r.passed;
    }
    out << passed << "/" << results.size() << " criteria passed\n";
    return passed == static_cast<int>(results.size());
}

}  // namespace carbonledger::reproduce
