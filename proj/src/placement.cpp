// SPDX-License-Identifier: Apache-2.0
#include "carbonledger/placement.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "carbonledger/error.hpp"
#include "carbonledger/estimator.hpp"

namespace carbonledger {

std::string_view to_string(PlacementObjective objective)
{
    return objective == PlacementObjective::max_cfe ? "max_cfe" : "min_intensity";
}

std::optional<PlacementObjective> parse_placement_objective(std::string_view text)
{
    if (text == "min_intensity") return PlacementObjective::min_intensity;
    if (text == "max_cfe") return PlacementObjective::max_cfe;
    return std::nullopt;
}

StartWindow::StartWindow()
{
    hours_.resize(24);
    for (int h = 0; h < 24; ++h) {
        hours_[h] = h;
    }
}

StartWindow StartWindow::range(int earliest, int latest)
{
    if (earliest < 0 || earliest > 23 || latest < 0 || latest > 23) {
        throw ValidationError("start window hours must be within 0..23");
    }
    std::vector<int> hours;
    for (int h = earliest;; h = (h + 1) % 24) {
        hours.push_back(h);
        if (h == latest) {
            break;
        }
    }
    std::sort(hours.begin(), hours.end());
    return StartWindow(std::move(hours));
}

StartWindow StartWindow::hours(std::vector<int> hours)
{
    if (hours.empty()) {
        throw ValidationError("start window is empty");
    }
    for (int h : hours) {
        if (h < 0 || h > 23) {
            throw ValidationError("start window hours must be within 0..23");
        }
    }
    std::sort(hours.begin(), hours.end());
    hours.erase(std::unique(hours.begin(), hours.end()), hours.end());
    return StartWindow(std::move(hours));
}

bool objective_tie(double a, double b)
{
    return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

StartChoice best_start_hour(const RegionIntensity& region, double duration_hours, PlacementObjective objective,
                            const StartWindow& window)
{
    if (window.allowed().empty()) {
        throw ValidationError("start window is empty");
    }
    const auto curve =
        objective == PlacementObjective::min_intensity ? hourly_intensities(region) : hourly_cfe(region);

    std::optional<StartChoice> best;
    for (int hour : window.allowed()) {
        const double value = profile_window_mean(curve, hour, duration_hours);
        if (!best) {
            best = StartChoice{hour, value};
            continue;
        }
        if (objective_tie(value, best->objective_value)) {
            continue;
        }
        const bool better =
            objective == PlacementObjective::min_intensity ? value < best->objective_value : value > best->objective_value;
        if (better) {
            best = StartChoice{hour, value};
        }
    }
    return *best;
}

PlacementResult rank_regions(const PlacementQuery& query, const CatalogBundle& catalog)
{
    if (query.candidate_region_ids.empty()) {
        throw ValidationError("placement needs at least one candidate region");
    }
    const auto& hardware = catalog.hardware_at(query.workload.hardware_id);
    const auto& datacenter = catalog.datacenter_at(query.datacenter_id);
    const EnergyEstimate energy = estimate_energy(query.workload, hardware, datacenter);

    std::set<std::string> unique_ids(query.candidate_region_ids.begin(), query.candidate_region_ids.end());
    std::vector<const RegionIntensity*> regions;
    for (const auto& id : unique_ids) {
        regions.push_back(&catalog.region_at(id));
    }

    PlacementResult result;
    result.objective = query.objective;
    for (const auto* region : regions) {
        const auto choice = best_start_hour(*region, query.workload.duration_hours, query.objective, query.window);
        PlacementEntry entry{region->region_id, choice.hour, choice.objective_value, std::nullopt};
        if (query.objective == PlacementObjective::min_intensity) {
            entry.gross_tco2e = energy.total_mwh * choice.objective_value;
        }
        result.ranking.push_back(std::move(entry));
    }

    const bool ascending = query.objective == PlacementObjective::min_intensity;
    std::stable_sort(result.ranking.begin(), result.ranking.end(), [ascending](const auto& a, const auto& b) {
        if (a.objective_value != b.objective_value) {
            return ascending ? a.objective_value < b.objective_value : a.objective_value > b.objective_value;
        }
        if (a.region_id != b.region_id) {
            return a.region_id < b.region_id;
        }
        return a.best_start_hour < b.best_start_hour;
    });
    return result;
}

}  // namespace carbonledger
