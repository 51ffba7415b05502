// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "carbonledger/catalog.hpp"

namespace carbonledger {

enum class PlacementObjective { min_intensity, max_cfe };

std::string_view to_string(PlacementObjective objective);
std::optional<PlacementObjective> parse_placement_objective(std::string_view text);

/// Allowed integer start hours. The inclusive range form wraps past midnight
/// when `latest < earliest`.
class StartWindow {
public:
    /// Every hour of the day.
    StartWindow();

    /// Throws ValidationError for hours outside 0..23.
    static StartWindow range(int earliest, int latest);

    /// Explicit hours, deduplicated and sorted. Throws ValidationError when
    /// empty or out of range.
    static StartWindow hours(std::vector<int> hours);

    const std::vector<int>& allowed() const { return hours_; }

private:
    explicit StartWindow(std::vector<int> hours) : hours_(std::move(hours)) {}
    std::vector<int> hours_;
};

struct StartChoice {
    int hour = 0;
    /// min_intensity: duration-weighted mean intensity (tCO2e/MWh), which times
    /// total MWh is the integrated gross emissions. max_cfe: weighted mean %CFE.
    double objective_value = 0.0;
};

/// Exhaustive search over the window. Values within a relative 1e-12 of each
/// other count as ties and resolve to the smaller hour (in window order
/// sorted ascending). Throws MissingHourlyDataError or ValidationError.
StartChoice best_start_hour(const RegionIntensity& region, double duration_hours, PlacementObjective objective,
                            const StartWindow& window = StartWindow());

struct PlacementQuery {
    WorkloadSpec workload;
    std::vector<std::string> candidate_region_ids;
    std::string datacenter_id;
    PlacementObjective objective = PlacementObjective::min_intensity;
    StartWindow window;
};

struct PlacementEntry {
    std::string region_id;
    int best_start_hour = 0;
    double objective_value = 0.0;
    std::optional<double> gross_tco2e;  // min_intensity only
};

struct PlacementResult {
    PlacementObjective objective = PlacementObjective::min_intensity;
    std::vector<PlacementEntry> ranking;

    const PlacementEntry& chosen() const { return ranking.front(); }
};

/// Ranks candidates by their best start: ascending objective for
/// min_intensity, descending for max_cfe, then region_id and start hour
/// ascending. Throws ReferenceError, MissingHourlyDataError (naming the
/// region) or ValidationError for an empty candidate list.
PlacementResult rank_regions(const PlacementQuery& query, const CatalogBundle& catalog);

/// True when `a` and `b` agree to a relative 1e-12; the tie rule used above.
bool objective_tie(double a, double b);

}  // namespace carbonledger
