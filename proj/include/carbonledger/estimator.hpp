// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "carbonledger/catalog.hpp"

namespace carbonledger {

struct EnergyEstimate {
    double it_mwh = 0.0;     // computing equipment only
    double total_mwh = 0.0;  // it_mwh x pue_used
    double pue_used = 1.0;
};

enum class EmissionsMethod { flat, hourly };

std::string_view to_string(EmissionsMethod method);
std::optional<EmissionsMethod> parse_emissions_method(std::string_view text);

struct EmissionsEstimate {
    double gross_tco2e = 0.0;
    double total_mwh = 0.0;
    double effective_intensity = 0.0;  // tCO2e per MWh
    EmissionsMethod method = EmissionsMethod::flat;
    std::optional<int> start_hour;
};

/// Facility energy: hours x processors x watts x 1e-6 gives IT MWh, times PUE.
EnergyEstimate estimate_energy(const WorkloadSpec& workload, const HardwareProfile& hardware,
                               const DatacenterProfile& datacenter);

/// Gross emissions at the region's annual average intensity.
EmissionsEstimate estimate_emissions_flat(const EnergyEstimate& energy, const RegionIntensity& region);

/// Gross emissions with power spread uniformly over `duration_hours` of wall
/// clock starting at local `start_hour`, each hour charged at that hour's
/// intensity. Runs longer than a day tile the daily profile; a fractional last
/// hour is weighted pro rata.
///
/// Throws MissingHourlyDataError when the region has no profile or any hour
/// lacks an intensity, ValidationError for a start hour outside 0..23 or a
/// non-positive duration.
EmissionsEstimate estimate_emissions_hourly(const EnergyEstimate& energy, const RegionIntensity& region, int start_hour,
                                            double duration_hours);

/// Duration-weighted mean of a 24-value daily profile over a window of
/// `duration_hours` starting at `start_hour`. Full days are folded into a
/// single multiple of the daily sum before the remainder is walked hour by hour.
double profile_window_mean(const std::array<double, 24>& values, int start_hour, double duration_hours);

/// Extracts the intensity curve; throws MissingHourlyDataError when incomplete.
std::array<double, 24> hourly_intensities(const RegionIntensity& region);

/// Extracts the %CFE curve; throws MissingHourlyDataError when incomplete.
std::array<double, 24> hourly_cfe(const RegionIntensity& region);

}  // namespace carbonledger
