// SPDX-License-Identifier: Apache-2.0
#include "carbonledger/estimator.hpp"

#include <cmath>
#include <numeric>

#include "carbonledger/error.hpp"

namespace carbonledger {

namespace {

constexpr double kMwhPerWh = 1e-6;

}  // namespace

std::string_view to_string(EmissionsMethod method)
{
    return method == EmissionsMethod::hourly ? "hourly" : "flat";
}

std::optional<EmissionsMethod> parse_emissions_method(std::string_view text)
{
    if (text == "flat") return EmissionsMethod::flat;
    if (text == "hourly") return EmissionsMethod::hourly;
    return std::nullopt;
}

EnergyEstimate estimate_energy(const WorkloadSpec& workload, const HardwareProfile& hardware,
                               const DatacenterProfile& datacenter)
{
    validate(workload);
    if (!(hardware.avg_system_power_watts > 0.0)) {
        throw ValidationError("hardware '" + hardware.id + "': avg_system_power_watts must be > 0");
    }
    if (!(datacenter.pue >= 1.0)) {
        throw ValidationError("datacenter '" + datacenter.id + "': pue must be >= 1.0");
    }

    EnergyEstimate energy;
    energy.pue_used = datacenter.pue;
    energy.it_mwh = workload.duration_hours * static_cast<double>(workload.processor_count)
                    * hardware.avg_system_power_watts * kMwhPerWh;
    energy.total_mwh = energy.it_mwh * energy.pue_used;
    return energy;
}

EmissionsEstimate estimate_emissions_flat(const EnergyEstimate& energy, const RegionIntensity& region)
{
    if (!(region.annual_avg_intensity >= 0.0)) {
        throw ValidationError("region '" + region.region_id + "': annual_avg_intensity must be >= 0");
    }
    EmissionsEstimate out;
    out.total_mwh = energy.total_mwh;
    out.effective_intensity = region.annual_avg_intensity;
    out.gross_tco2e = energy.total_mwh * region.annual_avg_intensity;
    out.method = EmissionsMethod::flat;
    return out;
}

std::array<double, 24> hourly_intensities(const RegionIntensity& region)
{
    if (!region.hourly) {
        throw MissingHourlyDataError(region.region_id, "no hourly profile");
    }
    std::array<double, 24> values{};
    for (int h = 0; h < 24; ++h) {
        const auto& entry = (*region.hourly)[h];
        if (!entry.intensity) {
            throw MissingHourlyDataError(region.region_id, "no intensity for hour " + std::to_string(h));
        }
        values[h] = *entry.intensity;
    }
    return values;
}

std::array<double, 24> hourly_cfe(const RegionIntensity& region)
{
    if (!region.hourly) {
        throw MissingHourlyDataError(region.region_id, "no hourly profile");
    }
    std::array<double, 24> values{};
    for (int h = 0; h < 24; ++h) {
        const auto& entry = (*region.hourly)[h];
        if (!entry.cfe_percent) {
            throw MissingHourlyDataError(region.region_id, "no cfe_percent for hour " + std::to_string(h));
        }
        values[h] = *entry.cfe_percent;
    }
    return values;
}

double profile_window_mean(const std::array<double, 24>& values, int start_hour, double duration_hours)
{
    if (start_hour < 0 || start_hour > 23) {
        throw ValidationError("start_hour must be within 0..23");
    }
    if (!std::isfinite(duration_hours) || duration_hours <= 0.0) {
        throw ValidationError("duration_hours must be > 0");
    }

    const double full_days = std::floor(duration_hours / 24.0);
    double remainder = duration_hours - full_days * 24.0;
    if (remainder < 0.0) {
        remainder = 0.0;
    }

    double weighted = 0.0;
    if (full_days > 0.0) {
        weighted = full_days * std::accumulate(values.begin(), values.end(), 0.0);
    }
    int hour = start_hour;
    while (remainder > 0.0) {
        const double weight = remainder >= 1.0 ? 1.0 : remainder;
        weighted += weight * values[hour];
        remainder -= weight;
        hour = (hour + 1) % 24;
    }
    return weighted / duration_hours;
}

EmissionsEstimate estimate_emissions_hourly(const EnergyEstimate& energy, const RegionIntensity& region, int start_hour,
                                            double duration_hours)
{
    const auto intensities = hourly_intensities(region);
    const double mean = profile_window_mean(intensities, start_hour, duration_hours);

    EmissionsEstimate out;
    out.total_mwh = energy.total_mwh;
    out.effective_intensity = mean;
    out.gross_tco2e = energy.total_mwh * mean;
    out.method = EmissionsMethod::hourly;
    out.start_hour = start_hour;
    return out;
}

}  // namespace carbonledger
