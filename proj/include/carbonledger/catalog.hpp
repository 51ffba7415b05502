// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace carbonledger {

enum class ProcessorKind { gpu, tpu, cpu };

std::string_view to_string(ProcessorKind kind);
std::optional<ProcessorKind> parse_processor_kind(std::string_view text);

/// One processor type. The power figure is a run average for the whole
/// "processor": chip plus local memory, network links and its share of the host.
struct HardwareProfile {
    std::string id;
    std::string name;
    int year = 0;
    ProcessorKind kind = ProcessorKind::gpu;
    double avg_system_power_watts = 0.0;
    std::string notes;

    bool operator==(const HardwareProfile&) const = default;
};

struct DatacenterProfile {
    std::string id;
    std::string name;
    std::string region_id;
    double pue = 1.0;

    bool operator==(const DatacenterProfile&) const = default;
};

/// One local hour of a region's daily profile. Either field may be absent;
/// the two are stored side by side and never converted into each other.
struct HourlyEntry {
    int hour = 0;
    std::optional<double> cfe_percent;
    std::optional<double> intensity;

    bool operator==(const HourlyEntry&) const = default;
};

/// Daily profile indexed by local hour 0..23.
using DailyProfile = std::array<HourlyEntry, 24>;

struct RegionIntensity {
    std::string region_id;
    std::string name;
    double annual_avg_intensity = 0.0;  // tCO2e per MWh
    std::optional<DailyProfile> hourly;

    bool operator==(const RegionIntensity&) const = default;
};

struct WorkloadSpec {
    std::string label;
    long long processor_count = 1;
    double duration_hours = 0.0;
    std::string hardware_id;

    /// Processor-hours over 8760, for reporting only.
    double accelerator_years() const { return static_cast<double>(processor_count) * duration_hours / 8760.0; }

    bool operator==(const WorkloadSpec&) const = default;
};

/// Throws ValidationError when processor_count < 1 or duration is not a positive finite number.
void validate(const WorkloadSpec& workload);

/// Reference data shared by every estimate. Immutable once built; the
/// accessors throw ReferenceError for unknown keys.
class CatalogBundle {
public:
    std::map<std::string, HardwareProfile> hardware;
    std::map<std::string, DatacenterProfile> datacenters;
    std::map<std::string, RegionIntensity> regions;

    const HardwareProfile& hardware_at(const std::string& id) const;
    const DatacenterProfile& datacenter_at(const std::string& id) const;
    const RegionIntensity& region_at(const std::string& id) const;

    /// Checks every entity invariant and cross-reference. Throws ValidationError
    /// or ReferenceError on the first violation.
    void validate() const;

    bool operator==(const CatalogBundle&) const = default;
};

/// Reads hardware.csv, datacenters.csv, regions.csv and, when present,
/// regions_hourly.csv from `dir`.
///
/// Errors: NotFoundError (missing directory or required file), ParseError
/// (malformed row or header, invariant violation; carries file and line),
/// DuplicateError, ReferenceError (dangling datacenter region or hourly region).
CatalogBundle load_catalog(const std::filesystem::path& dir);

/// Writes the four CSV files into `dir`, creating it if needed. Numbers are
/// written with round-trip precision. Throws WriteError on IO failure.
void save_catalog(const CatalogBundle& bundle, const std::filesystem::path& dir);

/// The built-in reference bundle with the published constants.
const CatalogBundle& seed_paper_defaults();

/// TPUv2 average system power back-solved from a 120 processor-hour run that
/// emitted 2.4 kg at PUE 1.11 and 0.088 tCO2e/MWh.
double backsolved_tpu2_watts();

}  // namespace carbonledger
