// SPDX-License-Identifier: Apache-2.0
#include "carbonledger/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "carbonledger/error.hpp"
#include "csv.hpp"

namespace fs = std::filesystem;

namespace carbonledger {

std::string_view to_string(ProcessorKind kind)
{
    switch (kind) {
    case ProcessorKind::gpu: return "gpu";
    case ProcessorKind::tpu: return "tpu";
    case ProcessorKind::cpu: return "cpu";
    }
    return "gpu";
}

std::optional<ProcessorKind> parse_processor_kind(std::string_view text)
{
    if (text == "gpu") return ProcessorKind::gpu;
    if (text == "tpu") return ProcessorKind::tpu;
    if (text == "cpu") return ProcessorKind::cpu;
    return std::nullopt;
}

void validate(const WorkloadSpec& workload)
{
    if (workload.processor_count < 1) {
        throw ValidationError("workload '" + workload.label + "': processor_count must be >= 1");
    }
    if (!std::isfinite(workload.duration_hours) || workload.duration_hours <= 0.0) {
        throw ValidationError("workload '" + workload.label + "': duration_hours must be > 0");
    }
    if (workload.hardware_id.empty()) {
        throw ValidationError("workload '" + workload.label + "': hardware_id is required");
    }
}

const HardwareProfile& CatalogBundle::hardware_at(const std::string& id) const
{
    auto it = hardware.find(id);
    if (it == hardware.end()) {
        throw ReferenceError("hardware", id);
    }
    return it->second;
}

const DatacenterProfile& CatalogBundle::datacenter_at(const std::string& id) const
{
    auto it = datacenters.find(id);
    if (it == datacenters.end()) {
        throw ReferenceError("datacenter", id);
    }
    return it->second;
}

const RegionIntensity& CatalogBundle::region_at(const std::string& id) const
{
    auto it = regions.find(id);
    if (it == regions.end()) {
        throw ReferenceError("region", id);
    }
    return it->second;
}

namespace {

// Entity-level checks shared by load and CatalogBundle::validate. Returns an
// empty string when the entity is valid.
std::string check(const HardwareProfile& hw)
{
    if (hw.id.empty()) return "hardware id is empty";
    if (!std::isfinite(hw.avg_system_power_watts) || hw.avg_system_power_watts <= 0.0) {
        return "hardware '" + hw.id + "': avg_system_power_watts must be > 0";
    }
    return {};
}

std::string check(const DatacenterProfile& dc)
{
    if (dc.id.empty()) return "datacenter id is empty";
    if (dc.region_id.empty()) return "datacenter '" + dc.id + "': region_id is empty";
    if (!std::isfinite(dc.pue) || dc.pue < 1.0) {
        return "datacenter '" + dc.id + "': pue must be >= 1.0";
    }
    return {};
}

std::string check(const HourlyEntry& entry)
{
    if (entry.hour < 0 || entry.hour > 23) return "hour must be within 0..23";
    if (entry.cfe_percent && (!std::isfinite(*entry.cfe_percent) || *entry.cfe_percent < 0.0 || *entry.cfe_percent > 100.0)) {
        return "cfe_percent must be within [0, 100]";
    }
    if (entry.intensity && (!std::isfinite(*entry.intensity) || *entry.intensity < 0.0)) {
        return "intensity must be >= 0";
    }
    if (!entry.cfe_percent && !entry.intensity) {
        return "hourly row needs cfe_percent or intensity";
    }
    return {};
}

std::string check(const RegionIntensity& region)
{
    if (region.region_id.empty()) return "region id is empty";
    if (!std::isfinite(region.annual_avg_intensity) || region.annual_avg_intensity < 0.0) {
        return "region '" + region.region_id + "': annual_avg_intensity must be >= 0";
    }
    if (region.hourly) {
        for (std::size_t h = 0; h < region.hourly->size(); ++h) {
            const auto& entry = (*region.hourly)[h];
            if (entry.hour != static_cast<int>(h)) {
                return "region '" + region.region_id + "': hourly entries must cover hours 0..23 in order";
            }
            if (auto problem = check(entry); !problem.empty()) {
                return "region '" + region.region_id + "' hour " + std::to_string(h) + ": " + problem;
            }
        }
    }
    return {};
}

}  // namespace

void CatalogBundle::validate() const
{
    for (const auto& [key, hw] : hardware) {
        if (key != hw.id) throw ValidationError("hardware key '" + key + "' does not match id '" + hw.id + "'");
        if (auto problem = check(hw); !problem.empty()) throw ValidationError(problem);
    }
    for (const auto& [key, region] : regions) {
        if (key != region.region_id) {
            throw ValidationError("region key '" + key + "' does not match id '" + region.region_id + "'");
        }
        if (auto problem = check(region); !problem.empty()) throw ValidationError(problem);
    }
    for (const auto& [key, dc] : datacenters) {
        if (key != dc.id) throw ValidationError("datacenter key '" + key + "' does not match id '" + dc.id + "'");
        if (auto problem = check(dc); !problem.empty()) throw ValidationError(problem);
        if (!regions.contains(dc.region_id)) throw ReferenceError("region", dc.region_id);
    }
}

// ---------------------------------------------------------------------------
// CSV loading

namespace {

constexpr const char* kHardwareFile = "hardware.csv";
constexpr const char* kDatacentersFile = "datacenters.csv";
constexpr const char* kRegionsFile = "regions.csv";
constexpr const char* kHourlyFile = "regions_hourly.csv";

const std::vector<std::string> kHardwareColumns{"id", "name", "year", "kind", "avg_system_power_watts"};
const std::vector<std::string> kDatacenterColumns{"id", "name", "region_id", "pue"};
const std::vector<std::string> kRegionColumns{"region_id", "name", "annual_avg_intensity_tco2e_per_mwh"};
const std::vector<std::string> kHourlyColumns{"region_id", "hour", "cfe_percent", "intensity_tco2e_per_mwh"};

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw NotFoundError("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Parsed table with a column-name lookup. Column order is free; every required
// column must appear once and nothing outside required + optional is accepted.
class Table {
public:
    Table(const fs::path& path, const std::vector<std::string>& required, const std::vector<std::string>& optional = {})
        : name_(path.filename().string())
    {
        auto rows = csv::parse(read_file(path), name_);
        if (rows.empty()) {
            throw ParseError(name_, 1, "missing header row");
        }
        const auto& header = rows.front();
        for (std::size_t i = 0; i < header.fields.size(); ++i) {
            const auto& column = header.fields[i];
            const bool known = std::find(required.begin(), required.end(), column) != required.end()
                               || std::find(optional.begin(), optional.end(), column) != optional.end();
            if (!known) {
                throw ParseError(name_, header.line, "unknown column '" + column + "'");
            }
            if (index_.contains(column)) {
                throw ParseError(name_, header.line, "repeated column '" + column + "'");
            }
            index_[column] = i;
        }
        for (const auto& column : required) {
            if (!index_.contains(column)) {
                throw ParseError(name_, header.line, "missing column '" + column + "'");
            }
        }
        width_ = header.fields.size();
        rows_.assign(std::make_move_iterator(rows.begin() + 1), std::make_move_iterator(rows.end()));
        for (const auto& row : rows_) {
            if (row.fields.size() != width_) {
                throw ParseError(name_, row.line,
                                 "expected " + std::to_string(width_) + " fields, got " + std::to_string(row.fields.size()));
            }
        }
    }

    const std::vector<csv::Row>& rows() const { return rows_; }
    const std::string& name() const { return name_; }
    bool has(const std::string& column) const { return index_.contains(column); }

    const std::string& text(const csv::Row& row, const std::string& column) const
    {
        return row.fields[index_.at(column)];
    }

    const std::string& nonempty(const csv::Row& row, const std::string& column) const
    {
        const auto& value = text(row, column);
        if (value.empty()) {
            throw ParseError(name_, row.line, "empty " + column);
        }
        return value;
    }

    double number(const csv::Row& row, const std::string& column) const
    {
        auto value = csv::to_double(text(row, column));
        if (!value) {
            throw ParseError(name_, row.line, column + " is not a number: '" + text(row, column) + "'");
        }
        return *value;
    }

    std::optional<double> optional_number(const csv::Row& row, const std::string& column) const
    {
        if (text(row, column).empty()) {
            return std::nullopt;
        }
        return number(row, column);
    }

    long long integer(const csv::Row& row, const std::string& column) const
    {
        auto value = csv::to_integer(text(row, column));
        if (!value) {
            throw ParseError(name_, row.line, column + " is not an integer: '" + text(row, column) + "'");
        }
        return *value;
    }

private:
    std::string name_;
    std::map<std::string, std::size_t> index_;
    std::size_t width_ = 0;
    std::vector<csv::Row> rows_;
};

void load_hardware(const fs::path& dir, CatalogBundle& bundle)
{
    Table table(dir / kHardwareFile, kHardwareColumns, {"notes"});
    for (const auto& row : table.rows()) {
        HardwareProfile hw;
        hw.id = table.nonempty(row, "id");
        hw.name = table.text(row, "name");
        hw.year = static_cast<int>(table.integer(row, "year"));
        auto kind = parse_processor_kind(table.text(row, "kind"));
        if (!kind) {
            throw ParseError(table.name(), row.line, "kind must be gpu, tpu or cpu");
        }
        hw.kind = *kind;
        hw.avg_system_power_watts = table.number(row, "avg_system_power_watts");
        if (table.has("notes")) {
            hw.notes = table.text(row, "notes");
        }
        if (auto problem = check(hw); !problem.empty()) {
            throw ParseError(table.name(), row.line, problem);
        }
        if (!bundle.hardware.emplace(hw.id, hw).second) {
            throw DuplicateError("hardware", hw.id, table.name() + ":" + std::to_string(row.line));
        }
    }
}

void load_regions(const fs::path& dir, CatalogBundle& bundle)
{
    Table table(dir / kRegionsFile, kRegionColumns);
    for (const auto& row : table.rows()) {
        RegionIntensity region;
        region.region_id = table.nonempty(row, "region_id");
        region.name = table.text(row, "name");
        region.annual_avg_intensity = table.number(row, "annual_avg_intensity_tco2e_per_mwh");
        if (auto problem = check(region); !problem.empty()) {
            throw ParseError(table.name(), row.line, problem);
        }
        if (!bundle.regions.emplace(region.region_id, region).second) {
            throw DuplicateError("region", region.region_id, table.name() + ":" + std::to_string(row.line));
        }
    }
}

void load_hourly(const fs::path& dir, CatalogBundle& bundle)
{
    const auto path = dir / kHourlyFile;
    if (!fs::exists(path)) {
        return;
    }
    Table table(path, kHourlyColumns);

    struct Pending {
        std::size_t first_line = 0;
        DailyProfile profile{};
        std::array<bool, 24> seen{};
        int count = 0;
    };
    std::map<std::string, Pending> pending;

    for (const auto& row : table.rows()) {
        const auto& region_id = table.nonempty(row, "region_id");
        if (!bundle.regions.contains(region_id)) {
            throw ReferenceError("region", region_id);
        }
        const auto hour = table.integer(row, "hour");
        if (hour < 0 || hour > 23) {
            throw ParseError(table.name(), row.line, "hour must be within 0..23");
        }
        HourlyEntry entry;
        entry.hour = static_cast<int>(hour);
        entry.cfe_percent = table.optional_number(row, "cfe_percent");
        entry.intensity = table.optional_number(row, "intensity_tco2e_per_mwh");
        if (auto problem = check(entry); !problem.empty()) {
            throw ParseError(table.name(), row.line, problem);
        }

        auto& slot = pending[region_id];
        if (slot.count == 0) {
            slot.first_line = row.line;
        }
        if (slot.seen[entry.hour]) {
            throw DuplicateError("hour", region_id + "@" + std::to_string(entry.hour),
                                 table.name() + ":" + std::to_string(row.line));
        }
        slot.seen[entry.hour] = true;
        slot.profile[entry.hour] = entry;
        ++slot.count;
    }

    for (auto& [region_id, slot] : pending) {
        if (slot.count != 24) {
            throw ParseError(table.name(), slot.first_line,
                             "region '" + region_id + "' has " + std::to_string(slot.count) + " hourly rows, expected 24");
        }
        bundle.regions.at(region_id).hourly = slot.profile;
    }
}

void load_datacenters(const fs::path& dir, CatalogBundle& bundle)
{
    Table table(dir / kDatacentersFile, kDatacenterColumns);
    for (const auto& row : table.rows()) {
        DatacenterProfile dc;
        dc.id = table.nonempty(row, "id");
        dc.name = table.text(row, "name");
        dc.region_id = table.nonempty(row, "region_id");
        dc.pue = table.number(row, "pue");
        if (auto problem = check(dc); !problem.empty()) {
            throw ParseError(table.name(), row.line, problem);
        }
        if (!bundle.regions.contains(dc.region_id)) {
            throw ReferenceError("region", dc.region_id);
        }
        if (!bundle.datacenters.emplace(dc.id, dc).second) {
            throw DuplicateError("datacenter", dc.id, table.name() + ":" + std::to_string(row.line));
        }
    }
}

}  // namespace

CatalogBundle load_catalog(const fs::path& dir)
{
    if (!fs::is_directory(dir)) {
        throw NotFoundError("catalog directory not found: " + dir.string());
    }
    for (const char* required : {kHardwareFile, kDatacentersFile, kRegionsFile}) {
        if (!fs::exists(dir / required)) {
            throw NotFoundError("catalog file not found: " + (dir / required).string());
        }
    }

    CatalogBundle bundle;
    load_hardware(dir, bundle);
    load_regions(dir, bundle);
    load_hourly(dir, bundle);
    load_datacenters(dir, bundle);
    return bundle;
}

// ---------------------------------------------------------------------------
// CSV saving

namespace {

void write_file(const fs::path& path, const std::string& contents)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw WriteError("cannot open " + path.string() + " for writing");
    }
    out << contents;
    out.flush();
    if (!out) {
        throw WriteError("failed writing " + path.string());
    }
}

std::string optional_text(const std::optional<double>& value)
{
    return value ? csv::format_double(*value) : std::string();
}

}  // namespace

void save_catalog(const CatalogBundle& bundle, const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw WriteError("cannot create catalog directory " + dir.string() + (ec ? ": " + ec.message() : ""));
    }

    // The notes column is optional on load; only emit it when it carries data.
    const bool with_notes = std::any_of(bundle.hardware.begin(), bundle.hardware.end(),
                                        [](const auto& entry) { return !entry.second.notes.empty(); });
    auto hardware_columns = kHardwareColumns;
    if (with_notes) {
        hardware_columns.emplace_back("notes");
    }

    std::string hardware = csv::join(hardware_columns) + "\n";
    for (const auto& [id, hw] : bundle.hardware) {
        std::vector<std::string> fields{hw.id, hw.name, std::to_string(hw.year), std::string(to_string(hw.kind)),
                                        csv::format_double(hw.avg_system_power_watts)};
        if (with_notes) {
            fields.push_back(hw.notes);
        }
        hardware += csv::join(fields) + "\n";
    }

    std::string datacenters = csv::join(kDatacenterColumns) + "\n";
    for (const auto& [id, dc] : bundle.datacenters) {
        datacenters += csv::join({dc.id, dc.name, dc.region_id, csv::format_double(dc.pue)}) + "\n";
    }

    std::string regions = csv::join(kRegionColumns) + "\n";
    std::string hourly = csv::join(kHourlyColumns) + "\n";
    for (const auto& [id, region] : bundle.regions) {
        regions += csv::join({region.region_id, region.name, csv::format_double(region.annual_avg_intensity)}) + "\n";
        if (region.hourly) {
            for (const auto& entry : *region.hourly) {
                hourly += csv::join({region.region_id, std::to_string(entry.hour), optional_text(entry.cfe_percent),
                                     optional_text(entry.intensity)})
                          + "\n";
            }
        }
    }

    write_file(dir / kHardwareFile, hardware);
    write_file(dir / kDatacentersFile, datacenters);
    write_file(dir / kRegionsFile, regions);
    write_file(dir / kHourlyFile, hourly);
}

// ---------------------------------------------------------------------------
// Built-in reference data

double backsolved_tpu2_watts()
{
    constexpr double emitted_tco2e = 0.0024;
    constexpr double intensity = 0.088;
    constexpr double pue = 1.11;
    constexpr double processor_hours = 120.0;
    return emitted_tco2e / intensity / pue / processor_hours * 1e6;
}

namespace {

DailyProfile flat_profile(std::optional<double> cfe_percent, std::optional<double> intensity)
{
    DailyProfile profile{};
    for (int h = 0; h < 24; ++h) {
        profile[h] = HourlyEntry{h, cfe_percent, intensity};
    }
    return profile;
}

// Clean from 06:00 through 19:59, dirty overnight.
DailyProfile chile_like_profile()
{
    DailyProfile profile{};
    for (int h = 0; h < 24; ++h) {
        const bool daytime = h >= 6 && h <= 19;
        profile[h] = HourlyEntry{h, daytime ? 90.0 : 20.0, daytime ? 0.05 : 0.50};
    }
    return profile;
}

CatalogBundle build_seed()
{
    CatalogBundle bundle;

    constexpr double v100_watts = 330.0;
    constexpr double msft_pue = 1.10;
    constexpr double google_oklahoma_pue = 1.11;
    constexpr double avg2017_intensity = 0.488;
    constexpr double map_factor_2021 = 747.0 / 83.0;

    auto add_hw = [&](HardwareProfile hw) { bundle.hardware.emplace(hw.id, std::move(hw)); };
    add_hw({"p100", "NVIDIA P100", 2016, ProcessorKind::gpu, 300.0, "graphics-oriented GPU, 2017 baseline"});
    add_hw({"v100", "NVIDIA V100", 2017, ProcessorKind::gpu, v100_watts, "ML-optimized GPU"});
    add_hw({"tpu2", "Google TPUv2", 2017, ProcessorKind::tpu, backsolved_tpu2_watts(),
            "back-solved: 2.4 kg over 120 processor-hours at PUE 1.11 and 0.088 t/MWh"});
    // Equal facility power per accelerator-year with V100 in the PUE 1.10 cloud,
    // so energy tracks accelerator-years between the two.
    add_hw({"tpu4", "Google TPUv4", 2021, ProcessorKind::tpu, v100_watts * msft_pue / google_oklahoma_pue,
            "derived: same facility power per accelerator as V100 at PUE 1.10"});

    auto add_region = [&](RegionIntensity region) { bundle.regions.emplace(region.region_id, std::move(region)); };
    add_region({"avg2017", "Average datacenter energy mix (2017)", avg2017_intensity, std::nullopt});
    add_region({"avg2020", "Average datacenter energy mix (2020)", 0.429, flat_profile(std::nullopt, 0.429)});
    add_region({"oklahoma", "Oklahoma", 0.088, flat_profile(96.0, 0.088)});
    add_region({"iowa", "Iowa", avg2017_intensity / map_factor_2021,
                flat_profile(93.0, avg2017_intensity / map_factor_2021)});
    // No published intensity; annual value is the average US mix, hourly has %CFE only.
    add_region({"nevada", "Nevada", 0.429, flat_profile(19.0, std::nullopt)});
    add_region({"chile-synthetic", "Chile-like synthetic day/night curve", (14 * 0.05 + 10 * 0.50) / 24.0,
                chile_like_profile()});

    auto add_dc = [&](DatacenterProfile dc) { bundle.datacenters.emplace(dc.id, std::move(dc)); };
    add_dc({"avg2017", "Average on-premise datacenter (2017)", "avg2017", 1.60});
    add_dc({"avg2020", "Average datacenter (2020)", "avg2020", 1.58});
    add_dc({"google-cloud", "Google cloud datacenter", "iowa", 1.10});
    add_dc({"google-oklahoma", "Google Oklahoma datacenter", "oklahoma", google_oklahoma_pue});
    add_dc({"msft-cloud", "Microsoft cloud datacenter, average US mix", "avg2020", msft_pue});
    add_dc({"google-chile-synthetic", "Google cloud, Chile-like curve", "chile-synthetic", 1.10});

    bundle.validate();
    return bundle;
}

}  // namespace

const CatalogBundle& seed_paper_defaults()
{
    static const CatalogBundle seed = build_seed();
    return seed;
}

}  // namespace carbonledger
