// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include "carbonledger/catalog.hpp"
#include "carbonledger/error.hpp"
#include "csv.hpp"
#include "support.hpp"

using namespace carbonledger;
using testing::TempDir;

namespace {

const char* kHardware = "id,name,year,kind,avg_system_power_watts\np100,NVIDIA P100,2016,gpu,300\n";
const char* kDatacenters = "id,name,region_id,pue\ndc1,Test DC,r1,1.2\n";
const char* kRegions = "region_id,name,annual_avg_intensity_tco2e_per_mwh\nr1,Region one,0.4\n";

void write_minimal(const TempDir& dir)
{
    dir.write("hardware.csv", kHardware);
    dir.write("datacenters.csv", kDatacenters);
    dir.write("regions.csv", kRegions);
}

std::string hourly_rows(const std::string& region, int count, const std::string& intensity = "0.3")
{
    std::string text = "region_id,hour,cfe_percent,intensity_tco2e_per_mwh\n";
    for (int h = 0; h < count; ++h) {
        text += region + "," + std::to_string(h) + ",50," + intensity + "\n";
    }
    return text;
}

}  // namespace

TEST_CASE("a hardware row maps field for field")
{
    TempDir dir;
    write_minimal(dir);
    const auto bundle = load_catalog(dir.path());
    const auto& hw = bundle.hardware_at("p100");
    CHECK(hw.id == "p100");
    CHECK(hw.name == "NVIDIA P100");
    CHECK(hw.year == 2016);
    CHECK(hw.kind == ProcessorKind::gpu);
    CHECK(hw.avg_system_power_watts == 300.0);
    CHECK(bundle.datacenter_at("dc1").pue == 1.2);
    CHECK(bundle.region_at("r1").annual_avg_intensity == 0.4);
    CHECK_FALSE(bundle.region_at("r1").hourly.has_value());
}

TEST_CASE("columns may appear in any order and CRLF is accepted")
{
    TempDir dir;
    write_minimal(dir);
    dir.write("hardware.csv", "kind,id,avg_system_power_watts,year,name\r\ngpu,v100,330,2017,\"NVIDIA V100, SXM2\"\r\n");
    const auto bundle = load_catalog(dir.path());
    CHECK(bundle.hardware_at("v100").name == "NVIDIA V100, SXM2");
}

TEST_CASE("PUE below 1 is rejected with file and line")
{
    TempDir dir;
    write_minimal(dir);
    dir.write("datacenters.csv", "id,name,region_id,pue\ndc1,Test DC,r1,0.9\n");
    try {
        load_catalog(dir.path());
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.file() == "datacenters.csv");
        CHECK(e.line() == 2);
        CHECK(e.code() == "parse_error");
    }
}

TEST_CASE("hourly profiles need exactly 24 rows")
{
    TempDir dir;
    write_minimal(dir);
    dir.write("regions_hourly.csv", hourly_rows("r1", 23));
    CHECK_THROWS_AS(load_catalog(dir.path()), ParseError);

    dir.write("regions_hourly.csv", hourly_rows("r1", 24));
    const auto bundle = load_catalog(dir.path());
    REQUIRE(bundle.region_at("r1").hourly.has_value());
    CHECK((*bundle.region_at("r1").hourly)[23].intensity == 0.3);
}

TEST_CASE("hourly rows may omit intensity but not both fields")
{
    TempDir dir;
    write_minimal(dir);
    dir.write("regions_hourly.csv", hourly_rows("r1", 24, ""));
    const auto bundle = load_catalog(dir.path());
    CHECK_FALSE((*bundle.region_at("r1").hourly)[0].intensity.has_value());
    CHECK((*bundle.region_at("r1").hourly)[0].cfe_percent == 50.0);

    std::string text = "region_id,hour,cfe_percent,intensity_tco2e_per_mwh\n";
    for (int h = 0; h < 24; ++h) {
        text += "r1," + std::to_string(h) + (h == 7 ? ",," : ",50,0.1") + "\n";
    }
    dir.write("regions_hourly.csv", text);
    CHECK_THROWS_AS(load_catalog(dir.path()), ParseError);
}

TEST_CASE("typed errors for malformed catalogs")
{
    TempDir dir;
    SUBCASE("missing directory")
    {
        CHECK_THROWS_AS(load_catalog(dir.path() / "absent"), NotFoundError);
    }
    SUBCASE("missing file")
    {
        dir.write("hardware.csv", kHardware);
        dir.write("regions.csv", kRegions);
        CHECK_THROWS_AS(load_catalog(dir.path()), NotFoundError);
    }
    SUBCASE("dangling datacenter region")
    {
        write_minimal(dir);
        dir.write("datacenters.csv", "id,name,region_id,pue\ndc1,Test DC,mars,1.2\n");
        try {
            load_catalog(dir.path());
            FAIL("expected ReferenceError");
        } catch (const ReferenceError& e) {
            CHECK(e.kind() == "region");
            CHECK(e.key() == "mars");
        }
    }
    SUBCASE("duplicate hardware id")
    {
        write_minimal(dir);
        dir.write("hardware.csv", std::string(kHardware) + "p100,Again,2016,gpu,250\n");
        CHECK_THROWS_AS(load_catalog(dir.path()), DuplicateError);
    }
    SUBCASE("duplicate hour")
    {
        write_minimal(dir);
        dir.write("regions_hourly.csv", hourly_rows("r1", 24) + "r1,5,50,0.3\n");
        CHECK_THROWS_AS(load_catalog(dir.path()), DuplicateError);
    }
    SUBCASE("hourly row for an unknown region")
    {
        write_minimal(dir);
        dir.write("regions_hourly.csv", hourly_rows("r2", 24));
        CHECK_THROWS_AS(load_catalog(dir.path()), ReferenceError);
    }
    SUBCASE("unknown column")
    {
        write_minimal(dir);
        dir.write("regions.csv", "region_id,name,annual_avg_intensity_tco2e_per_mwh,kg\nr1,Region one,0.4,1\n");
        CHECK_THROWS_AS(load_catalog(dir.path()), ParseError);
    }
    SUBCASE("non-numeric power")
    {
        write_minimal(dir);
        dir.write("hardware.csv", "id,name,year,kind,avg_system_power_watts\np100,P100,2016,gpu,300W\n");
        CHECK_THROWS_AS(load_catalog(dir.path()), ParseError);
    }
    SUBCASE("unknown processor kind")
    {
        write_minimal(dir);
        dir.write("hardware.csv", "id,name,year,kind,avg_system_power_watts\np100,P100,2016,fpga,300\n");
        CHECK_THROWS_AS(load_catalog(dir.path()), ParseError);
    }
    SUBCASE("negative intensity")
    {
        write_minimal(dir);
        dir.write("regions.csv", "region_id,name,annual_avg_intensity_tco2e_per_mwh\nr1,Region one,-0.1\n");
        CHECK_THROWS_AS(load_catalog(dir.path()), ParseError);
    }
}

TEST_CASE("seeded defaults hold the published constants")
{
    const auto& seed = seed_paper_defaults();
    CHECK(seed.region_at("oklahoma").annual_avg_intensity == 0.088);
    CHECK((*seed.region_at("oklahoma").hourly)[0].cfe_percent == 96.0);
    CHECK((*seed.region_at("iowa").hourly)[12].cfe_percent == 93.0);
    CHECK((*seed.region_at("nevada").hourly)[12].cfe_percent == 19.0);
    CHECK(seed.region_at("avg2020").annual_avg_intensity == 0.429);
    CHECK(seed.region_at("avg2017").annual_avg_intensity == 0.488);
    CHECK(seed.datacenter_at("avg2020").pue == 1.58);
    CHECK(seed.datacenter_at("avg2017").pue == 1.60);
    CHECK(seed.datacenter_at("google-cloud").pue == 1.10);
    CHECK(seed.hardware_at("p100").avg_system_power_watts > 0.0);
    CHECK(seed.hardware_at("v100").avg_system_power_watts > 0.0);
    CHECK(seed.hardware_at("tpu4").avg_system_power_watts > 0.0);
    // 2.4 kg over 120 processor-hours at PUE 1.11 and 0.088 t/MWh
    const double back_solved = 0.0024 / 0.088 / 1.11 / 120.0 * 1e6;
    CHECK(testing::rel_close(seed.hardware_at("tpu2").avg_system_power_watts, back_solved));
    CHECK(testing::rel_close(backsolved_tpu2_watts(), back_solved));
    CHECK(std::abs(back_solved - 205.0) < 1.0);
    CHECK_NOTHROW(seed.validate());
}

TEST_CASE("save then load reproduces the bundle")
{
    TempDir dir;
    save_catalog(seed_paper_defaults(), dir.path() / "seed");
    CHECK(load_catalog(dir.path() / "seed") == seed_paper_defaults());
}

TEST_CASE("round trip holds for random bundles")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        CatalogBundle bundle;
        for (int r = 0; r < 3; ++r) {
            RegionIntensity region{"r" + std::to_string(r), "Region, \"" + std::to_string(r) + "\"", unit(rng), std::nullopt};
            if (r != 0) {
                DailyProfile profile{};
                for (int h = 0; h < 24; ++h) {
                    profile[h].hour = h;
                    if (r == 1 || h % 2 == 0) profile[h].cfe_percent = 100.0 * unit(rng);
                    if (r == 2 || h % 2 == 1) profile[h].intensity = unit(rng) / 3.0;
                }
                region.hourly = profile;
            }
            bundle.regions[region.region_id] = region;
            DatacenterProfile dc{"dc" + std::to_string(r), "DC " + std::to_string(r), region.region_id, 1.0 + unit(rng)};
            bundle.datacenters[dc.id] = dc;
        }
        HardwareProfile hw{"hw", "Accelerator", 2000 + trial, ProcessorKind::cpu, 1.0 + 999.0 * unit(rng),
                           trial % 2 ? "note, with comma" : ""};
        bundle.hardware[hw.id] = hw;

        TempDir dir;
        save_catalog(bundle, dir.path());
        CHECK(load_catalog(dir.path()) == bundle);
    }
}

TEST_CASE("an empty bundle saves as header-only files")
{
    TempDir dir;
    save_catalog(CatalogBundle{}, dir.path());
    CHECK(testing::read_file(dir.path() / "hardware.csv") == "id,name,year,kind,avg_system_power_watts\n");
    CHECK(testing::read_file(dir.path() / "datacenters.csv") == "id,name,region_id,pue\n");
    CHECK(load_catalog(dir.path()) == CatalogBundle{});
}

TEST_CASE("saving below a regular file fails with WriteError")
{
    TempDir dir;
    dir.write("blocker", "x");
    CHECK_THROWS_AS(save_catalog(seed_paper_defaults(), dir.path() / "blocker" / "catalog"), WriteError);
}

TEST_CASE("csv parsing handles quotes, BOM and blank lines")
{
    const auto rows = csv::parse("\xEF\xBB\xBF" "a,b\n\n\"x,1\",\"he said \"\"hi\"\"\"\r\n", "t.csv");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].fields == std::vector<std::string>{"a", "b"});
    CHECK(rows[1].line == 3);
    CHECK(rows[1].fields == std::vector<std::string>{"x,1", "he said \"hi\""});
    CHECK_THROWS_AS(csv::parse("a,\"open\n", "t.csv"), ParseError);
    CHECK(csv::escape("plain") == "plain");
    CHECK(csv::escape("a\"b") == "\"a\"\"b\"");
    CHECK(csv::to_double(" 1.5 ") == 1.5);
    CHECK_FALSE(csv::to_double("nan").has_value());
    CHECK_FALSE(csv::to_double("1.5x").has_value());
    CHECK(csv::to_integer("2017") == 2017);
    CHECK(csv::format_double(0.1) == "0.1");
}

TEST_CASE("workload validation")
{
    CHECK_NOTHROW(validate(WorkloadSpec{"ok", 1, 0.5, "p100"}));
    CHECK_THROWS_AS(validate(WorkloadSpec{"bad", 0, 1.0, "p100"}), ValidationError);
    CHECK_THROWS_AS(validate(WorkloadSpec{"bad", 1, 0.0, "p100"}), ValidationError);
    CHECK_THROWS_AS(validate(WorkloadSpec{"bad", 1, 1.0, ""}), ValidationError);
    CHECK(WorkloadSpec{"w", 10000, 8760.0, "v100"}.accelerator_years() == 10000.0);
}
