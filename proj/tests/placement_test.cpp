// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include "carbonledger/catalog.hpp"
#include "carbonledger/error.hpp"
#include "carbonledger/placement.hpp"
#include "carbonledger/presets.hpp"
#include "support.hpp"

using namespace carbonledger;
using testing::rel_close;

namespace {

RegionIntensity curve_region(const std::string& id, const std::array<double, 24>& intensity,
                             const std::array<double, 24>& cfe)
{
    RegionIntensity region{id, id, 0.0, DailyProfile{}};
    for (int h = 0; h < 24; ++h) {
        (*region.hourly)[h] = HourlyEntry{h, cfe[h], intensity[h]};
        region.annual_avg_intensity += intensity[h] / 24.0;
    }
    return region;
}

std::array<double, 24> constant(double v)
{
    std::array<double, 24> a{};
    a.fill(v);
    return a;
}

}  // namespace

TEST_CASE("Chile-like curve picks the morning for a 10 h job")
{
    const auto& region = seed_paper_defaults().region_at("chile-synthetic");
    const auto choice = best_start_hour(region, 10.0, PlacementObjective::max_cfe);
    CHECK(choice.hour == 6);
    CHECK(rel_close(choice.objective_value, 90.0));

    const auto cleanest = best_start_hour(region, 10.0, PlacementObjective::min_intensity);
    CHECK(cleanest.hour == 6);
    CHECK(rel_close(cleanest.objective_value, 0.05));
}

TEST_CASE("ties resolve to the earliest allowed hour")
{
    const auto flat = curve_region("flat", constant(0.3), constant(50.0));
    CHECK(best_start_hour(flat, 5.0, PlacementObjective::min_intensity).hour == 0);
    CHECK(best_start_hour(flat, 5.0, PlacementObjective::max_cfe, StartWindow::range(9, 17)).hour == 9);
    // the earliest hour of a wrapped window is still the smallest number
    CHECK(best_start_hour(flat, 5.0, PlacementObjective::min_intensity, StartWindow::range(22, 3)).hour == 0);

    std::array<double, 24> varied{};
    for (int h = 0; h < 24; ++h) varied[h] = 0.1 + 0.03 * ((h * 7) % 11);
    const auto region = curve_region("v", varied, constant(10.0));
    CHECK(best_start_hour(region, 24.0, PlacementObjective::min_intensity).hour == 0);
    CHECK(best_start_hour(region, 48.0, PlacementObjective::min_intensity, StartWindow::hours({5, 17, 9})).hour == 5);
}

TEST_CASE("start windows")
{
    CHECK(StartWindow().allowed().size() == 24);
    CHECK(StartWindow::range(22, 2).allowed() == std::vector<int>{0, 1, 2, 22, 23});
    CHECK(StartWindow::range(4, 4).allowed() == std::vector<int>{4});
    CHECK(StartWindow::hours({3, 1, 3}).allowed() == std::vector<int>{1, 3});
    CHECK_THROWS_AS(StartWindow::hours({}), ValidationError);
    CHECK_THROWS_AS(StartWindow::hours({24}), ValidationError);
    CHECK_THROWS_AS(StartWindow::range(-1, 5), ValidationError);
}

TEST_CASE("Iowa outranks Nevada on carbon-free energy")
{
    const auto result = rank_regions(presets::placement("nevada-vs-iowa"), seed_paper_defaults());
    REQUIRE(result.ranking.size() == 2);
    CHECK(result.chosen().region_id == "iowa");
    CHECK(rel_close(result.ranking[0].objective_value, 93.0));
    CHECK(rel_close(result.ranking[1].objective_value, 19.0));
    CHECK_FALSE(result.ranking[0].gross_tco2e.has_value());
}

TEST_CASE("Oklahoma beats the average mix by the intensity ratio")
{
    const auto& seed = seed_paper_defaults();
    PlacementQuery query;
    query.workload = {"job", 1000, 1000.0 / 3.0, "p100"};  // 100 MWh of IT energy
    query.candidate_region_ids = {"avg2020", "oklahoma"};
    query.datacenter_id = "google-cloud";
    query.objective = PlacementObjective::min_intensity;
    const auto result = rank_regions(query, seed);
    CHECK(result.chosen().region_id == "oklahoma");
    REQUIRE(result.ranking[1].gross_tco2e.has_value());
    CHECK(rel_close(*result.ranking[1].gross_tco2e / *result.ranking[0].gross_tco2e, 0.429 / 0.088));
    CHECK(rel_close(*result.ranking[0].gross_tco2e, 100.0 * 1.10 * 0.088));
}

TEST_CASE("single candidates and ranking errors")
{
    const auto& seed = seed_paper_defaults();
    PlacementQuery query;
    query.workload = {"job", 4, 3.0, "tpu4"};
    query.candidate_region_ids = {"avg2020"};
    query.datacenter_id = "google-cloud";
    CHECK(rank_regions(query, seed).chosen().region_id == "avg2020");

    query.candidate_region_ids = {"oklahoma", "nevada"};
    try {
        rank_regions(query, seed);
        FAIL("expected MissingHourlyDataError");
    } catch (const MissingHourlyDataError& e) {
        CHECK(e.region_id() == "nevada");
    }
    query.candidate_region_ids = {"atlantis"};
    CHECK_THROWS_AS(rank_regions(query, seed), ReferenceError);
    query.candidate_region_ids = {};
    CHECK_THROWS_AS(rank_regions(query, seed), ValidationError);
}

TEST_CASE("equal objectives rank by region id")
{
    CatalogBundle catalog = seed_paper_defaults();
    catalog.regions["zeta"] = curve_region("zeta", constant(0.2), constant(60.0));
    catalog.regions["alpha"] = curve_region("alpha", constant(0.2), constant(60.0));
    PlacementQuery query;
    query.workload = {"job", 4, 3.0, "tpu4"};
    query.candidate_region_ids = {"zeta", "alpha"};
    query.datacenter_id = "google-cloud";
    for (auto objective : {PlacementObjective::min_intensity, PlacementObjective::max_cfe}) {
        query.objective = objective;
        const auto result = rank_regions(query, catalog);
        CHECK(result.ranking[0].region_id == "alpha");
        CHECK(result.ranking[1].region_id == "zeta");
    }
}

TEST_CASE("rankings are sorted by objective")
{
    CatalogBundle catalog = seed_paper_defaults();
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> value(0.0, 1.0);
    std::vector<std::string> ids;
    for (int r = 0; r < 8; ++r) {
        std::array<double, 24> intensity{}, cfe{};
        for (int h = 0; h < 24; ++h) {
            intensity[h] = value(rng);
            cfe[h] = 100.0 * value(rng);
        }
        ids.push_back("synthetic-" + std::to_string(r));
        catalog.regions[ids.back()] = curve_region(ids.back(), intensity, cfe);
    }
    PlacementQuery query;
    query.workload = {"job", 16, 7.5, "tpu4"};
    query.candidate_region_ids = ids;
    query.datacenter_id = "google-cloud";
    query.objective = PlacementObjective::min_intensity;
    auto result = rank_regions(query, catalog);
    for (std::size_t i = 1; i < result.ranking.size(); ++i) {
        CHECK(result.ranking[i - 1].objective_value <= result.ranking[i].objective_value);
    }
    query.objective = PlacementObjective::max_cfe;
    result = rank_regions(query, catalog);
    for (std::size_t i = 1; i < result.ranking.size(); ++i) {
        CHECK(result.ranking[i - 1].objective_value >= result.ranking[i].objective_value);
    }
}

TEST_CASE("objective names and tie threshold")
{
    CHECK(parse_placement_objective("max_cfe") == PlacementObjective::max_cfe);
    CHECK(to_string(PlacementObjective::min_intensity) == "min_intensity");
    CHECK_FALSE(parse_placement_objective("cheapest").has_value());
    CHECK(objective_tie(1.0, 1.0 + 1e-15));
    CHECK_FALSE(objective_tie(1.0, 1.0 + 1e-9));
}
