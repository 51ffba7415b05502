// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <algorithm>

#include "carbonledger/catalog.hpp"
#include "carbonledger/error.hpp"
#include "carbonledger/estimator.hpp"
#include "support.hpp"

using namespace carbonledger;
using testing::rel_close;

namespace {

HardwareProfile gpu(double watts) { return {"hw", "hw", 2020, ProcessorKind::gpu, watts, ""}; }
DatacenterProfile dc(double pue) { return {"dc", "dc", "r", pue}; }

RegionIntensity region_with(const std::array<double, 24>& intensity)
{
    RegionIntensity region{"r", "r", 0.0, std::nullopt};
    DailyProfile profile{};
    double sum = 0.0;
    for (int h = 0; h < 24; ++h) {
        profile[h] = HourlyEntry{h, std::nullopt, intensity[h]};
        sum += intensity[h];
    }
    region.annual_avg_intensity = sum / 24.0;
    region.hourly = profile;
    return region;
}

std::array<double, 24> chile_curve()
{
    std::array<double, 24> curve{};
    for (int h = 0; h < 24; ++h) {
        curve[h] = (h >= 6 && h <= 19) ? 0.05 : 0.50;
    }
    return curve;
}

}  // namespace

TEST_CASE("energy for 10,000 processors over a day at 300 W")
{
    const auto e = estimate_energy({"w", 10000, 24.0, "hw"}, gpu(300.0), dc(1.10));
    CHECK(rel_close(e.it_mwh, 72.0));
    CHECK(rel_close(e.total_mwh, 79.2));
    CHECK(e.pue_used == 1.10);
}

TEST_CASE("PUE of one leaves total equal to IT energy")
{
    const auto e = estimate_energy({"w", 3, 7.5, "hw"}, gpu(123.0), dc(1.0));
    CHECK(e.total_mwh == e.it_mwh);
}

TEST_CASE("tiny durations stay positive")
{
    const auto e = estimate_energy({"w", 1, 0.0001, "hw"}, gpu(300.0), dc(1.58));
    CHECK(e.it_mwh > 0.0);
    CHECK(rel_close(e.it_mwh, 0.0001 * 300.0 * 1e-6));
}

TEST_CASE("energy grows with PUE")
{
    double previous = 0.0;
    for (double pue = 1.0; pue <= 2.0; pue += 0.05) {
        const auto e = estimate_energy({"w", 8, 10.0, "hw"}, gpu(250.0), dc(pue));
        CHECK(e.total_mwh > previous);
        previous = e.total_mwh;
    }
}

TEST_CASE("energy rejects invalid inputs")
{
    CHECK_THROWS_AS(estimate_energy({"w", 0, 1.0, "hw"}, gpu(300.0), dc(1.1)), ValidationError);
    CHECK_THROWS_AS(estimate_energy({"w", 1, 1.0, "hw"}, gpu(0.0), dc(1.1)), ValidationError);
    CHECK_THROWS_AS(estimate_energy({"w", 1, 1.0, "hw"}, gpu(300.0), dc(0.9)), ValidationError);
}

TEST_CASE("flat emissions multiply energy by the annual intensity")
{
    const auto& avg2020 = seed_paper_defaults().region_at("avg2020");
    const EnergyEstimate hundred{100.0 / 1.58, 100.0, 1.58};
    const auto e = estimate_emissions_flat(hundred, avg2020);
    CHECK(rel_close(e.gross_tco2e, 42.9));
    CHECK(e.effective_intensity == 0.429);
    CHECK(e.method == EmissionsMethod::flat);
    CHECK_FALSE(e.start_hour.has_value());

    const auto zero = estimate_emissions_flat(EnergyEstimate{0.0, 0.0, 1.58}, avg2020);
    CHECK(zero.gross_tco2e == 0.0);
}

TEST_CASE("one TPUv2 for 120 h in Oklahoma emits about 2.4 kg")
{
    const auto& seed = seed_paper_defaults();
    const auto energy =
        estimate_energy({"et", 1, 120.0, "tpu2"}, seed.hardware_at("tpu2"), seed.datacenter_at("google-oklahoma"));
    const auto e = estimate_emissions_flat(energy, seed.region_at("oklahoma"));
    CHECK(rel_close(e.gross_tco2e, 0.0024, 1e-9));
}

TEST_CASE("a constant curve reproduces the flat estimate")
{
    std::array<double, 24> flat{};
    flat.fill(0.429);
    const auto region = region_with(flat);
    const EnergyEstimate energy{10.0, 15.8, 1.58};
    for (int start = 0; start < 24; ++start) {
        const auto hourly = estimate_emissions_hourly(energy, region, start, 37.0);
        CHECK(rel_close(hourly.gross_tco2e, energy.total_mwh * 0.429));
        CHECK(hourly.start_hour == start);
        CHECK(hourly.method == EmissionsMethod::hourly);
    }
}

TEST_CASE("a full day uses the mean of the curve")
{
    const auto curve = chile_curve();
    const auto region = region_with(curve);
    double mean = 0.0;
    for (double v : curve) mean += v / 24.0;
    const EnergyEstimate energy{1.0, 1.1, 1.1};
    for (int start : {0, 5, 13, 23}) {
        CHECK(rel_close(estimate_emissions_hourly(energy, region, start, 24.0).gross_tco2e, 1.1 * mean));
    }
}

TEST_CASE("daytime start on the Chile-like curve emits ten times less")
{
    const auto region = region_with(chile_curve());
    const EnergyEstimate energy{1.0, 1.0, 1.0};
    const double day = estimate_emissions_hourly(energy, region, 6, 10.0).gross_tco2e;
    const double night = estimate_emissions_hourly(energy, region, 20, 10.0).gross_tco2e;
    CHECK(rel_close(night / day, 10.0));
}

TEST_CASE("hourly emissions stay within the curve bounds and tile by day")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> value(0.0, 1.0);
    std::uniform_real_distribution<double> duration(0.25, 72.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::array<double, 24> curve{};
        for (auto& v : curve) v = value(rng);
        const auto region = region_with(curve);
        const auto [lo, hi] = std::minmax_element(curve.begin(), curve.end());
        const int start = static_cast<int>(rng() % 24);
        const EnergyEstimate energy{2.0, 3.0, 1.5};
        const auto e = estimate_emissions_hourly(energy, region, start, duration(rng));
        CHECK(e.effective_intensity >= *lo * (1 - 1e-12));
        CHECK(e.effective_intensity <= *hi * (1 + 1e-12));

        const EnergyEstimate doubled{4.0, 6.0, 1.5};
        const double one_day = estimate_emissions_hourly(energy, region, start, 24.0).gross_tco2e;
        const double two_days = estimate_emissions_hourly(doubled, region, start, 48.0).gross_tco2e;
        CHECK(rel_close(two_days, 2.0 * one_day));
    }
}

TEST_CASE("fractional last hour is weighted pro rata")
{
    std::array<double, 24> curve{};
    curve.fill(0.0);
    curve[3] = 1.0;
    curve[4] = 2.0;
    // 1.5 h from 03:00: (1 * 1.0 + 0.5 * 2.0) / 1.5
    CHECK(rel_close(profile_window_mean(curve, 3, 1.5), 2.0 / 1.5));
    // wraps past midnight
    curve.fill(0.0);
    curve[23] = 4.0;
    curve[0] = 2.0;
    CHECK(rel_close(profile_window_mean(curve, 23, 2.0), 3.0));
    CHECK_THROWS_AS(profile_window_mean(curve, 24, 1.0), ValidationError);
    CHECK_THROWS_AS(profile_window_mean(curve, 0, 0.0), ValidationError);
}

TEST_CASE("missing hourly data is reported with the region")
{
    const auto& seed = seed_paper_defaults();
    const EnergyEstimate energy{1.0, 1.0, 1.0};
    try {
        estimate_emissions_hourly(energy, seed.region_at("avg2017"), 0, 5.0);
        FAIL("expected MissingHourlyDataError");
    } catch (const MissingHourlyDataError& e) {
        CHECK(e.region_id() == "avg2017");
    }
    CHECK_THROWS_AS(estimate_emissions_hourly(energy, seed.region_at("nevada"), 0, 5.0), MissingHourlyDataError);
    CHECK_NOTHROW(hourly_cfe(seed.region_at("nevada")));
    CHECK_THROWS_AS(hourly_cfe(seed.region_at("avg2020")), MissingHourlyDataError);
}

TEST_CASE("method names round trip")
{
    for (auto m : {EmissionsMethod::flat, EmissionsMethod::hourly}) {
        CHECK(parse_emissions_method(to_string(m)) == m);
    }
    CHECK_FALSE(parse_emissions_method("daily").has_value());
}
