// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <thread>

#include "httplib.h"

#include "carbonledger/error.hpp"
#include "carbonledger/json_io.hpp"
#include "carbonledger/presets.hpp"
#include "carbonledger/service.hpp"
#include "support.hpp"

using namespace carbonledger;
using service::Router;

namespace {

std::shared_ptr<Router> seeded_router()
{
    return std::make_shared<Router>(std::make_shared<const CatalogBundle>(seed_paper_defaults()));
}

json body_of(const service::Response& r) { return json::parse(r.body); }

}  // namespace

TEST_CASE("health and catalog listing")
{
    const auto router = seeded_router();
    auto r = router->handle("GET", "/v1/health", "");
    CHECK(r.status == 200);
    CHECK(body_of(r) == json{{"status", "ok"}});

    r = router->handle("GET", "/v1/catalog/hardware", "");
    CHECK(r.status == 200);
    CHECK(body_of(r).size() == seed_paper_defaults().hardware.size());
    CHECK(body_of(r)[0].contains("avg_system_power_watts"));
    r = router->handle("GET", "/v1/catalog/regions", "");
    const auto regions = body_of(r);
    bool saw_hourly = false;
    for (const auto& region : regions) {
        saw_hourly = saw_hourly || !region["hourly"].is_null();
    }
    CHECK(saw_hourly);
}

TEST_CASE("error mapping")
{
    const auto router = seeded_router();
    auto r = router->handle("GET", "/v1/nothing", "");
    CHECK(r.status == 404);
    CHECK(body_of(r)["code"] == "not_found");

    r = router->handle("GET", "/v1/estimate", "");
    CHECK(r.status == 405);

    r = router->handle("POST", "/v1/estimate", "{not json");
    CHECK(r.status == 400);
    CHECK(body_of(r)["code"] == "validation_error");

    r = router->handle("POST", "/v1/estimate", R"({"preset":"no-such-preset"})");
    CHECK(r.status == 404);
    CHECK(body_of(r)["code"] == "reference_error");

    r = router->handle("POST", "/v1/estimate",
                       R"({"workload":{"processor_count":1,"duration_hours":1,"hardware_id":"tpu2"},)"
                       R"("datacenter_id":"avg2020","region_id":"atlantis"})");
    CHECK(r.status == 404);
    CHECK(body_of(r)["detail"] == json{{"kind", "region"}, {"key", "atlantis"}});

    r = router->handle("POST", "/v1/estimate",
                       R"({"workload":{"processor_count":0,"duration_hours":1,"hardware_id":"tpu2"},)"
                       R"("datacenter_id":"avg2020","region_id":"avg2020"})");
    CHECK(r.status == 400);

    r = router->handle("POST", "/v1/place",
                       R"({"workload":{"processor_count":1,"duration_hours":2,"hardware_id":"tpu2"},)"
                       R"("candidate_region_ids":["nevada"],"datacenter_id":"google-cloud","objective":"min_intensity"})");
    CHECK(r.status == 422);
    CHECK(body_of(r)["detail"]["region_id"] == "nevada");

    r = router->handle("POST", "/v1/breakeven", R"({"search_cost":-1,"per_training_saving":1})");
    CHECK(r.status == 400);
}

TEST_CASE("preset payloads return documented shapes")
{
    const auto router = seeded_router();
    auto r = router->handle("POST", "/v1/waterfall", R"({"preset":"figure1-2021"})");
    REQUIRE(r.status == 200);
    const auto wf = body_of(r);
    CHECK(wf["steps"].size() == 4);
    CHECK(std::abs(wf["total_emissions_reduction"].get<double>() - 725.004) < 1e-3);

    r = router->handle("POST", "/v1/waterfall", R"({"preset":"figure3"})");
    REQUIRE(r.status == 200);
    CHECK(body_of(r).contains("comparison"));

    r = router->handle("POST", "/v1/breakeven", R"({"search_cost":6.2,"per_training_saving":0.5,"evaluate_at":[13]})");
    REQUIRE(r.status == 200);
    CHECK(body_of(r)["breakeven_count"] == 13);
    CHECK(body_of(r)["net_at"].size() == 1);

    r = router->handle("POST", "/v1/place", R"({"preset":"chile-10h"})");
    REQUIRE(r.status == 200);
    CHECK(body_of(r)["chosen"]["best_start_hour"] == 6);
}

TEST_CASE("reload swaps the catalog snapshot")
{
    const auto router = seeded_router();
    const auto before = router->snapshot();
    CatalogBundle edited = seed_paper_defaults();
    edited.hardware.erase("p100");
    router->reload(std::make_shared<const CatalogBundle>(edited));
    CHECK(before->hardware.contains("p100"));
    CHECK_FALSE(router->snapshot()->hardware.contains("p100"));
    CHECK(body_of(router->handle("GET", "/v1/catalog/hardware", "")).size() == edited.hardware.size());
}

TEST_CASE("HTTP front end serves the router with CORS headers")
{
    auto router = seeded_router();
    service::HttpServer server(router);
    const int port = server.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    std::thread thread([&] { server.listen(); });

    httplib::Client client("127.0.0.1", port);
    auto health = client.Get("/v1/health");
    REQUIRE(health);
    CHECK(health->status == 200);
    CHECK(health->get_header_value("Access-Control-Allow-Origin") == "*");
    CHECK(health->get_header_value("Content-Type").find("application/json") != std::string::npos);

    auto estimate = client.Post("/v1/estimate", R"({"preset":"gpt3"})", "application/json");
    REQUIRE(estimate);
    CHECK(estimate->status == 200);
    CHECK(json::parse(estimate->body) == json::parse(router->handle("POST", "/v1/estimate", R"({"preset":"gpt3"})").body));

    auto preflight = client.Options("/v1/estimate");
    REQUIRE(preflight);
    CHECK(preflight->status == 204);
    CHECK_FALSE(preflight->get_header_value("Access-Control-Allow-Methods").empty());

    auto missing = client.Get("/v1/unknown");
    REQUIRE(missing);
    CHECK(missing->status == 404);

    server.stop();
    thread.join();
}

TEST_CASE("bind address parsing")
{
    CHECK(service::parse_bind_address("127.0.0.1:8080") == std::pair<std::string, int>{"127.0.0.1", 8080});
    CHECK(service::parse_bind_address("0.0.0.0:0").second == 0);
    CHECK_THROWS_AS(service::parse_bind_address("localhost"), ValidationError);
    CHECK_THROWS_AS(service::parse_bind_address("localhost:http"), ValidationError);
    CHECK_THROWS_AS(service::parse_bind_address("localhost:70000"), ValidationError);
}

TEST_CASE("JSON parsers accept what the serializers emit")
{
    const auto [gpt3, glam] = presets::comparison("figure3");
    const Scenario back = parse_scenario(json(gpt3));
    CHECK(back.workload == gpt3.workload);
    CHECK(back.datacenter_id == gpt3.datacenter_id);
    CHECK(back.region_id == gpt3.region_id);
    CHECK(back.emissions_method == gpt3.emissions_method);

    const auto steps = presets::waterfall("figure1-2021", seed_paper_defaults()).steps;
    json array = json::array();
    for (const auto& s : steps) array.push_back(s);
    const auto parsed = parse_waterfall_steps(array);
    REQUIRE(parsed.size() == steps.size());
    CHECK(parsed[3].emissions_only_factor == steps[3].emissions_only_factor);
    CHECK(parsed[3].dimension == Dimension::map);

    const auto query = presets::placement("chile-10h");
    const auto q = parse_placement_query(json(query));
    CHECK(q.candidate_region_ids == query.candidate_region_ids);
    CHECK(q.window.allowed() == query.window.allowed());
    CHECK(q.objective == query.objective);

    const auto snapshot = parse_fleet_snapshot(json(presets::fleet("fleet-2021")));
    CHECK(snapshot.total_energy_twh == 15.4);
}

TEST_CASE("JSON parsers reject bad input")
{
    CHECK_THROWS_AS(parse_workload(json{{"processor_count", "many"}}), ValidationError);
    CHECK_THROWS_AS(parse_workload(json::array()), ValidationError);
    CHECK_THROWS_AS(parse_waterfall_step(json{{"dimension", "money"}, {"energy_factor", 2}}), ValidationError);
    CHECK_THROWS_AS(parse_placement_query(json{{"objective", "cheapest"}}), ValidationError);
    CHECK_THROWS_AS(parse_json_text("{", "body"), ValidationError);
}

TEST_CASE("significant-digit rounding")
{
    json j{{"a", 0.123456789}, {"b", 12345678.9}, {"n", 7}, {"s", "0.123456789"}, {"nested", {1.0 / 3.0}}};
    round_significant(j);
    CHECK(j["a"].get<double>() == 0.123457);
    CHECK(j["b"].get<double>() == 12345700.0);
    CHECK(j["n"] == 7);
    CHECK(j["s"] == "0.123456789");
    CHECK(j["nested"][0].get<double>() == 0.333333);
}
