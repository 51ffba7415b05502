// SPDX-License-Identifier: Apache-2.0
#include "carbonledger/service.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

#include "httplib.h"

#include "carbonledger/analysis.hpp"
#include "carbonledger/error.hpp"
#include "carbonledger/json_io.hpp"
#include "carbonledger/placement.hpp"
#include "carbonledger/presets.hpp"

namespace carbonledger::service {

namespace {

json api_error(const std::string& code, const std::string& message, json detail = nullptr)
{
    return json{{"code", code}, {"message", message}, {"detail", std::move(detail)}};
}

Response reply(int status, const json& body)
{
    return Response{status, body.dump()};
}

bool has(const json& j, const char* key)
{
    return j.is_object() && j.contains(key) && !j.at(key).is_null();
}

std::string preset_name(const json& body)
{
    const auto& value = body.at("preset");
    if (!value.is_string()) {
        throw ValidationError("preset must be a string");
    }
    return value.get<std::string>();
}

json handle_estimate(const json& body, const CatalogBundle& catalog)
{
    const Scenario scenario = has(body, "preset") ? presets::estimate(preset_name(body)) : parse_scenario(body);
    const auto estimate = evaluate_scenario(scenario, catalog);
    return json{{"energy", estimate.energy}, {"emissions", estimate.emissions}};
}

json handle_waterfall(const json& body, const CatalogBundle& catalog)
{
    if (has(body, "preset")) {
        const auto preset = presets::waterfall(preset_name(body), catalog);
        json out = waterfall(preset.baseline_label, preset.steps);
        if (preset.scenario_pair) {
            out["comparison"] = compare(preset.scenario_pair->first, preset.scenario_pair->second, catalog);
        }
        return out;
    }
    if (!has(body, "steps")) {
        throw ValidationError("waterfall needs 'steps' or 'preset'");
    }
    const std::string label = has(body, "baseline_label") && body["baseline_label"].is_string()
                                  ? body["baseline_label"].get<std::string>()
                                  : std::string("baseline");
    return waterfall(label, parse_waterfall_steps(body["steps"]));
}

json handle_compare(const json& body, const CatalogBundle& catalog)
{
    if (has(body, "preset")) {
        const auto pair = presets::comparison(preset_name(body));
        return compare(pair.first, pair.second, catalog);
    }
    if (!has(body, "baseline") || !has(body, "candidate")) {
        throw ValidationError("compare needs 'baseline' and 'candidate' scenarios or 'preset'");
    }
    return compare(parse_scenario(body["baseline"]), parse_scenario(body["candidate"]), catalog);
}

json handle_audit(const json& body)
{
    if (has(body, "preset")) {
        const auto input = presets::audit(preset_name(body));
        return audit(input.published_tco2e, input.factors, input.actual_tco2e);
    }
    if (!has(body, "published_tco2e") || !body["published_tco2e"].is_number()) {
        throw ValidationError("audit needs a numeric 'published_tco2e' or 'preset'");
    }
    std::vector<AuditFactor> factors;
    if (has(body, "factors")) {
        factors = parse_audit_factors(body["factors"]);
    }
    std::optional<double> actual;
    if (has(body, "actual_tco2e")) {
        if (!body["actual_tco2e"].is_number()) {
            throw ValidationError("actual_tco2e must be a number");
        }
        actual = body["actual_tco2e"].get<double>();
    }
    return audit(body["published_tco2e"].get<double>(), factors, actual);
}

json handle_breakeven(const json& body)
{
    BreakevenReport report;
    if (has(body, "preset")) {
        const auto input = presets::breakeven(preset_name(body));
        report = breakeven(input.search_cost, input.per_training_saving, input.unit);
    } else {
        if (!has(body, "search_cost") || !body["search_cost"].is_number() || !has(body, "per_training_saving")
            || !body["per_training_saving"].is_number()) {
            throw ValidationError("breakeven needs numeric 'search_cost' and 'per_training_saving' or 'preset'");
        }
        std::string unit = "MWh";
        if (has(body, "unit")) {
            if (!body["unit"].is_string()) {
                throw ValidationError("unit must be a string");
            }
            unit = body["unit"].get<std::string>();
        }
        report = breakeven(body["search_cost"].get<double>(), body["per_training_saving"].get<double>(), unit);
    }

    std::vector<long long> evaluate_at{1, report.breakeven_count};
    if (has(body, "evaluate_at")) {
        const auto& list = body["evaluate_at"];
        if (!list.is_array()) {
            throw ValidationError("evaluate_at must be an array of positive integers");
        }
        evaluate_at.clear();
        for (const auto& n : list) {
            if (!n.is_number_integer() || n.get<long long>() < 0) {
                throw ValidationError("evaluate_at must be an array of non-negative integers");
            }
            evaluate_at.push_back(n.get<long long>());
        }
    }
    return breakeven_to_json(report, evaluate_at);
}

json handle_place(const json& body, const CatalogBundle& catalog)
{
    const PlacementQuery query = has(body, "preset") ? presets::placement(preset_name(body)) : parse_placement_query(body);
    return rank_regions(query, catalog);
}

json catalog_array(std::string_view which, const CatalogBundle& catalog)
{
    json out = json::array();
    if (which == "hardware") {
        for (const auto& [id, hw] : catalog.hardware) out.push_back(hw);
    } else if (which == "datacenters") {
        for (const auto& [id, dc] : catalog.datacenters) out.push_back(dc);
    } else {
        for (const auto& [id, region] : catalog.regions) out.push_back(region);
    }
    return out;
}

}  // namespace

Router::Router(std::shared_ptr<const CatalogBundle> catalog) : catalog_(std::move(catalog)) {}

void Router::reload(std::shared_ptr<const CatalogBundle> catalog)
{
    std::lock_guard lock(mutex_);
    catalog_ = std::move(catalog);
}

std::shared_ptr<const CatalogBundle> Router::snapshot() const
{
    std::lock_guard lock(mutex_);
    return catalog_;
}

Response Router::handle(std::string_view method, std::string_view path, const std::string& body) const
{
    const auto catalog = snapshot();
    const bool get = method == "GET";
    const bool post = method == "POST";

    try {
        if (path == "/v1/health") {
            if (!get) return reply(405, api_error("method_not_allowed", "use GET"));
            return reply(200, json{{"status", "ok"}});
        }
        if (path == "/v1/catalog/hardware" || path == "/v1/catalog/datacenters" || path == "/v1/catalog/regions") {
            if (!get) return reply(405, api_error("method_not_allowed", "use GET"));
            return reply(200, catalog_array(path.substr(std::string_view("/v1/catalog/").size()), *catalog));
        }

        using Handler = json (*)(const json&, const CatalogBundle&);
        Handler handler = nullptr;
        if (path == "/v1/estimate") handler = handle_estimate;
        else if (path == "/v1/waterfall") handler = handle_waterfall;
        else if (path == "/v1/compare") handler = handle_compare;
        else if (path == "/v1/audit") handler = [](const json& b, const CatalogBundle&) { return handle_audit(b); };
        else if (path == "/v1/breakeven") handler = [](const json& b, const CatalogBundle&) { return handle_breakeven(b); };
        else if (path == "/v1/place") handler = handle_place;

        if (handler == nullptr) {
            return reply(404, api_error("not_found", "no endpoint " + std::string(path)));
        }
        if (!post) {
            return reply(405, api_error("method_not_allowed", "use POST"));
        }
        const json request = parse_json_text(body, "request body");
        if (!request.is_object()) {
            throw ValidationError("request body must be a JSON object");
        }
        return reply(200, handler(request, *catalog));
    } catch (const ValidationError& e) {
        return reply(400, api_error(e.code(), e.what()));
    } catch (const ReferenceError& e) {
        return reply(404, api_error(e.code(), e.what(), json{{"kind", e.kind()}, {"key", e.key()}}));
    } catch (const MissingHourlyDataError& e) {
        return reply(422, api_error(e.code(), e.what(), json{{"region_id", e.region_id()}}));
    } catch (const Error& e) {
        return reply(400, api_error(e.code(), e.what()));
    } catch (const json::exception& e) {
        return reply(400, api_error("validation_error", e.what()));
    } catch (const std::exception& e) {
        return reply(500, api_error("internal", e.what()));
    }
}

// ---------------------------------------------------------------------------

struct HttpServer::Impl {
    std::shared_ptr<Router> router;
    httplib::Server server;
};

HttpServer::HttpServer(std::shared_ptr<Router> router) : impl_(std::make_unique<Impl>())
{
    impl_->router = std::move(router);
    auto& server = impl_->server;
    server.set_tcp_nodelay(true);
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});

    auto dispatch = [router = impl_->router](const httplib::Request& req, httplib::Response& res) {
        const auto out = router->handle(req.method, req.path, req.body);
        res.status = out.status;
        res.set_content(out.body, "application/json");
    };
    server.Get(R"(/.*)", dispatch);
    server.Post(R"(/.*)", dispatch);
    server.Put(R"(/.*)", dispatch);
    server.Delete(R"(/.*)", dispatch);
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
}

HttpServer::~HttpServer()
{
    stop();
}

int HttpServer::bind(const std::string& host, int port)
{
    if (port == 0) {
        const int bound = impl_->server.bind_to_any_port(host);
        if (bound <= 0) {
            throw Error("bind_error", "cannot bind " + host);
        }
        return bound;
    }
    if (!impl_->server.bind_to_port(host, port)) {
        throw Error("bind_error", "cannot bind " + host + ":" + std::to_string(port));
    }
    return port;
}

void HttpServer::listen()
{
    impl_->server.listen_after_bind();
}

void HttpServer::stop()
{
    if (impl_ && impl_->server.is_running()) {
        impl_->server.stop();
    }
}

std::pair<std::string, int> parse_bind_address(const std::string& bind)
{
    const auto colon = bind.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == bind.size()) {
        throw ValidationError("bind address must be HOST:PORT, got '" + bind + "'");
    }
    const std::string host = bind.substr(0, colon);
    int port = 0;
    try {
        std::size_t used = 0;
        port = std::stoi(bind.substr(colon + 1), &used);
        if (used != bind.size() - colon - 1) {
            throw std::invalid_argument("junk");
        }
    } catch (const std::exception&) {
        throw ValidationError("bind port is not a number: '" + bind + "'");
    }
    if (port < 0 || port > 65535) {
        throw ValidationError("bind port out of range: " + std::to_string(port));
    }
    return {host, port};
}

namespace {

std::atomic<bool> g_reload_requested{false};
std::atomic<bool> g_stop_requested{false};

extern "C" void on_hangup(int)
{
    g_reload_requested = true;
}

extern "C" void on_terminate(int)
{
    g_stop_requested = true;
}

}  // namespace

int run(const std::optional<std::filesystem::path>& catalog_dir, const std::string& bind)
{
    const auto [host, port] = parse_bind_address(bind);
    auto load = [&] {
        return catalog_dir ? std::make_shared<const CatalogBundle>(load_catalog(*catalog_dir))
                           : std::make_shared<const CatalogBundle>(seed_paper_defaults());
    };

    auto router = std::make_shared<Router>(load());
    HttpServer server(router);
    const int bound = server.bind(host, port);
    std::cerr << "carbonledger: serving on " << host << ":" << bound << std::endl;

    std::signal(SIGHUP, on_hangup);
    std::signal(SIGINT, on_terminate);
    std::signal(SIGTERM, on_terminate);

    std::thread watcher([&] {
        while (!g_stop_requested) {
            if (g_reload_requested.exchange(false)) {
                try {
                    router->reload(load());
                    std::cerr << "carbonledger: catalog reloaded" << std::endl;
                } catch (const std::exception& e) {
                    std::cerr << "carbonledger: reload failed, keeping previous catalog: " << e.what() << std::endl;
                }
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(100));
        }
        server.stop();
    });

    server.listen();
    g_stop_requested = true;
    watcher.join();
    return 0;
}

}  // namespace carbonledger::service
