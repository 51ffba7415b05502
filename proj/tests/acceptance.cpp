// SPDX-License-Identifier: Apache-2.0
// Acceptance table over a live HTTP server on an ephemeral port.
#include <iostream>
#include <thread>

#include "httplib.h"

#include "carbonledger/catalog.hpp"
#include "carbonledger/reproduce.hpp"
#include "carbonledger/service.hpp"

using namespace carbonledger;

int main()
{
    auto router = std::make_shared<service::Router>(std::make_shared<const CatalogBundle>(seed_paper_defaults()));
    service::HttpServer server(router);
    int port = 0;
    try {
        port = server.bind("127.0.0.1", 0);
    } catch (const std::exception& e) {
        std::cerr << "cannot bind: " << e.what() << "\n";
        return 1;
    }
    std::thread thread([&] { server.listen(); });

    httplib::Client client("127.0.0.1", port);
    client.set_keep_alive(true);
    client.set_tcp_nodelay(true);
    const reproduce::Transport http = [&client](std::string_view method, std::string_view path, const std::string& body) {
        const std::string target(path);
        const auto result = method == "GET" ? client.Get(target) : client.Post(target, body, "application/json");
        if (!result) {
            return service::Response{0, "{\"code\":\"transport\",\"message\":\"" + httplib::to_string(result.error()) + "\"}"};
        }
        return service::Response{result->status, result->body};
    };

    const auto results = reproduce::run_all(http);
    const bool all = reproduce::print(results, std::cout);

    client.stop();
    server.stop();
    thread.join();
    return all ? 0 : 1;
}
