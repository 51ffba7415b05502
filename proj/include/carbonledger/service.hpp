// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "carbonledger/catalog.hpp"

namespace carbonledger::service {

struct Response {
    int status = 200;
    std::string body;  // JSON
};

/// Transport-independent request router for the /v1 JSON API. Holds an
/// immutable catalog snapshot; `reload` swaps it atomically and requests
/// already running keep the snapshot they started with.
class Router {
public:
    explicit Router(std::shared_ptr<const CatalogBundle> catalog);

    Response handle(std::string_view method, std::string_view path, const std::string& body) const;

    void reload(std::shared_ptr<const CatalogBundle> catalog);
    std::shared_ptr<const CatalogBundle> snapshot() const;

private:
    mutable std::mutex mutex_;
    std::shared_ptr<const CatalogBundle> catalog_;
};

/// HTTP/1.1 front end over a Router. Adds permissive CORS headers and
/// answers preflight requests.
class HttpServer {
public:
    explicit HttpServer(std::shared_ptr<Router> router);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds to host:port; port 0 picks a free port. Returns the bound port.
    /// Throws carbonledger::Error on failure.
    int bind(const std::string& host, int port);

    /// Serves until stop() is called.
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Splits "HOST:PORT". Throws ValidationError when malformed.
std::pair<std::string, int> parse_bind_address(const std::string& bind);

/// Loads the catalog (seeded defaults when `catalog_dir` is empty), binds and
/// serves until SIGINT or SIGTERM. SIGHUP reloads the catalog directory.
int run(const std::optional<std::filesystem::path>& catalog_dir, const std::string& bind);

}  // namespace carbonledger::service
