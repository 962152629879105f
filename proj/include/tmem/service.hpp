#pragma once

#include "tmem/engine.hpp"

#include <map>
#include <string>
#include <vector>

namespace tmem {

struct HttpRequest {
    std::string method;
    std::string path;
    std::map<std::string, std::string> params;
    std::string body;
};

struct HttpResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

/// Routes one request. JSON endpoints: GET /api/health, GET /api/stats,
/// POST /api/query, POST /api/suggest, POST /api/commit. TMX endpoints:
/// POST /api/import (body is TMX, ?scope=local|global) and
/// GET /api/export?scope=local|global|all. Errors come back as
/// {"error":{"code":...,"message":...}} with 400, 404, 405 or 503.
HttpResponse handle_request(Engine& engine, const HttpRequest& request);

struct ServerOptions {
    std::string host = "127.0.0.1";
    int port = 8080;
    /// Origins echoed in Access-Control-Allow-Origin; "*" allows any.
    std::vector<std::string> cors_origins;
};

/// HTTP front end over handle_request. listen() blocks until stop() is called
/// from another thread or the listener fails.
class HttpServer {
public:
    HttpServer(Engine& engine, ServerOptions options);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds (port 0 picks a free port) and returns the bound port.
    int bind();
    /// Serves until stop(). Requires a successful bind().
    bool listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace tmem
