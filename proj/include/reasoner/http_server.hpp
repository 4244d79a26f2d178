#pragma once

#include "reasoner/service.hpp"

#include <memory>
#include <string>

namespace reasoner {

/// JSON endpoints over a Service:
///   POST /sessions             {"task"}  -> {"id", "task", "strategy"}
///   POST /sessions/{id}/steps  {"input"} -> diagnosis record
///   GET  /sessions/{id}/hint             -> hint record
///   GET  /sessions/{id}                  -> session summary
/// Errors come back as {"error", "message"} with status 400, 404, 409 or 500.
class HttpServer {
public:
    explicit HttpServer(Service& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds to host:port (port 0 picks a free one) and returns the port,
    /// or -1 on failure.
    int bind(const std::string& host, int port);

    /// Serves until stop(). Requires a successful bind().
    bool run();

    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace reasoner
