#include "reasoner/http_server.hpp"

#include "httplib.h"

namespace reasoner {

namespace {

void reply(httplib::Response& res, int status, const json& body)
{
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, std::string_view kind, const std::string& message,
                 std::optional<std::size_t> offset = std::nullopt)
{
    json body = {{"error", kind}, {"message", message}};
    if (offset)
        body["offset"] = *offset;
    reply(res, status, body);
}

std::string body_field(const httplib::Request& req, const char* name)
{
    json body = json::parse(req.body);
    return body.at(name).get<std::string>();
}

/// Runs `fn` and maps library errors to HTTP statuses. `degree_status` is
/// 400 where a too-high degree is the caller's input, 500 where it is
/// an infrastructure limit.
template <class Fn>
void guarded(httplib::Response& res, int degree_status, Fn&& fn)
{
    try {
        reply(res, 200, fn());
    } catch (const SyntaxError& e) {
        reply_error(res, 400, "syntax-error", e.what(), e.offset());
    } catch (const VariableError& e) {
        reply_error(res, 400, "variable-error", e.what(), e.offset());
    } catch (const NotPolynomial& e) {
        reply_error(res, 400, "not-polynomial", e.what());
    } catch (const NegativeRadicand& e) {
        reply_error(res, 400, "negative-radicand", e.what());
    } catch (const json::exception& e) {
        reply_error(res, 400, "bad-request", e.what());
    } catch (const SessionNotFound& e) {
        reply_error(res, 404, "not-found", e.what());
    } catch (const StrategyExhausted& e) {
        reply_error(res, 409, "strategy-exhausted", e.what());
    } catch (const DegreeTooHigh& e) {
        reply_error(res, degree_status, "degree-too-high", e.what());
    } catch (const DepthCapExceeded& e) {
        reply_error(res, 500, "depth-cap-exceeded", e.what());
    } catch (const std::exception& e) {
        reply_error(res, 500, "internal-error", e.what());
    }
}

} // namespace

struct HttpServer::Impl {
    explicit Impl(Service& s) : service(s) {}
    Service& service;
    httplib::Server server;
    bool bound = false;
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service))
{
    auto& srv = impl_->server;
    Service& svc = impl_->service;

    srv.Post("/sessions", [&svc](const httplib::Request& req, httplib::Response& res) {
        guarded(res, 400, [&] { return svc.create_session(body_field(req, "task")); });
    });
    srv.Post(R"(/sessions/([0-9A-Za-z]+)/steps)", [&svc](const httplib::Request& req, httplib::Response& res) {
        guarded(res, 500, [&] { return svc.post_step(req.matches[1], body_field(req, "input")); });
    });
    srv.Get(R"(/sessions/([0-9A-Za-z]+)/hint)", [&svc](const httplib::Request& req, httplib::Response& res) {
        guarded(res, 500, [&] { return svc.get_hint(req.matches[1]); });
    });
    srv.Get(R"(/sessions/([0-9A-Za-z]+))", [&svc](const httplib::Request& req, httplib::Response& res) {
        guarded(res, 500, [&] { return svc.get_session(req.matches[1]); });
    });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port)
{
    int bound_port = -1;
    if (port == 0)
        bound_port = impl_->server.bind_to_any_port(host);
    else if (impl_->server.bind_to_port(host, port))
        bound_port = port;
    impl_->bound = bound_port > 0;
    return bound_port;
}

bool HttpServer::run()
{
    if (!impl_->bound)
        return false;
    return impl_->server.listen_after_bind();
}

void HttpServer::stop()
{
    if (impl_->server.is_running())
        impl_->server.stop();
}

} // namespace reasoner
