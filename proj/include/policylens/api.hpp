#pragma once

#include "policylens/engine.hpp"

#include <map>
#include <memory>
#include <string>

namespace policylens {

struct HttpRequest {
    std::string method;
    std::string path;
    std::map<std::string, std::string> query;
    /// Header names lowercased.
    std::map<std::string, std::string> headers;
    std::string body;
};

struct HttpResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
    std::map<std::string, std::string> headers;
};

inline constexpr const char* kApiVersion = "v1";

/// Transport-independent endpoint surface. Every response carries
/// "X-API-Version: v1"; CORS headers are added for allow-listed origins.
class ApiRouter {
public:
    explicit ApiRouter(Engine& engine);

    HttpResponse handle(const HttpRequest& request);

private:
    HttpResponse route(const HttpRequest& request);
    HttpResponse post_assess(const HttpRequest& request);
    HttpResponse post_chat(const HttpRequest& request);
    HttpResponse get_suggestions(const HttpRequest& request);
    HttpResponse get_policy_text(const HttpRequest& request);
    HttpResponse get_settings();
    HttpResponse put_settings(const HttpRequest& request);
    HttpResponse get_history(const std::string& domain);
    HttpResponse delete_history(const std::string& domain);
    HttpResponse post_reassess(const std::string& domain);
    HttpResponse post_event(const HttpRequest& request);
    HttpResponse get_events();

    void record(EventKind kind, std::map<std::string, std::string> payload);
    bool origin_allowed(const std::string& origin) const;

    Engine& engine_;
};

/// Blocking HTTP server around ApiRouter.
class HttpService {
public:
    explicit HttpService(Engine& engine);
    ~HttpService();
    HttpService(const HttpService&) = delete;
    HttpService& operator=(const HttpService&) = delete;

    /// Binds host:port (port 0 picks a free one) and returns the bound port, or -1.
    int bind(const std::string& host, int port);
    /// Serves until stop(); call after bind().
    bool serve();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace policylens
