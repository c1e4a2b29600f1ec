#include "policylens/api.hpp"

#include <httplib.h>

#include "policylens/text.hpp"

namespace policylens {

struct HttpService::Impl {
    explicit Impl(Engine& engine) : router(engine) {
        server.new_task_queue = [threads = engine.config.worker_threads] {
            return new httplib::ThreadPool(static_cast<std::size_t>(threads));
        };
        auto forward = [this](const httplib::Request& req, httplib::Response& res) {
            HttpRequest request;
            request.method = req.method;
            request.path = req.path;
            request.body = req.body;
            for (const auto& [k, v] : req.params) {
                request.query.emplace(k, v);
            }
            for (const auto& [k, v] : req.headers) {
                request.headers.emplace(to_lower(k), v);
            }
            auto response = router.handle(request);
            res.status = response.status;
            for (const auto& [k, v] : response.headers) {
                res.set_header(k, v);
            }
            if (response.status != 204) {
                res.set_content(response.body, response.content_type);
            }
        };
        const char* any = R"(/.*)";
        server.Get(any, forward);
        server.Post(any, forward);
        server.Put(any, forward);
        server.Delete(any, forward);
        server.Options(any, forward);
    }

    ApiRouter router;
    httplib::Server server;
};

HttpService::HttpService(Engine& engine) : impl_(std::make_unique<Impl>(engine)) {}

HttpService::~HttpService() { stop(); }

int HttpService::bind(const std::string& host, int port) {
    if (port == 0) {
        return impl_->server.bind_to_any_port(host);
    }
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpService::serve() { return impl_->server.listen_after_bind(); }

void HttpService::stop() {
    if (impl_) {
        impl_->server.stop();
    }
}

} // namespace policylens
