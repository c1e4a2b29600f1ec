#include "fixture_server.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <atomic>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

namespace testsupport {

namespace {

struct Behavior {
    int status = 0;
    std::string redirect;
    int delay_ms = 0;
};

std::string file_for(std::string path) {
    if (path.empty() || path == "/") {
        return "index.html";
    }
    path.erase(0, 1);
    return path.ends_with(".html") ? path : path + ".html";
}

std::string host_only(const std::string& header) {
    auto colon = header.rfind(':');
    return colon == std::string::npos ? header : header.substr(0, colon);
}

} // namespace

struct FixtureServer::Impl {
    std::filesystem::path dir;
    std::map<std::string, Behavior> behaviors;  // host + path
    mutable std::mutex mutex;
    std::map<std::string, std::string> overrides;  // host + path -> body
    std::map<std::string, std::size_t> hits;
    std::atomic<bool> stopping{false};
    httplib::Server server;
    std::thread thread;
};

FixtureServer::FixtureServer(const std::filesystem::path& sites_dir) : impl_(std::make_unique<Impl>()) {
    impl_->dir = sites_dir;
    std::ifstream in(sites_dir / "manifest.json");
    const auto manifest = nlohmann::json::parse(in);
    for (const auto& b : manifest.at("behaviors")) {
        Behavior behavior;
        behavior.status = b.value("status", 0);
        behavior.redirect = b.value("redirect", "");
        behavior.delay_ms = b.value("delay_ms", 0);
        impl_->behaviors[b.at("host").get<std::string>() + b.at("path").get<std::string>()] = behavior;
    }

    auto* impl = impl_.get();
    impl->server.Get(R"(/.*)", [impl](const httplib::Request& req, httplib::Response& res) {
        const auto host = host_only(req.get_header_value("Host"));
        const auto key = host + req.path;
        std::optional<std::string> dynamic;
        {
            std::lock_guard lock(impl->mutex);
            ++impl->hits[key];
            if (auto it = impl->overrides.find(key); it != impl->overrides.end()) {
                dynamic = it->second;
            }
        }
        if (auto it = impl->behaviors.find(key); it != impl->behaviors.end()) {
            const auto& b = it->second;
            for (int waited = 0; waited < b.delay_ms && !impl->stopping; waited += 20) {
                std::this_thread::sleep_for(std::chrono::milliseconds(20));
            }
            if (b.status) {
                res.status = b.status;
                res.set_content("blocked", "text/plain");
                return;
            }
            if (!b.redirect.empty()) {
                res.status = 301;
                res.set_header("Location", b.redirect);
                return;
            }
        }
        if (dynamic) {
            res.set_content(*dynamic, "text/html; charset=utf-8");
            return;
        }
        std::ifstream file(impl->dir / host / file_for(req.path), std::ios::binary);
        if (!file) {
            res.status = 404;
            res.set_content("not found", "text/plain");
            return;
        }
        std::ostringstream body;
        body << file.rdbuf();
        res.set_content(body.str(), "text/html; charset=utf-8");
    });
    port_ = impl->server.bind_to_any_port("127.0.0.1");
    impl->thread = std::thread([impl] { impl->server.listen_after_bind(); });
    impl->server.wait_until_ready();
}

FixtureServer::~FixtureServer() {
    impl_->stopping = true;
    impl_->server.stop();
    if (impl_->thread.joinable()) {
        impl_->thread.join();
    }
}

std::map<std::string, std::string> FixtureServer::host_overrides() const {
    std::map<std::string, std::string> out;
    for (const auto& entry : std::filesystem::directory_iterator(impl_->dir)) {
        if (entry.is_directory()) {
            out[entry.path().filename().string()] = "127.0.0.1:" + std::to_string(port_);
        }
    }
    return out;
}

void FixtureServer::set_page(const std::string& host, const std::string& path, std::string body) {
    std::lock_guard lock(impl_->mutex);
    impl_->overrides[host + path] = std::move(body);
}

std::size_t FixtureServer::hits(const std::string& host, const std::string& path) const {
    std::lock_guard lock(impl_->mutex);
    auto it = impl_->hits.find(host + path);
    return it == impl_->hits.end() ? 0 : it->second;
}

} // namespace testsupport
