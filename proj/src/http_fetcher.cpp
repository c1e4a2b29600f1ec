#include "policylens/acquisition.hpp"

#include <httplib.h>

#include <chrono>

namespace policylens {

namespace {

std::unique_ptr<httplib::Client> make_client(const Url& url, const AcquisitionConfig& config) {
    std::string endpoint = url.origin();
    if (auto it = config.host_overrides.find(url.host); it != config.host_overrides.end()) {
        endpoint = url.scheme + "://" + it->second;
    }
    auto client = std::make_unique<httplib::Client>(endpoint);
    const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::duration<double>(config.fetch_timeout_seconds));
    const auto secs = static_cast<time_t>(timeout.count() / 1000000);
    const auto usecs = static_cast<time_t>(timeout.count() % 1000000);
    client->set_connection_timeout(secs, usecs);
    client->set_read_timeout(secs, usecs);
    client->set_write_timeout(secs, usecs);
    client->set_follow_location(false);
    return client;
}

} // namespace

HttpFetcher::HttpFetcher(AcquisitionConfig config) : config_(std::move(config)) {}

FetchResult HttpFetcher::fetch(const Url& start) {
    FetchResult result;
    Url current = start;
    for (int hop = 0; hop <= config_.max_redirects; ++hop) {
        result.final_url = current.str();
        auto client = make_client(current, config_);
        httplib::Headers headers = {
            {"Host", current.default_port() ? current.host : current.host + ":" + std::to_string(current.port)},
            {"User-Agent", "policylens/1.0"},
            {"Accept", "text/html,application/xhtml+xml"},
        };
        auto res = client->Get(current.target, headers);
        if (!res) {
            result.diagnostic = httplib::to_string(res.error());
            return result;
        }
        if (res->status >= 300 && res->status < 400 && res->has_header("Location")) {
            auto next = resolve_url(current, res->get_header_value("Location"));
            if (!next) {
                result.diagnostic = "redirect to unsupported location";
                return result;
            }
            current = *next;
            continue;
        }
        if (res->status >= 400) {
            result.diagnostic = "HTTP " + std::to_string(res->status);
            return result;
        }
        result.ok = true;
        result.body = std::move(res->body);
        return result;
    }
    result.diagnostic = "too many redirects";
    return result;
}

} // namespace policylens
