#pragma once

#include "policylens/api.hpp"
#include "policylens/engine.hpp"
#include "policylens/text.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace testsupport {

inline std::filesystem::path fixture_dir() { return POLICYLENS_FIXTURE_DIR; }

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// Manually advanced clock shared by copies.
class FakeClock {
public:
    FakeClock() : now_(std::make_shared<std::atomic<policylens::TimePoint>>(policylens::parse_utc("2024-05-01T12:00:00Z"))) {}
    policylens::Clock clock() const {
        auto now = now_;
        return [now] { return now->load(); };
    }
    void advance(std::chrono::seconds s) { now_->store(now_->load() + s); }

private:
    std::shared_ptr<std::atomic<policylens::TimePoint>> now_;
};

using Scores = std::vector<std::pair<std::string, int>>;

/// Assessment reply in the step layout the prompt asks for.
inline std::string assessment_reply(const Scores& scores) {
    std::string out = "1. Criteria\nRelevant criteria were identified.\n\n2. Analysis\nThe policy was analysed.\n\n3. Evaluation\n";
    for (const auto& [name, score] : scores) {
        out += name + ": " + std::to_string(score) + "/5\n";
        out += "Justification for " + name + ".\n\n";
    }
    out += "4. Conclusion\nSummary of the evaluation.";
    return out;
}

inline const Scores& table_criteria() {
    static const Scores s = {{"Data minimization", 2}, {"Transparency", 3}, {"Purpose Limitation", 4},
                             {"Security", 4},          {"User Rights", 5},  {"Consent", 3},
                             {"Data Transfer", 1},     {"Retention", 4}};
    return s;
}

inline std::string policy_text(std::size_t words, const std::string& marker = "Policy") {
    std::string out = marker;
    for (std::size_t i = 1; i < words; ++i) {
        out += (i % 12 == 0) ? "\n" : " ";
        out += "word" + std::to_string(i);
    }
    return out;
}

inline policylens::PolicyDocument ok_policy(const std::string& domain, std::string text) {
    policylens::PolicyDocument d;
    d.domain = domain;
    d.source_url = "http://" + domain + "/privacy";
    d.word_count = policylens::count_words(text);
    d.text = std::move(text);
    d.status = policylens::AcquisitionStatus::Ok;
    return d;
}

/// In-memory page map; unknown URLs fail like a blocked fetch.
class MapFetcher final : public policylens::PageFetcher {
public:
    void set(const std::string& url, std::string body) {
        std::lock_guard lock(mutex_);
        pages_[url] = std::move(body);
    }
    policylens::FetchResult fetch(const policylens::Url& url) override {
        std::lock_guard lock(mutex_);
        ++fetches_;
        policylens::FetchResult r;
        r.final_url = url.str();
        if (auto it = pages_.find(url.str()); it != pages_.end()) {
            r.ok = true;
            r.body = it->second;
        } else {
            r.diagnostic = "HTTP 404";
        }
        return r;
    }
    std::size_t fetches() const {
        std::lock_guard lock(mutex_);
        return fetches_;
    }

private:
    mutable std::mutex mutex_;
    std::map<std::string, std::string> pages_;
    std::size_t fetches_ = 0;
};

/// A landing page linking to /privacy and the policy page itself.
inline void add_site(MapFetcher& fetcher, const std::string& host, const std::string& policy_body_text) {
    fetcher.set("http://" + host + "/", "<html><body><p>Shop</p><footer><a href=\"/privacy\">Privacy Policy</a></footer></body></html>");
    std::string html = "<html><body><main>";
    std::istringstream lines(policy_body_text);
    for (std::string line; std::getline(lines, line);) {
        html += "<p>" + line + "</p>";
    }
    html += "</main></body></html>";
    fetcher.set("http://" + host + "/privacy", html);
}

struct TestEngine {
    std::shared_ptr<policylens::MockProvider> mock = std::make_shared<policylens::MockProvider>();
    std::shared_ptr<MapFetcher> fetcher = std::make_shared<MapFetcher>();
    FakeClock clock;
    policylens::Engine engine;

    explicit TestEngine(policylens::ServiceConfig config = {}, std::shared_ptr<policylens::Store> store = nullptr) {
        if (!store) {
            store = std::make_shared<policylens::Store>(":memory:");
        }
        engine = policylens::Engine::build(config, {mock, fetcher, store, clock.clock()});
    }
};

inline policylens::HttpRequest request(std::string method, std::string path, std::string body = "",
                                       std::map<std::string, std::string> query = {}) {
    policylens::HttpRequest r;
    r.method = std::move(method);
    r.path = std::move(path);
    r.body = std::move(body);
    r.query = std::move(query);
    return r;
}

} // namespace testsupport
