#pragma once

#include "policylens/clock.hpp"
#include "policylens/url.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace policylens {

enum class AcquisitionStatus { Ok, LinkNotFound, FetchBlocked, TooShort };

std::string_view to_string(AcquisitionStatus status);
std::optional<AcquisitionStatus> acquisition_status_from_string(std::string_view text);

/// Fetched and cleaned policy text. When status != Ok the text is empty.
struct PolicyDocument {
    std::string domain;
    std::string source_url;
    std::string text;
    std::size_t word_count = 0;
    TimePoint fetched_at{};
    AcquisitionStatus status = AcquisitionStatus::LinkNotFound;
    /// Other policy candidates found on the page, best first.
    std::vector<std::string> alternates;
    std::string diagnostic;

    bool ok() const { return status == AcquisitionStatus::Ok; }
};

inline const std::vector<std::string>& default_policy_keywords() {
    static const std::vector<std::string> keywords = {
        "privacy policy", "privacy", "datenschutzerkl\xC3\xA4rung", "datenschutz", "data protection"};
    return keywords;
}

struct AcquisitionConfig {
    double fetch_timeout_seconds = 10.0;
    std::size_t min_words = 100;
    /// Ordered by priority, highest first.
    std::vector<std::string> keywords = default_policy_keywords();
    /// When set, pages are rendered by an external headless browser command.
    /// "{url}" is replaced by the shell-quoted URL; stdout is the rendered DOM.
    std::optional<std::string> render_command;
    /// host -> "ip:port" pins, like curl --resolve. Mostly for local fixtures.
    std::map<std::string, std::string> host_overrides;
    int max_redirects = 5;
};

struct DiscoveryResult {
    std::optional<std::string> url;
    std::vector<std::string> alternates;
};

/// Ranks anchors by keyword priority (anchor text before href path), then
/// footer placement, then document order.
DiscoveryResult discover_policy_url(std::string_view page_html, const Url& base_url,
                                    const std::vector<std::string>& keywords = default_policy_keywords());

/// Visible text: chrome subtrees removed, one line per block, whitespace collapsed.
std::string extract_text(std::string_view page_html);

/// Inverse helper for the idempotence property: each line becomes an escaped <p>.
std::string wrap_paragraphs(std::string_view text);

struct FetchResult {
    bool ok = false;
    std::string body;
    std::string final_url;
    std::string diagnostic;
};

class PageFetcher {
public:
    virtual ~PageFetcher() = default;
    virtual FetchResult fetch(const Url& url) = 0;
};

/// Plain HTTP(S) GET with redirects and a wall-clock timeout.
class HttpFetcher final : public PageFetcher {
public:
    explicit HttpFetcher(AcquisitionConfig config);
    FetchResult fetch(const Url& url) override;

private:
    AcquisitionConfig config_;
};

/// Runs an external renderer (e.g. a headless browser dumping the DOM).
class CommandRenderFetcher final : public PageFetcher {
public:
    CommandRenderFetcher(std::string command_template, double timeout_seconds);
    FetchResult fetch(const Url& url) override;

private:
    std::string command_template_;
    double timeout_seconds_;
};

std::unique_ptr<PageFetcher> make_fetcher(const AcquisitionConfig& config);

class PolicyAcquirer {
public:
    PolicyAcquirer(AcquisitionConfig config, std::shared_ptr<PageFetcher> fetcher, Clock clock = system_clock());

    FetchResult fetch_page(std::string_view url);

    /// discover -> fetch -> extract -> validate. Never throws.
    /// `policy_url`, when given, skips discovery.
    PolicyDocument acquire(std::string_view page_url, std::optional<std::string_view> policy_url = std::nullopt);

    const AcquisitionConfig& config() const { return config_; }

private:
    AcquisitionConfig config_;
    std::shared_ptr<PageFetcher> fetcher_;
    Clock clock_;
};

} // namespace policylens
