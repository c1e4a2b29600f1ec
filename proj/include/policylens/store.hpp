#pragma once

#include "policylens/acquisition.hpp"
#include "policylens/assessment.hpp"
#include "policylens/chat.hpp"
#include "policylens/settings.hpp"

#include <chrono>
#include <filesystem>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

struct sqlite3;

namespace policylens {

class StoreError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class EventKind {
    PanelOpened,
    PanelClosed,
    QuestionAsked,
    SuggestionUsed,
    SettingsChanged,
    AssessmentRequested,
    PolicyViewed
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> event_kind_from_string(std::string_view text);

struct ActivityEvent {
    TimePoint at{};
    EventKind kind = EventKind::PanelOpened;
    std::map<std::string, std::string> payload;
};

struct StoredPolicy {
    PolicyDocument document;
    std::string page_url;
    std::string content_hash;
};

/// Cached acquisition or assessment failure.
struct NegativeEntry {
    std::string status;  // acquisition status name or "assessment_unavailable"
    std::string diagnostic;
    TimePoint expires_at{};
};

/// Single-file SQLite persistence. All methods are safe to call concurrently.
class Store {
public:
    /// ":memory:" opens a private in-memory database.
    explicit Store(const std::string& path);
    ~Store();
    Store(const Store&) = delete;
    Store& operator=(const Store&) = delete;

    void put_assessment(const PolicyAssessment& assessment, const std::string& policy_hash);
    std::optional<PolicyAssessment> get_assessment(const std::string& domain) const;
    std::optional<std::string> assessment_policy_hash(const std::string& domain) const;
    void delete_assessment(const std::string& domain);
    std::size_t assessment_count() const;

    void put_policy(const PolicyDocument& document, const std::string& page_url);
    std::optional<StoredPolicy> get_policy(const std::string& domain) const;

    void put_negative(const std::string& domain, const NegativeEntry& entry);
    std::optional<NegativeEntry> get_negative(const std::string& domain) const;
    void clear_negative(const std::string& domain);

    std::vector<ChatThread> get_threads(const std::string& domain) const;
    std::optional<ChatThread> get_thread(const std::string& domain, const ChatScope& scope) const;
    void put_thread(const ChatThread& thread);
    void delete_threads(const std::string& domain);

    /// Defaults (Medium, NoPrior) when never written.
    UserSettings get_settings() const;
    void put_settings(const UserSettings& settings);

    std::optional<std::string> get_carryover(const ChatScope& scope) const;
    void put_carryover(const ChatScope& scope, const std::string& question);

    void log_event(const ActivityEvent& event);
    std::vector<ActivityEvent> events() const;
    /// One JSON object per line, insertion order.
    std::string export_events_ndjson() const;

private:
    void exec(const char* sql);

    sqlite3* db_ = nullptr;
    mutable std::mutex mutex_;
};

std::string content_hash(std::string_view text);

enum class DomainStatus { Ok, LinkNotFound, FetchBlocked, TooShort, AssessmentUnavailable };

std::string_view to_string(DomainStatus status);

/// Outcome of a cached or fresh assessment pipeline run for one domain.
struct DomainResult {
    std::string domain;
    DomainStatus status = DomainStatus::LinkNotFound;
    std::optional<PolicyAssessment> assessment;
    std::size_t policy_word_count = 0;
    bool truncated = false;
    std::vector<std::string> diagnostics;
    bool from_cache = false;

    TrafficColor overall() const { return assessment ? assessment->overall : TrafficColor::Unknown; }
};

/// Domain-keyed cache in front of acquisition and assessment. Concurrent
/// misses for one domain share a single pipeline run.
class AssessmentCache {
public:
    AssessmentCache(std::shared_ptr<Store> store, std::shared_ptr<PolicyAcquirer> acquirer,
                    std::shared_ptr<Assessor> assessor, Clock clock = system_clock(),
                    std::chrono::seconds negative_ttl = std::chrono::minutes(10));

    /// Throws ProviderError when the model provider fails (not cached).
    DomainResult get_or_assess(const std::string& page_url,
                               const std::optional<std::string>& policy_url = std::nullopt);

    /// Re-acquires the policy; assesses again only if its content hash changed.
    /// Returns nullopt when the domain was never seen.
    std::optional<DomainResult> reassess(const std::string& domain);

    std::size_t pipeline_runs() const;

private:
    DomainResult run_pipeline(const std::string& domain, const std::string& page_url,
                              const std::optional<std::string>& policy_url, bool force);
    DomainResult coalesced(const std::string& domain, const std::function<DomainResult()>& work);

    std::shared_ptr<Store> store_;
    std::shared_ptr<PolicyAcquirer> acquirer_;
    std::shared_ptr<Assessor> assessor_;
    Clock clock_;
    std::chrono::seconds negative_ttl_;

    mutable std::mutex inflight_mutex_;
    std::map<std::string, std::shared_future<DomainResult>> inflight_;
    std::size_t runs_ = 0;
};

} // namespace policylens
