#include "policylens/store.hpp"

#include "policylens/serialization.hpp"
#include "policylens/text.hpp"

#include <sqlite3.h>

#include <chrono>

namespace policylens {

namespace {

using nlohmann::json;

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS assessments(
    domain TEXT PRIMARY KEY,
    json TEXT NOT NULL,
    created_at TEXT NOT NULL,
    model_id TEXT NOT NULL,
    policy_hash TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS policies(
    domain TEXT PRIMARY KEY,
    page_url TEXT NOT NULL,
    source_url TEXT NOT NULL,
    text TEXT NOT NULL,
    word_count INTEGER NOT NULL,
    fetched_at TEXT NOT NULL,
    status TEXT NOT NULL,
    alternates TEXT NOT NULL,
    hash TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS negative(
    domain TEXT PRIMARY KEY,
    status TEXT NOT NULL,
    diagnostic TEXT NOT NULL,
    expires_at INTEGER NOT NULL);
CREATE TABLE IF NOT EXISTS threads(
    domain TEXT NOT NULL,
    scope TEXT NOT NULL,
    json TEXT NOT NULL,
    PRIMARY KEY(domain, scope));
CREATE TABLE IF NOT EXISTS settings(
    id INTEGER PRIMARY KEY CHECK(id = 1),
    length TEXT NOT NULL,
    complexity TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS carryover(
    scope TEXT PRIMARY KEY,
    question TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS events(
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    at TEXT NOT NULL,
    kind TEXT NOT NULL,
    payload TEXT NOT NULL);
)sql";

class Statement {
public:
    Statement(sqlite3* db, const char* sql) : db_(db) {
        if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) {
            throw StoreError(std::string("prepare failed: ") + sqlite3_errmsg(db));
        }
    }
    ~Statement() { sqlite3_finalize(stmt_); }
    Statement(const Statement&) = delete;
    Statement& operator=(const Statement&) = delete;

    Statement& bind(int index, std::string_view value) {
        check(sqlite3_bind_text(stmt_, index, value.data(), static_cast<int>(value.size()), SQLITE_TRANSIENT));
        return *this;
    }
    Statement& bind(int index, std::int64_t value) {
        check(sqlite3_bind_int64(stmt_, index, value));
        return *this;
    }

    /// True while a row is available.
    bool step() {
        const int rc = sqlite3_step(stmt_);
        if (rc == SQLITE_ROW) {
            return true;
        }
        if (rc != SQLITE_DONE) {
            throw StoreError(std::string("step failed: ") + sqlite3_errmsg(db_));
        }
        return false;
    }

    std::string text(int col) const {
        const auto* p = reinterpret_cast<const char*>(sqlite3_column_text(stmt_, col));
        return p ? std::string(p, static_cast<std::size_t>(sqlite3_column_bytes(stmt_, col))) : std::string();
    }
    std::int64_t integer(int col) const { return sqlite3_column_int64(stmt_, col); }

private:
    void check(int rc) {
        if (rc != SQLITE_OK) {
            throw StoreError(std::string("bind failed: ") + sqlite3_errmsg(db_));
        }
    }

    sqlite3* db_;
    sqlite3_stmt* stmt_ = nullptr;
};

std::int64_t to_epoch(TimePoint t) {
    return std::chrono::duration_cast<std::chrono::seconds>(t.time_since_epoch()).count();
}

} // namespace

std::string_view to_string(EventKind kind) {
    switch (kind) {
    case EventKind::PanelOpened: return "panel_opened";
    case EventKind::PanelClosed: return "panel_closed";
    case EventKind::QuestionAsked: return "question_asked";
    case EventKind::SuggestionUsed: return "suggestion_used";
    case EventKind::SettingsChanged: return "settings_changed";
    case EventKind::AssessmentRequested: return "assessment_requested";
    case EventKind::PolicyViewed: return "policy_viewed";
    }
    return "panel_opened";
}

std::optional<EventKind> event_kind_from_string(std::string_view text) {
    for (auto k : {EventKind::PanelOpened, EventKind::PanelClosed, EventKind::QuestionAsked, EventKind::SuggestionUsed,
                   EventKind::SettingsChanged, EventKind::AssessmentRequested, EventKind::PolicyViewed}) {
        if (to_string(k) == text) {
            return k;
        }
    }
    return std::nullopt;
}

std::string content_hash(std::string_view text) { return hex64(fnv1a64(text)); }

Store::Store(const std::string& path) {
    if (path != ":memory:") {
        const auto parent = std::filesystem::path(path).parent_path();
        std::error_code ec;
        if (!parent.empty() && !std::filesystem::create_directories(parent, ec) && ec) {
            throw StoreError("cannot create directory " + parent.string() + ": " + ec.message());
        }
    }
    if (sqlite3_open(path.c_str(), &db_) != SQLITE_OK) {
        std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
        sqlite3_close(db_);
        throw StoreError("cannot open store " + path + ": " + msg);
    }
    sqlite3_busy_timeout(db_, 5000);
    exec("PRAGMA journal_mode=WAL;");
    exec(kSchema);
}

Store::~Store() { sqlite3_close(db_); }

void Store::exec(const char* sql) {
    char* err = nullptr;
    if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
        std::string msg = err ? err : "unknown error";
        sqlite3_free(err);
        throw StoreError("sql failed: " + msg);
    }
}

void Store::put_assessment(const PolicyAssessment& assessment, const std::string& policy_hash) {
    std::lock_guard lock(mutex_);
    Statement st(db_, "INSERT OR REPLACE INTO assessments(domain, json, created_at, model_id, policy_hash) "
                      "VALUES(?, ?, ?, ?, ?)");
    st.bind(1, assessment.domain)
        .bind(2, json(assessment).dump())
        .bind(3, format_utc(assessment.created_at))
        .bind(4, assessment.model_id)
        .bind(5, policy_hash);
    st.step();
}

std::optional<PolicyAssessment> Store::get_assessment(const std::string& domain) const {
    std::lock_guard lock(mutex_);
    Statement st(db_, "SELECT json FROM assessments WHERE domain = ?");
    st.bind(1, domain);
    if (!st.step()) {
        return std::nullopt;
    }
    return json::parse(st.text(0)).get<PolicyAssessment>();
}

std::optional<std::string> Store::assessment_policy_hash(const std::string& domain) const {
    std::lock_guard lock(mutex_);
    Statement st(db_, "SELECT policy_hash FROM assessments WHERE domain = ?");
    st.bind(1, domain);
    if (!st.step()) {
        return std::nullopt;
    }
    return st.text(0);
}

void Store::delete_assessment(const std::string& domain) {
    std::lock_guard lock(mutex_);
    Statement st(db_, "DELETE FROM assessments WHERE domain = ?");
    st.bind(1, domain);
    st.step();
}

std::size_t Store::assessment_count() const {
    std::lock_guard lock(mutex_);
    Statement st(db_, "SELECT COUNT(*) FROM assessments");
    st.step();
    return static_cast<std::size_t>(st.integer(0));
}

void Store::put_policy(const PolicyDocument& document, const std::string& page_url) {
    std::lock_guard lock(mutex_);
    Statement st(db_, "INSERT OR REPLACE INTO policies(domain, page_url, source_url, text, word_count, fetched_at, "
                      "status, alternates, hash) VALUES(?, ?, ?, ?, ?, ?, ?, ?, ?)");
    st.bind(1, document.domain)
        .bind(2, page_url)
        .bind(3, document.source_url)
        .bind(4, document.text)
        .bind(5, static_cast<std::int64_t>(document.word_count))
        .bind(6, format_utc(document.fetched_at))
        .bind(7, to_string(document.status))
        .bind(8, json(document.alternates).dump())
        .bind(9, content_hash(document.text));
    st.step();
}

std::optional<StoredPolicy> Store::get_policy(const std::string& domain) const {
    std::lock_guard lock(mutex_);
    Statement st(db_, "SELECT page_url, source_url, text, word_count, fetched_at, status, alternates, hash "
                      "FROM policies WHERE domain = ?");
    st.bind(1, domain);
    if (!st.step()) {
        return std::nullopt;
    }
    StoredPolicy out;
    out.page_url = st.text(0);
    out.document.domain = domain;
    out.document.source_url = st.text(1);
    out.document.text = st.text(2);
    out.document.word_count = static_cast<std::size_t>(st.integer(3));
    out.document.fetched_at = parse_utc(st.text(4));
    out.document.status = acquisition_status_from_string(st.text(5)).value_or(AcquisitionStatus::LinkNotFound);
    out.document.alternates = json::parse(st.text(6)).get<std::vector<std::string>>();
    out.content_hash = st.text(7);
    return out;
}

void Store::put_negative(const std::string& domain, const NegativeEntry& entry) {
    std::lock_guard lock(mutex_);
    Statement st(db_, "INSERT OR REPLACE INTO negative(domain, status, diagnostic, expires_at) VALUES(?, ?, ?, ?)");
    st.bind(1, domain).bind(2, entry.status).bind(3, entry.diagnostic).bind(4, to_epoch(entry.expires_at));
    st.step();
}

std::optional<NegativeEntry> Store::get_negative(const std::string& domain) const {
    std::lock_guard lock(mutex_);
    Statement st(db_, "SELECT status, diagnostic, expires_at FROM negative WHERE domain = ?");
    st.bind(1, domain);
    if (!st.step()) {
        return std::nullopt;
    }
    return NegativeEntry{st.text(0), st.text(1), TimePoint(std::chrono::seconds(st.integer(2)))};
}

void Store::clear_negative(const std::string& domain) {
    std::lock_guard lock(mutex_);
    Statement st(db_, "DELETE FROM negative WHERE domain = ?");
    st.bind(1, domain);
    st.step();
}

std::vector<ChatThread> Store::get_threads(const std::string& domain) const {
    std::lock_guard lock(mutex_);
    Statement st(db_, "SELECT json FROM threads WHERE domain = ? ORDER BY scope");
    st.bind(1, domain);
    std::vector<ChatThread> out;
    while (st.step()) {
        out.push_back(json::parse(st.text(0)).get<ChatThread>());
    }
    return out;
}

std::optional<ChatThread> Store::get_thread(const std::string& domain, const ChatScope& scope) const {
    std::lock_guard lock(mutex_);
    Statement st(db_, "SELECT json FROM threads WHERE domain = ? AND scope = ?");
    st.bind(1, domain).bind(2, scope.key());
    if (!st.step()) {
        return std::nullopt;
    }
    return json::parse(st.text(0)).get<ChatThread>();
}

void Store::put_thread(const ChatThread& thread) {
    std::lock_guard lock(mutex_);
    Statement st(db_, "INSERT OR REPLACE INTO threads(domain, scope, json) VALUES(?, ?, ?)");
    st.bind(1, thread.domain).bind(2, thread.scope.key()).bind(3, json(thread).dump());
    st.step();
}

void Store::delete_threads(const std::string& domain) {
    std::lock_guard lock(mutex_);
    Statement st(db_, "DELETE FROM threads WHERE domain = ?");
    st.bind(1, domain);
    st.step();
}

UserSettings Store::get_settings() const {
    std::lock_guard lock(mutex_);
    Statement st(db_, "SELECT length, complexity FROM settings WHERE id = 1");
    UserSettings out;
    if (st.step()) {
        out.length = response_length_from_string(st.text(0)).value_or(out.length);
        out.complexity = complexity_from_string(st.text(1)).value_or(out.complexity);
    }
    return out;
}

void Store::put_settings(const UserSettings& settings) {
    std::lock_guard lock(mutex_);
    Statement st(db_, "INSERT OR REPLACE INTO settings(id, length, complexity) VALUES(1, ?, ?)");
    st.bind(1, to_string(settings.length)).bind(2, to_string(settings.complexity));
    st.step();
}

std::optional<std::string> Store::get_carryover(const ChatScope& scope) const {
    std::lock_guard lock(mutex_);
    Statement st(db_, "SELECT question FROM carryover WHERE scope = ?");
    st.bind(1, scope.key());
    if (!st.step()) {
        return std::nullopt;
    }
    return st.text(0);
}

void Store::put_carryover(const ChatScope& scope, const std::string& question) {
    std::lock_guard lock(mutex_);
    Statement st(db_, "INSERT OR REPLACE INTO carryover(scope, question) VALUES(?, ?)");
    st.bind(1, scope.key()).bind(2, question);
    st.step();
}

void Store::log_event(const ActivityEvent& event) {
    std::lock_guard lock(mutex_);
    Statement st(db_, "INSERT INTO events(at, kind, payload) VALUES(?, ?, ?)");
    st.bind(1, format_utc(event.at)).bind(2, to_string(event.kind)).bind(3, json(event.payload).dump());
    st.step();
}

std::vector<ActivityEvent> Store::events() const {
    std::lock_guard lock(mutex_);
    Statement st(db_, "SELECT at, kind, payload FROM events ORDER BY id");
    std::vector<ActivityEvent> out;
    while (st.step()) {
        ActivityEvent e;
        e.at = parse_utc(st.text(0));
        e.kind = event_kind_from_string(st.text(1)).value_or(EventKind::PanelOpened);
        e.payload = json::parse(st.text(2)).get<std::map<std::string, std::string>>();
        out.push_back(std::move(e));
    }
    return out;
}

std::string Store::export_events_ndjson() const {
    std::string out;
    for (const auto& e : events()) {
        out += json{{"at", format_utc(e.at)}, {"kind", to_string(e.kind)}, {"payload", e.payload}}.dump();
        out += '\n';
    }
    return out;
}

} // namespace policylens
