#include "policylens/api.hpp"

#include "policylens/report.hpp"
#include "policylens/serialization.hpp"
#include "policylens/text.hpp"

#include <spdlog/spdlog.h>

namespace policylens {

namespace {

using nlohmann::json;

struct BadRequest : std::runtime_error {
    using std::runtime_error::runtime_error;
};

HttpResponse json_response(int status, const json& body) { return HttpResponse{status, body.dump(), "application/json", {}}; }

HttpResponse error(int status, const std::string& message) { return json_response(status, json{{"error", message}}); }

HttpResponse no_content() { return HttpResponse{204, "", "application/json", {}}; }

// Accepts a bare domain, a host or a full URL.
std::string normalize_domain(const std::string& text) {
    if (auto url = parse_url(text)) {
        return registrable_domain(url->host);
    }
    return registrable_domain(text);
}

json parse_body(const HttpRequest& request) {
    if (trim(request.body).empty()) {
        return json::object();
    }
    json body;
    try {
        body = json::parse(request.body);
    } catch (const json::exception& e) {
        throw BadRequest(std::string("malformed JSON: ") + e.what());
    }
    if (!body.is_object()) {
        throw BadRequest("request body must be a JSON object");
    }
    return body;
}

ChatScope scope_from_query(const HttpRequest& request) {
    if (auto it = request.query.find("criterion"); it != request.query.end() && !it->second.empty()) {
        return ChatScope::for_criterion(it->second);
    }
    return ChatScope::general();
}

std::string query_value(const HttpRequest& request, const std::string& key) {
    auto it = request.query.find(key);
    return it == request.query.end() ? std::string() : it->second;
}

} // namespace

ApiRouter::ApiRouter(Engine& engine) : engine_(engine) {}

bool ApiRouter::origin_allowed(const std::string& origin) const {
    for (const auto& allowed : engine_.config.allowed_origins) {
        if (allowed == "*" || allowed == origin) {
            return true;
        }
        if (allowed.ends_with('*') && origin.starts_with(std::string_view(allowed).substr(0, allowed.size() - 1))) {
            return true;
        }
    }
    return false;
}

void ApiRouter::record(EventKind kind, std::map<std::string, std::string> payload) {
    if (!engine_.config.study_mode) {
        return;
    }
    try {
        engine_.store->log_event({engine_.clock(), kind, std::move(payload)});
    } catch (const StoreError& e) {
        spdlog::warn("activity log write failed: {}", e.what());
    }
}

HttpResponse ApiRouter::handle(const HttpRequest& request) {
    HttpResponse response;
    if (auto v = request.headers.find("x-api-version"); v != request.headers.end() && v->second != kApiVersion) {
        response = error(400, "unsupported API version " + v->second + ", this service speaks v1");
    } else if (request.method == "OPTIONS") {
        response = no_content();
    } else {
        try {
            response = route(request);
        } catch (const BadRequest& e) {
            response = error(400, e.what());
        } catch (const json::exception& e) {
            response = error(422, std::string("bad field: ") + e.what());
        } catch (const ConversationError& e) {
            response = error(e.kind() == ConversationError::Kind::NotAssessed ? 409 : 422, e.what());
        } catch (const PromptError& e) {
            response = error(e.kind() == PromptError::Kind::TooLong ? 413 : 409, e.what());
        } catch (const ProviderError& e) {
            response = error(502, e.what());
        } catch (const StoreError& e) {
            response = error(500, std::string("storage failure: ") + e.what());
        } catch (const std::invalid_argument& e) {
            response = error(422, e.what());
        } catch (const std::exception& e) {
            response = error(500, e.what());
        }
    }
    response.headers["X-API-Version"] = kApiVersion;
    if (auto o = request.headers.find("origin"); o != request.headers.end() && origin_allowed(o->second)) {
        response.headers["Access-Control-Allow-Origin"] = o->second;
        response.headers["Access-Control-Allow-Methods"] = "GET, POST, PUT, DELETE, OPTIONS";
        response.headers["Access-Control-Allow-Headers"] = "Content-Type, X-API-Version";
        response.headers["Vary"] = "Origin";
    }
    spdlog::debug("{} {} -> {}", request.method, request.path, response.status);
    return response;
}

HttpResponse ApiRouter::route(const HttpRequest& request) {
    const auto& m = request.method;
    const auto& p = request.path;
    auto tail = [&](std::string_view prefix) -> std::optional<std::string> {
        if (p.size() > prefix.size() && p.starts_with(prefix)) {
            return p.substr(prefix.size());
        }
        return std::nullopt;
    };

    if (p == "/health" && m == "GET") {
        return json_response(200, json{{"status", "ok"}, {"version", kApiVersion}});
    }
    if (p == "/assess" && m == "POST") {
        return post_assess(request);
    }
    if (p == "/chat" && m == "POST") {
        return post_chat(request);
    }
    if (p == "/suggestions" && m == "GET") {
        return get_suggestions(request);
    }
    if (p == "/policy-text" && m == "GET") {
        return get_policy_text(request);
    }
    if (p == "/settings" && m == "GET") {
        return get_settings();
    }
    if (p == "/settings" && m == "PUT") {
        return put_settings(request);
    }
    if (auto domain = tail("/history/")) {
        if (m == "DELETE") {
            return delete_history(normalize_domain(*domain));
        }
        if (m == "GET") {
            return get_history(normalize_domain(*domain));
        }
    }
    if (auto domain = tail("/reassess/"); domain && m == "POST") {
        return post_reassess(normalize_domain(*domain));
    }
    if (p == "/events" && m == "POST") {
        return post_event(request);
    }
    if (p == "/events" && m == "GET") {
        return get_events();
    }
    return error(404, "no route for " + m + " " + p);
}

HttpResponse ApiRouter::post_assess(const HttpRequest& request) {
    const auto body = parse_body(request);
    const auto page_url = body.value("page_url", "");
    if (!parse_url(page_url)) {
        return error(422, "page_url must be an absolute http(s) URL");
    }
    std::optional<std::string> policy_url;
    if (body.contains("policy_url") && body.at("policy_url").is_string()) {
        policy_url = body.at("policy_url").get<std::string>();
        if (!parse_url(*policy_url)) {
            return error(422, "policy_url must be an absolute http(s) URL");
        }
    }
    record(EventKind::AssessmentRequested, {{"page_url", page_url}});
    const auto result = engine_.cache->get_or_assess(page_url, policy_url);
    return json_response(200, domain_result_json(result));
}

HttpResponse ApiRouter::post_chat(const HttpRequest& request) {
    const auto body = parse_body(request);
    const auto domain = normalize_domain(body.value("domain", ""));
    if (domain.empty()) {
        return error(422, "domain is required");
    }
    ChatScope scope = ChatScope::general();
    if (body.contains("scope")) {
        try {
            scope = body.at("scope").get<ChatScope>();
        } catch (const std::exception& e) {
            return error(422, std::string("bad scope: ") + e.what());
        }
    }
    const auto question = body.value("question", "");
    if (trim(question).empty()) {
        return error(422, "question must not be empty");
    }
    engine_.conversation->validate(domain, scope);
    if (body.contains("settings")) {
        UserSettings settings;
        try {
            settings = body.at("settings").get<UserSettings>();
        } catch (const std::exception& e) {
            return error(422, std::string("bad settings: ") + e.what());
        }
        if (settings != engine_.store->get_settings()) {
            engine_.store->put_settings(settings);
            record(EventKind::SettingsChanged,
                   {{"length", std::string(to_string(settings.length))},
                    {"complexity", std::string(to_string(settings.complexity))}});
        }
    }
    const auto settings = engine_.store->get_settings();
    const auto answer = engine_.conversation->ask(domain, scope, question, settings);
    record(EventKind::QuestionAsked,
           {{"domain", domain}, {"scope", scope.key()}, {"question_length", std::to_string(question.size())}});
    const auto suggestions = engine_.conversation->suggest(domain, scope);
    return json_response(200, json{{"answer", answer}, {"suggestions", suggestions}});
}

HttpResponse ApiRouter::get_suggestions(const HttpRequest& request) {
    const auto domain = normalize_domain(query_value(request, "domain"));
    if (domain.empty()) {
        return error(422, "domain is required");
    }
    const auto scope = scope_from_query(request);
    engine_.conversation->validate(domain, scope);
    auto thread = engine_.conversation->thread(domain, scope);
    // Reuse stored suggestions; generate eagerly when a panel opens for the first time.
    auto suggestions = thread.suggestions.size() == 3 ? thread.suggestions : engine_.conversation->suggest(domain, scope);
    return json_response(200, json{{"domain", domain}, {"scope", scope}, {"suggestions", suggestions}});
}

HttpResponse ApiRouter::get_policy_text(const HttpRequest& request) {
    const auto domain = normalize_domain(query_value(request, "domain"));
    const auto stored = engine_.store->get_policy(domain);
    if (!stored) {
        return error(404, "no policy stored for " + domain);
    }
    record(EventKind::PolicyViewed, {{"domain", domain}});
    const auto& doc = stored->document;
    return json_response(200, json{{"domain", domain},
                                   {"status", to_string(doc.status)},
                                   {"source_url", doc.source_url},
                                   {"word_count", doc.word_count},
                                   {"alternates", doc.alternates},
                                   {"fetched_at", format_utc(doc.fetched_at)},
                                   {"text", doc.text}});
}

HttpResponse ApiRouter::get_settings() { return json_response(200, json(engine_.store->get_settings())); }

HttpResponse ApiRouter::put_settings(const HttpRequest& request) {
    const auto body = parse_body(request);
    UserSettings settings;
    try {
        settings = body.get<UserSettings>();
    } catch (const std::invalid_argument& e) {
        return error(422, e.what());
    }
    engine_.store->put_settings(settings);
    record(EventKind::SettingsChanged, {{"length", std::string(to_string(settings.length))},
                                        {"complexity", std::string(to_string(settings.complexity))}});
    return json_response(200, json(settings));
}

HttpResponse ApiRouter::get_history(const std::string& domain) {
    return json_response(200, json{{"domain", domain}, {"threads", engine_.store->get_threads(domain)}});
}

HttpResponse ApiRouter::delete_history(const std::string& domain) {
    engine_.conversation->clear_history(domain);
    return no_content();
}

HttpResponse ApiRouter::post_reassess(const std::string& domain) {
    auto result = engine_.cache->reassess(domain);
    if (!result) {
        return error(404, "domain was never assessed: " + domain);
    }
    return json_response(200, domain_result_json(*result));
}

HttpResponse ApiRouter::post_event(const HttpRequest& request) {
    if (!engine_.config.study_mode) {
        return error(403, "activity logging is only available in study mode");
    }
    const auto body = parse_body(request);
    const auto kind = event_kind_from_string(body.value("kind", ""));
    if (!kind) {
        return error(422, "unknown event kind");
    }
    std::map<std::string, std::string> payload;
    if (body.contains("payload")) {
        for (const auto& [k, v] : body.at("payload").items()) {
            payload[k] = v.is_string() ? v.get<std::string>() : v.dump();
        }
    }
    engine_.store->log_event({engine_.clock(), *kind, std::move(payload)});
    return no_content();
}

HttpResponse ApiRouter::get_events() {
    if (!engine_.config.study_mode) {
        return error(403, "activity logging is only available in study mode");
    }
    return HttpResponse{200, engine_.store->export_events_ndjson(), "application/x-ndjson", {}};
}

} // namespace policylens
