#include "policylens/config.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace policylens {

namespace {

using nlohmann::json;

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key) && !j.at(key).is_null()) {
        out = j.at(key).get<T>();
    }
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

void ServiceConfig::validate() const {
    if (port < 0 || port > 65535) {
        throw ConfigError("port out of range");
    }
    if (worker_threads < 1) {
        throw ConfigError("worker_threads must be positive");
    }
    if (acquisition.fetch_timeout_seconds <= 0) {
        throw ConfigError("fetch timeout must be positive");
    }
    if (acquisition.keywords.empty()) {
        throw ConfigError("keyword table must not be empty");
    }
    if (gateway.assessment_model.empty() || gateway.lightweight_model.empty()) {
        throw ConfigError("model ids for both tiers are required");
    }
    if (gateway.budget.max_prompt_tokens == 0) {
        throw ConfigError("max_prompt_tokens must be positive");
    }
    if (!mock) {
        if (gateway.api_key.empty()) {
            throw ConfigError("no provider API key (set " + api_key_env + ") and mock mode is off");
        }
        if (!parse_url(gateway.base_url)) {
            throw ConfigError("provider base_url is not an absolute http(s) URL: " + gateway.base_url);
        }
    }
    if (mock_scenario_dir && !std::filesystem::is_directory(*mock_scenario_dir)) {
        throw ConfigError("mock scenario directory not found: " + mock_scenario_dir->string());
    }
}

EnvLookup process_env() {
    return [](const std::string& name) -> std::optional<std::string> {
        if (const char* v = std::getenv(name.c_str())) {
            return std::string(v);
        }
        return std::nullopt;
    };
}

ServiceConfig config_from_json(const std::string& text) {
    ServiceConfig c;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    try {
        read(j, "bind_host", c.bind_host);
        read(j, "port", c.port);
        read(j, "worker_threads", c.worker_threads);
        read(j, "api_key_env", c.api_key_env);
        read(j, "mock", c.mock);
        read(j, "store_path", c.store_path);
        read(j, "negative_ttl_seconds", c.negative_ttl_seconds);
        read(j, "study_mode", c.study_mode);
        read(j, "allowed_origins", c.allowed_origins);
        if (j.contains("mock_scenario_dir")) {
            c.mock_scenario_dir = j.at("mock_scenario_dir").get<std::string>();
        }
        if (j.contains("templates_path")) {
            c.templates_path = j.at("templates_path").get<std::string>();
        }
        if (j.contains("provider")) {
            const auto& p = j.at("provider");
            read(p, "assessment_model", c.gateway.assessment_model);
            read(p, "lightweight_model", c.gateway.lightweight_model);
            read(p, "base_url", c.gateway.base_url);
            read(p, "timeout_seconds", c.gateway.timeout_seconds);
            read(p, "assessment_temperature", c.gateway.assessment_temperature);
            read(p, "chat_temperature", c.gateway.chat_temperature);
            read(p, "suggestion_temperature", c.gateway.suggestion_temperature);
            read(p, "assessment_max_tokens", c.gateway.assessment_max_tokens);
            read(p, "chat_max_tokens", c.gateway.chat_max_tokens);
            read(p, "suggestion_max_tokens", c.gateway.suggestion_max_tokens);
            read(p, "max_prompt_tokens", c.gateway.budget.max_prompt_tokens);
        }
        if (j.contains("acquisition")) {
            const auto& a = j.at("acquisition");
            read(a, "fetch_timeout_seconds", c.acquisition.fetch_timeout_seconds);
            read(a, "min_words", c.acquisition.min_words);
            read(a, "keywords", c.acquisition.keywords);
            read(a, "host_overrides", c.acquisition.host_overrides);
            read(a, "max_redirects", c.acquisition.max_redirects);
            if (a.contains("render_command") && a.at("render_command").is_string()) {
                c.acquisition.render_command = a.at("render_command").get<std::string>();
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    return c;
}

ServiceConfig load_config(const std::optional<std::filesystem::path>& path, const EnvLookup& env) {
    ServiceConfig c = path ? config_from_json(slurp(*path)) : ServiceConfig{};
    if (auto v = env("POLICYLENS_BIND")) {
        c.bind_host = *v;
    }
    if (auto v = env("POLICYLENS_PORT")) {
        try {
            c.port = std::stoi(*v);
        } catch (const std::exception&) {
            throw ConfigError("POLICYLENS_PORT is not a number");
        }
    }
    if (auto v = env("POLICYLENS_STORE")) {
        c.store_path = *v;
    }
    if (auto v = env("POLICYLENS_MOCK_DIR")) {
        c.mock = true;
        c.mock_scenario_dir = *v;
    }
    if (auto v = env("POLICYLENS_STUDY_MODE")) {
        c.study_mode = *v == "1" || *v == "true";
    }
    if (auto v = env("POLICYLENS_BASE_URL")) {
        c.gateway.base_url = *v;
    }
    if (auto v = env(c.api_key_env)) {
        c.gateway.api_key = *v;
    }
    return c;
}

PromptTemplates load_templates(const std::filesystem::path& path) {
    PromptTemplates t = PromptTemplates::english();
    try {
        const auto j = json::parse(slurp(path));
        read(j, "assessment", t.assessment);
        read(j, "chat", t.chat);
        read(j, "suggestion_system", t.suggestion_system);
        read(j, "suggestion_user", t.suggestion_user);
        read(j, "format_reminder", t.format_reminder);
    } catch (const json::exception& e) {
        throw ConfigError("bad template file " + path.string() + ": " + e.what());
    }
    const std::vector<std::pair<const std::string*, std::vector<std::string_view>>> required = {
        {&t.assessment, {slot::kPolicy}},
        {&t.chat, {slot::kPolicy, slot::kRating, slot::kComplexity, slot::kLength}},
        {&t.suggestion_system, {slot::kAsked}},
        {&t.suggestion_user, {slot::kCriterion, slot::kHistory}},
    };
    for (const auto& [text, slots] : required) {
        for (auto marker : slots) {
            if (text->find(marker) == std::string::npos) {
                throw ConfigError("template in " + path.string() + " lacks slot " + std::string(marker));
            }
        }
    }
    return t;
}

} // namespace policylens
