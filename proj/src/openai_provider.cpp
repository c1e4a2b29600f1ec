#include "policylens/gateway.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace policylens {

OpenAiProvider::OpenAiProvider(GatewayConfig config) : config_(std::move(config)) {}

ModelResponse OpenAiProvider::complete(const PromptRequest& request, const std::string& model_id) {
    using Kind = ProviderError::Kind;
    if (config_.api_key.empty()) {
        throw ProviderError(Kind::ProviderUnavailable, "no API key configured");
    }
    const auto root = parse_url(config_.base_url);
    if (!root) {
        throw ProviderError(Kind::ProviderUnavailable, "invalid provider base URL: " + config_.base_url);
    }

    nlohmann::json messages = nlohmann::json::array();
    messages.push_back({{"role", "system"}, {"content", request.system_prompt}});
    for (const auto& turn : request.turns) {
        messages.push_back({{"role", std::string(to_string(turn.role))}, {"content", turn.text}});
    }
    if (request.user_prompt) {
        messages.push_back({{"role", "user"}, {"content", *request.user_prompt}});
    }
    const nlohmann::json body = {
        {"model", model_id},
        {"messages", messages},
        {"temperature", request.temperature},
        {"max_tokens", request.max_output_tokens},
    };

    httplib::Client client(root->origin());
    const auto secs = static_cast<time_t>(config_.timeout_seconds);
    client.set_connection_timeout(secs);
    client.set_read_timeout(secs);
    client.set_write_timeout(secs);
    std::string path = root->target;
    if (path.ends_with('/')) {
        path.pop_back();
    }
    path += "/chat/completions";
    const httplib::Headers headers = {{"Authorization", "Bearer " + config_.api_key}};
    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res) {
        throw ProviderError(Kind::ProviderUnavailable, "provider request failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw ProviderError(Kind::ProviderUnavailable, "provider returned HTTP " + std::to_string(res->status));
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        throw ProviderError(Kind::ResponseEmpty, std::string("unreadable provider response: ") + e.what());
    }
    ModelResponse out;
    out.provider_id = id();
    out.model_id = doc.value("model", model_id);
    const auto& choices = doc.value("choices", nlohmann::json::array());
    if (!choices.empty() && choices[0].contains("message") && choices[0]["message"]["content"].is_string()) {
        out.text = choices[0]["message"]["content"].get<std::string>();
    }
    if (doc.contains("usage")) {
        out.token_usage.input = doc["usage"].value("prompt_tokens", 0);
        out.token_usage.output = doc["usage"].value("completion_tokens", 0);
    }
    if (out.text.empty()) {
        throw ProviderError(Kind::ResponseEmpty, "provider returned no content");
    }
    return out;
}

} // namespace policylens
