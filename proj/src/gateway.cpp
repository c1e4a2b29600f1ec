#include "policylens/gateway.hpp"

#include "policylens/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>

namespace policylens {

namespace {

std::optional<ModelTier> tier_from_string(std::string_view s) {
    if (s == "assessment") {
        return ModelTier::Assessment;
    }
    if (s == "lightweight") {
        return ModelTier::Lightweight;
    }
    return std::nullopt;
}

ProviderError::Kind error_kind_from_string(std::string_view s) {
    return s == "empty" ? ProviderError::Kind::ResponseEmpty : ProviderError::Kind::ProviderUnavailable;
}

} // namespace

std::string_view to_string(ModelTier tier) { return tier == ModelTier::Assessment ? "assessment" : "lightweight"; }

std::string prompt_hash(const PromptRequest& request) {
    auto h = fnv1a64(request.system_prompt);
    for (const auto& turn : request.turns) {
        h = fnv1a64("\x1f", h);
        h = fnv1a64(to_string(turn.role), h);
        h = fnv1a64(":", h);
        h = fnv1a64(turn.text, h);
    }
    h = fnv1a64("\x1f", h);
    if (request.user_prompt) {
        h = fnv1a64(*request.user_prompt, h);
    }
    return hex64(h);
}

void MockProvider::script_hash(const std::string& hash, std::string response) {
    std::lock_guard lock(mutex_);
    by_hash_[hash] = std::move(response);
}

void MockProvider::script_step(std::size_t index, std::string response) {
    std::lock_guard lock(mutex_);
    by_step_[index] = std::move(response);
}

void MockProvider::script_contains(std::string needle, std::optional<ModelTier> tier, std::string response) {
    std::lock_guard lock(mutex_);
    contains_.push_back({std::move(needle), tier, std::move(response)});
}

void MockProvider::script_error(std::size_t index, ProviderError::Kind kind) {
    std::lock_guard lock(mutex_);
    errors_[index] = kind;
}

void MockProvider::set_responder(Responder responder) {
    std::lock_guard lock(mutex_);
    responder_ = std::move(responder);
}

void MockProvider::load_scenario(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        std::ifstream in(file);
        const auto doc = nlohmann::json::parse(in);
        const auto& entries = doc.contains("responses") ? doc.at("responses") : doc;
        for (const auto& e : entries) {
            if (e.contains("error")) {
                script_error(e.at("step").get<std::size_t>(), error_kind_from_string(e.at("error").get<std::string>()));
                continue;
            }
            auto response = e.at("response").get<std::string>();
            if (e.contains("hash")) {
                script_hash(e.at("hash").get<std::string>(), std::move(response));
            } else if (e.contains("step")) {
                script_step(e.at("step").get<std::size_t>(), std::move(response));
            } else if (e.contains("contains")) {
                std::optional<ModelTier> tier;
                if (e.contains("tier")) {
                    tier = tier_from_string(e.at("tier").get<std::string>());
                }
                script_contains(e.at("contains").get<std::string>(), tier, std::move(response));
            } else {
                throw std::invalid_argument(file.string() + ": entry needs hash, step or contains");
            }
        }
    }
}

ModelResponse MockProvider::complete(const PromptRequest& request, const std::string& model_id) {
    std::unique_lock lock(mutex_);
    const auto index = next_index_++;
    calls_.push_back({index, request, model_id});

    if (auto err = errors_.find(index); err != errors_.end()) {
        throw ProviderError(err->second, "scripted failure at step " + std::to_string(index));
    }
    std::optional<std::string> text;
    if (auto it = by_hash_.find(prompt_hash(request)); it != by_hash_.end()) {
        text = it->second;
    }
    if (!text && responder_) {
        auto responder = responder_;
        lock.unlock();
        text = responder(request);
        lock.lock();
    }
    if (!text) {
        std::string haystack = request.system_prompt;
        for (const auto& t : request.turns) {
            haystack += '\n' + t.text;
        }
        if (request.user_prompt) {
            haystack += '\n' + *request.user_prompt;
        }
        for (const auto& rule : contains_) {
            if ((!rule.tier || *rule.tier == request.tier) && haystack.find(rule.needle) != std::string::npos) {
                text = rule.response;
                break;
            }
        }
    }
    if (!text) {
        if (auto it = by_step_.find(index); it != by_step_.end()) {
            text = it->second;
        }
    }
    if (!text || text->empty()) {
        throw ProviderError(ProviderError::Kind::ResponseEmpty, "mock has no script for step " + std::to_string(index));
    }
    ModelResponse response;
    response.text = *text;
    response.provider_id = id();
    response.model_id = model_id;
    response.token_usage.input = static_cast<int>(estimate_tokens(request.system_prompt));
    response.token_usage.output = static_cast<int>(estimate_tokens(response.text));
    return response;
}

std::size_t MockProvider::call_count() const {
    std::lock_guard lock(mutex_);
    return calls_.size();
}

std::size_t MockProvider::call_count(ModelTier tier) const {
    std::lock_guard lock(mutex_);
    return static_cast<std::size_t>(
        std::count_if(calls_.begin(), calls_.end(), [&](const Call& c) { return c.request.tier == tier; }));
}

std::vector<MockProvider::Call> MockProvider::transcript() const {
    std::lock_guard lock(mutex_);
    return calls_;
}

void MockProvider::reset_transcript() {
    std::lock_guard lock(mutex_);
    calls_.clear();
}

LlmGateway::LlmGateway(GatewayConfig config, std::shared_ptr<ModelProvider> provider)
    : config_(std::move(config)), provider_(std::move(provider)),
      templates_(std::make_shared<PromptTemplates>(PromptTemplates::english())) {}

void LlmGateway::set_templates(PromptTemplates templates) {
    templates_ = std::make_shared<const PromptTemplates>(std::move(templates));
}

const std::string& LlmGateway::model_for(ModelTier tier) const {
    return tier == ModelTier::Assessment ? config_.assessment_model : config_.lightweight_model;
}

ModelResponse LlmGateway::complete(const PromptRequest& request) {
    if (request.system_prompt.empty()) {
        throw std::invalid_argument("system prompt must not be empty");
    }
    const auto& model = model_for(request.tier);
    for (int attempt = 0;; ++attempt) {
        try {
            auto response = provider_->complete(request, model);
            if (response.text.empty()) {
                throw ProviderError(ProviderError::Kind::ResponseEmpty, "provider returned empty text");
            }
            return response;
        } catch (const ProviderError&) {
            if (attempt >= 1) {
                throw;
            }
        }
    }
}

} // namespace policylens
