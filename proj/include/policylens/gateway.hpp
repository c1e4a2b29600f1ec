#pragma once

#include "policylens/prompts.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace policylens {

enum class ModelTier { Assessment, Lightweight };

std::string_view to_string(ModelTier tier);

struct PromptRequest {
    ModelTier tier = ModelTier::Assessment;
    std::string system_prompt;
    /// Prior conversation, oldest first, sent after the system prompt.
    std::vector<ChatTurn> turns;
    std::optional<std::string> user_prompt;
    int max_output_tokens = 1024;
    double temperature = 0.0;
};

struct TokenUsage {
    int input = 0;
    int output = 0;
};

struct ModelResponse {
    std::string text;
    TokenUsage token_usage;
    std::string provider_id;
    std::string model_id;
};

class ProviderError : public std::runtime_error {
public:
    enum class Kind { ProviderUnavailable, ResponseEmpty };
    ProviderError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Stable key for mock scripting: FNV-1a over system, turns and user prompt.
std::string prompt_hash(const PromptRequest& request);

class ModelProvider {
public:
    virtual ~ModelProvider() = default;
    virtual ModelResponse complete(const PromptRequest& request, const std::string& model_id) = 0;
    virtual std::string id() const = 0;
};

struct GatewayConfig {
    std::string assessment_model = "gpt-4o";
    std::string lightweight_model = "gpt-4o-mini";
    /// OpenAI-compatible API root; requests go to {base_url}/chat/completions.
    std::string base_url = "https://api.openai.com/v1";
    std::string api_key;
    double timeout_seconds = 60.0;
    double assessment_temperature = 0.0;
    double chat_temperature = 0.0;
    double suggestion_temperature = 0.7;
    int assessment_max_tokens = 1200;
    int chat_max_tokens = 600;
    int suggestion_max_tokens = 200;
    PromptBudget budget;
};

class OpenAiProvider final : public ModelProvider {
public:
    explicit OpenAiProvider(GatewayConfig config);
    ModelResponse complete(const PromptRequest& request, const std::string& model_id) override;
    std::string id() const override { return "openai-compatible"; }

private:
    GatewayConfig config_;
};

/// Deterministic scripted provider. Lookup order per call: prompt hash,
/// responder callback, substring rules, then the step script by call index.
class MockProvider final : public ModelProvider {
public:
    struct Call {
        std::size_t index;
        PromptRequest request;
        std::string model_id;
    };
    using Responder = std::function<std::optional<std::string>(const PromptRequest&)>;

    MockProvider() = default;

    void script_hash(const std::string& hash, std::string response);
    void script_step(std::size_t index, std::string response);
    void script_contains(std::string needle, std::optional<ModelTier> tier, std::string response);
    void script_error(std::size_t index, ProviderError::Kind kind);
    void set_responder(Responder responder);
    /// Loads every *.json file of a scenario directory in filename order.
    void load_scenario(const std::filesystem::path& dir);

    ModelResponse complete(const PromptRequest& request, const std::string& model_id) override;
    std::string id() const override { return "mock"; }

    std::size_t call_count() const;
    std::size_t call_count(ModelTier tier) const;
    std::vector<Call> transcript() const;
    void reset_transcript();

private:
    struct ContainsRule {
        std::string needle;
        std::optional<ModelTier> tier;
        std::string response;
    };

    mutable std::mutex mutex_;
    std::map<std::string, std::string> by_hash_;
    std::map<std::size_t, std::string> by_step_;
    std::map<std::size_t, ProviderError::Kind> errors_;
    std::vector<ContainsRule> contains_;
    Responder responder_;
    std::vector<Call> calls_;
    std::size_t next_index_ = 0;
};

/// Tier routing plus a single retry on provider errors.
class LlmGateway {
public:
    LlmGateway(GatewayConfig config, std::shared_ptr<ModelProvider> provider);

    ModelResponse complete(const PromptRequest& request);

    const std::string& model_for(ModelTier tier) const;
    const GatewayConfig& config() const { return config_; }
    const PromptTemplates& templates() const { return *templates_; }
    void set_templates(PromptTemplates templates);

private:
    GatewayConfig config_;
    std::shared_ptr<ModelProvider> provider_;
    std::shared_ptr<const PromptTemplates> templates_;
};

} // namespace policylens
