#pragma once

#include "policylens/acquisition.hpp"
#include "policylens/gateway.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace policylens {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ServiceConfig {
    std::string bind_host = "127.0.0.1";
    int port = 8787;
    int worker_threads = 8;

    GatewayConfig gateway;
    /// Environment variable holding the provider API key.
    std::string api_key_env = "OPENAI_API_KEY";
    /// Use the scripted mock provider instead of a live model.
    bool mock = false;
    std::optional<std::filesystem::path> mock_scenario_dir;
    std::optional<std::filesystem::path> templates_path;

    std::string store_path = "policylens.db";
    AcquisitionConfig acquisition;
    int negative_ttl_seconds = 600;

    /// Enables activity logging and the /events endpoints.
    bool study_mode = false;
    /// CORS allow-list; a trailing '*' matches any suffix.
    std::vector<std::string> allowed_origins = {"chrome-extension://*", "moz-extension://*"};

    /// Throws ConfigError. A live provider needs an API key and a valid base URL.
    void validate() const;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

EnvLookup process_env();

/// Reads an optional JSON config file, then applies environment overrides
/// (POLICYLENS_BIND, POLICYLENS_PORT, POLICYLENS_STORE, POLICYLENS_MOCK_DIR,
/// POLICYLENS_STUDY_MODE, POLICYLENS_BASE_URL and the API key variable).
ServiceConfig load_config(const std::optional<std::filesystem::path>& path, const EnvLookup& env = process_env());

ServiceConfig config_from_json(const std::string& text);

/// Same keys as PromptTemplates, as a JSON object of strings.
PromptTemplates load_templates(const std::filesystem::path& path);

} // namespace policylens
