#include "policylens/api.hpp"
#include "policylens/report.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <csignal>
#include <iostream>

using namespace policylens;

namespace {

HttpService* g_service = nullptr;

void on_signal(int) {
    if (g_service) {
        g_service->stop();
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Privacy policy assessment service"};
    app.require_subcommand(1);

    std::optional<std::string> config_path;
    std::optional<std::string> store_path;
    std::optional<std::string> mock_dir;
    std::vector<std::string> resolves;
    bool verbose = false;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--store", store_path, "SQLite database path");
    app.add_option("--mock-dir", mock_dir, "Use the scripted mock provider with this scenario directory");
    app.add_option("--resolve", resolves, "Pin host=ip:port for fetching")->take_all();
    app.add_flag("-v,--verbose", verbose, "Log requests");

    auto* serve = app.add_subcommand("serve", "Run the HTTP API");
    std::optional<int> port;
    serve->add_option("--port", port, "Port (0 picks a free one)");

    auto* assess = app.add_subcommand("assess", "Assess the privacy policy of each page URL");
    std::vector<std::string> assess_urls;
    bool as_json = false;
    assess->add_option("urls", assess_urls, "Page URLs")->required();
    assess->add_flag("--json", as_json, "One JSON object per line");

    auto* rank = app.add_subcommand("rank", "Compare several sites side by side");
    std::vector<std::string> rank_urls;
    rank->add_option("urls", rank_urls, "Page URLs")->required();

    auto* events = app.add_subcommand("events", "Activity log");
    events->require_subcommand(1);
    auto* events_export = events->add_subcommand("export", "Print the log as NDJSON");

    CLI11_PARSE(app, argc, argv);
    spdlog::set_level(verbose ? spdlog::level::info : spdlog::level::warn);

    try {
        auto config = load_config(config_path ? std::optional<std::filesystem::path>(*config_path) : std::nullopt);
        if (store_path) {
            config.store_path = *store_path;
        }
        if (mock_dir) {
            config.mock = true;
            config.mock_scenario_dir = *mock_dir;
        }
        for (const auto& r : resolves) {
            const auto eq = r.find('=');
            if (eq == std::string::npos) {
                throw ConfigError("--resolve expects host=ip:port, got " + r);
            }
            config.acquisition.host_overrides[r.substr(0, eq)] = r.substr(eq + 1);
        }
        if (port) {
            config.port = *port;
        }
        auto engine = Engine::build(config);

        if (*serve) {
            HttpService service(engine);
            const int bound = service.bind(config.bind_host, config.port);
            if (bound < 0) {
                std::cerr << "cannot bind " << config.bind_host << ":" << config.port << "\n";
                return 1;
            }
            g_service = &service;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cout << "listening on http://" << config.bind_host << ":" << bound << std::endl;
            service.serve();
            g_service = nullptr;
            return 0;
        }
        if (*assess) {
            for (const auto& url : assess_urls) {
                const auto result = engine.cache->get_or_assess(url);
                if (as_json) {
                    std::cout << domain_result_json(result).dump() << "\n";
                } else {
                    std::cout << ranking_report({result});
                }
            }
            return 0;
        }
        if (*rank) {
            std::vector<DomainResult> results;
            for (const auto& url : rank_urls) {
                results.push_back(engine.cache->get_or_assess(url));
            }
            std::cout << ranking_report(std::move(results));
            return 0;
        }
        if (*events_export) {
            std::cout << engine.store->export_events_ndjson();
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
