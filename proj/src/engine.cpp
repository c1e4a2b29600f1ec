#include "policylens/engine.hpp"

namespace policylens {

Engine Engine::build(const ServiceConfig& config, Overrides overrides) {
    {
        // An injected provider stands in for the live one.
        auto checked = config;
        checked.mock = checked.mock || overrides.provider != nullptr;
        checked.validate();
    }
    Engine e;
    e.config = config;
    e.clock = overrides.clock ? overrides.clock : system_clock();
    e.store = overrides.store ? overrides.store : std::make_shared<Store>(config.store_path);

    if (overrides.provider) {
        e.provider = overrides.provider;
        e.mock = std::dynamic_pointer_cast<MockProvider>(overrides.provider);
    } else if (config.mock) {
        e.mock = std::make_shared<MockProvider>();
        if (config.mock_scenario_dir) {
            e.mock->load_scenario(*config.mock_scenario_dir);
        }
        e.provider = e.mock;
    } else {
        e.provider = std::make_shared<OpenAiProvider>(config.gateway);
    }
    e.gateway = std::make_shared<LlmGateway>(config.gateway, e.provider);
    if (config.templates_path) {
        e.gateway->set_templates(load_templates(*config.templates_path));
    }

    std::shared_ptr<PageFetcher> fetcher =
        overrides.fetcher ? overrides.fetcher : std::shared_ptr<PageFetcher>(make_fetcher(config.acquisition));
    e.acquirer = std::make_shared<PolicyAcquirer>(config.acquisition, fetcher, e.clock);
    e.assessor = std::make_shared<Assessor>(e.gateway, e.clock);
    e.cache = std::make_shared<AssessmentCache>(e.store, e.acquirer, e.assessor, e.clock,
                                                std::chrono::seconds(config.negative_ttl_seconds));
    e.conversation = std::make_shared<Conversation>(e.store, e.gateway, e.clock);
    return e;
}

} // namespace policylens
