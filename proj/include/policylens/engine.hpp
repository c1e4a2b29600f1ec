#pragma once

#include "policylens/assessment.hpp"
#include "policylens/config.hpp"
#include "policylens/conversation.hpp"
#include "policylens/store.hpp"

#include <memory>

namespace policylens {

/// All primary components wired from one ServiceConfig.
struct Engine {
    ServiceConfig config;
    std::shared_ptr<Store> store;
    std::shared_ptr<ModelProvider> provider;
    /// Set when the provider is the scripted mock.
    std::shared_ptr<MockProvider> mock;
    std::shared_ptr<LlmGateway> gateway;
    std::shared_ptr<PolicyAcquirer> acquirer;
    std::shared_ptr<Assessor> assessor;
    std::shared_ptr<AssessmentCache> cache;
    std::shared_ptr<Conversation> conversation;
    Clock clock;

    struct Overrides {
        std::shared_ptr<ModelProvider> provider;
        std::shared_ptr<PageFetcher> fetcher;
        std::shared_ptr<Store> store;
        Clock clock;
    };

    /// Validates the config first; throws ConfigError.
    static Engine build(const ServiceConfig& config, Overrides overrides);
    static Engine build(const ServiceConfig& config) { return build(config, Overrides{}); }
};

} // namespace policylens
