#pragma once

#include "policylens/chat.hpp"
#include "policylens/gateway.hpp"
#include "policylens/store.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace policylens {

class ConversationError : public std::runtime_error {
public:
    enum class Kind { NotAssessed, UnknownCriterion, EmptyQuestion };
    ConversationError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Reads "1. A 2. B 3. C" style lists ("1.", "1)" and "1:" markers), in order.
std::vector<std::string> parse_suggestions(std::string_view text);

/// Static questions used when the model does not deliver three usable suggestions.
class FallbackQuestions {
public:
    static const FallbackQuestions& defaults();

    /// Criterion-specific questions first, then generic ones for the topic.
    std::vector<std::string> for_scope(const ChatScope& scope) const;

private:
    std::map<std::string, std::vector<std::string>> by_criterion_;
    std::vector<std::string> general_;
};

/// General and Criteria chats per domain, with three follow-up suggestions
/// and a cross-domain memory of the last question per scope.
class Conversation {
public:
    Conversation(std::shared_ptr<Store> store, std::shared_ptr<LlmGateway> gateway, Clock clock = system_clock());

    /// Appends the question and the model's answer atomically; on a provider
    /// error the thread is left untouched and the error propagates.
    std::string ask(const std::string& domain, const ChatScope& scope, const std::string& question,
                    const UserSettings& settings);

    /// Exactly three distinct questions, none already asked in the thread.
    std::vector<std::string> suggest(const std::string& domain, const ChatScope& scope);

    void clear_history(const std::string& domain);

    ChatThread thread(const std::string& domain, const ChatScope& scope) const;

    /// Throws ConversationError unless the domain is assessed and the scope names one of its criteria.
    void validate(const std::string& domain, const ChatScope& scope) const;

private:
    struct Context {
        PolicyAssessment assessment;
        PolicyDocument policy;
    };
    Context context_for(const std::string& domain, const ChatScope& scope) const;
    std::shared_ptr<std::mutex> thread_lock(const std::string& domain, const ChatScope& scope);

    std::shared_ptr<Store> store_;
    std::shared_ptr<LlmGateway> gateway_;
    Clock clock_;
    std::mutex locks_mutex_;
    std::map<std::string, std::shared_ptr<std::mutex>> locks_;
};

} // namespace policylens
