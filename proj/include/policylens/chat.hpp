#pragma once

#include "policylens/clock.hpp"
#include "policylens/prompts.hpp"

#include <optional>
#include <string>
#include <vector>

namespace policylens {

/// General chat, or a chat scoped to one criterion of the domain's assessment.
struct ChatScope {
    std::optional<std::string> criterion;

    static ChatScope general() { return {}; }
    static ChatScope for_criterion(std::string name) { return {std::move(name)}; }

    bool is_general() const { return !criterion.has_value(); }
    /// Stable storage key: "general" or "criterion:<normalized name>".
    std::string key() const;
    /// Topic text for the suggestion prompt.
    std::string topic() const;

    friend bool operator==(const ChatScope&, const ChatScope&) = default;
};

struct ChatMessage {
    Role role = Role::User;
    std::string text;
    TimePoint at{};
};

struct ChatThread {
    std::string domain;
    ChatScope scope;
    std::vector<ChatMessage> messages;
    /// Either empty or exactly three distinct questions.
    std::vector<std::string> suggestions;

    std::vector<ChatTurn> turns() const;
    std::vector<std::string> asked_questions() const;
};

} // namespace policylens
