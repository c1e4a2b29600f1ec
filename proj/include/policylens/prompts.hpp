#pragma once

#include "policylens/acquisition.hpp"
#include "policylens/settings.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace policylens {

enum class Role { User, Assistant };

std::string_view to_string(Role role);

struct ChatTurn {
    Role role = Role::User;
    std::string text;

    friend bool operator==(const ChatTurn&, const ChatTurn&) = default;
};

/// Template set with literal slot markers. The English set is the default;
/// localized sets can be loaded with the same markers.
struct PromptTemplates {
    std::string assessment;
    std::string chat;
    std::string suggestion_system;
    std::string suggestion_user;
    /// Appended to the assessment prompt when the first answer could not be parsed.
    std::string format_reminder;

    static const PromptTemplates& english();
};

namespace slot {
inline constexpr std::string_view kPolicy = "<Privacy policy here>";
inline constexpr std::string_view kRating = "<criteria evaluation result here>";
inline constexpr std::string_view kComplexity = "<Complexity according to settings here>.";
inline constexpr std::string_view kLength = "<Answer length according to settings here>";
inline constexpr std::string_view kAsked = "<listing already asked questions here>";
inline constexpr std::string_view kCriterion = "<criterion inserted here>";
inline constexpr std::string_view kHistory = "<chat history here>";
} // namespace slot

class PromptError : public std::runtime_error {
public:
    enum class Kind { PolicyNotOk, TooLong };
    PromptError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct PromptBudget {
    /// Upper bound on estimated prompt tokens (bytes / 4, rounded up).
    std::size_t max_prompt_tokens = 100000;
};

std::size_t estimate_tokens(std::string_view text);

struct RenderedPrompt {
    std::string text;
    bool truncated = false;
};

/// Single-pass slot substitution: slot markers inside substituted values are never expanded.
std::string fill_slots(std::string_view tmpl, const std::vector<std::pair<std::string_view, std::string_view>>& values);

/// Keeps head and tail halves within `max_bytes`, joined by a truncation marker.
std::string truncate_middle(std::string_view text, std::size_t max_bytes);
inline constexpr std::string_view kTruncationMarker = "\n[...]\n";

RenderedPrompt render_assessment_prompt(const PolicyDocument& policy, const PromptBudget& budget = {},
                                        const PromptTemplates& templates = PromptTemplates::english());

/// `reserved_tokens` accounts for history and question sent alongside the system prompt.
RenderedPrompt render_chat_prompt(const PolicyDocument& policy, std::string_view rating_context,
                                  const UserSettings& settings, const PromptBudget& budget = {},
                                  std::size_t reserved_tokens = 0,
                                  const PromptTemplates& templates = PromptTemplates::english());

struct SuggestionPrompt {
    std::string system;
    std::string user;
};

/// `topic` is a criterion name or "General".
SuggestionPrompt render_suggestion_prompt(std::string_view topic, const std::vector<ChatTurn>& history,
                                          const std::vector<std::string>& asked,
                                          const PromptTemplates& templates = PromptTemplates::english());

std::string format_history(const std::vector<ChatTurn>& history);

} // namespace policylens
