#include "policylens/prompts.hpp"

#include "policylens/text.hpp"

#include <algorithm>

namespace policylens {

namespace {

constexpr std::string_view kAssessmentTemplate =
    "Your output must be a maximum of 600 words long! You are an expert in data protection and a member of an "
    "ethics council. You are given a privacy policy. Your task is to uncover aspects in data protection "
    "declarations that are ethically questionable from your perspective. Proceed step by step:\n"
    "\n"
    "1. Criteria: From your perspective, identify relevant ethical test criteria for this privacy policy as "
    "criteria for a later evaluation. When naming the test criteria, stick to standardized terms and concepts "
    "that are common in the field of ethics. Keep it short!\n"
    "2. Analysis: Based on this, check for ethical problems or ethically questionable circumstances in the "
    "privacy policy.\n"
    "3. Evaluation: Only after you have completed step 2: Rate the privacy policy based on your analysis "
    "regarding each of your criteria on a 5-point Likert scale. Explain what this rating means. Explain what the "
    "ideal case with 5 points and the worst case with one point would look like. The output in this step should "
    "look like this:\n"
    "\n"
    "[Insert rating criterion here]: [insert rating here]/5 [insert line break]\n"
    "\n"
    "[insert justification here]\n"
    "\n"
    "4. Conclusion: Reflect on your evaluation and check whether it is complete.\n"
    "\n"
    "Important: Check for errors in your analysis and correct them if necessary before the evaluation. You must "
    "present your approach clearly and concisely and follow the steps mentioned. Your output must not exceed 600 "
    "words.\n"
    "\n"
    "Privacy policy:\n"
    "<Privacy policy here>";

constexpr std::string_view kChatTemplate =
    "Keep it short! Privacy policy: <Privacy policy here> | Rating: <criteria evaluation result here>. Users want "
    "to know more about how this rating is justified in the privacy policy. When answering the questions, focus "
    "on the given topic of the rating. Keep it short! <Complexity according to settings here>. <Answer length "
    "according to settings here>";

constexpr std::string_view kSuggestionSystem =
    "Your task is to ask questions about a privacy policy. Your output consists of three questions: 1. question 1; "
    "2. question 2; 3. question 3. Please output the questions in a numbered list. Never repeat questions that "
    "have already been asked: <listing already asked questions here>";

constexpr std::string_view kSuggestionUser =
    "Specifically: Ask your questions about the privacy policy on the topic: <criterion inserted here>.\n"
    "\n"
    "Embrace the context of the previous chat: <chat history here>";

constexpr std::string_view kFormatReminder =
    "Reminder: in step 3, write every rating on its own line exactly as \"[Insert rating criterion here]: "
    "[insert rating here]/5\" followed by the justification on the next line.";

// Cuts at most 3 bytes so the result does not end inside a UTF-8 sequence.
std::size_t utf8_floor(std::string_view s, std::size_t pos) {
    pos = std::min(pos, s.size());
    while (pos > 0 && pos < s.size() && (static_cast<unsigned char>(s[pos]) & 0xC0) == 0x80) {
        --pos;
    }
    return pos;
}

std::size_t utf8_ceil(std::string_view s, std::size_t pos) {
    while (pos < s.size() && (static_cast<unsigned char>(s[pos]) & 0xC0) == 0x80) {
        ++pos;
    }
    return pos;
}

// Renders `tmpl` with the policy slice fitted into what the budget leaves.
RenderedPrompt fit_policy(std::string_view tmpl, std::string_view policy_text,
                          std::vector<std::pair<std::string_view, std::string_view>> values, const PromptBudget& budget,
                          std::size_t reserved_tokens) {
    values.emplace_back(slot::kPolicy, std::string_view{});
    const auto skeleton = fill_slots(tmpl, values);
    const auto fixed = estimate_tokens(skeleton) + reserved_tokens;
    const std::size_t byte_cap =
        budget.max_prompt_tokens > reserved_tokens ? (budget.max_prompt_tokens - reserved_tokens) * 4 : 0;
    if (skeleton.size() >= byte_cap) {
        throw PromptError(PromptError::Kind::TooLong, "prompt exceeds the context budget before the policy text (" +
                                                          std::to_string(fixed) + " of " +
                                                          std::to_string(budget.max_prompt_tokens) + " tokens)");
    }
    const std::size_t room = byte_cap - skeleton.size();
    RenderedPrompt out;
    std::string slice;
    if (policy_text.size() > room) {
        slice = truncate_middle(policy_text, room);
        out.truncated = true;
    } else {
        slice = std::string(policy_text);
    }
    values.back().second = slice;
    out.text = fill_slots(tmpl, values);
    return out;
}

} // namespace

std::string_view to_string(Role role) { return role == Role::User ? "user" : "assistant"; }

const PromptTemplates& PromptTemplates::english() {
    static const PromptTemplates templates{std::string(kAssessmentTemplate), std::string(kChatTemplate),
                                           std::string(kSuggestionSystem), std::string(kSuggestionUser),
                                           std::string(kFormatReminder)};
    return templates;
}

std::size_t estimate_tokens(std::string_view text) { return (text.size() + 3) / 4; }

std::string fill_slots(std::string_view tmpl, const std::vector<std::pair<std::string_view, std::string_view>>& values) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t i = 0;
    while (i < tmpl.size()) {
        bool matched = false;
        if (tmpl[i] == '<') {
            for (const auto& [marker, value] : values) {
                if (tmpl.substr(i, marker.size()) == marker) {
                    out += value;
                    i += marker.size();
                    matched = true;
                    break;
                }
            }
        }
        if (!matched) {
            out += tmpl[i++];
        }
    }
    return out;
}

std::string truncate_middle(std::string_view text, std::size_t max_bytes) {
    if (text.size() <= max_bytes) {
        return std::string(text);
    }
    if (max_bytes <= kTruncationMarker.size()) {
        return std::string(kTruncationMarker.substr(0, max_bytes));
    }
    const auto keep = max_bytes - kTruncationMarker.size();
    const auto head_end = utf8_floor(text, keep / 2);
    const auto tail_start = utf8_ceil(text, text.size() - (keep - keep / 2));
    std::string out(text.substr(0, head_end));
    out += kTruncationMarker;
    out += text.substr(tail_start);
    return out;
}

RenderedPrompt render_assessment_prompt(const PolicyDocument& policy, const PromptBudget& budget,
                                        const PromptTemplates& templates) {
    if (!policy.ok() || policy.text.empty()) {
        throw PromptError(PromptError::Kind::PolicyNotOk, "assessment prompt needs an acquired policy");
    }
    return fit_policy(templates.assessment, policy.text, {}, budget, 0);
}

RenderedPrompt render_chat_prompt(const PolicyDocument& policy, std::string_view rating_context,
                                  const UserSettings& settings, const PromptBudget& budget,
                                  std::size_t reserved_tokens, const PromptTemplates& templates) {
    if (!policy.ok() || policy.text.empty()) {
        throw PromptError(PromptError::Kind::PolicyNotOk, "chat prompt needs an acquired policy");
    }
    return fit_policy(templates.chat, policy.text,
                      {{slot::kRating, rating_context},
                       {slot::kComplexity, complexity_directive(settings.complexity)},
                       {slot::kLength, length_directive(settings.length)}},
                      budget, reserved_tokens);
}

std::string format_history(const std::vector<ChatTurn>& history) {
    std::string out;
    for (const auto& turn : history) {
        if (!out.empty()) {
            out += '\n';
        }
        out += turn.role == Role::User ? "User: " : "Assistant: ";
        out += turn.text;
    }
    return out;
}

SuggestionPrompt render_suggestion_prompt(std::string_view topic, const std::vector<ChatTurn>& history,
                                          const std::vector<std::string>& asked, const PromptTemplates& templates) {
    const auto asked_list = join(asked, "; ");
    const auto history_text = format_history(history);
    return SuggestionPrompt{
        fill_slots(templates.suggestion_system, {{slot::kAsked, asked_list}}),
        fill_slots(templates.suggestion_user, {{slot::kCriterion, topic}, {slot::kHistory, history_text}}),
    };
}

} // namespace policylens
