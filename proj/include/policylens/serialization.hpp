#pragma once

#include "policylens/assessment.hpp"
#include "policylens/chat.hpp"
#include "policylens/settings.hpp"

#include <nlohmann/json.hpp>

namespace policylens {

void to_json(nlohmann::json& j, const UserSettings& s);
void from_json(const nlohmann::json& j, UserSettings& s);

void to_json(nlohmann::json& j, const CriterionRating& c);
void from_json(const nlohmann::json& j, CriterionRating& c);

void to_json(nlohmann::json& j, const PolicyAssessment& a);
void from_json(const nlohmann::json& j, PolicyAssessment& a);

/// {"type":"general"} or {"type":"criterion","name":...}; the bare string "general" is also accepted.
void to_json(nlohmann::json& j, const ChatScope& s);
void from_json(const nlohmann::json& j, ChatScope& s);

void to_json(nlohmann::json& j, const ChatMessage& m);
void from_json(const nlohmann::json& j, ChatMessage& m);

void to_json(nlohmann::json& j, const ChatThread& t);
void from_json(const nlohmann::json& j, ChatThread& t);

} // namespace policylens
