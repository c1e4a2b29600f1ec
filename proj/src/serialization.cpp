#include "policylens/serialization.hpp"

#include <stdexcept>

namespace policylens {

using nlohmann::json;

void to_json(json& j, const UserSettings& s) {
    j = json{{"length", to_string(s.length)}, {"complexity", to_string(s.complexity)}};
}

void from_json(const json& j, UserSettings& s) {
    UserSettings out;
    if (j.contains("length")) {
        auto v = response_length_from_string(j.at("length").get<std::string>());
        if (!v) {
            throw std::invalid_argument("unknown length level: " + j.at("length").get<std::string>());
        }
        out.length = *v;
    }
    if (j.contains("complexity")) {
        auto v = complexity_from_string(j.at("complexity").get<std::string>());
        if (!v) {
            throw std::invalid_argument("unknown complexity level: " + j.at("complexity").get<std::string>());
        }
        out.complexity = *v;
    }
    s = out;
}

void to_json(json& j, const CriterionRating& c) {
    j = json{{"name", c.name}, {"score", c.score}, {"color", to_string(c.color)}, {"justification", c.justification}};
}

void from_json(const json& j, CriterionRating& c) {
    c.name = j.at("name").get<std::string>();
    c.score = j.at("score").get<int>();
    c.justification = j.value("justification", "");
    c.color = score_criterion(c.score);
}

void to_json(json& j, const PolicyAssessment& a) {
    j = json{{"domain", a.domain},
             {"criteria", a.criteria},
             {"average", a.average},
             {"overall", to_string(a.overall)},
             {"raw_response", a.raw_response},
             {"created_at", format_utc(a.created_at)},
             {"model_id", a.model_id},
             {"truncated", a.truncated},
             {"warnings", a.warnings}};
}

void from_json(const json& j, PolicyAssessment& a) {
    a.domain = j.at("domain").get<std::string>();
    a.criteria = j.at("criteria").get<std::vector<CriterionRating>>();
    std::vector<int> scores;
    for (const auto& c : a.criteria) {
        scores.push_back(c.score);
    }
    // Colors are always recomputed from scores, never trusted from storage.
    const auto overall = score_overall(scores);
    a.average = overall.average;
    a.overall = overall.overall;
    a.raw_response = j.value("raw_response", "");
    a.created_at = parse_utc(j.at("created_at").get<std::string>());
    a.model_id = j.value("model_id", "");
    a.truncated = j.value("truncated", false);
    a.warnings = j.value("warnings", std::vector<std::string>{});
}

void to_json(json& j, const ChatScope& s) {
    if (s.is_general()) {
        j = json{{"type", "general"}};
    } else {
        j = json{{"type", "criterion"}, {"name", *s.criterion}};
    }
}

void from_json(const json& j, ChatScope& s) {
    if (j.is_string() && j.get<std::string>() == "general") {
        s = ChatScope::general();
        return;
    }
    const auto type = j.at("type").get<std::string>();
    if (type == "general") {
        s = ChatScope::general();
    } else if (type == "criterion") {
        s = ChatScope::for_criterion(j.at("name").get<std::string>());
    } else {
        throw std::invalid_argument("unknown chat scope type: " + type);
    }
}

void to_json(json& j, const ChatMessage& m) {
    j = json{{"role", to_string(m.role)}, {"text", m.text}, {"at", format_utc(m.at)}};
}

void from_json(const json& j, ChatMessage& m) {
    m.role = j.at("role").get<std::string>() == "user" ? Role::User : Role::Assistant;
    m.text = j.at("text").get<std::string>();
    m.at = parse_utc(j.at("at").get<std::string>());
}

void to_json(json& j, const ChatThread& t) {
    j = json{{"domain", t.domain}, {"scope", t.scope}, {"messages", t.messages}, {"suggestions", t.suggestions}};
}

void from_json(const json& j, ChatThread& t) {
    t.domain = j.at("domain").get<std::string>();
    t.scope = j.at("scope").get<ChatScope>();
    t.messages = j.at("messages").get<std::vector<ChatMessage>>();
    t.suggestions = j.value("suggestions", std::vector<std::string>{});
}

} // namespace policylens
