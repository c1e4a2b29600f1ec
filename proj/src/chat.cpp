#include "policylens/chat.hpp"

#include "policylens/text.hpp"

namespace policylens {

std::string ChatScope::key() const { return criterion ? "criterion:" + question_key(*criterion) : "general"; }

std::string ChatScope::topic() const { return criterion ? collapse_whitespace(*criterion) : "General"; }

std::vector<ChatTurn> ChatThread::turns() const {
    std::vector<ChatTurn> out;
    out.reserve(messages.size());
    for (const auto& m : messages) {
        out.push_back({m.role, m.text});
    }
    return out;
}

std::vector<std::string> ChatThread::asked_questions() const {
    std::vector<std::string> out;
    for (const auto& m : messages) {
        if (m.role == Role::User) {
            out.push_back(m.text);
        }
    }
    return out;
}

} // namespace policylens
