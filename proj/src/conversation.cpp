#include "policylens/conversation.hpp"

#include "policylens/text.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace policylens {

namespace {

constexpr std::size_t kSuggestionCount = 3;

bool is_marker_at(std::string_view text, std::size_t pos, int number, std::size_t& end) {
    const auto digits = std::to_string(number);
    if (text.substr(pos, digits.size()) != digits) {
        return false;
    }
    if (pos > 0 && !std::isspace(static_cast<unsigned char>(text[pos - 1])) && text[pos - 1] != '*') {
        return false;
    }
    // Mid-line numbers only count after the end of the previous item.
    auto before = pos;
    while (before > 0 && (text[before - 1] == ' ' || text[before - 1] == '\t')) {
        --before;
    }
    if (before > 0 && text[before - 1] != '\n' && text[before - 1] != '\r' &&
        std::string_view("?.!;:*\")").find(text[before - 1]) == std::string_view::npos) {
        return false;
    }
    auto p = pos + digits.size();
    if (p >= text.size() || (text[p] != '.' && text[p] != ')' && text[p] != ':')) {
        return false;
    }
    ++p;
    if (p < text.size() && !std::isspace(static_cast<unsigned char>(text[p])) && text[p] != '*') {
        return false;
    }
    end = p;
    return true;
}

std::string clean_item(std::string_view s) {
    s = trim(s);
    auto is_junk = [](char c) {
        return c == '*' || c == '_' || c == ';' || c == '"' || c == ' ' || c == '\n' || c == '\t' || c == '\r';
    };
    while (!s.empty() && is_junk(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && is_junk(s.back())) {
        s.remove_suffix(1);
    }
    return collapse_whitespace(s);
}

struct UniqueQuestions {
    std::set<std::string> blocked;
    std::vector<std::string> items;

    bool add(const std::string& q) {
        if (q.empty() || items.size() >= kSuggestionCount) {
            return false;
        }
        auto key = question_key(q);
        if (!blocked.insert(key).second) {
            return false;
        }
        items.push_back(q);
        return true;
    }
};

} // namespace

std::vector<std::string> parse_suggestions(std::string_view text) {
    struct Marker {
        std::size_t start;
        std::size_t end;
    };
    std::vector<Marker> markers;
    int expected = 1;
    for (std::size_t i = 0; i < text.size(); ++i) {
        std::size_t end = 0;
        if (is_marker_at(text, i, expected, end)) {
            markers.push_back({i, end});
            ++expected;
            i = end - 1;
        }
    }
    std::vector<std::string> out;
    for (std::size_t k = 0; k < markers.size(); ++k) {
        const auto stop = k + 1 < markers.size() ? markers[k + 1].start : text.size();
        auto item = text.substr(markers[k].end, stop - markers[k].end);
        if (k + 1 == markers.size()) {
            // Trailing commentary after the last item is not part of it.
            if (auto blank = item.find("\n\n"); blank != std::string_view::npos) {
                item = item.substr(0, blank);
            }
        }
        out.push_back(clean_item(item));
    }
    return out;
}

const FallbackQuestions& FallbackQuestions::defaults() {
    static const FallbackQuestions table = [] {
        FallbackQuestions f;
        f.general_ = {
            "What are the most critical issues in this privacy policy?",
            "Which of my data does this website collect?",
            "Who does this website share my data with?",
        };
        f.by_criterion_ = {
            {"data minimization",
             {"Is only the most necessary data collected?", "Which data is collected that is not needed for the service?",
              "Can I use the service without providing optional data?"}},
            {"transparency",
             {"Which purposes are described vaguely?", "Is it clear who is responsible for my data?",
              "How will I be informed about changes to the policy?"}},
            {"purpose limitation",
             {"For which purposes is my data used?", "Is my data used for advertising?",
              "Can my data be used for new purposes later?"}},
            {"security",
             {"How is my data protected?", "Is my data encrypted?", "What happens if there is a data breach?"}},
            {"user rights",
             {"How can I request deletion of my data?", "How can I get a copy of my data?",
              "Whom do I contact to exercise my rights?"}},
            {"consent",
             {"How can I withdraw my consent?", "Which processing happens without my consent?",
              "Is consent required for tracking cookies?"}},
            {"data transfer",
             {"Which third parties receive my data?", "Is my data transferred outside the EU?",
              "Is my data sold to other companies?"}},
            {"retention",
             {"How long is my data stored?", "When is my data deleted?",
              "Is my data kept after I close my account?"}},
        };
        return f;
    }();
    return table;
}

std::vector<std::string> FallbackQuestions::for_scope(const ChatScope& scope) const {
    if (scope.is_general()) {
        return general_;
    }
    std::vector<std::string> out;
    const auto key = question_key(*scope.criterion);
    for (const auto& [name, questions] : by_criterion_) {
        if (key.find(name) != std::string::npos) {
            out.insert(out.end(), questions.begin(), questions.end());
        }
    }
    const auto topic = scope.topic();
    out.push_back("What does the policy say about " + topic + "?");
    out.push_back("Why did " + topic + " receive this rating?");
    out.push_back("What would a better policy do regarding " + topic + "?");
    out.insert(out.end(), general_.begin(), general_.end());
    return out;
}

Conversation::Conversation(std::shared_ptr<Store> store, std::shared_ptr<LlmGateway> gateway, Clock clock)
    : store_(std::move(store)), gateway_(std::move(gateway)), clock_(std::move(clock)) {}

Conversation::Context Conversation::context_for(const std::string& domain, const ChatScope& scope) const {
    auto assessment = store_->get_assessment(domain);
    auto policy = store_->get_policy(domain);
    if (!assessment || !policy || !policy->document.ok()) {
        throw ConversationError(ConversationError::Kind::NotAssessed, "domain has no assessment yet: " + domain);
    }
    if (!scope.is_general() && assessment->find(*scope.criterion) == nullptr) {
        throw ConversationError(ConversationError::Kind::UnknownCriterion,
                                "criterion not part of the assessment: " + *scope.criterion);
    }
    return {std::move(*assessment), std::move(policy->document)};
}

void Conversation::validate(const std::string& domain, const ChatScope& scope) const { context_for(domain, scope); }

std::shared_ptr<std::mutex> Conversation::thread_lock(const std::string& domain, const ChatScope& scope) {
    std::lock_guard lock(locks_mutex_);
    auto& slot = locks_[domain + "\x1f" + scope.key()];
    if (!slot) {
        slot = std::make_shared<std::mutex>();
    }
    return slot;
}

ChatThread Conversation::thread(const std::string& domain, const ChatScope& scope) const {
    if (auto t = store_->get_thread(domain, scope)) {
        return *t;
    }
    return ChatThread{domain, scope, {}, {}};
}

std::string Conversation::ask(const std::string& domain, const ChatScope& scope, const std::string& question,
                              const UserSettings& settings) {
    const auto text = std::string(trim(question));
    if (text.empty()) {
        throw ConversationError(ConversationError::Kind::EmptyQuestion, "question must not be empty");
    }
    const auto ctx = context_for(domain, scope);
    const auto rating_context =
        scope.is_general() ? summary_context(ctx.assessment) : criterion_context(*ctx.assessment.find(*scope.criterion));

    auto lock_handle = thread_lock(domain, scope);
    std::lock_guard lock(*lock_handle);
    auto current = thread(domain, scope);

    auto turns = current.turns();
    turns.push_back({Role::User, text});
    std::size_t history_tokens = 0;
    for (const auto& t : turns) {
        history_tokens += estimate_tokens(t.text) + 1;
    }
    const auto prompt = render_chat_prompt(ctx.policy, rating_context, settings, gateway_->config().budget,
                                           history_tokens, gateway_->templates());

    PromptRequest request;
    request.tier = ModelTier::Assessment;
    request.system_prompt = prompt.text;
    request.turns = std::move(turns);
    request.max_output_tokens = gateway_->config().chat_max_tokens;
    request.temperature = gateway_->config().chat_temperature;
    const auto response = gateway_->complete(request);

    const auto now = clock_();
    current.messages.push_back({Role::User, text, now});
    current.messages.push_back({Role::Assistant, response.text, now});
    // Old suggestions may contain the question just asked.
    current.suggestions.clear();
    store_->put_thread(current);
    store_->put_carryover(scope, text);
    return response.text;
}

std::vector<std::string> Conversation::suggest(const std::string& domain, const ChatScope& scope) {
    context_for(domain, scope);
    const auto snapshot = thread(domain, scope);
    const auto asked = snapshot.asked_questions();
    const auto prompt = render_suggestion_prompt(scope.topic(), snapshot.turns(), asked, gateway_->templates());

    PromptRequest request;
    request.tier = ModelTier::Lightweight;
    request.system_prompt = prompt.system;
    request.user_prompt = prompt.user;
    request.max_output_tokens = gateway_->config().suggestion_max_tokens;
    request.temperature = gateway_->config().suggestion_temperature;

    std::vector<std::string> generated;
    for (int attempt = 0; attempt < 2; ++attempt) {
        UniqueQuestions pick;
        for (const auto& q : asked) {
            pick.blocked.insert(question_key(q));
        }
        bool shortfall = false;
        try {
            const auto items = parse_suggestions(gateway_->complete(request).text);
            for (const auto& item : items) {
                pick.add(item);
            }
            // A repeated or empty item among the first three counts as a shortfall.
            shortfall = items.size() < kSuggestionCount || pick.items.size() < kSuggestionCount ||
                        !std::equal(pick.items.begin(), pick.items.end(), items.begin());
        } catch (const ProviderError&) {
            shortfall = true;
        }
        for (const auto& q : pick.items) {
            if (std::find_if(generated.begin(), generated.end(),
                             [&](const std::string& g) { return question_key(g) == question_key(q); }) ==
                generated.end()) {
                generated.push_back(q);
            }
        }
        if (!shortfall) {
            break;
        }
    }

    auto lock_handle = thread_lock(domain, scope);
    std::lock_guard lock(*lock_handle);
    auto current = thread(domain, scope);

    UniqueQuestions base;
    for (const auto& q : current.asked_questions()) {
        base.blocked.insert(question_key(q));
    }
    const auto blocked = base.blocked;
    for (const auto& q : generated) {
        base.add(q);
    }
    for (const auto& q : FallbackQuestions::defaults().for_scope(scope)) {
        base.add(q);
    }

    UniqueQuestions result;
    result.blocked = blocked;
    std::optional<std::string> carry;
    if (current.messages.empty()) {
        carry = store_->get_carryover(scope);
    }
    if (carry && result.add(*carry)) {
        // The carried question takes slot 1: it replaces the first suggestion
        // unless it already was one of the three.
        std::vector<std::string> others;
        bool present = false;
        for (const auto& q : base.items) {
            if (question_key(q) == question_key(*carry)) {
                present = true;
            } else {
                others.push_back(q);
            }
        }
        if (!present && !others.empty()) {
            others.erase(others.begin());
        }
        for (const auto& q : others) {
            result.add(q);
        }
        for (const auto& q : FallbackQuestions::defaults().for_scope(scope)) {
            result.add(q);
        }
    } else {
        result = base;
    }
    current.suggestions = result.items;
    store_->put_thread(current);
    return result.items;
}

void Conversation::clear_history(const std::string& domain) { store_->delete_threads(domain); }

} // namespace policylens
