#include "policylens/assessment.hpp"

#include "policylens/text.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <regex>
#include <stdexcept>

namespace policylens {

namespace {

const std::regex& rating_line() {
    // bullet/number, optional heading marks, name, colon, optional emphasis, k/5, rest
    static const std::regex re(
        R"(^\s*(?:(?:[-*+]|\xE2\x80\xA2)\s+|\d+[.)]\s+)?(?:#{1,6}\s*)?([^:]+?)\s*:\s*(?:[*_]+\s*)?(\d+(?:[.,]\d+)?)\s*/\s*5(?![0-9])(.*)$)");
    return re;
}

const std::regex& section_header() {
    static const std::regex re(
        R"(^\s*(?:#{1,6}\s+.*|[*_]*\s*(?:step\s*)?\d\s*[.):]?\s*[*_]*\s*(?:criteria|analysis|evaluation|conclusion)\b.*|[*_]*\s*(?:criteria|analysis|evaluation|conclusion)\s*[*_]*\s*:?\s*[*_]*\s*)$)",
        std::regex::icase);
    return re;
}

bool mentions_conclusion(std::string_view line) {
    return to_lower(line).find("conclusion") != std::string::npos;
}

std::string_view strip_marks(std::string_view s) {
    auto is_mark = [](char c) { return c == '*' || c == '_' || c == ' ' || c == '\t' || c == '`'; };
    while (!s.empty() && is_mark(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && is_mark(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

// Leading separators between "k/5" and same-line justification text.
std::string_view strip_rest(std::string_view s) {
    s = strip_marks(s);
    for (std::string_view sep : {"\xE2\x80\x94", "\xE2\x80\x93", "-", ":", "\xE2\x80\xA6", "."}) {
        if (s.starts_with(sep)) {
            if (sep == "\xE2\x80\xA6" || sep == ".") {
                // An ellipsis on its own carries no content.
                auto rest = strip_marks(s.substr(sep.size()));
                if (rest.empty()) {
                    return {};
                }
                break;
            }
            s = strip_marks(s.substr(sep.size()));
            break;
        }
    }
    return s;
}

bool has_letter(std::string_view s) {
    return std::any_of(s.begin(), s.end(),
                       [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || (c & 0x80); });
}

} // namespace

std::string_view to_string(TrafficColor color) {
    switch (color) {
    case TrafficColor::Green: return "green";
    case TrafficColor::Yellow: return "yellow";
    case TrafficColor::Red: return "red";
    case TrafficColor::Unknown: return "unknown";
    }
    return "unknown";
}

std::optional<TrafficColor> traffic_color_from_string(std::string_view text) {
    for (auto c : {TrafficColor::Green, TrafficColor::Yellow, TrafficColor::Red, TrafficColor::Unknown}) {
        if (to_string(c) == text) {
            return c;
        }
    }
    return std::nullopt;
}

ParseOutcome parse_assessment(std::string_view raw) {
    ParseOutcome out;
    std::vector<std::string> seen;
    ParsedCriterion* current = nullptr;
    std::vector<std::string> body;

    auto close_current = [&] {
        if (current) {
            current->justification = join(body, "\n");
        }
        current = nullptr;
        body.clear();
    };

    for (auto line_view : split_lines(raw)) {
        const std::string line(line_view);
        std::smatch m;
        if (std::regex_match(line, m, rating_line())) {
            const auto name = std::string(strip_marks(m[1].str()));
            const auto score_text = m[2].str();
            if (name.empty() || !has_letter(name) || std::regex_match(name, section_header())) {
                // e.g. "3. Evaluation: 5/5" is a header, not a criterion.
                close_current();
                continue;
            }
            close_current();
            if (score_text.find_first_of(".,") != std::string::npos) {
                out.diagnostics.push_back("non-integer score rejected: " + std::string(trim(line)));
                continue;
            }
            const int score = std::stoi(score_text);
            if (score < 1 || score > 5) {
                out.diagnostics.push_back("score out of range rejected: " + std::string(trim(line)));
                continue;
            }
            const auto key = question_key(name);
            if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
                out.diagnostics.push_back("duplicate criterion ignored: " + name);
                continue;
            }
            seen.push_back(key);
            out.criteria.push_back({name, score, {}});
            current = &out.criteria.back();
            const auto tail = m[3].str();
            if (auto rest = strip_rest(tail); !rest.empty()) {
                body.emplace_back(rest);
            }
            continue;
        }
        if (std::regex_match(line, section_header())) {
            close_current();
            if (mentions_conclusion(line)) {
                break;
            }
            continue;
        }
        if (current) {
            if (auto t = trim(line_view); !t.empty()) {
                body.emplace_back(t);
            }
        }
    }
    close_current();
    return out;
}

TrafficColor score_criterion(int score) {
    if (score < 1 || score > 5) {
        throw std::out_of_range("criterion score must be in [1,5], got " + std::to_string(score));
    }
    if (score <= 2) {
        return TrafficColor::Red;
    }
    return score == 3 ? TrafficColor::Yellow : TrafficColor::Green;
}

OverallScore score_overall(std::span<const int> scores) {
    if (scores.empty()) {
        throw std::invalid_argument("cannot score an empty criteria list");
    }
    for (int s : scores) {
        if (s < 1 || s > 5) {
            throw std::out_of_range("criterion score must be in [1,5], got " + std::to_string(s));
        }
    }
    const long sum = std::accumulate(scores.begin(), scores.end(), 0L);
    const long n = static_cast<long>(scores.size());
    OverallScore out;
    out.average = static_cast<double>(sum) / static_cast<double>(n);
    // Compare in integers: average < 2.5 <=> 2*sum < 5*n, average > 3 <=> sum > 3*n.
    if (2 * sum < 5 * n) {
        out.overall = TrafficColor::Red;
    } else if (sum > 3 * n) {
        out.overall = TrafficColor::Green;
    } else {
        out.overall = TrafficColor::Yellow;
    }
    return out;
}

std::vector<std::string> PolicyAssessment::pressing_issues() const {
    std::vector<std::string> out;
    for (const auto& c : criteria) {
        if (c.color == TrafficColor::Red) {
            out.push_back(c.name);
        }
    }
    return out;
}

const CriterionRating* PolicyAssessment::find(std::string_view name) const {
    const auto key = question_key(name);
    for (const auto& c : criteria) {
        if (question_key(c.name) == key) {
            return &c;
        }
    }
    return nullptr;
}

std::string display_name(std::string_view name) { return collapse_whitespace(name); }

std::string criterion_context(const CriterionRating& rating) {
    std::string out = rating.name + ": " + std::to_string(rating.score) + "/5";
    if (!rating.justification.empty()) {
        out += "\n" + rating.justification;
    }
    return out;
}

std::string summary_context(const PolicyAssessment& assessment) {
    std::vector<std::string> parts;
    parts.reserve(assessment.criteria.size());
    for (const auto& c : assessment.criteria) {
        parts.push_back(criterion_context(c));
    }
    return join(parts, "\n\n");
}

PolicyAssessment build_assessment(std::string domain, const std::vector<ParsedCriterion>& parsed) {
    PolicyAssessment a;
    a.domain = std::move(domain);
    std::vector<int> scores;
    for (const auto& p : parsed) {
        a.criteria.push_back({p.name, p.score, p.justification, score_criterion(p.score)});
        scores.push_back(p.score);
    }
    const auto overall = score_overall(scores);
    a.average = overall.average;
    a.overall = overall.overall;
    return a;
}

Assessor::Assessor(std::shared_ptr<LlmGateway> gateway, Clock clock, CriteriaBounds bounds)
    : gateway_(std::move(gateway)), clock_(std::move(clock)), bounds_(bounds) {}

AssessmentResult Assessor::assess_domain(const PolicyDocument& policy) {
    const auto& templates = gateway_->templates();
    auto budget = gateway_->config().budget;
    // Leave room for the retry reminder so both attempts fit.
    const auto reminder_tokens = estimate_tokens(templates.format_reminder) + 1;
    budget.max_prompt_tokens = budget.max_prompt_tokens > reminder_tokens ? budget.max_prompt_tokens - reminder_tokens : 0;
    const auto prompt = render_assessment_prompt(policy, budget, templates);

    PromptRequest request;
    request.tier = ModelTier::Assessment;
    request.system_prompt = prompt.text;
    request.max_output_tokens = gateway_->config().assessment_max_tokens;
    request.temperature = gateway_->config().assessment_temperature;

    AssessmentUnavailable failure{policy.domain, {}, {}};
    for (int attempt = 0; attempt < 2; ++attempt) {
        if (attempt == 1) {
            request.system_prompt += "\n\n" + templates.format_reminder;
        }
        const auto response = gateway_->complete(request);
        auto parsed = parse_assessment(response.text);
        failure.raw_response = response.text;
        std::string reason;
        if (parsed.failed()) {
            reason = "no rating lines found";
        } else if (parsed.criteria.size() < bounds_.min || parsed.criteria.size() > bounds_.max) {
            reason = std::to_string(parsed.criteria.size()) + " criteria outside accepted range " +
                     std::to_string(bounds_.min) + "-" + std::to_string(bounds_.max);
        }
        if (reason.empty()) {
            auto assessment = build_assessment(policy.domain, parsed.criteria);
            assessment.raw_response = response.text;
            assessment.created_at = clock_();
            assessment.model_id = response.model_id;
            assessment.truncated = prompt.truncated;
            assessment.warnings = std::move(parsed.diagnostics);
            return assessment;
        }
        failure.diagnostics.push_back("attempt " + std::to_string(attempt + 1) + ": " + reason);
        for (auto& d : parsed.diagnostics) {
            failure.diagnostics.push_back(std::move(d));
        }
    }
    return failure;
}

} // namespace policylens
