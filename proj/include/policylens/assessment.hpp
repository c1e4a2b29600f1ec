#pragma once

#include "policylens/clock.hpp"
#include "policylens/gateway.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace policylens {

/// Unknown is reserved for acquisition or assessment failure; scoring never yields it.
enum class TrafficColor { Green, Yellow, Red, Unknown };

std::string_view to_string(TrafficColor color);
std::optional<TrafficColor> traffic_color_from_string(std::string_view text);

struct ParsedCriterion {
    std::string name;
    int score = 0;
    std::string justification;

    friend bool operator==(const ParsedCriterion&, const ParsedCriterion&) = default;
};

struct ParseOutcome {
    std::vector<ParsedCriterion> criteria;
    /// Rejected rating lines, duplicates and similar notes.
    std::vector<std::string> diagnostics;

    bool failed() const { return criteria.empty(); }
};

/// Extracts "<name>: k/5" rating lines in document order. Emphasis markers,
/// bullets and numbering around the name are tolerated; the justification is
/// the text up to the next rating line or section header. Parsing stops at a
/// Conclusion header.
ParseOutcome parse_assessment(std::string_view raw);

/// 1-2 red, 3 yellow, 4-5 green. Throws std::out_of_range outside [1,5].
TrafficColor score_criterion(int score);

struct OverallScore {
    double average = 0.0;
    TrafficColor overall = TrafficColor::Unknown;
};

/// Unweighted mean; red below 2.5, yellow on [2.5, 3], green above 3.
/// Throws std::invalid_argument on an empty list.
OverallScore score_overall(std::span<const int> scores);

struct CriterionRating {
    std::string name;
    int score = 0;
    std::string justification;
    TrafficColor color = TrafficColor::Unknown;
};

struct PolicyAssessment {
    std::string domain;
    std::vector<CriterionRating> criteria;
    double average = 0.0;
    TrafficColor overall = TrafficColor::Unknown;
    std::string raw_response;
    TimePoint created_at{};
    std::string model_id;
    bool truncated = false;
    std::vector<std::string> warnings;

    /// Red criteria in original order.
    std::vector<std::string> pressing_issues() const;
    const CriterionRating* find(std::string_view name) const;
};

struct AssessmentUnavailable {
    std::string domain;
    std::vector<std::string> diagnostics;
    std::string raw_response;
};

using AssessmentResult = std::variant<PolicyAssessment, AssessmentUnavailable>;

/// Display form of a model-chosen criterion name.
std::string display_name(std::string_view name);

/// Rating context for a Criteria Chat: the criterion's rating line and justification.
std::string criterion_context(const CriterionRating& rating);
/// Rating context for the General Chat: every criterion with score and justification.
std::string summary_context(const PolicyAssessment& assessment);

/// Builds a PolicyAssessment from parsed criteria (colors, average, overall).
PolicyAssessment build_assessment(std::string domain, const std::vector<ParsedCriterion>& parsed);

struct CriteriaBounds {
    std::size_t min = 3;
    std::size_t max = 12;
};

class Assessor {
public:
    Assessor(std::shared_ptr<LlmGateway> gateway, Clock clock = system_clock(), CriteriaBounds bounds = {});

    /// Prompt, complete, parse; one retry with a format reminder on a parse
    /// failure. Provider errors propagate as ProviderError.
    AssessmentResult assess_domain(const PolicyDocument& policy);

private:
    std::shared_ptr<LlmGateway> gateway_;
    Clock clock_;
    CriteriaBounds bounds_;
};

} // namespace policylens
