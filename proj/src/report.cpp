#include "policylens/report.hpp"

#include "policylens/serialization.hpp"
#include "policylens/text.hpp"

#include <algorithm>
#include <cstdio>

namespace policylens {

nlohmann::json domain_result_json(const DomainResult& result) {
    nlohmann::json criteria = nlohmann::json::array();
    nlohmann::json pressing = nlohmann::json::array();
    nlohmann::json average = nullptr;
    if (result.assessment) {
        for (const auto& c : result.assessment->criteria) {
            criteria.push_back(c);
        }
        for (const auto& name : result.assessment->pressing_issues()) {
            pressing.push_back(name);
        }
        average = result.assessment->average;
    }
    return {
        {"status", to_string(result.status)},
        {"domain", result.domain},
        {"overall_color", to_string(result.overall())},
        {"average", average},
        {"criteria", criteria},
        {"pressing_issues", pressing},
        {"policy_word_count", result.policy_word_count},
        {"truncated", result.truncated},
        {"diagnostics", result.diagnostics},
    };
}

std::string ranking_report(std::vector<DomainResult> results) {
    std::stable_sort(results.begin(), results.end(), [](const DomainResult& a, const DomainResult& b) {
        const bool a_ok = a.assessment.has_value();
        const bool b_ok = b.assessment.has_value();
        if (a_ok != b_ok) {
            return a_ok;
        }
        if (a_ok && a.assessment->average != b.assessment->average) {
            return a.assessment->average > b.assessment->average;
        }
        return a.domain < b.domain;
    });

    std::string out = "Privacy policy comparison (" + std::to_string(results.size()) + " sites)\n";
    std::size_t rank = 0;
    for (const auto& r : results) {
        ++rank;
        char line[512];
        if (r.assessment) {
            std::snprintf(line, sizeof line, "%zu. %-28s %-7s avg %.2f  criteria %zu\n", rank, r.domain.c_str(),
                          std::string(to_string(r.overall())).c_str(), r.assessment->average,
                          r.assessment->criteria.size());
            out += line;
            const auto pressing = r.assessment->pressing_issues();
            out += "   pressing issues: " + (pressing.empty() ? std::string("none") : join(pressing, ", ")) + "\n";
            for (const auto& c : r.assessment->criteria) {
                std::snprintf(line, sizeof line, "   - %-40s %d/5 %s\n", display_name(c.name).c_str(), c.score,
                              std::string(to_string(c.color)).c_str());
                out += line;
            }
        } else {
            std::snprintf(line, sizeof line, "%zu. %-28s %-7s (%s)\n", rank, r.domain.c_str(), "unknown",
                          std::string(to_string(r.status)).c_str());
            out += line;
        }
    }
    return out;
}

} // namespace policylens
