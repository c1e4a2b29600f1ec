#include "policylens/settings.hpp"

namespace policylens {

std::string_view to_string(ResponseLength v) {
    switch (v) {
    case ResponseLength::Short: return "short";
    case ResponseLength::Medium: return "medium";
    case ResponseLength::Long: return "long";
    }
    return "medium";
}

std::string_view to_string(Complexity v) {
    switch (v) {
    case Complexity::NoPrior: return "no_prior";
    case Complexity::Basic: return "basic";
    case Complexity::Expert: return "expert";
    }
    return "no_prior";
}

std::optional<ResponseLength> response_length_from_string(std::string_view s) {
    for (auto v : {ResponseLength::Short, ResponseLength::Medium, ResponseLength::Long}) {
        if (to_string(v) == s) {
            return v;
        }
    }
    return std::nullopt;
}

std::optional<Complexity> complexity_from_string(std::string_view s) {
    for (auto v : {Complexity::NoPrior, Complexity::Basic, Complexity::Expert}) {
        if (to_string(v) == s) {
            return v;
        }
    }
    return std::nullopt;
}

std::string_view length_directive(ResponseLength v) {
    switch (v) {
    case ResponseLength::Short: return "Answer in at most 3 sentences.";
    case ResponseLength::Medium: return "Answer in at most 6 sentences.";
    case ResponseLength::Long: return "Answer thoroughly in up to 12 sentences.";
    }
    return {};
}

std::string_view complexity_directive(Complexity v) {
    switch (v) {
    case Complexity::NoPrior: return "Explain for a reader with no technical or legal background.";
    case Complexity::Basic: return "Assume the reader knows basic data protection concepts.";
    case Complexity::Expert:
        return "Assume the reader is a data protection expert and use precise legal and technical terms.";
    }
    return {};
}

} // namespace policylens
