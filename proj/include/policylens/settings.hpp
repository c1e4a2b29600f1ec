#pragma once

#include <optional>
#include <string_view>

namespace policylens {

enum class ResponseLength { Short, Medium, Long };
enum class Complexity { NoPrior, Basic, Expert };

struct UserSettings {
    ResponseLength length = ResponseLength::Medium;
    Complexity complexity = Complexity::NoPrior;

    friend bool operator==(const UserSettings&, const UserSettings&) = default;
};

std::string_view to_string(ResponseLength v);
std::string_view to_string(Complexity v);
std::optional<ResponseLength> response_length_from_string(std::string_view s);
std::optional<Complexity> complexity_from_string(std::string_view s);

/// Sentences substituted into the chat prompt's settings slots.
std::string_view length_directive(ResponseLength v);
std::string_view complexity_directive(Complexity v);

} // namespace policylens
