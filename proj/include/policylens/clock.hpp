#pragma once

#include <chrono>
#include <functional>
#include <string>

namespace policylens {

using TimePoint = std::chrono::system_clock::time_point;
using Clock = std::function<TimePoint()>;

inline Clock system_clock() {
    return [] { return std::chrono::system_clock::now(); };
}

/// "2024-05-01T12:00:00Z", second precision.
std::string format_utc(TimePoint t);
TimePoint parse_utc(const std::string& text);

} // namespace policylens
