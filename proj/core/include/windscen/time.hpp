#pragma once

#include <cstdint>
#include <string>

namespace windscen {

/// Seconds since the Unix epoch, UTC. All series in this project live on
/// uniform grids of whole seconds, so a plain integer is sufficient.
using TimePoint = std::int64_t;

inline constexpr std::int64_t kSecondsPerMinute = 60;
inline constexpr std::int64_t kSecondsPerDay = 86400;

/// Parses "YYYY-MM-DDTHH:MM:SSZ" (UTC). Throws std::invalid_argument on
/// malformed input.
TimePoint parse_iso8601(const std::string& s);

/// Formats a TimePoint as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(TimePoint t);

}  // namespace windscen
