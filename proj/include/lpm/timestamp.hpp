#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace lpm {

/// UTC instant with millisecond resolution.
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

/// Parses ISO-8601 date-times as used by XES: `2017-03-26T13:00:00.000+02:00`,
/// a trailing `Z`, a missing offset (taken as UTC), a space instead of `T`,
/// or a bare date.
std::optional<Timestamp> parse_iso8601(std::string_view text);

/// Parses `text` with a strftime-style format (the subset understood by
/// std::get_time). A `.fff` fraction directly after `%S` is accepted.
/// The result is interpreted as UTC.
std::optional<Timestamp> parse_with_format(std::string_view text, const std::string& format);

/// `YYYY-MM-DDTHH:MM:SS.mmm+00:00`
std::string format_iso8601(Timestamp t);

/// Renders with a strftime-style format, in UTC.
std::string format_with(Timestamp t, const std::string& format);

/// Seconds between two instants as a real number.
inline double seconds_between(Timestamp from, Timestamp to) {
  return std::chrono::duration<double>(to - from).count();
}

}  // namespace lpm
