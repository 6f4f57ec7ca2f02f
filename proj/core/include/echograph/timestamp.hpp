#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace echograph {

/// Parses an ISO-8601 timestamp ("2016-01-05T10:00:00Z", optional
/// fractional seconds, optional +HH:MM / -HH:MM offset, no offset = UTC)
/// into Unix seconds. Throws ParseError on malformed input.
std::int64_t parse_iso8601(std::string_view s);

/// Formats Unix seconds as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(std::int64_t unix_seconds);

} // namespace echograph
