#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tweetfunnel {

/// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

/// Half-open interval [begin, end).
struct TimeRange {
  Timestamp begin = 0;
  Timestamp end = 0;

  bool contains(Timestamp t) const noexcept { return t >= begin && t < end; }
  bool operator==(const TimeRange&) const = default;
};

/// "1970-01-01T05:00:00Z"
std::string format_iso8601(Timestamp t);

/// Accepts "YYYY-MM-DDTHH:MM:SS" followed by "Z", "+HH:MM" or "-HH:MM"
/// (a missing zone designator means UTC). Also accepts a bare date.
std::optional<Timestamp> parse_iso8601(std::string_view text);

/// Twitter's classic created_at form: "Wed Apr 16 12:00:00 +0000 2014".
std::optional<Timestamp> parse_twitter_date(std::string_view text);

}  // namespace tweetfunnel
