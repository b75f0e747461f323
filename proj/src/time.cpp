#include "tweetfunnel/time.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace tweetfunnel {

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct Civil {
  std::int64_t year;
  unsigned month;
  unsigned day;
};

Civil civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return {static_cast<std::int64_t>(yoe) + era * 400 + (m <= 2), m, d};
}

bool read_uint(std::string_view s, std::size_t pos, std::size_t len, unsigned& out) {
  if (pos + len > s.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  auto r = std::from_chars(s.data() + pos, s.data() + pos + len, out);
  return r.ec == std::errc{};
}

unsigned days_in_month(std::int64_t y, unsigned m) {
  static constexpr std::array<unsigned, 12> kDays{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  return m == 2 && leap ? 29 : kDays[m - 1];
}

std::optional<Timestamp> make_timestamp(unsigned y, unsigned mo, unsigned d, unsigned h,
                                        unsigned mi, unsigned s) {
  if (mo < 1 || mo > 12 || d < 1 || d > days_in_month(y, mo) || h > 23 || mi > 59 || s > 60) {
    return std::nullopt;
  }
  return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

}  // namespace

std::string format_iso8601(Timestamp t) {
  std::int64_t days = t / 86400;
  std::int64_t rem = t % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  const Civil c = civil_from_days(days);
  std::array<char, 48> buf{};
  std::snprintf(buf.data(), buf.size(), "%04lld-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<long long>(c.year), c.month, c.day, static_cast<int>(rem / 3600),
                static_cast<int>(rem % 3600 / 60), static_cast<int>(rem % 60));
  return buf.data();
}

std::optional<Timestamp> parse_iso8601(std::string_view s) {
  unsigned y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
  if (!read_uint(s, 0, 4, y) || s.size() < 10 || s[4] != '-' || !read_uint(s, 5, 2, mo) ||
      s[7] != '-' || !read_uint(s, 8, 2, d)) {
    return std::nullopt;
  }
  if (s.size() == 10) return make_timestamp(y, mo, d, 0, 0, 0);
  if ((s[10] != 'T' && s[10] != ' ') || !read_uint(s, 11, 2, h) || s.size() < 19 ||
      s[13] != ':' || !read_uint(s, 14, 2, mi) || s[16] != ':' || !read_uint(s, 17, 2, sec)) {
    return std::nullopt;
  }
  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
  }
  auto base = make_timestamp(y, mo, d, h, mi, sec);
  if (!base) return std::nullopt;
  std::string_view zone = s.substr(pos);
  if (zone.empty() || zone == "Z") return base;
  unsigned zh = 0, zm = 0;
  if (zone.size() != 6 || (zone[0] != '+' && zone[0] != '-') || !read_uint(zone, 1, 2, zh) ||
      zone[3] != ':' || !read_uint(zone, 4, 2, zm)) {
    return std::nullopt;
  }
  const Timestamp offset = zh * 3600 + zm * 60;
  return zone[0] == '+' ? *base - offset : *base + offset;
}

std::optional<Timestamp> parse_twitter_date(std::string_view s) {
  // "Www Mmm DD HH:MM:SS +HHMM YYYY"
  static constexpr std::array<std::string_view, 12> kMonths{
      "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  if (s.size() != 30 || s[3] != ' ' || s[7] != ' ' || s[10] != ' ' || s[19] != ' ' ||
      s[25] != ' ') {
    return std::nullopt;
  }
  unsigned mo = 0;
  for (unsigned i = 0; i < kMonths.size(); ++i) {
    if (s.substr(4, 3) == kMonths[i]) mo = i + 1;
  }
  unsigned d = 0, h = 0, mi = 0, sec = 0, zh = 0, zm = 0, y = 0;
  if (mo == 0 || !read_uint(s, 8, 2, d) || !read_uint(s, 11, 2, h) || s[13] != ':' ||
      !read_uint(s, 14, 2, mi) || s[16] != ':' || !read_uint(s, 17, 2, sec) ||
      (s[20] != '+' && s[20] != '-') || !read_uint(s, 21, 2, zh) || !read_uint(s, 23, 2, zm) ||
      !read_uint(s, 26, 4, y)) {
    return std::nullopt;
  }
  auto base = make_timestamp(y, mo, d, h, mi, sec);
  if (!base) return std::nullopt;
  const Timestamp offset = zh * 3600 + zm * 60;
  return s[20] == '+' ? *base - offset : *base + offset;
}

}  // namespace tweetfunnel
