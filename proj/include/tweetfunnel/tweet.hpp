#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tweetfunnel/time.hpp"

namespace tweetfunnel {

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  bool operator==(const GeoPoint&) const = default;
};

/// One social-media message as delivered by a collector.
struct RawTweet {
  std::string tweet_id;
  std::string author_handle;  // without the leading '@'
  std::string author_id;
  std::string text;
  Timestamp created_at = 0;
  std::uint64_t followers_count = 0;
  std::uint64_t friends_count = 0;
  std::uint64_t favourites_count = 0;
  std::uint64_t statuses_count = 0;
  std::optional<std::string> time_zone;
  std::optional<GeoPoint> geo;
  std::optional<std::string> place;
  std::optional<std::string> country;

  bool operator==(const RawTweet&) const = default;
};

/// A RawTweet whose text has been made XML-safe, with its interaction
/// structure extracted from the original text.
struct CleanTweet : RawTweet {
  std::vector<std::string> mentions;
  bool is_retweet = false;

  bool operator==(const CleanTweet&) const = default;
};

/// Named keyword filter. Construct through make_topic() to get validation.
struct Topic {
  std::string name;
  std::vector<std::string> keywords;
};

/// Throws Error(InvalidTopic) for a name outside [A-Za-z0-9_-]+ and
/// Error(EmptyKeywordList) when no non-empty keyword is given.
Topic make_topic(std::string name, std::vector<std::string> keywords);

bool is_valid_topic_name(std::string_view name) noexcept;

/// Maximum length of a tweet body in bytes.
inline constexpr std::size_t kMaxTextBytes = 560;
inline constexpr std::size_t kMaxHandleChars = 15;

bool is_handle_char(char c) noexcept;
bool is_valid_handle(std::string_view handle) noexcept;

/// ASCII case folding; handles are ASCII by grammar.
std::string fold_case(std::string_view s);

// -- records ----------------------------------------------------------------

/// Builds a RawTweet from a key-value document. Accepts the flat field names
/// of RawTweet as well as the platform's nested layout (id_str, user.screen_name,
/// user.followers_count, ...). Unknown fields are ignored.
RawTweet parse_tweet(const nlohmann::json& record);

/// parse_tweet over one JSON-lines record; malformed JSON raises
/// Error(MalformedRecord).
RawTweet parse_tweet_line(std::string_view line);

nlohmann::json to_json(const RawTweet& tweet);
nlohmann::json to_json(const CleanTweet& tweet);
CleanTweet clean_tweet_from_json(const nlohmann::json& doc);

// -- text -------------------------------------------------------------------

/// Normalizes whitespace and escapes XML metacharacters so the result can be
/// embedded as XML character data. Idempotent.
std::string clean_text(std::string_view text);

/// Handles mentioned in raw text, in order of first occurrence, without
/// case-insensitive duplicates and without the author.
std::vector<std::string> extract_mentions(std::string_view text, std::string_view author_handle);

bool detect_retweet(std::string_view text) noexcept;

/// Case-insensitive substring match of any keyword against the text.
bool topic_match(const RawTweet& tweet, const Topic& topic);

/// Applies cleaning and structure extraction.
CleanTweet make_clean(const RawTweet& raw);

}  // namespace tweetfunnel
