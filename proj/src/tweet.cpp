#include "tweetfunnel/tweet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "tweetfunnel/error.hpp"
#include "utf8.hpp"

namespace tweetfunnel {

using nlohmann::json;

using detail::is_xml_illegal;
using detail::next_code_point;

namespace {

const json* find_path(const json& doc, std::initializer_list<std::string_view> path) {
  const json* cur = &doc;
  for (std::string_view key : path) {
    if (!cur->is_object()) return nullptr;
    auto it = cur->find(key);
    if (it == cur->end() || it->is_null()) return nullptr;
    cur = &*it;
  }
  return cur;
}

// First present value among several alternative paths.
const json* find_any(const json& doc,
                     std::initializer_list<std::initializer_list<std::string_view>> paths) {
  for (const auto& p : paths) {
    if (const json* v = find_path(doc, p)) return v;
  }
  return nullptr;
}

std::string as_id_string(const json& v, std::string_view field) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  throw Error(Errc::InvalidField, std::string(field) + " must be a string or integer");
}

std::string as_string(const json& v, std::string_view field) {
  if (!v.is_string()) throw Error(Errc::InvalidField, std::string(field) + " must be a string");
  return v.get<std::string>();
}

std::uint64_t as_count(const json& v, std::string_view field) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  throw Error(Errc::InvalidField, std::string(field) + " must be a non-negative integer");
}

Timestamp parse_created_at(const json& v) {
  if (v.is_number_integer() || v.is_number_unsigned()) {
    if (v.is_number_unsigned()) {
      const auto u = v.get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(std::numeric_limits<Timestamp>::max())) {
        throw Error(Errc::MalformedTimestamp, "created_at out of range");
      }
      return static_cast<Timestamp>(u);
    }
    const auto t = v.get<std::int64_t>();
    if (t < 0) throw Error(Errc::MalformedTimestamp, "created_at before the Unix epoch");
    return t;
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (!std::isfinite(d) || d < 0 || d > 9.0e15) {
      throw Error(Errc::MalformedTimestamp, "created_at not a finite post-epoch number");
    }
    return static_cast<Timestamp>(std::floor(d));
  }
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    Timestamp t = 0;
    bool numeric = !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
      return c >= '0' && c <= '9';
    });
    if (numeric && s.size() <= 18) {
      t = std::stoll(s);
      return t;
    }
    std::optional<Timestamp> parsed = parse_iso8601(s);
    if (!parsed) parsed = parse_twitter_date(s);
    if (parsed && *parsed >= 0) return *parsed;
  }
  throw Error(Errc::MalformedTimestamp, "unparseable created_at");
}

std::optional<GeoPoint> parse_geo(const json& record) {
  const json* geo = find_path(record, {"geo"});
  if (!geo) return std::nullopt;
  GeoPoint p;
  if (geo->is_object() && geo->contains("lat") && geo->contains("lon")) {
    p.lat = geo->at("lat").get<double>();
    p.lon = geo->at("lon").get<double>();
  } else if (const json* c = find_path(*geo, {"coordinates"});
             c && c->is_array() && c->size() == 2) {
    // The platform's legacy "geo" field is [lat, lon].
    p.lat = (*c)[0].get<double>();
    p.lon = (*c)[1].get<double>();
  } else {
    throw Error(Errc::InvalidField, "geo must carry lat/lon");
  }
  if (!std::isfinite(p.lat) || !std::isfinite(p.lon) || std::abs(p.lat) > 90.0 ||
      std::abs(p.lon) > 180.0) {
    throw Error(Errc::InvalidField, "geo out of range");
  }
  return p;
}

char ascii_lower(char c) noexcept { return c >= 'A' && c <= 'Z' ? static_cast<char>(c + 32) : c; }

bool starts_predefined_entity(std::string_view rest) noexcept {
  for (std::string_view e : {"&amp;", "&lt;", "&gt;", "&quot;", "&apos;"}) {
    if (rest.substr(0, e.size()) == e) return true;
  }
  return false;
}

}  // namespace

bool is_valid_topic_name(std::string_view name) noexcept {
  return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
    return is_handle_char(c) || c == '-';
  });
}

Topic make_topic(std::string name, std::vector<std::string> keywords) {
  if (!is_valid_topic_name(name)) {
    throw Error(Errc::InvalidTopic, "topic name must match [A-Za-z0-9_-]+: '" + name + "'");
  }
  std::erase_if(keywords, [](const std::string& k) { return k.empty(); });
  if (keywords.empty()) throw Error(Errc::EmptyKeywordList, "topic '" + name + "'");
  return Topic{std::move(name), std::move(keywords)};
}

bool is_handle_char(char c) noexcept {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

bool is_valid_handle(std::string_view handle) noexcept {
  return !handle.empty() && handle.size() <= kMaxHandleChars &&
         std::all_of(handle.begin(), handle.end(), is_handle_char);
}

std::string fold_case(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), ascii_lower);
  return out;
}

namespace {

RawTweet parse_record(const json& record, bool enforce_text_limit) {
  if (!record.is_object()) throw Error(Errc::MalformedRecord, "record is not an object");
  RawTweet t;

  const json* id = find_any(record, {{"tweet_id"}, {"id_str"}, {"id"}});
  if (!id) throw Error(Errc::MissingField, "tweet_id");
  t.tweet_id = as_id_string(*id, "tweet_id");
  if (t.tweet_id.empty()) throw Error(Errc::InvalidField, "tweet_id is empty");

  const json* handle = find_any(record, {{"author_handle"}, {"user", "screen_name"}});
  if (!handle) {
    if (const json* user = find_path(record, {"user"}); user && user->is_string()) handle = user;
  }
  if (!handle) throw Error(Errc::MissingField, "author_handle");
  t.author_handle = as_string(*handle, "author_handle");
  if (!t.author_handle.empty() && t.author_handle.front() == '@') t.author_handle.erase(0, 1);
  if (!is_valid_handle(t.author_handle)) {
    throw Error(Errc::InvalidField, "author_handle '" + t.author_handle + "' is not a valid handle");
  }

  const json* text = find_any(record, {{"text"}, {"full_text"}});
  if (!text) throw Error(Errc::MissingField, "text");
  t.text = as_string(*text, "text");
  if (enforce_text_limit && t.text.size() > kMaxTextBytes) throw Error(Errc::InvalidField, "text exceeds 560 bytes");

  const json* created = find_path(record, {"created_at"});
  if (!created) throw Error(Errc::MissingField, "created_at");
  t.created_at = parse_created_at(*created);

  if (const json* v = find_any(record, {{"author_id"}, {"user", "id_str"}, {"user", "id"}})) {
    t.author_id = as_id_string(*v, "author_id");
  }
  auto count = [&](std::string_view name) -> std::uint64_t {
    const json* v = find_any(record, {{name}, {"user", name}});
    return v ? as_count(*v, name) : 0;
  };
  t.followers_count = count("followers_count");
  t.friends_count = count("friends_count");
  t.favourites_count = count("favourites_count");
  t.statuses_count = count("statuses_count");

  if (const json* v = find_any(record, {{"time_zone"}, {"user", "time_zone"}})) {
    t.time_zone = as_string(*v, "time_zone");
  }
  t.geo = parse_geo(record);
  if (const json* v = find_path(record, {"place"})) {
    if (v->is_string()) {
      t.place = v->get<std::string>();
    } else if (const json* name = find_any(*v, {{"full_name"}, {"name"}})) {
      t.place = as_string(*name, "place");
    }
  }
  if (const json* v = find_any(record, {{"country"}, {"place", "country"}})) {
    t.country = as_string(*v, "country");
  }
  return t;
}

}  // namespace

RawTweet parse_tweet(const json& record) { return parse_record(record, true); }

RawTweet parse_tweet_line(std::string_view line) {
  json doc = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw Error(Errc::MalformedRecord, "invalid JSON");
  try {
    return parse_tweet(doc);
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidField, e.what());
  }
}

json to_json(const RawTweet& t) {
  json j = {
      {"tweet_id", t.tweet_id},
      {"author_handle", t.author_handle},
      {"author_id", t.author_id},
      {"text", t.text},
      {"created_at", t.created_at},
      {"followers_count", t.followers_count},
      {"friends_count", t.friends_count},
      {"favourites_count", t.favourites_count},
      {"statuses_count", t.statuses_count},
  };
  if (t.time_zone) j["time_zone"] = *t.time_zone;
  if (t.geo) j["geo"] = {{"lat", t.geo->lat}, {"lon", t.geo->lon}};
  if (t.place) j["place"] = *t.place;
  if (t.country) j["country"] = *t.country;
  return j;
}

json to_json(const CleanTweet& t) {
  json j = to_json(static_cast<const RawTweet&>(t));
  j["mentions"] = t.mentions;
  j["is_retweet"] = t.is_retweet;
  return j;
}

CleanTweet clean_tweet_from_json(const json& doc) {
  CleanTweet t;
  try {
    // Escaping may push cleaned text past the raw byte limit.
    static_cast<RawTweet&>(t) = parse_record(doc, false);
    if (const json* m = find_path(doc, {"mentions"})) t.mentions = m->get<std::vector<std::string>>();
    if (const json* r = find_path(doc, {"is_retweet"})) t.is_retweet = r->get<bool>();
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidField, e.what());
  }
  return t;
}

std::string clean_text(std::string_view text) {
  std::string escaped;
  escaped.reserve(text.size() + 16);
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t start = i;
    const char32_t cp = next_code_point(text, i);
    if (cp == '\r' || cp == '\n' || cp == '\t' || is_xml_illegal(cp)) {
      escaped += ' ';
    } else if (cp == '&') {
      // An existing predefined entity is already escaped; this keeps the
      // function idempotent.
      escaped += starts_predefined_entity(text.substr(start)) ? "&" : "&amp;";
    } else if (cp == '<') {
      escaped += "&lt;";
    } else if (cp == '>') {
      escaped += "&gt;";
    } else if (cp == '"') {
      escaped += "&quot;";
    } else if (cp == '\'') {
      escaped += "&apos;";
    } else if (!detail::decoded_verbatim(text, start, i, cp)) {
      escaped += "\xEF\xBF\xBD";
    } else {
      escaped.append(text.substr(start, i - start));
    }
  }

  std::string out;
  out.reserve(escaped.size());
  for (char c : escaped) {
    if (c == ' ' && (out.empty() || out.back() == ' ')) continue;
    out += c;
  }
  if (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::vector<std::string> extract_mentions(std::string_view text, std::string_view author_handle) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen{fold_case(author_handle)};
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '@' || (i > 0 && is_handle_char(text[i - 1]))) {
      ++i;
      continue;
    }
    std::size_t len = 0;
    while (len < kMaxHandleChars && i + 1 + len < text.size() && is_handle_char(text[i + 1 + len])) {
      ++len;
    }
    if (len == 0) {
      ++i;
      continue;
    }
    std::string handle(text.substr(i + 1, len));
    if (seen.insert(fold_case(handle)).second) out.push_back(std::move(handle));
    i += 1 + len;
  }
  return out;
}

bool detect_retweet(std::string_view text) noexcept {
  return text.size() > 4 && text.substr(0, 4) == "RT @" && is_handle_char(text[4]);
}

bool topic_match(const RawTweet& tweet, const Topic& topic) {
  if (topic.keywords.empty()) throw Error(Errc::EmptyKeywordList, "topic '" + topic.name + "'");
  const std::string haystack = fold_case(tweet.text);
  return std::any_of(topic.keywords.begin(), topic.keywords.end(), [&](const std::string& k) {
    return haystack.find(fold_case(k)) != std::string::npos;
  });
}

CleanTweet make_clean(const RawTweet& raw) {
  CleanTweet t;
  static_cast<RawTweet&>(t) = raw;
  t.mentions = extract_mentions(raw.text, raw.author_handle);
  t.is_retweet = detect_retweet(raw.text);
  t.text = clean_text(raw.text);
  return t;
}

}  // namespace tweetfunnel
