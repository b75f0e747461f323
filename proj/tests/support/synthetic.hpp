#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "tweetfunnel/graph.hpp"
#include "tweetfunnel/metrics.hpp"
#include "tweetfunnel/time.hpp"

namespace tftest {

namespace fs = std::filesystem;

/// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "tf");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

struct CorpusOptions {
  std::size_t tweets = 1000;
  std::uint64_t seed = 1;
  tweetfunnel::Timestamp start = 1398000000;  // 2014-04-20
  tweetfunnel::Timestamp span = 6 * 7 * 86400;  // six weeks
  std::size_t users = 200;
  double keyword_fraction = 1.0;  // share of tweets containing "#MH370"
  double retweet_fraction = 0.1;
  bool sorted = true;
};

/// Synthetic platform-style tweet records (nested "user" object). Handles are
/// drawn with random casing so case folding is exercised.
std::vector<nlohmann::json> synthetic_corpus(const CorpusOptions& options);

/// JSON lines; every `malformed_every`-th line (1-based) is replaced by a
/// broken record when non-zero.
std::string to_jsonl(const std::vector<nlohmann::json>& records, std::size_t malformed_every = 0);

/// G(n, p) digraph without self-loops.
tweetfunnel::Digraph random_digraph(std::mt19937_64& rng, std::size_t n, double p);

/// Random multimodal graph with awkward labels (XML metacharacters, non-ASCII,
/// whitespace), retweet flags, weights and timestamps.
tweetfunnel::MultimodalGraph random_multimodal_graph(std::mt19937_64& rng, std::size_t max_users,
                                                     std::size_t max_tweets);

/// The running example: UserA posts "@UserB @UserC".
nlohmann::json running_example_record();

}  // namespace tftest
