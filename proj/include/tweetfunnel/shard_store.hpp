#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tweetfunnel/time.hpp"
#include "tweetfunnel/tweet.hpp"

namespace tweetfunnel {

/// FNV-1a 64-bit over the key's bytes.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Shard owning `key`: fnv1a64(key) mod shard_count.
/// Throws Error(ZeroShards) or Error(InvalidKey) for an empty key.
std::uint32_t route_key(std::string_view key, std::uint32_t shard_count);

struct Document {
  std::string key;    // tweet_id
  std::string topic;
  CleanTweet payload;
  Timestamp stored_at = 0;

  bool operator==(const Document&) const = default;
};

struct StoreOptions {
  /// fsync after every append. Appends reach the OS with write(2) either way,
  /// so acknowledged puts survive a process kill without it.
  bool fsync_each_put = false;
};

/// Counters for open-time recovery.
struct RecoveryStats {
  std::uint64_t records_loaded = 0;
  std::uint64_t truncated_tail_records = 0;  // partial trailing records dropped
  std::uint64_t corrupt_records = 0;         // unparseable records skipped mid-file
};

/// Per-topic collections of documents spread over `shard_count` append-only
/// JSON-lines segment files:
///
///   ROOT/manifest.json          {"shard_count": N, "topics": [...]}
///   ROOT/TOPIC/shard-K.jsonl    one {"key","topic","stored_at","payload"} per line
///
/// The key index is rebuilt from the segments on open. Puts to different
/// shards proceed in parallel; puts to one shard are serialized.
class ShardStore {
 public:
  /// Opens ROOT, creating it with `shard_count` shards (default 3) if it has
  /// no manifest. Reopening with a different shard count raises
  /// Error(ShardCountMismatch).
  static ShardStore open(const std::filesystem::path& root,
                         std::optional<std::uint32_t> shard_count = std::nullopt,
                         StoreOptions options = {});

  ShardStore(ShardStore&&) noexcept;
  ShardStore& operator=(ShardStore&&) noexcept;
  ~ShardStore();

  const std::filesystem::path& root() const;
  std::uint32_t shard_count() const;
  std::vector<std::string> topics() const;
  bool has_topic(std::string_view topic) const;

  /// Idempotent. Persists the topic in the manifest.
  void register_topic(const std::string& topic);

  /// Appends `doc` to shard route_key(doc.key). `doc.topic` must be empty or
  /// equal to `topic`. Duplicate keys are last-write-wins.
  void put_doc(std::string_view topic, const Document& doc);

  std::optional<Document> get_doc(std::string_view topic, std::string_view key) const;

  /// Latest version of every document with created_at in `range` (all when
  /// absent), ordered by (created_at, key).
  std::vector<Document> scan_collection(std::string_view topic,
                                        std::optional<TimeRange> range = std::nullopt) const;

  /// Number of distinct keys stored for the topic.
  std::size_t document_count(std::string_view topic) const;

  /// Number of document reads served by each shard of `topic` (get_doc and
  /// scan_collection both count).
  std::vector<std::uint64_t> shard_reads(std::string_view topic) const;

  const RecoveryStats& recovery() const;

 private:
  struct Impl;
  explicit ShardStore(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

}  // namespace tweetfunnel
