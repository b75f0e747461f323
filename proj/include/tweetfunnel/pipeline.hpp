#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tweetfunnel/funnel.hpp"
#include "tweetfunnel/gexf.hpp"
#include "tweetfunnel/ingest.hpp"
#include "tweetfunnel/shard_store.hpp"
#include "tweetfunnel/tweet.hpp"

namespace tweetfunnel {

struct PipelineConfig {
  std::filesystem::path store_root;
  Topic topic;
  std::uint32_t shard_count = 3;
  double bucket_hours = 5.0;
  std::uint32_t min_degree = 0;
  bool drop_retweets = false;
  bool drop_isolated = false;
  std::uint64_t seed = 42;
  int layout_iterations = 100;
  unsigned workers = 1;
  bool dynamic = false;
  TweetLabelMode tweet_labels = TweetLabelMode::Text;

  /// Throws Error(InvalidArgument / ZeroShards / InvalidWidth / EmptyKeywordList).
  void validate() const;
  Timestamp bucket_width() const;
  FilterSpec filter() const { return FilterSpec{min_degree, drop_retweets, drop_isolated}; }
};

struct IngestSummary {
  std::uint64_t parsed = 0;
  std::uint64_t matched = 0;
  std::uint64_t stored = 0;
  std::uint64_t reordered = 0;
  std::uint64_t parse_errors = 0;

  bool operator==(const IngestSummary&) const = default;
};

/// Replays `source` on a producer thread and, on the calling thread, cleans
/// and stores every tweet matching `topic`. Documents are stamped with the
/// tweet's created_at so that stores built from the same input are identical.
IngestSummary ingest_source(ShardStore& store, const Topic& topic, RecordSource& source,
                            double speed = 0.0, std::size_t channel_capacity = 1024);

/// Opens (or creates) the store, registers the topic and ingests `input`
/// (a file path or tcp://HOST:PORT).
IngestSummary cmd_ingest(const PipelineConfig& config, const std::string& input, double speed = 0.0);

struct PipelineResult {
  IngestSummary ingest;
  TimeBucketSeries series;
  std::filesystem::path signature_csv;
  std::vector<std::filesystem::path> gexf_files;
  std::vector<std::filesystem::path> metrics_files;
  std::size_t failed_buckets = 0;
};

/// ingest -> bucket -> per-bucket build -> filter -> metrics -> layout ->
/// export. Writes OUT/signature.csv and, per non-empty bucket,
/// OUT/buckets/bucket-<epoch>.gexf and OUT/buckets/bucket-<epoch>-metrics.csv.
/// A failing bucket is reported on stderr and counted; the rest continue.
PipelineResult cmd_pipeline(const PipelineConfig& config, const std::string& input,
                            const std::filesystem::path& out_dir);

/// Runs filter, metrics and layout on one graph and writes its GEXF and
/// metrics CSV.
void export_bucket(const MultimodalGraph& graph, const PipelineConfig& config,
                   const std::filesystem::path& gexf_path, const std::filesystem::path& metrics_path);

/// Writes `content` to `path`, creating parent directories. Throws
/// Error(IOFailure).
void write_file(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

}  // namespace tweetfunnel
