#include "tweetfunnel/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tweetfunnel/csv.hpp"
#include "tweetfunnel/error.hpp"
#include "tweetfunnel/metrics.hpp"

namespace tweetfunnel {

namespace fs = std::filesystem;

void PipelineConfig::validate() const {
  if (shard_count == 0) throw Error(Errc::ZeroShards, "shard_count must be >= 1");
  if (!(bucket_hours > 0.0) || !std::isfinite(bucket_hours)) {
    throw Error(Errc::InvalidWidth, "bucket_hours must be > 0");
  }
  if (layout_iterations < 0) throw Error(Errc::InvalidArgument, "layout iterations must be >= 0");
  (void)make_topic(topic.name, topic.keywords);
}

Timestamp PipelineConfig::bucket_width() const {
  const auto width = static_cast<Timestamp>(std::llround(bucket_hours * 3600.0));
  if (!(bucket_hours > 0.0) || width <= 0) throw Error(Errc::InvalidWidth, "bucket width rounds to 0 s");
  return width;
}

void write_file(const fs::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(Errc::IOFailure, "cannot write " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IOFailure, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

IngestSummary ingest_source(ShardStore& store, const Topic& topic, RecordSource& source,
                            double speed, std::size_t channel_capacity) {
  store.register_topic(topic.name);
  Channel<RawTweet> channel(channel_capacity);
  auto producer = spawn_replay(source, speed, channel);

  IngestSummary summary;
  try {
    while (auto tweet = channel.pop()) {
      if (!topic_match(*tweet, topic)) continue;
      ++summary.matched;
      Document doc;
      doc.key = tweet->tweet_id;
      doc.topic = topic.name;
      doc.payload = make_clean(*tweet);
      doc.stored_at = tweet->created_at;
      store.put_doc(topic.name, doc);
      ++summary.stored;
    }
  } catch (...) {
    channel.close();
    producer.wait();
    throw;
  }
  const ReplayStats stats = producer.get();
  summary.parsed = stats.emitted;
  summary.reordered = stats.reordered;
  summary.parse_errors = stats.parse_errors;
  return summary;
}

IngestSummary cmd_ingest(const PipelineConfig& config, const std::string& input, double speed) {
  config.validate();
  ShardStore store = ShardStore::open(config.store_root, config.shard_count);
  auto source = open_source(input);
  return ingest_source(store, config.topic, *source, speed);
}

void export_bucket(const MultimodalGraph& graph, const PipelineConfig& config,
                   const fs::path& gexf_path, const fs::path& metrics_path) {
  const MultimodalGraph filtered = filter_by_degree(graph, config.filter());
  const CentralityReport report = compute_centrality(filtered, config.workers);
  if (!report.eigen_converged) {
    std::cerr << "warning: eigenvector centrality did not converge after " << report.eigen_iterations
              << " iterations (" << gexf_path.filename().string() << ")\n";
  }
  const LayoutResult layout = layout_force(filtered, config.layout_iterations, config.seed);
  GexfWriteOptions options;
  options.dynamic = config.dynamic;
  options.tweet_labels = config.tweet_labels;
  write_file(gexf_path, write_gexf(filtered, &layout, options));
  write_file(metrics_path, write_metrics_csv(filtered, report, &layout));
}

PipelineResult cmd_pipeline(const PipelineConfig& config, const std::string& input,
                            const fs::path& out_dir) {
  config.validate();
  const Timestamp width = config.bucket_width();
  ShardStore store = ShardStore::open(config.store_root, config.shard_count);
  auto source = open_source(input);

  PipelineResult result;
  result.ingest = ingest_source(store, config.topic, *source, 0.0);
  result.series = bucket_by_time(store, config.topic.name, width);
  result.signature_csv = out_dir / "signature.csv";
  write_file(result.signature_csv, write_signature_csv(result.series));

  for (const TimeBucket& bucket : result.series.buckets) {
    const std::string stem = "bucket-" + std::to_string(bucket.start);
    const fs::path gexf_path = out_dir / "buckets" / (stem + ".gexf");
    const fs::path metrics_path = out_dir / "buckets" / (stem + "-metrics.csv");
    try {
      const MultimodalGraph graph = build_bucket_graph(store, config.topic.name, bucket.start, width);
      export_bucket(graph, config, gexf_path, metrics_path);
      result.gexf_files.push_back(gexf_path);
      result.metrics_files.push_back(metrics_path);
    } catch (const std::exception& e) {
      std::cerr << "bucket " << format_iso8601(bucket.start) << " failed: " << e.what() << '\n';
      ++result.failed_buckets;
    }
  }
  return result;
}

}  // namespace tweetfunnel
