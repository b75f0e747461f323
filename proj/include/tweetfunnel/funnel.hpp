#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "tweetfunnel/graph.hpp"
#include "tweetfunnel/shard_store.hpp"

namespace tweetfunnel {

/// Degree-range filter: a node survives when its in-degree OR out-degree
/// (distinct edges, weights ignored) exceeds `min_degree`.
struct FilterSpec {
  std::uint32_t min_degree = 0;
  bool drop_retweets = false;
  bool drop_isolated_after = false;
};

/// Single-pass threshold filter on the input graph's degrees. Retweet nodes
/// are removed first when requested, after which degrees are recomputed once.
MultimodalGraph filter_by_degree(const MultimodalGraph& graph, const FilterSpec& spec);

inline constexpr Timestamp kDefaultBucketWidth = 5 * 3600;

struct TimeBucket {
  Timestamp start = 0;
  std::uint64_t tweet_count = 0;
  std::uint64_t unique_actor_count = 0;
  std::uint64_t mention_edge_count = 0;  // mention occurrences, before aggregation

  bool operator==(const TimeBucket&) const = default;
};

/// Activity signature: non-empty buckets aligned to multiples of
/// bucket_width since the epoch, in time order.
struct TimeBucketSeries {
  Timestamp bucket_width = kDefaultBucketWidth;
  std::vector<TimeBucket> buckets;

  bool operator==(const TimeBucketSeries&) const = default;
};

/// Start of the bucket containing t.
Timestamp bucket_start(Timestamp t, Timestamp width);

TimeBucketSeries bucket_by_time(const ShardStore& store, std::string_view topic, Timestamp width);

/// Same grouping over an in-memory document list.
TimeBucketSeries bucket_documents(const std::vector<Document>& docs, Timestamp width);

/// build_graph restricted to [start, start + width).
MultimodalGraph build_bucket_graph(const ShardStore& store, std::string_view topic, Timestamp start,
                                   Timestamp width);

}  // namespace tweetfunnel
