#include "tweetfunnel/funnel.hpp"

#include <map>
#include <set>

#include "tweetfunnel/error.hpp"

namespace tweetfunnel {

namespace {

// Copies the nodes for which keep() holds and every edge between them.
template <typename Pred>
MultimodalGraph induced_subgraph(const MultimodalGraph& graph, Pred keep) {
  MultimodalGraph out;
  for (const auto& [key, data] : graph.nodes()) {
    if (!keep(key, data)) continue;
    NodeData& node = out.ensure_node(key, data.label, data.first_seen);
    node.is_retweet = data.is_retweet;
    node.author = data.author;
  }
  for (const auto& [key, data] : graph.edges()) {
    if (out.find_node(key.source) && out.find_node(key.target)) {
      out.add_edge(key, data.weight, data.first_seen);
    }
  }
  return out;
}

}  // namespace

MultimodalGraph filter_by_degree(const MultimodalGraph& graph, const FilterSpec& spec) {
  const MultimodalGraph* input = &graph;
  MultimodalGraph without_retweets;
  if (spec.drop_retweets) {
    without_retweets = induced_subgraph(graph, [](const NodeKey& key, const NodeData& data) {
      return !(key.kind == NodeKind::Tweet && data.is_retweet);
    });
    input = &without_retweets;
  }

  const std::uint32_t n = spec.min_degree;
  MultimodalGraph out = induced_subgraph(*input, [n](const NodeKey&, const NodeData& data) {
    return data.in_degree > n || data.out_degree > n;
  });

  if (spec.drop_isolated_after) {
    out = induced_subgraph(out, [](const NodeKey&, const NodeData& data) {
      return data.in_degree > 0 || data.out_degree > 0;
    });
  }
  return out;
}

Timestamp bucket_start(Timestamp t, Timestamp width) {
  if (width <= 0) throw Error(Errc::InvalidWidth, "bucket width must be > 0");
  Timestamp q = t / width;
  if (t % width < 0) --q;
  return q * width;
}

TimeBucketSeries bucket_documents(const std::vector<Document>& docs, Timestamp width) {
  if (width <= 0) throw Error(Errc::InvalidWidth, "bucket width must be > 0");
  struct Acc {
    std::uint64_t tweets = 0;
    std::set<std::string> actors;
    std::uint64_t mentions = 0;
  };
  std::map<Timestamp, Acc> acc;
  for (const Document& doc : docs) {
    Acc& a = acc[bucket_start(doc.payload.created_at, width)];
    ++a.tweets;
    a.actors.insert(fold_case(doc.payload.author_handle));
    a.mentions += doc.payload.mentions.size();
  }
  TimeBucketSeries series;
  series.bucket_width = width;
  for (const auto& [start, a] : acc) {
    series.buckets.push_back(TimeBucket{start, a.tweets, a.actors.size(), a.mentions});
  }
  return series;
}

TimeBucketSeries bucket_by_time(const ShardStore& store, std::string_view topic, Timestamp width) {
  if (width <= 0) throw Error(Errc::InvalidWidth, "bucket width must be > 0");
  return bucket_documents(store.scan_collection(topic), width);
}

MultimodalGraph build_bucket_graph(const ShardStore& store, std::string_view topic, Timestamp start,
                                   Timestamp width) {
  if (width <= 0) throw Error(Errc::InvalidWidth, "bucket width must be > 0");
  return build_graph(store, topic, TimeRange{start, start + width});
}

}  // namespace tweetfunnel
