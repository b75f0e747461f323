#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "tweetfunnel/shard_store.hpp"
#include "tweetfunnel/time.hpp"
#include "tweetfunnel/tweet.hpp"

namespace tweetfunnel {

// Enumerator values double as the exported id prefix ("t:..." / "u:...").
enum class NodeKind : char { Tweet = 't', User = 'u' };
enum class EdgeKind : char { Authored = 'a', Mentions = 'm' };

std::string_view to_string(NodeKind kind) noexcept;
std::string_view to_string(EdgeKind kind) noexcept;
std::optional<NodeKind> node_kind_from_string(std::string_view s) noexcept;
std::optional<EdgeKind> edge_kind_from_string(std::string_view s) noexcept;

/// Node identity. User ids are case-folded handles; Tweet ids are tweet ids.
/// Ordering matches the lexicographic order of external_id().
struct NodeKey {
  NodeKind kind = NodeKind::User;
  std::string id;

  std::string external_id() const;
  auto operator<=>(const NodeKey&) const = default;
};

NodeKey user_key(std::string_view handle);
NodeKey tweet_key(std::string_view tweet_id);

struct NodeData {
  std::string label;
  bool is_retweet = false;
  std::string author;  // Tweet nodes: folded handle of the author
  Timestamp first_seen = 0;
  std::uint32_t in_degree = 0;  // distinct edges
  std::uint32_t out_degree = 0;

  bool operator==(const NodeData&) const = default;
};

struct EdgeKey {
  NodeKey source;
  NodeKey target;
  EdgeKind kind = EdgeKind::Mentions;

  auto operator<=>(const EdgeKey&) const = default;
};

struct EdgeData {
  std::uint64_t weight = 1;
  Timestamp first_seen = 0;

  bool operator==(const EdgeData&) const = default;
};

/// Directed interaction network of User and Tweet nodes with Authored and
/// Mentions edges. Repeated (source, target, kind) triples aggregate into the
/// edge weight. Iteration order is deterministic (sorted keys).
class MultimodalGraph {
 public:
  using NodeMap = std::map<NodeKey, NodeData>;
  using EdgeMap = std::map<EdgeKey, EdgeData>;

  /// Inserts the node or, if present, keeps the label seen earliest in time
  /// (smaller label on ties) and the minimum first_seen.
  NodeData& ensure_node(const NodeKey& key, std::string_view label, Timestamp seen);

  /// Inserts a new edge or adds `weight` to an existing one; first_seen is
  /// the minimum. Both endpoints must exist; self-loops are rejected.
  void add_edge(const EdgeKey& key, std::uint64_t weight, Timestamp seen);

  const NodeMap& nodes() const noexcept { return nodes_; }
  const EdgeMap& edges() const noexcept { return edges_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }

  const NodeData* find_node(const NodeKey& key) const;
  const EdgeData* find_edge(const EdgeKey& key) const;
  NodeData* find_node_mut(const NodeKey& key);

  /// Full equality, timestamps included.
  bool operator==(const MultimodalGraph&) const = default;

 private:
  NodeMap nodes_;
  EdgeMap edges_;
};

/// Equality on node set, labels, retweet flags, edge set and weights,
/// ignoring first_seen timestamps.
bool structurally_equal(const MultimodalGraph& a, const MultimodalGraph& b);

/// Applies the mapping author -> tweet (Authored), author -> mention and
/// tweet -> mention (Mentions) for one tweet. Throws Error(DuplicateTweetId)
/// if the tweet id is already present with another author.
void add_tweet(MultimodalGraph& graph, const CleanTweet& tweet);

/// Folds add_tweet over the topic's documents in (created_at, key) order.
MultimodalGraph build_graph(const ShardStore& store, std::string_view topic,
                            std::optional<TimeRange> range = std::nullopt);

/// Node union and edge union with summed weights and minimum first_seen.
MultimodalGraph merge_graphs(const MultimodalGraph& a, const MultimodalGraph& b);

}  // namespace tweetfunnel
