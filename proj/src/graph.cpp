#include "tweetfunnel/graph.hpp"

#include <algorithm>
#include <unordered_set>

#include "tweetfunnel/error.hpp"

namespace tweetfunnel {

std::string_view to_string(NodeKind kind) noexcept {
  return kind == NodeKind::User ? "user" : "tweet";
}

std::string_view to_string(EdgeKind kind) noexcept {
  return kind == EdgeKind::Authored ? "authored" : "mentions";
}

std::optional<NodeKind> node_kind_from_string(std::string_view s) noexcept {
  if (s == "user") return NodeKind::User;
  if (s == "tweet") return NodeKind::Tweet;
  return std::nullopt;
}

std::optional<EdgeKind> edge_kind_from_string(std::string_view s) noexcept {
  if (s == "authored") return EdgeKind::Authored;
  if (s == "mentions") return EdgeKind::Mentions;
  return std::nullopt;
}

std::string NodeKey::external_id() const {
  std::string out;
  out.reserve(id.size() + 2);
  out += static_cast<char>(kind);
  out += ':';
  out += id;
  return out;
}

NodeKey user_key(std::string_view handle) { return NodeKey{NodeKind::User, fold_case(handle)}; }
NodeKey tweet_key(std::string_view tweet_id) { return NodeKey{NodeKind::Tweet, std::string(tweet_id)}; }

NodeData& MultimodalGraph::ensure_node(const NodeKey& key, std::string_view label, Timestamp seen) {
  auto [it, inserted] = nodes_.try_emplace(key);
  NodeData& node = it->second;
  if (inserted) {
    node.label = label;
    node.first_seen = seen;
  } else if (seen < node.first_seen || (seen == node.first_seen && label < node.label)) {
    node.label = label;
    node.first_seen = seen;
  }
  return node;
}

void MultimodalGraph::add_edge(const EdgeKey& key, std::uint64_t weight, Timestamp seen) {
  if (key.source == key.target) {
    throw Error(Errc::InvalidArgument, "self-loop on " + key.source.external_id());
  }
  if (weight == 0) throw Error(Errc::InvalidArgument, "edge weight must be >= 1");
  auto src = nodes_.find(key.source);
  auto dst = nodes_.find(key.target);
  if (src == nodes_.end() || dst == nodes_.end()) {
    throw Error(Errc::UnknownNodeReference,
                "edge " + key.source.external_id() + " -> " + key.target.external_id());
  }
  auto [it, inserted] = edges_.try_emplace(key, EdgeData{weight, seen});
  if (inserted) {
    ++src->second.out_degree;
    ++dst->second.in_degree;
  } else {
    it->second.weight += weight;
    it->second.first_seen = std::min(it->second.first_seen, seen);
  }
}

const NodeData* MultimodalGraph::find_node(const NodeKey& key) const {
  auto it = nodes_.find(key);
  return it == nodes_.end() ? nullptr : &it->second;
}

NodeData* MultimodalGraph::find_node_mut(const NodeKey& key) {
  auto it = nodes_.find(key);
  return it == nodes_.end() ? nullptr : &it->second;
}

const EdgeData* MultimodalGraph::find_edge(const EdgeKey& key) const {
  auto it = edges_.find(key);
  return it == edges_.end() ? nullptr : &it->second;
}

bool structurally_equal(const MultimodalGraph& a, const MultimodalGraph& b) {
  return std::equal(a.nodes().begin(), a.nodes().end(), b.nodes().begin(), b.nodes().end(),
                    [](const auto& x, const auto& y) {
                      return x.first == y.first && x.second.label == y.second.label &&
                             x.second.is_retweet == y.second.is_retweet &&
                             x.second.author == y.second.author;
                    }) &&
         std::equal(a.edges().begin(), a.edges().end(), b.edges().begin(), b.edges().end(),
                    [](const auto& x, const auto& y) {
                      return x.first == y.first && x.second.weight == y.second.weight;
                    });
}

void add_tweet(MultimodalGraph& graph, const CleanTweet& tweet) {
  const NodeKey author = user_key(tweet.author_handle);
  const NodeKey post = tweet_key(tweet.tweet_id);
  if (const NodeData* existing = graph.find_node(post); existing && existing->author != author.id) {
    throw Error(Errc::DuplicateTweetId, "tweet " + tweet.tweet_id + " seen with authors '" +
                                            existing->author + "' and '" + author.id + "'");
  }
  const Timestamp t = tweet.created_at;
  graph.ensure_node(author, tweet.author_handle, t);
  NodeData& post_node = graph.ensure_node(post, tweet.text, t);
  post_node.author = author.id;
  post_node.is_retweet = post_node.is_retweet || tweet.is_retweet;
  graph.add_edge(EdgeKey{author, post, EdgeKind::Authored}, 1, t);

  std::unordered_set<std::string> seen{author.id};
  for (const std::string& handle : tweet.mentions) {
    NodeKey target = user_key(handle);
    if (!seen.insert(target.id).second) continue;
    graph.ensure_node(target, handle, t);
    graph.add_edge(EdgeKey{author, target, EdgeKind::Mentions}, 1, t);
    graph.add_edge(EdgeKey{post, target, EdgeKind::Mentions}, 1, t);
  }
}

MultimodalGraph build_graph(const ShardStore& store, std::string_view topic,
                            std::optional<TimeRange> range) {
  MultimodalGraph graph;
  for (const Document& doc : store.scan_collection(topic, range)) add_tweet(graph, doc.payload);
  return graph;
}

MultimodalGraph merge_graphs(const MultimodalGraph& a, const MultimodalGraph& b) {
  MultimodalGraph out = a;
  for (const auto& [key, data] : b.nodes()) {
    if (const NodeData* existing = out.find_node(key);
        existing && key.kind == NodeKind::Tweet && existing->author != data.author) {
      throw Error(Errc::DuplicateTweetId, "tweet " + key.id + " has conflicting authors");
    }
    NodeData& node = out.ensure_node(key, data.label, data.first_seen);
    node.author = data.author;
    node.is_retweet = node.is_retweet || data.is_retweet;
  }
  for (const auto& [key, data] : b.edges()) out.add_edge(key, data.weight, data.first_seen);
  return out;
}

}  // namespace tweetfunnel
