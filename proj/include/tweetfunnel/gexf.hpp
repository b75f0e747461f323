#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "tweetfunnel/graph.hpp"
#include "tweetfunnel/metrics.hpp"

namespace tweetfunnel {

inline constexpr std::string_view kGexfNamespace = "http://www.gexf.net/1.2draft";
inline constexpr std::string_view kGexfVizNamespace = "http://www.gexf.net/1.2draft/viz";
inline constexpr std::size_t kMaxTweetLabelChars = 120;

enum class TweetLabelMode { Text, Id };

struct GexfWriteOptions {
  /// Emit node and edge start times (first_seen) in a dynamic graph.
  bool dynamic = false;
  TweetLabelMode tweet_labels = TweetLabelMode::Text;
  /// Tweet-node labels are cut to this many code points (0 = no limit).
  std::size_t max_tweet_label_chars = kMaxTweetLabelChars;
};

/// Escapes &, <, >, " and ' as XML entities.
std::string xml_escape(std::string_view text);

/// Cuts `label` to at most `max_chars` code points without splitting a UTF-8
/// sequence or an entity reference.
std::string truncate_label(std::string_view label, std::size_t max_chars);

/// GEXF 1.2draft document; byte-deterministic for fixed inputs. `positions`
/// follows the graph's node order.
std::string write_gexf(const MultimodalGraph& graph, const LayoutResult* positions = nullptr,
                       const GexfWriteOptions& options = {});

struct ParsedGexf {
  MultimodalGraph graph;
  std::map<NodeKey, Point> positions;
};

/// Reads a document produced by write_gexf (or structurally equivalent).
/// Throws Error(MalformedXml), Error(UnknownNodeReference) or
/// Error(MissingKindAttribute).
ParsedGexf parse_gexf(std::string_view document);

}  // namespace tweetfunnel
