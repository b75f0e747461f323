#include "tweetfunnel/gexf.hpp"

#include <expat.h>

#include <charconv>
#include <cmath>
#include <memory>
#include <sstream>
#include <vector>

#include "tweetfunnel/csv.hpp"
#include "tweetfunnel/error.hpp"
#include "utf8.hpp"

namespace tweetfunnel {

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size() + 8);
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t start = i;
    const char32_t cp = detail::next_code_point(text, i);
    switch (cp) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      // Character references survive attribute-value normalization.
      case '\t': out += "&#9;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      default:
        if (detail::is_xml_illegal(cp) || !detail::decoded_verbatim(text, start, i, cp)) {
          out += "\xEF\xBF\xBD";
        } else {
          out.append(text.substr(start, i - start));
        }
    }
  }
  return out;
}

std::string truncate_label(std::string_view label, std::size_t max_chars) {
  if (max_chars == 0) return std::string(label);
  std::size_t i = 0;
  std::size_t chars = 0;
  while (i < label.size() && chars < max_chars) {
    detail::next_code_point(label, i);
    ++chars;
  }
  if (i >= label.size()) return std::string(label);
  std::string_view cut = label.substr(0, i);
  const auto amp = cut.rfind('&');
  if (amp != std::string_view::npos && cut.find(';', amp) == std::string_view::npos) {
    cut = cut.substr(0, amp);
  }
  return std::string(cut);
}

namespace {

std::string node_label(const NodeKey& key, const NodeData& data, const GexfWriteOptions& options) {
  if (key.kind == NodeKind::User) return data.label;
  if (options.tweet_labels == TweetLabelMode::Id) return key.id;
  return truncate_label(data.label, options.max_tweet_label_chars);
}

}  // namespace

std::string write_gexf(const MultimodalGraph& graph, const LayoutResult* positions,
                       const GexfWriteOptions& options) {
  if (positions && positions->positions.size() != graph.node_count()) {
    throw Error(Errc::InvalidArgument, "layout size does not match graph");
  }
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<gexf xmlns=\"" << kGexfNamespace << "\" xmlns:viz=\"" << kGexfVizNamespace
      << "\" version=\"1.2\">\n"
      << "  <meta>\n    <creator>tweetfunnel</creator>\n  </meta>\n";
  if (options.dynamic) {
    out << "  <graph mode=\"dynamic\" defaultedgetype=\"directed\" timeformat=\"double\">\n";
  } else {
    out << "  <graph mode=\"static\" defaultedgetype=\"directed\">\n";
  }
  out << "    <attributes class=\"node\">\n"
      << "      <attribute id=\"kind\" title=\"kind\" type=\"string\"/>\n"
      << "      <attribute id=\"is_retweet\" title=\"is_retweet\" type=\"boolean\"/>\n"
      << "    </attributes>\n"
      << "    <attributes class=\"edge\">\n"
      << "      <attribute id=\"kind\" title=\"kind\" type=\"string\"/>\n"
      << "    </attributes>\n";

  out << "    <nodes>\n";
  std::size_t index = 0;
  for (const auto& [key, data] : graph.nodes()) {
    out << "      <node id=\"" << xml_escape(key.external_id()) << "\" label=\""
        << xml_escape(node_label(key, data, options)) << "\"";
    if (options.dynamic) out << " start=\"" << data.first_seen << "\"";
    out << ">\n        <attvalues>\n"
        << "          <attvalue for=\"kind\" value=\"" << to_string(key.kind) << "\"/>\n"
        << "          <attvalue for=\"is_retweet\" value=\"" << (data.is_retweet ? "true" : "false")
        << "\"/>\n        </attvalues>\n";
    if (positions) {
      const Point& p = positions->positions[index];
      out << "        <viz:position x=\"" << format_double(p.x) << "\" y=\"" << format_double(p.y)
          << "\" z=\"0\"/>\n";
    }
    out << "      </node>\n";
    ++index;
  }
  out << "    </nodes>\n    <edges>\n";
  std::size_t edge_id = 0;
  for (const auto& [key, data] : graph.edges()) {
    out << "      <edge id=\"" << edge_id++ << "\" source=\"" << xml_escape(key.source.external_id())
        << "\" target=\"" << xml_escape(key.target.external_id()) << "\" weight=\"" << data.weight
        << "\"";
    if (options.dynamic) out << " start=\"" << data.first_seen << "\"";
    out << ">\n        <attvalues>\n"
        << "          <attvalue for=\"kind\" value=\"" << to_string(key.kind) << "\"/>\n"
        << "        </attvalues>\n      </edge>\n";
  }
  out << "    </edges>\n  </graph>\n</gexf>\n";
  return out.str();
}

namespace {

struct PendingNode {
  std::string external_id;
  std::string label;
  std::map<std::string, std::string> attvalues;
  std::optional<Timestamp> start;
  std::optional<Point> position;
};

struct PendingEdge {
  std::string source;
  std::string target;
  std::uint64_t weight = 1;
  std::map<std::string, std::string> attvalues;
  std::optional<Timestamp> start;
};

struct ParseState {
  XML_Parser parser = nullptr;
  std::optional<Error> error;
  std::string attr_class;  // "node" / "edge" inside <attributes>
  std::map<std::string, std::string> node_attr_titles;
  std::map<std::string, std::string> edge_attr_titles;
  std::optional<PendingNode> node;
  std::optional<PendingEdge> edge;
  std::vector<PendingNode> nodes;
  std::vector<PendingEdge> edges;

  void fail(Errc code, const std::string& detail) {
    if (!error) error.emplace(code, detail);
    XML_StopParser(parser, XML_FALSE);
  }
};

std::string_view local_name(const XML_Char* name) {
  std::string_view s(name);
  const auto sep = s.rfind('|');
  return sep == std::string_view::npos ? s : s.substr(sep + 1);
}

std::map<std::string, std::string> attr_map(const XML_Char** attrs) {
  std::map<std::string, std::string> out;
  for (int i = 0; attrs[i] != nullptr; i += 2) out.emplace(local_name(attrs[i]), attrs[i + 1]);
  return out;
}

std::optional<double> to_double(const std::string& s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<Timestamp> read_start(ParseState& st, const std::map<std::string, std::string>& a) {
  auto it = a.find("start");
  if (it == a.end()) return std::nullopt;
  auto v = to_double(it->second);
  if (!v) {
    st.fail(Errc::MalformedXml, "bad start value '" + it->second + "'");
    return std::nullopt;
  }
  return static_cast<Timestamp>(std::floor(*v));
}

void XMLCALL on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
  auto& st = *static_cast<ParseState*>(user);
  const std::string_view tag = local_name(name);
  auto a = attr_map(attrs);

  if (tag == "attributes") {
    st.attr_class = a["class"];
  } else if (tag == "attribute") {
    auto& titles = st.attr_class == "edge" ? st.edge_attr_titles : st.node_attr_titles;
    titles[a["id"]] = a.count("title") ? a["title"] : a["id"];
  } else if (tag == "node") {
    if (!a.count("id")) return st.fail(Errc::MalformedXml, "node without id");
    PendingNode n;
    n.external_id = a["id"];
    n.label = a.count("label") ? a["label"] : "";
    n.start = read_start(st, a);
    st.node = std::move(n);
  } else if (tag == "edge") {
    if (!a.count("source") || !a.count("target")) {
      return st.fail(Errc::MalformedXml, "edge without source/target");
    }
    PendingEdge e;
    e.source = a["source"];
    e.target = a["target"];
    if (a.count("weight")) {
      auto w = to_double(a["weight"]);
      if (!w || *w < 1.0) return st.fail(Errc::MalformedXml, "bad edge weight '" + a["weight"] + "'");
      e.weight = static_cast<std::uint64_t>(std::llround(*w));
    }
    e.start = read_start(st, a);
    st.edge = std::move(e);
  } else if (tag == "attvalue") {
    const std::string key = a.count("for") ? a["for"] : a["id"];
    if (st.edge) {
      auto it = st.edge_attr_titles.find(key);
      st.edge->attvalues[it == st.edge_attr_titles.end() ? key : it->second] = a["value"];
    } else if (st.node) {
      auto it = st.node_attr_titles.find(key);
      st.node->attvalues[it == st.node_attr_titles.end() ? key : it->second] = a["value"];
    }
  } else if (tag == "position" && st.node) {
    auto x = to_double(a["x"]);
    auto y = to_double(a["y"]);
    if (!x || !y) return st.fail(Errc::MalformedXml, "bad viz:position");
    st.node->position = Point{*x, *y};
  }
}

void XMLCALL on_end(void* user, const XML_Char* name) {
  auto& st = *static_cast<ParseState*>(user);
  const std::string_view tag = local_name(name);
  if (tag == "node" && st.node) {
    st.nodes.push_back(std::move(*st.node));
    st.node.reset();
  } else if (tag == "edge" && st.edge) {
    st.edges.push_back(std::move(*st.edge));
    st.edge.reset();
  } else if (tag == "attributes") {
    st.attr_class.clear();
  }
}

}  // namespace

ParsedGexf parse_gexf(std::string_view document) {
  ParseState st;
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
      XML_ParserCreateNS("UTF-8", '|'), &XML_ParserFree);
  if (!parser) throw Error(Errc::IOFailure, "cannot allocate XML parser");
  st.parser = parser.get();
  XML_SetUserData(parser.get(), &st);
  XML_SetElementHandler(parser.get(), on_start, on_end);

  const auto status =
      XML_Parse(parser.get(), document.data(), static_cast<int>(document.size()), XML_TRUE);
  if (st.error) throw *st.error;
  if (status != XML_STATUS_OK) {
    throw Error(Errc::MalformedXml,
                std::string(XML_ErrorString(XML_GetErrorCode(parser.get()))) + " at line " +
                    std::to_string(XML_GetCurrentLineNumber(parser.get())));
  }

  ParsedGexf out;
  std::map<std::string, NodeKey> by_external_id;
  for (PendingNode& n : st.nodes) {
    auto kind_it = n.attvalues.find("kind");
    if (kind_it == n.attvalues.end()) {
      throw Error(Errc::MissingKindAttribute, "node " + n.external_id);
    }
    const auto kind = node_kind_from_string(kind_it->second);
    if (!kind) throw Error(Errc::MissingKindAttribute, "node " + n.external_id + " has kind '" + kind_it->second + "'");
    NodeKey key{*kind, n.external_id};
    const std::string prefix{static_cast<char>(*kind), ':'};
    if (n.external_id.rfind(prefix, 0) == 0) key.id = n.external_id.substr(prefix.size());
    if (!by_external_id.emplace(n.external_id, key).second || out.graph.find_node(key)) {
      throw Error(Errc::MalformedXml, "duplicate node id " + n.external_id);
    }
    NodeData& data = out.graph.ensure_node(key, n.label, n.start.value_or(0));
    auto rt = n.attvalues.find("is_retweet");
    data.is_retweet = rt != n.attvalues.end() && (rt->second == "true" || rt->second == "1");
    if (n.position) out.positions.emplace(key, *n.position);
  }
  for (const PendingEdge& e : st.edges) {
    auto src = by_external_id.find(e.source);
    auto dst = by_external_id.find(e.target);
    if (src == by_external_id.end() || dst == by_external_id.end()) {
      throw Error(Errc::UnknownNodeReference, "edge " + e.source + " -> " + e.target);
    }
    auto kind_it = e.attvalues.find("kind");
    const auto kind = kind_it == e.attvalues.end() ? std::nullopt : edge_kind_from_string(kind_it->second);
    if (!kind) throw Error(Errc::MissingKindAttribute, "edge " + e.source + " -> " + e.target);
    const EdgeKey key{src->second, dst->second, *kind};
    if (key.source == key.target) throw Error(Errc::MalformedXml, "self-loop on " + e.source);
    out.graph.add_edge(key, e.weight, e.start.value_or(0));
    if (*kind == EdgeKind::Authored && key.target.kind == NodeKind::Tweet) {
      out.graph.find_node_mut(key.target)->author = key.source.id;
    }
  }
  return out;
}

}  // namespace tweetfunnel
