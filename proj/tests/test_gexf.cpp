#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "synthetic.hpp"
#include "tweetfunnel/csv.hpp"
#include "tweetfunnel/error.hpp"
#include "tweetfunnel/gexf.hpp"

using namespace tweetfunnel;

namespace {

MultimodalGraph running_example() {
  MultimodalGraph g;
  add_tweet(g, make_clean(parse_tweet(tftest::running_example_record())));
  return g;
}

std::size_t count(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
  return n;
}

std::string document(const std::string& nodes, const std::string& edges) {
  return R"(<?xml version="1.0" encoding="UTF-8"?>
<gexf xmlns="http://www.gexf.net/1.2draft" version="1.2">
  <graph defaultedgetype="directed">
    <attributes class="node"><attribute id="0" title="kind" type="string"/></attributes>
    <attributes class="edge"><attribute id="0" title="kind" type="string"/></attributes>
    <nodes>)" + nodes + "</nodes><edges>" + edges + "</edges></graph></gexf>";
}

const std::string kUserNode =
    R"(<node id="u:a" label="A"><attvalues><attvalue for="0" value="user"/></attvalues></node>)";

Errc parse_error(const std::string& doc) {
  try {
    parse_gexf(doc);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected parse_gexf to throw");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("xml_escape and truncate_label") {
  CHECK(xml_escape("<&>") == "&lt;&amp;&gt;");
  CHECK(xml_escape(R"(a"b'c)") == "a&quot;b&apos;c");
  CHECK(xml_escape("plain") == "plain");
  CHECK(truncate_label("abcdef", 3) == "abc");
  CHECK(truncate_label("abc", 0) == "abc");
  CHECK(truncate_label("\xC3\xA9\xC3\xA9\xC3\xA9", 2) == "\xC3\xA9\xC3\xA9");
  CHECK(truncate_label("ab&amp;cd", 3) == "ab");
  CHECK(truncate_label("ab&amp;cd", 6) == "ab");
  CHECK(truncate_label("ab&amp;cd", 7) == "ab&amp;");
  const std::string long_text(300, 'x');
  CHECK(truncate_label(long_text, kMaxTweetLabelChars).size() == 120);
}

TEST_CASE("empty graph export") {
  const std::string doc = write_gexf(MultimodalGraph{});
  CHECK(tftest::xml_wellformed_error(doc).empty());
  CHECK(doc.find("<nodes>") != std::string::npos);
  CHECK(count(doc, "<node ") == 0);
  CHECK(count(doc, "<edge ") == 0);
  CHECK(parse_gexf(doc).graph.empty());
}

TEST_CASE("running example export") {
  const std::string doc = write_gexf(running_example());
  CHECK(tftest::xml_wellformed_error(doc).empty());
  CHECK(doc.find(R"(xmlns="http://www.gexf.net/1.2draft")") != std::string::npos);
  CHECK(count(doc, "<node ") == 4);
  CHECK(count(doc, "<edge ") == 5);
  CHECK(count(doc, R"(value="authored")") == 1);
  CHECK(count(doc, R"(value="mentions")") == 4);
  CHECK(doc.find(R"(<node id="u:usera" label="UserA")") != std::string::npos);
  CHECK(structurally_equal(parse_gexf(doc).graph, running_example()));
}

TEST_CASE("labels with markup are escaped") {
  MultimodalGraph g;
  g.ensure_node(user_key("x"), "<&>\"'", 0);
  const std::string doc = write_gexf(g);
  CHECK(tftest::xml_wellformed_error(doc).empty());
  CHECK(doc.find(R"(label="&lt;&amp;&gt;&quot;&apos;")") != std::string::npos);
  CHECK(parse_gexf(doc).graph.find_node(user_key("x"))->label == "<&>\"'");
}

TEST_CASE("tweet label modes") {
  RawTweet raw;
  raw.tweet_id = "77";
  raw.author_handle = "A";
  raw.text = std::string(200, 'y');
  MultimodalGraph g;
  add_tweet(g, make_clean(raw));
  const std::string text = write_gexf(g);
  CHECK(text.find("label=\"" + std::string(120, 'y') + "\"") != std::string::npos);
  GexfWriteOptions ids;
  ids.tweet_labels = TweetLabelMode::Id;
  CHECK(write_gexf(g, nullptr, ids).find(R"(<node id="t:77" label="77")") != std::string::npos);
}

TEST_CASE("parser errors") {
  CHECK(parse_error("<gexf><graph>") == Errc::MalformedXml);
  CHECK(parse_error("not xml at all") == Errc::MalformedXml);
  CHECK(parse_error(document(kUserNode, R"(<edge id="0" source="u:a" target="u:ghost">)"
                                        R"(<attvalues><attvalue for="0" value="mentions"/></attvalues></edge>)")) ==
        Errc::UnknownNodeReference);
  CHECK(parse_error(document(R"(<node id="u:a" label="A"/>)", "")) == Errc::MissingKindAttribute);
  const std::string two_users =
      kUserNode + R"(<node id="u:b" label="B"><attvalues><attvalue for="0" value="user"/></attvalues></node>)";
  CHECK(parse_error(document(two_users, R"(<edge id="0" source="u:a" target="u:b"/>)")) ==
        Errc::MissingKindAttribute);
  const ParsedGexf ok = parse_gexf(document(
      two_users,
      R"(<edge id="0" source="u:a" target="u:b" weight="3"><attvalues><attvalue for="0" value="mentions"/></attvalues></edge>)"));
  CHECK(ok.graph.node_count() == 2);
  CHECK(ok.graph.find_edge({user_key("a"), user_key("b"), EdgeKind::Mentions})->weight == 3);
}

TEST_CASE("round trip on random graphs") {
  std::mt19937_64 rng(606);
  for (int trial = 0; trial < 200; ++trial) {
    INFO("trial " << trial);
    const MultimodalGraph g = tftest::random_multimodal_graph(rng, 15, 25);
    const std::string doc = write_gexf(g);
    REQUIRE(tftest::xml_wellformed_error(doc) == "");
    const ParsedGexf parsed = parse_gexf(doc);
    CHECK(structurally_equal(parsed.graph, g));
    CHECK(write_gexf(parsed.graph) == doc);

    GexfWriteOptions dynamic;
    dynamic.dynamic = true;
    const LayoutResult layout = layout_force(g, 5, trial);
    const std::string ddoc = write_gexf(g, &layout, dynamic);
    REQUIRE(tftest::xml_wellformed_error(ddoc) == "");
    const ParsedGexf dparsed = parse_gexf(ddoc);
    CHECK(dparsed.graph == g);
    REQUIRE(dparsed.positions.size() == g.node_count());
    std::size_t i = 0;
    for (const auto& [key, data] : g.nodes()) {
      CHECK(dparsed.positions.at(key) == layout.positions[i++]);
    }
    CHECK(write_gexf(dparsed.graph, &layout, dynamic) == ddoc);
  }
}

TEST_CASE("signature CSV") {
  TimeBucketSeries series;
  series.buckets = {{0, 3, 2, 4}, {18000, 1, 1, 0}};
  CHECK(write_signature_csv(series) ==
        "bucket_start_iso,bucket_start_epoch,tweets,actors,mentions\n"
        "1970-01-01T00:00:00Z,0,3,2,4\n"
        "1970-01-01T05:00:00Z,18000,1,1,0\n");
  CHECK(write_signature_csv(TimeBucketSeries{}) == "bucket_start_iso,bucket_start_epoch,tweets,actors,mentions\n");
}

TEST_CASE("CSV fields and metrics table") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("line\nbreak") == "\"line\nbreak\"");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(2.0 / 3.0) == "0.6666666666666666");
  CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);

  const MultimodalGraph g = running_example();
  const std::string csv = write_metrics_csv(g, compute_centrality(g));
  CHECK(csv.rfind("node_id,kind,label,in_deg,out_deg,betweenness,closeness,eigenvector\n", 0) == 0);
  CHECK(csv.find("u:usera,user,UserA,0,3,0,1,1\n") != std::string::npos);
  CHECK(count(csv, "\n") == 5);
  const LayoutResult layout = layout_force(g, 3, 1);
  const std::string with_xy = write_metrics_csv(g, compute_centrality(g), &layout);
  CHECK(with_xy.rfind("node_id,kind,label,in_deg,out_deg,betweenness,closeness,eigenvector,x,y\n", 0) == 0);
}
