#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "synthetic.hpp"
#include "tweetfunnel/error.hpp"
#include "tweetfunnel/graph.hpp"

using namespace tweetfunnel;

namespace {

CleanTweet tweet(const std::string& id, const std::string& author, const std::string& text, Timestamp t = 100) {
  RawTweet raw;
  raw.tweet_id = id;
  raw.author_handle = author;
  raw.text = text;
  raw.created_at = t;
  return make_clean(raw);
}

std::vector<CleanTweet> corpus_tweets(std::size_t n, std::uint64_t seed) {
  tftest::CorpusOptions options;
  options.tweets = n;
  options.seed = seed;
  options.users = 60;
  std::vector<CleanTweet> out;
  for (const auto& record : tftest::synthetic_corpus(options)) out.push_back(make_clean(parse_tweet(record)));
  return out;
}

MultimodalGraph fold(const std::vector<CleanTweet>& tweets) {
  MultimodalGraph g;
  for (const auto& t : tweets) add_tweet(g, t);
  return g;
}

}  // namespace

TEST_CASE("running example maps to four nodes and five edges") {
  MultimodalGraph g;
  add_tweet(g, make_clean(parse_tweet(tftest::running_example_record())));
  CHECK(g.node_count() == 4);
  CHECK(g.edge_count() == 5);
  const NodeData* a = g.find_node(user_key("UserA"));
  REQUIRE(a != nullptr);
  CHECK(a->out_degree == 3);
  CHECK(a->in_degree == 0);
  CHECK(a->label == "UserA");
  CHECK(g.find_edge({user_key("UserA"), tweet_key("1"), EdgeKind::Authored}) != nullptr);
  for (const char* m : {"userb", "userc"}) {
    CHECK(g.find_edge({user_key("UserA"), user_key(m), EdgeKind::Mentions}) != nullptr);
    CHECK(g.find_edge({tweet_key("1"), user_key(m), EdgeKind::Mentions}) != nullptr);
    CHECK(g.find_node(user_key(m))->in_degree == 2);
  }
  const NodeData* t = g.find_node(tweet_key("1"));
  CHECK(t->author == "usera");
  CHECK(t->in_degree == 1);
  CHECK(t->out_degree == 2);
}

TEST_CASE("mapping edge cases") {
  SUBCASE("tweet without mentions") {
    MultimodalGraph g;
    add_tweet(g, tweet("9", "solo", "no mentions here"));
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 1);
  }
  SUBCASE("repeated mention across tweets aggregates weight") {
    MultimodalGraph g;
    add_tweet(g, tweet("1", "A", "@B hi", 10));
    add_tweet(g, tweet("2", "a", "@b again", 5));
    const EdgeData* e = g.find_edge({user_key("A"), user_key("B"), EdgeKind::Mentions});
    REQUIRE(e != nullptr);
    CHECK(e->weight == 2);
    CHECK(e->first_seen == 5);
    CHECK(g.node_count() == 4);
    // Earliest sighting wins the label.
    CHECK(g.find_node(user_key("A"))->label == "a");
  }
  SUBCASE("self mention and repeated mention inside one tweet") {
    MultimodalGraph g;
    add_tweet(g, tweet("1", "A", "@A @B @b @B"));
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 3);
    CHECK(g.find_edge({user_key("A"), user_key("B"), EdgeKind::Mentions})->weight == 1);
  }
  SUBCASE("retweet flag carried onto the tweet node") {
    MultimodalGraph g;
    add_tweet(g, tweet("1", "A", "RT @B: news"));
    CHECK(g.find_node(tweet_key("1"))->is_retweet);
    CHECK_FALSE(g.find_node(user_key("A"))->is_retweet);
  }
  SUBCASE("conflicting author raises DuplicateTweetId") {
    MultimodalGraph g;
    add_tweet(g, tweet("1", "A", "x"));
    try {
      add_tweet(g, tweet("1", "B", "x"));
      FAIL("expected DuplicateTweetId");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::DuplicateTweetId);
    }
  }
  SUBCASE("add_edge contracts") {
    MultimodalGraph g;
    g.ensure_node(user_key("a"), "a", 0);
    CHECK_THROWS_AS(g.add_edge({user_key("a"), user_key("b"), EdgeKind::Mentions}, 1, 0), Error);
    CHECK_THROWS_AS(g.add_edge({user_key("a"), user_key("a"), EdgeKind::Mentions}, 1, 0), Error);
  }
}

TEST_CASE("node and edge counts follow from the mention set") {
  std::mt19937_64 rng(5);
  const std::vector<std::string> pool = {"amy", "Bob", "cat", "Dan", "eve", "fay", "Gus", "hal"};
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    std::set<std::string> distinct;
    const std::string author = pool[rng() % pool.size()];
    for (int m = static_cast<int>(rng() % 6); m > 0; --m) {
      const std::string h = pool[rng() % pool.size()];
      text += "@" + h + " ";
      if (fold_case(h) != fold_case(author)) distinct.insert(fold_case(h));
    }
    MultimodalGraph g;
    add_tweet(g, tweet("x", author, text + "words"));
    const std::size_t k = distinct.size();
    CHECK(g.node_count() == k + 2);
    CHECK(g.edge_count() == 2 * k + 1);
    CHECK(g.find_node(user_key(author))->out_degree == k + 1);
  }
}

TEST_CASE("mention order does not change the graph") {
  std::mt19937_64 rng(11);
  CleanTweet t = tweet("1", "A", "@Zed @bob @Cat @dee @Eve");
  MultimodalGraph reference;
  add_tweet(reference, t);
  for (int i = 0; i < 20; ++i) {
    std::shuffle(t.mentions.begin(), t.mentions.end(), rng);
    MultimodalGraph g;
    add_tweet(g, t);
    CHECK(g == reference);
  }
}

TEST_CASE("build_graph folds the stored collection") {
  tftest::TempDir dir("graph");
  ShardStore store = ShardStore::open(dir.path(), 3);
  store.register_topic("t");
  auto tweets = corpus_tweets(400, 3);
  for (const auto& t : tweets) {
    Document d;
    d.key = t.tweet_id;
    d.payload = t;
    d.stored_at = t.created_at;
    store.put_doc("t", d);
  }
  std::sort(tweets.begin(), tweets.end(), [](const CleanTweet& a, const CleanTweet& b) {
    return std::tie(a.created_at, a.tweet_id) < std::tie(b.created_at, b.tweet_id);
  });
  CHECK(build_graph(store, "t") == fold(tweets));

  const Timestamp mid = tweets[200].created_at;
  std::vector<CleanTweet> early;
  for (const auto& t : tweets) {
    if (t.created_at < mid) early.push_back(t);
  }
  CHECK(build_graph(store, "t", TimeRange{0, mid}) == fold(early));
}

TEST_CASE("merge is an identity-preserving commutative monoid") {
  std::mt19937_64 rng(8);
  const MultimodalGraph empty;
  for (int trial = 0; trial < 50; ++trial) {
    const auto tweets = corpus_tweets(60, 100 + trial);
    std::vector<CleanTweet> parts[3];
    for (const auto& t : tweets) parts[rng() % 3].push_back(t);
    const MultimodalGraph a = fold(parts[0]), b = fold(parts[1]), c = fold(parts[2]);
    CHECK(merge_graphs(a, empty) == a);
    CHECK(merge_graphs(empty, a) == a);
    CHECK(merge_graphs(a, b) == merge_graphs(b, a));
    CHECK(merge_graphs(merge_graphs(a, b), c) == merge_graphs(a, merge_graphs(b, c)));
  }
}

TEST_CASE("partitioned build equals the full build") {
  const auto tweets = corpus_tweets(500, 42);
  const MultimodalGraph full = fold(tweets);
  std::mt19937_64 rng(1);
  for (std::size_t parts : {2u, 3u, 7u}) {
    std::vector<std::vector<CleanTweet>> split(parts);
    for (const auto& t : tweets) split[rng() % parts].push_back(t);
    MultimodalGraph merged;
    for (const auto& p : split) merged = merge_graphs(merged, fold(p));
    CHECK(merged == full);
  }
}

TEST_CASE("merge rejects conflicting tweet authors") {
  MultimodalGraph a, b;
  add_tweet(a, tweet("1", "A", "x"));
  add_tweet(b, tweet("1", "B", "x"));
  CHECK_THROWS_AS(merge_graphs(a, b), Error);
}
