#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "synthetic.hpp"
#include "tweetfunnel/metrics.hpp"

using namespace tweetfunnel;

namespace {

using EdgeList = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

void check_close(const std::vector<double>& got, const std::vector<double>& want, double tol) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    INFO("vertex " << i);
    CHECK(std::abs(got[i] - want[i]) <= tol);
  }
}

Digraph complete(std::uint32_t n) {
  EdgeList e;
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::uint32_t v = 0; v < n; ++v) {
      if (u != v) e.emplace_back(u, v);
    }
  }
  return Digraph(n, e);
}

EdgeList edges_of(const Digraph& g) {
  EdgeList e;
  for (std::uint32_t u = 0; u < g.size(); ++u) {
    for (std::uint32_t v : g.out(u)) e.emplace_back(u, v);
  }
  return e;
}

double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

TEST_CASE("Digraph normalizes its edge list") {
  const Digraph g(3, {{0, 1}, {0, 1}, {1, 1}, {2, 0}});
  CHECK(g.edge_count() == 2);
  CHECK(g.out(0) == std::vector<std::uint32_t>{1});
  CHECK(g.in(0) == std::vector<std::uint32_t>{2});
  CHECK(g.undirected_adjacency()[0] == std::vector<std::uint32_t>{1, 2});
  const auto deg = degree_centrality(g);
  CHECK(deg[0] == DegreeCounts{1, 1, 2});
  CHECK(deg[1] == DegreeCounts{1, 0, 1});
}

TEST_CASE("centrality examples") {
  SUBCASE("directed path A -> B -> C") {
    const Digraph g(3, {{0, 1}, {1, 2}});
    check_close(betweenness_centrality(g), {0.0, 1.0, 0.0}, 1e-12);
    check_close(closeness_centrality(g), {2.0 / 3.0, 0.5, 0.0}, 1e-12);
  }
  SUBCASE("complete digraph") {
    const Digraph g = complete(5);
    check_close(betweenness_centrality(g), std::vector<double>(5, 0.0), 1e-12);
    check_close(closeness_centrality(g), std::vector<double>(5, 1.0), 1e-12);
    check_close(eigenvector_centrality(g).scores, std::vector<double>(5, 1.0), 1e-9);
  }
  SUBCASE("star K_{1,4}") {
    const Digraph g(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    const EigenvectorResult r = eigenvector_centrality(g);
    CHECK(r.converged);
    CHECK(r.iterations <= kEigenMaxIterations);
    check_close(r.scores, {1.0, 0.5, 0.5, 0.5, 0.5}, 1e-6);
  }
  SUBCASE("4-cycle") {
    const Digraph g(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    check_close(eigenvector_centrality(g).scores, std::vector<double>(4, 1.0), 1e-6);
    check_close(betweenness_centrality(g), {3.0, 3.0, 3.0, 3.0}, 1e-12);
  }
  SUBCASE("edgeless and empty graphs") {
    const Digraph g(4);
    check_close(betweenness_centrality(g), std::vector<double>(4, 0.0), 0.0);
    check_close(closeness_centrality(g), std::vector<double>(4, 0.0), 0.0);
    check_close(eigenvector_centrality(g).scores, std::vector<double>(4, 0.0), 0.0);
    const Digraph none;
    CHECK(betweenness_centrality(none).empty());
    CHECK(eigenvector_centrality(none).scores.empty());
  }
}

TEST_CASE("centrality agrees with independent oracles on random digraphs") {
  std::mt19937_64 rng(500);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    const Digraph g = tftest::random_digraph(rng, n, 0.3);
    INFO("trial " << trial << " n=" << n << " m=" << g.edge_count());
    check_close(betweenness_centrality(g), tftest::betweenness_oracle(g), 1e-9);
    check_close(closeness_centrality(g), tftest::closeness_oracle(g), 1e-9);
    check_close(eigenvector_centrality(g).scores, tftest::eigenvector_oracle(g), 1e-6);
  }
}

TEST_CASE("centrality is invariant under relabelling") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 30;
    const Digraph g = tftest::random_digraph(rng, n, 0.15);
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    std::shuffle(perm.begin(), perm.end(), rng);
    EdgeList e;
    for (auto [u, v] : edges_of(g)) e.emplace_back(perm[u], perm[v]);
    const Digraph h(n, e);
    const auto bg = betweenness_centrality(g), bh = betweenness_centrality(h);
    const auto cg = closeness_centrality(g), ch = closeness_centrality(h);
    const auto eg = eigenvector_centrality(g).scores, eh = eigenvector_centrality(h).scores;
    for (std::size_t v = 0; v < n; ++v) {
      CHECK(std::abs(bg[v] - bh[perm[v]]) <= 1e-9);
      CHECK(std::abs(cg[v] - ch[perm[v]]) <= 1e-12);
      CHECK(std::abs(eg[v] - eh[perm[v]]) <= 1e-6);
    }
  }
}

TEST_CASE("betweenness is bit-identical for any worker count") {
  std::mt19937_64 rng(4);
  const Digraph g = tftest::random_digraph(rng, 300, 0.02);
  const auto one = betweenness_centrality(g, 1);
  CHECK(betweenness_centrality(g, 2) == one);
  CHECK(betweenness_centrality(g, 4) == one);
  CHECK(betweenness_centrality(g, 0) == one);
}

TEST_CASE("compute_centrality follows graph node order") {
  MultimodalGraph graph;
  RawTweet raw;
  raw.tweet_id = "1";
  raw.author_handle = "UserA";
  raw.text = "@UserB @UserC";
  add_tweet(graph, make_clean(raw));
  const CentralityReport report = compute_centrality(graph, 2);
  REQUIRE(report.rows.size() == 4);
  auto it = graph.nodes().begin();
  for (const auto& row : report.rows) CHECK((it++)->first == row.node);
  // t:1, u:usera, u:userb, u:userc
  CHECK(report.rows[0].degree == DegreeCounts{1, 2, 3});
  // UserA reaches everyone directly, so the tweet lies on no shortest path.
  CHECK(report.rows[0].betweenness == 0.0);
  CHECK(report.rows[1].degree == DegreeCounts{0, 3, 3});
  CHECK(report.rows[1].closeness == doctest::Approx(1.0));
  CHECK(report.rows[1].eigenvector == doctest::Approx(1.0));
  CHECK(report.eigen_converged);
}

TEST_CASE("layout behaviour") {
  SUBCASE("zero iterations returns the seeded positions") {
    const Digraph g(6, {{0, 1}, {2, 3}});
    const LayoutResult r = layout_force(g, 0, 42);
    CHECK(r.positions == seeded_positions(6, 42));
    CHECK(r.iterations_run == 0);
  }
  SUBCASE("seeded positions are deterministic and seed-dependent") {
    CHECK(seeded_positions(20, 7) == seeded_positions(20, 7));
    CHECK(seeded_positions(20, 7) != seeded_positions(20, 8));
    CHECK(layout_force(complete(6), 50, 3).positions == layout_force(complete(6), 50, 3).positions);
  }
  SUBCASE("single node settles at the origin") {
    const LayoutResult r = layout_force(Digraph(1), 200, 42);
    CHECK(std::hypot(r.positions[0].x, r.positions[0].y) <= 1e-6);
  }
  SUBCASE("symmetric pair stays symmetric") {
    const Digraph g(2, {{0, 1}, {1, 0}});
    const LayoutResult r = layout_force(g, {{-3.0, 1.0}, {3.0, -1.0}}, 300);
    CHECK(r.positions[0].x == doctest::Approx(-r.positions[1].x).epsilon(1e-9));
    CHECK(r.positions[0].y == doctest::Approx(-r.positions[1].y).epsilon(1e-9));
    CHECK(dist(r.positions[0], r.positions[1]) > 0.0);
  }
  SUBCASE("displacement cap is honoured") {
    std::vector<Point> start{{0.0, 0.0}, {1e-3, 0.0}};
    const LayoutResult r = layout_force(Digraph(2), start, 1, LayoutParams{1e6, 1.0, 10.0});
    for (std::size_t i = 0; i < 2; ++i) CHECK(dist(r.positions[i], start[i]) <= 10.0 + 1e-9);
  }
  SUBCASE("two cliques joined by a bridge separate") {
    EdgeList e;
    for (std::uint32_t base : {0u, 5u}) {
      for (std::uint32_t u = 0; u < 5; ++u) {
        for (std::uint32_t v = 0; v < 5; ++v) {
          if (u != v) e.emplace_back(base + u, base + v);
        }
      }
    }
    e.emplace_back(0, 5);
    const LayoutResult r = layout_force(Digraph(10, e), 500, 42);
    auto centroid = [&](std::uint32_t base) {
      Point c;
      for (std::uint32_t i = 0; i < 5; ++i) {
        c.x += r.positions[base + i].x / 5;
        c.y += r.positions[base + i].y / 5;
      }
      return c;
    };
    const Point c1 = centroid(0), c2 = centroid(5);
    double spread = 0.0;
    for (std::uint32_t i = 0; i < 10; ++i) spread = std::max(spread, dist(r.positions[i], i < 5 ? c1 : c2));
    CHECK(dist(c1, c2) > 2.0 * spread);
  }
}
