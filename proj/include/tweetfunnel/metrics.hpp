#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "tweetfunnel/graph.hpp"

namespace tweetfunnel {

/// Compact simple digraph over vertices 0..n-1 used by the centrality code.
/// Parallel edges collapse and self-loops are dropped.
class Digraph {
 public:
  explicit Digraph(std::size_t n = 0) : out_(n), in_(n) {}
  Digraph(std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges);

  /// Vertices in the graph's node order; edge weights are ignored.
  static Digraph from_graph(const MultimodalGraph& graph);

  std::size_t size() const noexcept { return out_.size(); }
  std::size_t edge_count() const noexcept { return edges_; }
  const std::vector<std::uint32_t>& out(std::uint32_t v) const { return out_[v]; }
  const std::vector<std::uint32_t>& in(std::uint32_t v) const { return in_[v]; }

  /// Sorted, de-duplicated neighbours ignoring direction.
  std::vector<std::vector<std::uint32_t>> undirected_adjacency() const;

 private:
  void finalize();

  std::vector<std::vector<std::uint32_t>> out_;
  std::vector<std::vector<std::uint32_t>> in_;
  std::size_t edges_ = 0;
};

struct DegreeCounts {
  std::uint32_t in = 0;
  std::uint32_t out = 0;
  std::uint32_t total = 0;

  bool operator==(const DegreeCounts&) const = default;
};

std::vector<DegreeCounts> degree_centrality(const Digraph& g);

/// Brandes accumulation on the directed, unweighted graph; unnormalized.
/// Sources are processed in fixed blocks whose partial sums are added in
/// block order, so the result is bit-identical for any worker count.
std::vector<double> betweenness_centrality(const Digraph& g, unsigned workers = 1);

/// Component-corrected closeness on directed distances:
/// (r / (n-1)) * (r / sum of distances) over the r nodes reachable from v,
/// 0 when nothing is reachable.
std::vector<double> closeness_centrality(const Digraph& g);

inline constexpr double kEigenTolerance = 1e-9;
inline constexpr int kEigenMaxIterations = 1000;

struct EigenvectorResult {
  std::vector<double> scores;  // max-normalized to [0, 1]
  int iterations = 0;
  bool converged = true;
};

/// Power iteration on the undirected, unweighted view from the all-ones
/// vector, L2-normalized each step, stopping when the L-infinity change drops
/// below kEigenTolerance. Iterates with A + I, which has A's eigenvectors but
/// no oscillation on bipartite graphs. An edgeless graph yields all zeros.
EigenvectorResult eigenvector_centrality(const Digraph& g);

struct CentralityRow {
  NodeKey node;
  DegreeCounts degree;
  double betweenness = 0.0;
  double closeness = 0.0;
  double eigenvector = 0.0;
};

struct CentralityReport {
  std::vector<CentralityRow> rows;  // graph node order
  int eigen_iterations = 0;
  bool eigen_converged = true;
};

CentralityReport compute_centrality(const MultimodalGraph& graph, unsigned workers = 1);

// -- layout -----------------------------------------------------------------

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

struct LayoutParams {
  double repulsion = 10.0;   // k_r
  double gravity = 1.0;      // k_g
  double max_step = 10.0;    // per-iteration displacement cap
};

struct LayoutResult {
  std::vector<Point> positions;  // graph node order
  int iterations_run = 0;
  double final_max_displacement = 0.0;
};

/// Deterministic initial placement for `n` nodes from `seed`.
std::vector<Point> seeded_positions(std::size_t n, std::uint64_t seed);

/// ForceAtlas2-style layout: linear attraction along edges, repulsion
/// k_r (deg_u+1)(deg_v+1)/d between all pairs, gravity k_g (deg+1) toward
/// the origin, with a per-node adaptive step and a hard displacement cap.
LayoutResult layout_force(const Digraph& g, std::vector<Point> initial, int iterations,
                          const LayoutParams& params = {});
LayoutResult layout_force(const Digraph& g, int iterations, std::uint64_t seed,
                          const LayoutParams& params = {});
LayoutResult layout_force(const MultimodalGraph& graph, int iterations, std::uint64_t seed,
                          const LayoutParams& params = {});

}  // namespace tweetfunnel
