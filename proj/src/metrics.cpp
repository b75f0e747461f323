#include "tweetfunnel/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "tweetfunnel/error.hpp"

namespace tweetfunnel {

Digraph::Digraph(std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges)
    : out_(n), in_(n) {
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw Error(Errc::InvalidArgument, "edge endpoint out of range");
    if (u == v) continue;
    out_[u].push_back(v);
  }
  finalize();
}

void Digraph::finalize() {
  edges_ = 0;
  for (auto& adj : in_) adj.clear();
  for (std::uint32_t u = 0; u < out_.size(); ++u) {
    auto& adj = out_[u];
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    for (std::uint32_t v : adj) in_[v].push_back(u);
    edges_ += adj.size();
  }
}

Digraph Digraph::from_graph(const MultimodalGraph& graph) {
  std::map<NodeKey, std::uint32_t> index;
  for (const auto& [key, _] : graph.nodes()) {
    index.emplace_hint(index.end(), key, static_cast<std::uint32_t>(index.size()));
  }
  Digraph g(index.size());
  for (const auto& [key, _] : graph.edges()) {
    const std::uint32_t u = index.at(key.source);
    const std::uint32_t v = index.at(key.target);
    if (u != v) g.out_[u].push_back(v);
  }
  g.finalize();
  return g;
}

std::vector<std::vector<std::uint32_t>> Digraph::undirected_adjacency() const {
  std::vector<std::vector<std::uint32_t>> adj(size());
  for (std::uint32_t u = 0; u < size(); ++u) {
    adj[u] = out_[u];
    adj[u].insert(adj[u].end(), in_[u].begin(), in_[u].end());
    std::sort(adj[u].begin(), adj[u].end());
    adj[u].erase(std::unique(adj[u].begin(), adj[u].end()), adj[u].end());
  }
  return adj;
}

std::vector<DegreeCounts> degree_centrality(const Digraph& g) {
  std::vector<DegreeCounts> out(g.size());
  for (std::uint32_t v = 0; v < g.size(); ++v) {
    const auto in = static_cast<std::uint32_t>(g.in(v).size());
    const auto outd = static_cast<std::uint32_t>(g.out(v).size());
    out[v] = DegreeCounts{in, outd, in + outd};
  }
  return out;
}

namespace {

constexpr std::uint32_t kSourceBlock = 32;

// Adds the dependencies of every vertex on source `s` into `acc`.
void brandes_single_source(const Digraph& g, std::uint32_t s, std::vector<double>& acc,
                           std::vector<std::int64_t>& dist, std::vector<double>& sigma,
                           std::vector<double>& delta, std::vector<std::uint32_t>& order) {
  std::fill(dist.begin(), dist.end(), -1);
  std::fill(sigma.begin(), sigma.end(), 0.0);
  std::fill(delta.begin(), delta.end(), 0.0);
  order.clear();

  dist[s] = 0;
  sigma[s] = 1.0;
  order.push_back(s);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const std::uint32_t v = order[head];
    for (std::uint32_t w : g.out(v)) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        order.push_back(w);
      }
      if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
    }
  }
  for (std::size_t i = order.size(); i-- > 1;) {
    const std::uint32_t w = order[i];
    for (std::uint32_t v : g.in(w)) {
      if (dist[v] >= 0 && dist[v] + 1 == dist[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
    }
    acc[w] += delta[w];
  }
}

}  // namespace

std::vector<double> betweenness_centrality(const Digraph& g, unsigned workers) {
  const std::size_t n = g.size();
  const std::size_t blocks = (n + kSourceBlock - 1) / kSourceBlock;
  std::vector<std::vector<double>> partial(blocks);
  std::atomic<std::size_t> next{0};

  auto run = [&] {
    std::vector<std::int64_t> dist(n);
    std::vector<double> sigma(n), delta(n);
    std::vector<std::uint32_t> order;
    order.reserve(n);
    for (std::size_t b = next++; b < blocks; b = next++) {
      std::vector<double> acc(n, 0.0);
      const auto first = static_cast<std::uint32_t>(b * kSourceBlock);
      const auto last = static_cast<std::uint32_t>(std::min<std::size_t>(n, first + kSourceBlock));
      for (std::uint32_t s = first; s < last; ++s) brandes_single_source(g, s, acc, dist, sigma, delta, order);
      partial[b] = std::move(acc);
    }
  };

  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(blocks, 1))));
  if (workers == 1) {
    run();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(run);
  }

  std::vector<double> total(n, 0.0);
  for (const auto& acc : partial) {
    for (std::size_t v = 0; v < n; ++v) total[v] += acc[v];
  }
  return total;
}

std::vector<double> closeness_centrality(const Digraph& g) {
  const std::size_t n = g.size();
  std::vector<double> out(n, 0.0);
  std::vector<std::int64_t> dist(n);
  std::vector<std::uint32_t> queue;
  queue.reserve(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    std::fill(dist.begin(), dist.end(), -1);
    queue.clear();
    dist[v] = 0;
    queue.push_back(v);
    std::int64_t sum = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::uint32_t u = queue[head];
      for (std::uint32_t w : g.out(u)) {
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          sum += dist[w];
          queue.push_back(w);
        }
      }
    }
    const auto reachable = static_cast<double>(queue.size() - 1);
    if (reachable > 0) {
      out[v] = (reachable / static_cast<double>(n - 1)) * (reachable / static_cast<double>(sum));
    }
  }
  return out;
}

EigenvectorResult eigenvector_centrality(const Digraph& g) {
  const std::size_t n = g.size();
  EigenvectorResult result;
  result.scores.assign(n, 0.0);
  if (g.edge_count() == 0) return result;

  const auto adj = g.undirected_adjacency();
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> y(n);
  result.converged = false;
  for (int it = 1; it <= kEigenMaxIterations; ++it) {
    double norm = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      double s = x[v];
      for (std::uint32_t u : adj[v]) s += x[u];
      y[v] = s;
      norm += s * s;
    }
    norm = std::sqrt(norm);
    double change = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      y[v] /= norm;
      change = std::max(change, std::abs(y[v] - x[v]));
    }
    x.swap(y);
    result.iterations = it;
    if (change < kEigenTolerance) {
      result.converged = true;
      break;
    }
  }
  const double top = *std::max_element(x.begin(), x.end());
  for (std::size_t v = 0; v < n; ++v) result.scores[v] = top > 0.0 ? x[v] / top : 0.0;
  return result;
}

CentralityReport compute_centrality(const MultimodalGraph& graph, unsigned workers) {
  const Digraph g = Digraph::from_graph(graph);
  const auto degree = degree_centrality(g);
  const auto betweenness = betweenness_centrality(g, workers);
  const auto closeness = closeness_centrality(g);
  const auto eigen = eigenvector_centrality(g);

  CentralityReport report;
  report.eigen_iterations = eigen.iterations;
  report.eigen_converged = eigen.converged;
  std::size_t i = 0;
  for (const auto& [key, _] : graph.nodes()) {
    report.rows.push_back(
        CentralityRow{key, degree[i], betweenness[i], closeness[i], eigen.scores[i]});
    ++i;
  }
  return report;
}

}  // namespace tweetfunnel
