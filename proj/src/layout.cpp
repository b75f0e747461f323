#include "tweetfunnel/metrics.hpp"

#include <cmath>
#include <random>

#include "tweetfunnel/error.hpp"

namespace tweetfunnel {

namespace {

// Uniform in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

constexpr double kMinDistance = 1e-9;
constexpr double kMaxSpeed = 1.0;

}  // namespace

std::vector<Point> seeded_positions(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double half = 10.0 * std::sqrt(static_cast<double>(std::max<std::size_t>(n, 1)));
  std::vector<Point> out(n);
  for (Point& p : out) {
    p.x = (2.0 * unit_double(rng) - 1.0) * half;
    p.y = (2.0 * unit_double(rng) - 1.0) * half;
  }
  return out;
}

LayoutResult layout_force(const Digraph& g, std::vector<Point> initial, int iterations,
                          const LayoutParams& params) {
  const std::size_t n = g.size();
  if (iterations < 0) throw Error(Errc::InvalidArgument, "iterations must be >= 0");
  if (initial.size() != n) throw Error(Errc::InvalidArgument, "initial positions size mismatch");

  std::vector<double> mass(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    mass[v] = static_cast<double>(g.in(v).size() + g.out(v).size()) + 1.0;
  }

  LayoutResult result;
  result.positions = std::move(initial);
  auto& pos = result.positions;
  std::vector<Point> force(n), previous(n);
  std::vector<double> speed(n, kMaxSpeed);

  for (int it = 0; it < iterations; ++it) {
    std::fill(force.begin(), force.end(), Point{});

    for (std::uint32_t u = 0; u < n; ++u) {
      for (std::uint32_t v = u + 1; v < n; ++v) {
        double dx = pos[v].x - pos[u].x;
        double dy = pos[v].y - pos[u].y;
        double d = std::hypot(dx, dy);
        if (d < kMinDistance) {
          // Coincident nodes: separate along x by index order.
          dx = 1.0, dy = 0.0, d = kMinDistance;
        } else {
          dx /= d, dy /= d;
        }
        const double f = params.repulsion * mass[u] * mass[v] / d;
        force[u].x -= f * dx, force[u].y -= f * dy;
        force[v].x += f * dx, force[v].y += f * dy;
      }
    }

    for (std::uint32_t u = 0; u < n; ++u) {
      for (std::uint32_t v : g.out(u)) {
        const double dx = pos[v].x - pos[u].x;
        const double dy = pos[v].y - pos[u].y;
        force[u].x += dx, force[u].y += dy;
        force[v].x -= dx, force[v].y -= dy;
      }
    }

    for (std::uint32_t v = 0; v < n; ++v) {
      const double d = std::hypot(pos[v].x, pos[v].y);
      if (d > 0.0) {
        const double f = params.gravity * mass[v] / d;
        force[v].x -= f * pos[v].x, force[v].y -= f * pos[v].y;
      }
    }

    double max_disp = 0.0;
    for (std::uint32_t v = 0; v < n; ++v) {
      // Halve the step when the force reverses (oscillation), else grow it.
      const double dot = force[v].x * previous[v].x + force[v].y * previous[v].y;
      speed[v] = dot < 0.0 ? speed[v] * 0.5 : std::min(speed[v] * 1.1, kMaxSpeed);
      double dx = force[v].x * speed[v] / mass[v];
      double dy = force[v].y * speed[v] / mass[v];
      const double len = std::hypot(dx, dy);
      if (len > params.max_step) {
        dx *= params.max_step / len, dy *= params.max_step / len;
      }
      pos[v].x += dx, pos[v].y += dy;
      max_disp = std::max(max_disp, std::min(len, params.max_step));
    }
    previous.swap(force);
    result.iterations_run = it + 1;
    result.final_max_displacement = max_disp;
  }
  return result;
}

LayoutResult layout_force(const Digraph& g, int iterations, std::uint64_t seed,
                          const LayoutParams& params) {
  return layout_force(g, seeded_positions(g.size(), seed), iterations, params);
}

LayoutResult layout_force(const MultimodalGraph& graph, int iterations, std::uint64_t seed,
                          const LayoutParams& params) {
  return layout_force(Digraph::from_graph(graph), iterations, seed, params);
}

}  // namespace tweetfunnel
