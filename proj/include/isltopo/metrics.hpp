#pragma once

// Hop-count metrics of a topology: eccentricities, diameter, average maximum
// hops, degree histogram and (optionally) link stability.

#include <algorithm>
#include <compare>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "isltopo/error.hpp"
#include "isltopo/feasibility.hpp"
#include "isltopo/graph.hpp"

namespace isltopo {

/// A hop count that may be infinite (unreachable). Infinity compares greater
/// than every finite count and equal to itself.
class Hops {
 public:
  constexpr Hops() = default;
  constexpr explicit Hops(int hops) : value_(hops) {}
  static constexpr Hops infinite() { return Hops(std::nullopt); }

  constexpr bool is_finite() const { return value_.has_value(); }
  constexpr bool is_infinite() const { return !value_.has_value(); }
  int value() const {
    if (!value_) throw UndefinedMetricError("hop count is infinite");
    return *value_;
  }

  friend constexpr bool operator==(const Hops&, const Hops&) = default;
  friend constexpr std::strong_ordering operator<=>(const Hops& a, const Hops& b) {
    if (a.is_infinite() || b.is_infinite()) return a.is_infinite() <=> b.is_infinite();
    return *a.value_ <=> *b.value_;
  }

  std::string str() const { return value_ ? std::to_string(*value_) : std::string("inf"); }
  friend std::ostream& operator<<(std::ostream& os, const Hops& h) { return os << h.str(); }

 private:
  constexpr explicit Hops(std::optional<int> v) : value_(v) {}
  std::optional<int> value_{0};
};

using Adjacency = std::vector<std::vector<int>>;

/// Unit-cost BFS eccentricity of every node.
inline std::vector<Hops> eccentricities(const Adjacency& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<Hops> ecc(static_cast<std::size_t>(n));
  std::vector<int> dist(static_cast<std::size_t>(n));
  std::vector<int> queue(static_cast<std::size_t>(n));
  for (int src = 0; src < n; ++src) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[src] = 0;
    int head = 0, tail = 0, reached = 1, far = 0;
    queue[tail++] = src;
    while (head < tail) {
      const int u = queue[head++];
      for (int w : adj[u])
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          far = dist[w];
          ++reached;
          queue[tail++] = w;
        }
    }
    ecc[src] = reached == n ? Hops(far) : Hops::infinite();
  }
  return ecc;
}

inline std::vector<Hops> eccentricities(const Topology& topology) { return eccentricities(topology.adjacency()); }

struct TopologyMetrics {
  Hops diameter_hops;
  std::optional<double> avg_max_hops;  ///< empty when disconnected
  int n_edges = 0;
  int n_nodes = 0;
  int min_degree = 0;
  int max_degree = 0;
  std::vector<int> degree_histogram;  ///< degree_histogram[d] = nodes with degree d
  std::optional<double> stability_fraction;

  bool connected() const { return diameter_hops.is_finite(); }
};

inline TopologyMetrics evaluate_adjacency(const Adjacency& adj) {
  TopologyMetrics m;
  m.n_nodes = static_cast<int>(adj.size());
  int degree_sum = 0;
  m.min_degree = m.n_nodes > 0 ? std::numeric_limits<int>::max() : 0;
  for (const auto& nb : adj) {
    const int d = static_cast<int>(nb.size());
    degree_sum += d;
    m.min_degree = std::min(m.min_degree, d);
    m.max_degree = std::max(m.max_degree, d);
    if (static_cast<int>(m.degree_histogram.size()) <= d) m.degree_histogram.resize(static_cast<std::size_t>(d) + 1, 0);
    ++m.degree_histogram[d];
  }
  m.n_edges = degree_sum / 2;
  const auto ecc = eccentricities(adj);
  if (ecc.empty()) {
    m.diameter_hops = Hops(0);
    m.avg_max_hops = 0.0;
    return m;
  }
  m.diameter_hops = *std::max_element(ecc.begin(), ecc.end());
  if (m.diameter_hops.is_finite()) {
    long long sum = 0;
    for (const auto& h : ecc) sum += h.value();
    m.avg_max_hops = static_cast<double>(sum) / static_cast<double>(ecc.size());
  }
  return m;
}

/// Diameter, mean eccentricity, edge count and degrees; stability only when
/// per-candidate stability flags are supplied and the topology is nonempty.
inline TopologyMetrics evaluate_topology(const Topology& topology, const std::vector<bool>* stable_flags = nullptr) {
  auto m = evaluate_adjacency(topology.adjacency());
  if (stable_flags != nullptr && !topology.empty()) m.stability_fraction = stability_fraction(topology, *stable_flags);
  return m;
}

}  // namespace isltopo
