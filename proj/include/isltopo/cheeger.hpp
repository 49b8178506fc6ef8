#pragma once

#include <bit>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "isltopo/error.hpp"
#include "isltopo/graph.hpp"

namespace isltopo {

/// Exact unweighted Cheeger constant by subset enumeration:
/// min over nonempty S with |S| <= N/2 of cut(S) / |S|. Test oracle only.
inline double cheeger_constant_bruteforce(int n_nodes, const std::vector<std::pair<int, int>>& edges) {
  if (n_nodes > 14) throw ArgumentError("cheeger enumeration refused for N > 14");
  if (n_nodes < 2) throw ArgumentError("cheeger constant needs at least two nodes");
  double best = std::numeric_limits<double>::infinity();
  const std::uint32_t full = 1u << n_nodes;
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    const int size = std::popcount(mask);
    if (2 * size > n_nodes) continue;
    int cut = 0;
    for (auto [u, v] : edges) cut += (((mask >> u) ^ (mask >> v)) & 1u) ? 1 : 0;
    best = std::min(best, static_cast<double>(cut) / size);
  }
  return best;
}

inline double cheeger_constant_bruteforce(const Topology& topology) {
  return cheeger_constant_bruteforce(topology.n_nodes(), topology.edge_pairs());
}

}  // namespace isltopo
