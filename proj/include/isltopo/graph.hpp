#pragma once

// Candidate link sets and topologies selected from them.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "isltopo/error.hpp"

namespace isltopo {

enum class EdgeKind { intra_plane, inter_plane };

inline const char* to_string(EdgeKind k) { return k == EdgeKind::intra_plane ? "intra" : "inter"; }

struct CandidateEdge {
  int index = 0;  ///< position in the owning edge list
  int u = 0;      ///< flat node ids, u < v
  int v = 0;
  double distance_km = 0.0;  ///< separation at the reference epoch
  EdgeKind kind = EdgeKind::inter_plane;

  int other(int node) const { return node == u ? v : u; }
};

/// The feasible link set F with a per-node incidence index N(i).
///
/// Nodes are flat satellite ids (plane * sats_per_plane + index); for plain
/// graphs without orbital structure use sats_per_plane = n_nodes.
class CandidateEdgeSet {
 public:
  CandidateEdgeSet() = default;

  CandidateEdgeSet(int n_nodes, int sats_per_plane, std::vector<CandidateEdge> edges)
      : n_nodes_(n_nodes), sats_per_plane_(sats_per_plane), edges_(std::move(edges)) {
    if (n_nodes_ < 0) throw ArgumentError("negative node count");
    if (sats_per_plane_ < 1) sats_per_plane_ = std::max(1, n_nodes_);
    incident_.assign(static_cast<std::size_t>(n_nodes_), {});
    std::set<std::pair<int, int>> seen;
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      auto& e = edges_[k];
      if (e.u > e.v) std::swap(e.u, e.v);
      if (e.u == e.v) throw ArgumentError("self-loop in candidate set at node " + std::to_string(e.u));
      if (e.u < 0 || e.v >= n_nodes_) throw ArgumentError("edge endpoint out of range");
      if (!seen.insert({e.u, e.v}).second)
        throw ArgumentError("duplicate edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
      e.index = static_cast<int>(k);
      e.kind = plane_of(e.u) == plane_of(e.v) ? EdgeKind::intra_plane : EdgeKind::inter_plane;
      incident_[e.u].push_back(e.index);
      incident_[e.v].push_back(e.index);
    }
  }

  /// Plain graph on `n_nodes` nodes (single plane, zero distances).
  static CandidateEdgeSet from_pairs(int n_nodes, const std::vector<std::pair<int, int>>& pairs) {
    std::vector<CandidateEdge> edges;
    edges.reserve(pairs.size());
    for (auto [a, b] : pairs) edges.push_back({0, std::min(a, b), std::max(a, b), 0.0, EdgeKind::inter_plane});
    return CandidateEdgeSet(n_nodes, std::max(1, n_nodes), std::move(edges));
  }

  int n_nodes() const { return n_nodes_; }
  int n_edges() const { return static_cast<int>(edges_.size()); }
  int sats_per_plane() const { return sats_per_plane_; }
  int plane_of(int node) const { return node / sats_per_plane_; }

  const std::vector<CandidateEdge>& edges() const { return edges_; }
  const CandidateEdge& edge(int k) const { return edges_.at(static_cast<std::size_t>(k)); }
  const std::vector<int>& incident(int node) const { return incident_.at(static_cast<std::size_t>(node)); }

  /// Edge index for the unordered pair, or -1.
  int find(int a, int b) const {
    if (a < 0 || b < 0 || a >= n_nodes_ || b >= n_nodes_) return -1;
    const auto& inc = incident_[a].size() <= incident_[b].size() ? incident_[a] : incident_[b];
    for (int k : inc) {
      const auto& e = edges_[k];
      if ((e.u == a && e.v == b) || (e.u == b && e.v == a)) return k;
    }
    return -1;
  }

  int count(EdgeKind kind) const {
    return static_cast<int>(std::count_if(edges_.begin(), edges_.end(), [&](const auto& e) { return e.kind == kind; }));
  }

 private:
  int n_nodes_ = 0;
  int sats_per_plane_ = 1;
  std::vector<CandidateEdge> edges_;
  std::vector<std::vector<int>> incident_;
};

/// Per-edge pinning: free decision variable, always selected, or never selected.
enum class EdgeFix : std::uint8_t { free, one, zero };
using FixMask = std::vector<EdgeFix>;

using CandidateEdgeSetPtr = std::shared_ptr<const CandidateEdgeSet>;

/// A discrete selection E of candidate edges (sorted, unique indices).
class Topology {
 public:
  Topology() = default;
  Topology(CandidateEdgeSetPtr candidates, std::vector<int> selected)
      : candidates_(std::move(candidates)), selected_(std::move(selected)) {
    if (!candidates_) throw ArgumentError("topology needs a candidate edge set");
    std::sort(selected_.begin(), selected_.end());
    selected_.erase(std::unique(selected_.begin(), selected_.end()), selected_.end());
    for (int k : selected_)
      if (k < 0 || k >= candidates_->n_edges()) throw ArgumentError("selected edge index out of range");
  }

  const CandidateEdgeSet& candidates() const { return *candidates_; }
  const CandidateEdgeSetPtr& candidates_ptr() const { return candidates_; }
  const std::vector<int>& selected() const { return selected_; }
  int n_nodes() const { return candidates_ ? candidates_->n_nodes() : 0; }
  int n_edges() const { return static_cast<int>(selected_.size()); }
  bool empty() const { return selected_.empty(); }

  std::vector<int> degrees() const {
    std::vector<int> deg(static_cast<std::size_t>(n_nodes()), 0);
    for (int k : selected_) {
      const auto& e = candidates_->edge(k);
      ++deg[e.u];
      ++deg[e.v];
    }
    return deg;
  }

  std::vector<std::vector<int>> adjacency() const {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n_nodes()));
    for (int k : selected_) {
      const auto& e = candidates_->edge(k);
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    return adj;
  }

  /// Node pairs of the selected edges, in selection order.
  std::vector<std::pair<int, int>> edge_pairs() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(selected_.size());
    for (int k : selected_) out.emplace_back(candidates_->edge(k).u, candidates_->edge(k).v);
    return out;
  }

  friend bool operator==(const Topology& a, const Topology& b) {
    return a.candidates_ == b.candidates_ && a.selected_ == b.selected_;
  }

 private:
  CandidateEdgeSetPtr candidates_;
  std::vector<int> selected_;
};

}  // namespace isltopo
