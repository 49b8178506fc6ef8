#pragma once

// Baseline iterative local search over a candidate edge set: greedy
// degree-balanced construction with far/near stratified neighbour choice, then
// alternating repair and random link replacement, accepting a candidate only
// when it strictly improves (diameter, mean eccentricity, stability) in
// lexicographic order.

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "isltopo/error.hpp"
#include "isltopo/graph.hpp"
#include "isltopo/metrics.hpp"

namespace isltopo {

using Rng = std::mt19937_64;

struct HeuristicConfig {
  int iterations = 300;         ///< n
  int repair_interval = 15;     ///< K
  int perturbation_size = 20;   ///< m
  int degree_budget = 4;        ///< D
  int init_passes = 3;
  bool stability_tiebreak = true;  ///< clause (c); meaningful in the snapshot variant

  void validate() const {
    if (iterations < 0) throw ConfigError("iterations", "must be >= 0");
    if (repair_interval < 1) throw ConfigError("repair_interval", "must be >= 1");
    if (perturbation_size < 0) throw ConfigError("perturbation_size", "must be >= 0");
    if (degree_budget < 1) throw ConfigError("degree_budget", "must be >= 1");
    if (init_passes < 1) throw ConfigError("init_passes", "must be >= 1");
  }
};

/// Mutable selection with per-node degrees, used while searching.
class LinkSet {
 public:
  explicit LinkSet(CandidateEdgeSetPtr candidates, const FixMask* fix = nullptr)
      : candidates_(std::move(candidates)),
        fix_(fix),
        in_(static_cast<std::size_t>(candidates_->n_edges()), false),
        deg_(static_cast<std::size_t>(candidates_->n_nodes()), 0) {
    if (fix_ && static_cast<int>(fix_->size()) != candidates_->n_edges())
      throw ArgumentError("fix mask length does not match the candidate set");
  }

  LinkSet(const Topology& t, const FixMask* fix = nullptr) : LinkSet(t.candidates_ptr(), fix) {
    for (int k : t.selected()) add(k);
  }

  const CandidateEdgeSet& candidates() const { return *candidates_; }
  int degree(int node) const { return deg_[node]; }
  bool contains(int k) const { return in_[k]; }
  int n_nodes() const { return candidates_->n_nodes(); }

  void add(int k) {
    if (in_[k]) return;
    in_[k] = true;
    ++deg_[candidates_->edge(k).u];
    ++deg_[candidates_->edge(k).v];
  }
  void remove(int k) {
    if (!in_[k]) return;
    in_[k] = false;
    --deg_[candidates_->edge(k).u];
    --deg_[candidates_->edge(k).v];
  }

  bool pinned(int k) const { return fix_ && (*fix_)[k] == EdgeFix::one; }
  bool banned(int k) const { return fix_ && (*fix_)[k] == EdgeFix::zero; }

  /// Adds k only if both endpoints have spare capacity and k is absent.
  bool try_add(int k, int budget) {
    const auto& e = candidates_->edge(k);
    if (in_[k] || banned(k) || deg_[e.u] >= budget || deg_[e.v] >= budget) return false;
    add(k);
    return true;
  }

  /// Selected links at `node` that may be removed.
  std::vector<int> selected_at(int node) const {
    std::vector<int> out;
    for (int k : candidates_->incident(node))
      if (in_[k] && !pinned(k)) out.push_back(k);
    return out;
  }

  Adjacency adjacency() const {
    Adjacency adj(static_cast<std::size_t>(n_nodes()));
    for (const auto& e : candidates_->edges())
      if (in_[e.index]) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
      }
    return adj;
  }

  Topology topology() const {
    std::vector<int> sel;
    for (int k = 0; k < candidates_->n_edges(); ++k)
      if (in_[k]) sel.push_back(k);
    return Topology(candidates_, std::move(sel));
  }

 private:
  CandidateEdgeSetPtr candidates_;
  const FixMask* fix_ = nullptr;
  std::vector<bool> in_;
  std::vector<int> deg_;
};

/// Greedy degree-balanced construction. Each pass visits unsaturated nodes by
/// residual capacity (most spare ports first); a node's open candidates are
/// sorted by distance, split at the median (the middle one goes far), each
/// half shuffled, and the far half tried before the near half.
inline Topology initial_topology(const CandidateEdgeSetPtr& edges, int budget, Rng& rng, int init_passes = 3,
                                 const FixMask* fix = nullptr) {
  if (!edges) throw ArgumentError("null candidate set");
  LinkSet links(edges, fix);
  for (int k = 0; k < edges->n_edges(); ++k)
    if (links.pinned(k)) links.add(k);
  const int n = edges->n_nodes();
  for (int pass = 0; pass < init_passes; ++pass) {
    std::vector<int> deficient;
    for (int v = 0; v < n; ++v)
      if (links.degree(v) < budget) deficient.push_back(v);
    std::stable_sort(deficient.begin(), deficient.end(),
                     [&](int a, int b) { return budget - links.degree(a) > budget - links.degree(b); });
    bool added = false;
    for (int u : deficient) {
      if (links.degree(u) >= budget) continue;
      std::vector<int> cands;
      for (int k : edges->incident(u))
        if (!links.contains(k) && !links.banned(k) && links.degree(edges->edge(k).other(u)) < budget)
          cands.push_back(k);
      std::stable_sort(cands.begin(), cands.end(),
                       [&](int a, int b) { return edges->edge(a).distance_km < edges->edge(b).distance_km; });
      const auto half = static_cast<std::ptrdiff_t>(cands.size() / 2);
      std::vector<int> near(cands.begin(), cands.begin() + half);
      std::vector<int> far(cands.begin() + half, cands.end());
      std::shuffle(far.begin(), far.end(), rng);
      std::shuffle(near.begin(), near.end(), rng);
      for (const auto* group : {&far, &near})
        for (int k : *group) {
          if (links.degree(u) >= budget) break;
          added |= links.try_add(k, budget);
        }
    }
    if (!added) break;
  }
  return links.topology();
}

namespace detail {

inline void repair_links(LinkSet& links, int budget, Rng& rng) {
  const auto& edges = links.candidates();
  std::vector<int> deficient;
  for (int v = 0; v < links.n_nodes(); ++v)
    if (links.degree(v) < budget) deficient.push_back(v);
  for (int u : deficient) {
    if (links.degree(u) >= budget) continue;
    std::vector<int> cands;
    for (int k : edges.incident(u))
      if (!links.contains(k) && !links.banned(k) && links.degree(edges.edge(k).other(u)) < budget)
        cands.push_back(k);
    std::shuffle(cands.begin(), cands.end(), rng);
    for (int k : cands) {
      if (links.degree(u) >= budget) break;
      links.try_add(k, budget);
    }
  }
}

inline void replace_links(LinkSet& links, int budget, int m, Rng& rng) {
  const auto& edges = links.candidates();
  const int n = links.n_nodes();
  if (m > n) throw ArgumentError("perturbation size exceeds satellite count");
  std::vector<int> nodes(static_cast<std::size_t>(n));
  std::iota(nodes.begin(), nodes.end(), 0);
  for (int i = 0; i < m; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(nodes[i], nodes[pick(rng)]);
  }
  for (int i = 0; i < m; ++i) {
    const int u = nodes[i];
    const auto mine = links.selected_at(u);
    if (mine.empty()) continue;
    const int removed = mine[std::uniform_int_distribution<std::size_t>(0, mine.size() - 1)(rng)];
    const int old_peer = edges.edge(removed).other(u);
    links.remove(removed);
    std::vector<int> cands;
    for (int k : edges.incident(u)) {
      const int w = edges.edge(k).other(u);
      if (!links.contains(k) && !links.banned(k) && w != old_peer && links.degree(w) < budget) cands.push_back(k);
    }
    if (cands.empty()) continue;
    links.try_add(cands[std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(rng)], budget);
  }
}

}  // namespace detail

/// Tops up every under-full node with shuffled open candidates; never exceeds D.
inline Topology repair(const Topology& topology, int budget, Rng& rng) {
  LinkSet links(topology);
  detail::repair_links(links, budget, rng);
  return links.topology();
}

/// For m random satellites with at least one link: drop one random link, then
/// try one random open candidate other than the dropped peer.
inline Topology random_replacement(const Topology& topology, int budget, int m, Rng& rng) {
  LinkSet links(topology);
  detail::replace_links(links, budget, m, rng);
  return links.topology();
}

namespace detail {

inline int compare_avg(const std::optional<double>& a, const std::optional<double>& b) {
  if (!a && !b) return 0;
  if (!a) return 1;
  if (!b) return -1;
  return *a < *b ? -1 : (*a > *b ? 1 : 0);
}

}  // namespace detail

/// Strict lexicographic improvement: smaller diameter, else smaller mean
/// eccentricity, else (when enabled) larger stability fraction.
inline bool better(const TopologyMetrics& candidate, const TopologyMetrics& incumbent, bool use_stability = true) {
  if (candidate.diameter_hops != incumbent.diameter_hops) return candidate.diameter_hops < incumbent.diameter_hops;
  const int avg = detail::compare_avg(candidate.avg_max_hops, incumbent.avg_max_hops);
  if (avg != 0) return avg < 0;
  if (!use_stability || !candidate.stability_fraction || !incumbent.stability_fraction) return false;
  return *candidate.stability_fraction > *incumbent.stability_fraction;
}

struct Incumbent {
  Topology topology;
  TopologyMetrics metrics;
  int accepted = 0;  ///< number of accepted improvements
  std::vector<Hops> diameter_history;  ///< incumbent diameter after each acceptance
};

/// Iterative link optimization. `stable_flags` (per candidate edge) supplies
/// the stability fraction; without it clause (c) never fires. Edges pinned by
/// `fix` are always kept (one) or never used (zero).
inline Incumbent run_heuristic(const CandidateEdgeSetPtr& edges, const HeuristicConfig& cfg, Rng& rng,
                               const std::vector<bool>* stable_flags = nullptr, const FixMask* fix = nullptr) {
  cfg.validate();
  if (!edges) throw ArgumentError("null candidate set");
  if (cfg.perturbation_size > edges->n_nodes()) throw ConfigError("perturbation_size", "exceeds satellite count");
  const int budget = cfg.degree_budget;

  auto stability_of = [&](const LinkSet& links) -> std::optional<double> {
    if (stable_flags == nullptr) return std::nullopt;
    int total = 0, ok = 0;
    for (int k = 0; k < edges->n_edges(); ++k)
      if (links.contains(k)) {
        ++total;
        ok += (*stable_flags)[k] ? 1 : 0;
      }
    if (total == 0) return std::nullopt;
    return static_cast<double>(ok) / total;
  };

  LinkSet best(initial_topology(edges, budget, rng, cfg.init_passes, fix), fix);
  TopologyMetrics best_metrics = evaluate_adjacency(best.adjacency());
  best_metrics.stability_fraction = stability_of(best);
  Incumbent out;
  out.diameter_history.push_back(best_metrics.diameter_hops);

  for (int i = 1; i <= cfg.iterations; ++i) {
    LinkSet trial = best;
    if (i % cfg.repair_interval == 0) detail::repair_links(trial, budget, rng);
    else detail::replace_links(trial, budget, cfg.perturbation_size, rng);
    TopologyMetrics m = evaluate_adjacency(trial.adjacency());
    // Stability only matters once diameter and mean eccentricity tie.
    const bool tie = m.diameter_hops == best_metrics.diameter_hops &&
                     detail::compare_avg(m.avg_max_hops, best_metrics.avg_max_hops) == 0;
    if (tie && cfg.stability_tiebreak) m.stability_fraction = stability_of(trial);
    if (better(m, best_metrics, cfg.stability_tiebreak)) {
      if (!m.stability_fraction) m.stability_fraction = stability_of(trial);
      best = std::move(trial);
      best_metrics = std::move(m);
      ++out.accepted;
      out.diameter_history.push_back(best_metrics.diameter_hops);
    }
  }
  out.topology = best.topology();
  out.metrics = best_metrics;
  return out;
}

}  // namespace isltopo
