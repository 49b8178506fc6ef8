#pragma once

// Stage 2: choose a degree-feasible edge subset of maximum total strength,
//   maximize sum_k x*_k y_k  s.t.  deg(v) <= D,  y in {0,1}^M.
// This is a maximum-weight simple b-matching. The exact route reduces it to a
// maximum-weight matching: node v becomes b_v copies and every edge (u,v)
// becomes a path copy(u) - e_u - e_v - copy(v) with all three weights equal
// to w_e, so a gadget contributes 2 w_e when the edge is taken and w_e
// otherwise.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "isltopo/error.hpp"
#include "isltopo/graph.hpp"
#include "isltopo/laplacian.hpp"
#include "isltopo/matching.hpp"

namespace isltopo {

enum class RoundingMethod { automatic, exact, greedy };

struct RoundingOptions {
  RoundingMethod method = RoundingMethod::automatic;
  /// `automatic` switches to the greedy route above this many decision edges.
  int exact_limit = 20000;
};

struct DegreeReport {
  bool feasible = true;
  std::vector<int> violators;  ///< nodes with degree > D
};

inline DegreeReport verify_degree_feasible(const Topology& topology, int budget) {
  DegreeReport r;
  const auto deg = topology.degrees();
  for (int v = 0; v < static_cast<int>(deg.size()); ++v)
    if (deg[v] > budget) r.violators.push_back(v);
  r.feasible = r.violators.empty();
  return r;
}

/// Sum of x*_k over the selection, accumulated in index order.
inline double rounding_objective(const StrengthVector& x, const std::vector<int>& selected) {
  std::vector<int> s = selected;
  std::sort(s.begin(), s.end());
  double total = 0.0;
  for (int k : s) total += x[k];
  return total;
}

namespace detail {

using wide_int = __int128;

struct RoundingProblem {
  std::vector<int> capacity;  ///< remaining budget per node after fixed edges
  std::vector<int> decision;  ///< edge indices that may be chosen, ascending
};

inline RoundingProblem prepare_rounding(const CandidateEdgeSet& edges, const StrengthVector& x, int budget,
                                        const std::vector<int>& fixed) {
  check_strength_length(edges, x);
  if (budget < 0) throw ArgumentError("degree budget must be >= 0");
  RoundingProblem pr;
  pr.capacity.assign(static_cast<std::size_t>(edges.n_nodes()), budget);
  std::vector<bool> is_fixed(static_cast<std::size_t>(edges.n_edges()), false);
  for (int k : fixed) {
    if (k < 0 || k >= edges.n_edges()) throw ArgumentError("fixed edge index out of range");
    if (is_fixed[k]) continue;
    is_fixed[k] = true;
    --pr.capacity[edges.edge(k).u];
    --pr.capacity[edges.edge(k).v];
  }
  for (int v = 0; v < edges.n_nodes(); ++v)
    if (pr.capacity[v] < 0)
      throw InfeasibleError("fixed edges exceed the degree budget at node " + std::to_string(v));
  for (const auto& e : edges.edges())
    if (!is_fixed[e.index] && x[e.index] > 0.0 && pr.capacity[e.u] > 0 && pr.capacity[e.v] > 0)
      pr.decision.push_back(e.index);
  return pr;
}

inline std::vector<int> solve_exact(const CandidateEdgeSet& edges, const StrengthVector& x, const RoundingProblem& pr) {
  const auto m = static_cast<wide_int>(pr.decision.size());
  if (m == 0) return {};
  // Quantize strengths; the index bonus sums to less than one quantum, so it
  // only orders equal-strength solutions (lower indices preferred).
  const wide_int quantum = m * (m + 1) / 2 + 1;
  constexpr double kScale = 1099511627776.0;  // 2^40

  std::vector<int> copy_offset(pr.capacity.size() + 1, 0);
  for (std::size_t v = 0; v < pr.capacity.size(); ++v) copy_offset[v + 1] = copy_offset[v] + pr.capacity[v];
  const int n_copies = copy_offset.back();
  const int n_vertices = n_copies + 2 * static_cast<int>(m);

  std::vector<MatchingEdge<wide_int>> medges;
  for (std::size_t r = 0; r < pr.decision.size(); ++r) {
    const auto& e = edges.edge(pr.decision[r]);
    const auto q = static_cast<wide_int>(std::llround(std::clamp(x[e.index], 0.0, 1.0) * kScale));
    const wide_int w = q * quantum + (m - static_cast<wide_int>(r));
    const int eu = n_copies + 2 * static_cast<int>(r), ev = eu + 1;
    for (int c = copy_offset[e.u]; c < copy_offset[e.u + 1]; ++c) medges.push_back({c, eu, w});
    medges.push_back({eu, ev, w});
    for (int c = copy_offset[e.v]; c < copy_offset[e.v + 1]; ++c) medges.push_back({ev, c, w});
  }
  const auto mate = max_weight_matching(n_vertices, std::move(medges));
  std::vector<int> chosen;
  for (std::size_t r = 0; r < pr.decision.size(); ++r) {
    const int eu = n_copies + 2 * static_cast<int>(r), ev = eu + 1;
    if (mate[eu] >= 0 && mate[eu] < n_copies && mate[ev] >= 0 && mate[ev] < n_copies) chosen.push_back(pr.decision[r]);
  }
  return chosen;
}

/// Greedy by strength, then single-edge swaps while they raise the objective.
inline std::vector<int> solve_greedy(const CandidateEdgeSet& edges, const StrengthVector& x, const RoundingProblem& pr) {
  std::vector<int> order = pr.decision;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return x[a] > x[b]; });
  std::vector<int> cap = pr.capacity;
  std::vector<bool> in(static_cast<std::size_t>(edges.n_edges()), false);
  for (int k : order) {
    const auto& e = edges.edge(k);
    if (cap[e.u] > 0 && cap[e.v] > 0) {
      in[k] = true;
      --cap[e.u];
      --cap[e.v];
    }
  }
  // Weakest selected edge at a saturated node.
  auto weakest = [&](int node) {
    int best = -1;
    for (int k : edges.incident(node))
      if (in[k] && (best < 0 || x[k] < x[best])) best = k;
    return best;
  };
  for (bool improved = true; improved;) {
    improved = false;
    for (int k : order) {
      if (in[k]) continue;
      const auto& e = edges.edge(k);
      // ru and rv differ: the only edge incident to both u and v is k itself.
      const int ru = cap[e.u] > 0 ? -1 : weakest(e.u);
      const int rv = cap[e.v] > 0 ? -1 : weakest(e.v);
      if ((cap[e.u] == 0 && ru < 0) || (cap[e.v] == 0 && rv < 0)) continue;
      const double loss = (ru >= 0 ? x[ru] : 0.0) + (rv >= 0 ? x[rv] : 0.0);
      if (x[k] <= loss) continue;
      for (int r : {ru, rv}) {
        if (r < 0) continue;
        in[r] = false;
        ++cap[edges.edge(r).u];
        ++cap[edges.edge(r).v];
      }
      in[k] = true;
      --cap[e.u];
      --cap[e.v];
      improved = true;
    }
  }
  std::vector<int> chosen;
  for (int k : pr.decision)
    if (in[k]) chosen.push_back(k);
  return chosen;
}

}  // namespace detail

struct RoundingResult {
  Topology topology;
  double objective = 0.0;  ///< total strength of the non-fixed selected edges
  bool exact = true;
};

inline RoundingResult round_topology_detailed(const CandidateEdgeSetPtr& edges, const StrengthVector& x_star,
                                              int budget, const std::vector<int>& fixed_edges = {},
                                              const RoundingOptions& opt = {}) {
  if (!edges) throw ArgumentError("null candidate set");
  if ((x_star.array() < 0.0).any() || (x_star.array() > 1.0).any())
    throw ArgumentError("strengths must lie in [0,1]");
  const auto pr = detail::prepare_rounding(*edges, x_star, budget, fixed_edges);
  const bool exact = opt.method == RoundingMethod::exact ||
                     (opt.method == RoundingMethod::automatic &&
                      static_cast<int>(pr.decision.size()) <= opt.exact_limit);
  auto chosen = exact ? detail::solve_exact(*edges, x_star, pr) : detail::solve_greedy(*edges, x_star, pr);
  RoundingResult out;
  out.objective = rounding_objective(x_star, chosen);
  out.exact = exact;
  chosen.insert(chosen.end(), fixed_edges.begin(), fixed_edges.end());
  out.topology = Topology(edges, std::move(chosen));
  return out;
}

/// Maximum-strength degree-feasible selection containing every fixed edge.
inline Topology round_topology(const CandidateEdgeSetPtr& edges, const StrengthVector& x_star, int budget,
                               const std::vector<int>& fixed_edges = {}, const RoundingOptions& opt = {}) {
  return round_topology_detailed(edges, x_star, budget, fixed_edges, opt).topology;
}

/// Exhaustive oracle: best objective over every subset (M <= 22); ties go to
/// the lexicographically smallest sorted index list.
inline Topology brute_force_round(const CandidateEdgeSetPtr& edges, const StrengthVector& x_star, int budget) {
  if (!edges) throw ArgumentError("null candidate set");
  const int m = edges->n_edges();
  if (m > 22) throw ArgumentError("brute-force rounding refused for M > 22");
  check_strength_length(*edges, x_star);
  std::vector<int> deg(static_cast<std::size_t>(edges->n_nodes()), 0);
  std::vector<int> current, best;
  double best_obj = -1.0;
  // Depth-first over edges in index order, pruning degree violations.
  auto visit = [&](auto&& self, int k) -> void {
    if (k == m) {
      const double obj = rounding_objective(x_star, current);
      if (obj > best_obj || (obj == best_obj && current < best)) {
        best_obj = obj;
        best = current;
      }
      return;
    }
    const auto& e = edges->edge(k);
    if (deg[e.u] < budget && deg[e.v] < budget) {
      ++deg[e.u];
      ++deg[e.v];
      current.push_back(k);
      self(self, k + 1);
      current.pop_back();
      --deg[e.u];
      --deg[e.v];
    }
    self(self, k + 1);
  };
  visit(visit, 0);
  return Topology(edges, best);
}

}  // namespace isltopo
