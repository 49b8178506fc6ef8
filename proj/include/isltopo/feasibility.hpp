#pragma once

// Geometric link feasibility and candidate edge sets for the snapshot and
// viability-constrained models.

#include <cmath>
#include <string>
#include <vector>

#include "isltopo/error.hpp"
#include "isltopo/graph.hpp"
#include "isltopo/orbit.hpp"

namespace isltopo {

enum class FeasibilityModel { snapshot, viability };

inline const char* to_string(FeasibilityModel m) { return m == FeasibilityModel::snapshot ? "snapshot" : "viability"; }

inline FeasibilityModel parse_model(const std::string& s) {
  if (s == "snapshot") return FeasibilityModel::snapshot;
  if (s == "viability") return FeasibilityModel::viability;
  throw ConfigError("model", "expected snapshot or viability, got '" + s + "'");
}

struct FeasibilityConfig {
  double d_max_km = 3500.0;
  int viability_samples = 64;
  FeasibilityModel model = FeasibilityModel::snapshot;

  void validate() const {
    if (!(d_max_km > 0.0)) throw ConfigError("d_max_km", "must be > 0");
    if (viability_samples < 2) throw ConfigError("viability_samples", "must be >= 2");
  }
};

/// Range check (non-strict) and Earth line-of-sight check (strict): the
/// perpendicular distance from Earth's centre to the line through both
/// satellites must exceed R_E. Coincident positions are infeasible.
inline bool link_feasible_at(const Vec3& pos_u, const Vec3& pos_v, double d_max_km, double earth_radius_km) {
  const double d = (pos_u - pos_v).norm();
  if (!(d > 0.0)) return false;
  if (d > d_max_km) return false;
  return pos_u.cross(pos_v).norm() / d > earth_radius_km;
}

/// Relabels edge kinds from the plane index of the endpoints.
inline CandidateEdgeSet classify_edges(const CandidateEdgeSet& edges) {
  // The constructor derives kinds from plane membership.
  return CandidateEdgeSet(edges.n_nodes(), edges.sats_per_plane(), edges.edges());
}

namespace detail {

inline CandidateEdgeSet feasible_pairs_at(const Constellation& c, double t0_s, double d_max_km) {
  const auto pos = c.positions_at(t0_s);
  const double re = c.config().earth_radius_km;
  std::vector<CandidateEdge> edges;
  const int n = c.n_sats();
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (link_feasible_at(pos[u], pos[v], d_max_km, re))
        edges.push_back({0, u, v, (pos[u] - pos[v]).norm(), EdgeKind::inter_plane});
  return CandidateEdgeSet(n, c.sats_per_plane(), std::move(edges));
}

}  // namespace detail

/// Per-edge flag: feasible at every grid time over one orbital period from t0.
inline std::vector<bool> edge_stability_flags(const CandidateEdgeSet& edges, const Constellation& c, double t0_s,
                                              int n_samples, double d_max_km) {
  const auto times = sample_times(t0_s, c.period_s(), n_samples);
  const double re = c.config().earth_radius_km;
  std::vector<bool> stable(static_cast<std::size_t>(edges.n_edges()), true);
  for (double t : times) {
    const auto pos = c.positions_at(t);
    for (const auto& e : edges.edges())
      if (stable[e.index] && !link_feasible_at(pos[e.u], pos[e.v], d_max_km, re)) stable[e.index] = false;
  }
  return stable;
}

inline std::vector<bool> edge_stability_flags(const CandidateEdgeSet& edges, const Constellation& c, double t0_s,
                                              const FeasibilityConfig& cfg) {
  cfg.validate();
  return edge_stability_flags(edges, c, t0_s, cfg.viability_samples, cfg.d_max_km);
}

/// All pairs feasible at t0, ordered by (u, v).
inline CandidateEdgeSet snapshot_candidates(const Constellation& c, double t0_s, const FeasibilityConfig& cfg) {
  cfg.validate();
  if (cfg.model != FeasibilityModel::snapshot) throw ArgumentError("snapshot_candidates requires the snapshot model");
  return detail::feasible_pairs_at(c, t0_s, cfg.d_max_km);
}

/// Pairs feasible at every grid time over [t0, t0 + T]. Since t0 is on the
/// grid, the result is a subset of the snapshot set at t0.
inline CandidateEdgeSet viable_candidates(const Constellation& c, double t0_s, const FeasibilityConfig& cfg) {
  cfg.validate();
  if (cfg.model != FeasibilityModel::viability) throw ArgumentError("viable_candidates requires the viability model");
  const auto snap = detail::feasible_pairs_at(c, t0_s, cfg.d_max_km);
  const auto stable = edge_stability_flags(snap, c, t0_s, cfg);
  std::vector<CandidateEdge> kept;
  for (const auto& e : snap.edges())
    if (stable[e.index]) kept.push_back(e);
  return CandidateEdgeSet(snap.n_nodes(), snap.sats_per_plane(), std::move(kept));
}

inline CandidateEdgeSet build_candidates(const Constellation& c, double t0_s, const FeasibilityConfig& cfg) {
  return cfg.model == FeasibilityModel::snapshot ? snapshot_candidates(c, t0_s, cfg) : viable_candidates(c, t0_s, cfg);
}

/// Fraction of selected edges flagged stable.
inline double stability_fraction(const Topology& topology, const std::vector<bool>& stable_flags) {
  if (topology.empty()) throw UndefinedMetricError("stability fraction of an empty topology");
  int ok = 0;
  for (int k : topology.selected()) ok += stable_flags.at(static_cast<std::size_t>(k)) ? 1 : 0;
  return static_cast<double>(ok) / topology.n_edges();
}

/// Fraction of selected edges that stay feasible over a full orbital period from t0.
inline double stability_fraction(const Topology& topology, const Constellation& c, double t0_s,
                                 const FeasibilityConfig& cfg) {
  if (topology.empty()) throw UndefinedMetricError("stability fraction of an empty topology");
  return stability_fraction(topology, edge_stability_flags(topology.candidates(), c, t0_s, cfg));
}

}  // namespace isltopo
