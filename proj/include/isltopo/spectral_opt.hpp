#pragma once

// Stage 1: maximize the algebraic connectivity lambda_2(L(x)) over x in
// [0,1]^M under a quadratic degree penalty, by projected gradient ascent with
// heavy-ball momentum, a quadratic penalty ramp and a decaying step size.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "isltopo/eigensolver.hpp"
#include "isltopo/error.hpp"
#include "isltopo/graph.hpp"
#include "isltopo/laplacian.hpp"

namespace isltopo {

struct PgaConfig {
  int t_max = 20000;
  double rho_min = 0.001;
  double rho_max = 30.0;
  double eta0 = 2.0;
  double alpha = 0.002;
  double momentum = 0.8;
  double cluster_rel = 0.05;
  double cluster_abs = 1e-4;
  int degree_budget = 4;

  int trace_stride = 100;
  int min_pairs = 6;  ///< eigenpairs requested per step (including the trivial one)
  double warm_background = 0.0;
  bool plateau_stop = false;
  int plateau_window = 500;
  double plateau_tol = 1e-9;
  EigenOptions eigen;

  void validate() const {
    if (t_max < 1) throw ConfigError("t_max", "must be >= 1");
    if (!(rho_min >= 0.0 && rho_min <= rho_max)) throw ConfigError("rho_min", "need 0 <= rho_min <= rho_max");
    if (!(eta0 > 0.0)) throw ConfigError("eta0", "must be > 0");
    if (!(alpha >= 0.0)) throw ConfigError("alpha", "must be >= 0");
    if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("momentum", "must lie in [0, 1)");
    if (degree_budget < 1) throw ConfigError("degree_budget", "must be >= 1");
    if (!(cluster_rel >= 0.0) || !(cluster_abs > 0.0)) throw ConfigError("cluster_abs", "cluster tolerance must be positive");
    if (trace_stride < 1) throw ConfigError("trace_stride", "must be >= 1");
    if (min_pairs < 2) throw ConfigError("min_pairs", "must be >= 2");
    if (!(warm_background >= 0.0 && warm_background <= 1.0)) throw ConfigError("warm_background", "must lie in [0, 1]");
  }
};

// ---------------------------------------------------------------------------
// Penalty

inline double penalty(const CandidateEdgeSet& edges, const StrengthVector& x, double budget) {
  const Eigen::VectorXd s = node_strengths(edges, x);
  double phi = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double g = std::max(0.0, s[i] - budget);
    phi += g * g;
  }
  return phi;
}

/// d(Phi)/d(x_uv) = 2 max(0, s_u - D) + 2 max(0, s_v - D).
inline Eigen::VectorXd penalty_gradient(const CandidateEdgeSet& edges, const StrengthVector& x, double budget) {
  const Eigen::VectorXd s = node_strengths(edges, x);
  Eigen::VectorXd grad(edges.n_edges());
  for (const auto& e : edges.edges())
    grad[e.index] = 2.0 * std::max(0.0, s[e.u] - budget) + 2.0 * std::max(0.0, s[e.v] - budget);
  return grad;
}

inline double max_violation(const CandidateEdgeSet& edges, const StrengthVector& x, double budget) {
  const Eigen::VectorXd s = node_strengths(edges, x);
  return s.size() == 0 ? 0.0 : std::max(0.0, s.maxCoeff() - budget);
}

// ---------------------------------------------------------------------------
// Spectral subgradient

inline double cluster_epsilon(double lambda2, double rel = 0.05, double abs = 1e-4) {
  return rel * std::abs(lambda2) + abs;
}

inline double cluster_epsilon(double lambda2, const PgaConfig& cfg) {
  return cluster_epsilon(lambda2, cfg.cluster_rel, cfg.cluster_abs);
}

/// Indices k >= 1 (0-based; index 0 is the trivial eigenvalue) with
/// |lambda_k - lambda_1| < eps. Always contains index 1.
inline std::vector<int> active_cluster(const Eigen::VectorXd& eigenvalues, double eps) {
  if (eigenvalues.size() < 2) throw ArgumentError("active cluster needs at least two eigenvalues");
  std::vector<int> k{1};
  for (int i = 2; i < eigenvalues.size(); ++i)
    if (std::abs(eigenvalues[i] - eigenvalues[1]) < eps) k.push_back(i);
  return k;
}

/// Cluster-averaged gradient of lambda_2: entry (i,j) is
/// (1/|K|) sum_{k in K} (v_i^(k) - v_j^(k))^2.
inline Eigen::VectorXd spectral_subgradient(const CandidateEdgeSet& edges, const EigenResult& eig,
                                            const std::vector<int>& cluster) {
  if (cluster.empty()) throw ArgumentError("empty eigenvalue cluster");
  for (int k : cluster)
    if (k < 0 || k >= eig.vectors.cols()) throw ArgumentError("cluster index " + std::to_string(k) + " has no eigenvector");
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(edges.n_edges());
  for (int k : cluster) {
    const auto v = eig.vectors.col(k);
    for (const auto& e : edges.edges()) {
      const double d = v[e.u] - v[e.v];
      grad[e.index] += d * d;
    }
  }
  return grad / static_cast<double>(cluster.size());
}

// ---------------------------------------------------------------------------
// Schedules and projection

inline double rho_at(int t, const PgaConfig& cfg) {
  const double frac = static_cast<double>(t) / cfg.t_max;
  return cfg.rho_min + (cfg.rho_max - cfg.rho_min) * frac * frac;
}

inline double eta_at(int t, const PgaConfig& cfg) { return cfg.eta0 / (1.0 + cfg.alpha * t); }

inline StrengthVector project_unit_box(const StrengthVector& x) { return x.cwiseMax(0.0).cwiseMin(1.0); }

// ---------------------------------------------------------------------------
// Fixed edges

struct IntraplaneMask {
  FixMask mask;
  int inter_budget = 0;   ///< D - 2 free terminals per satellite
  std::vector<int> fixed_edges;
};

/// Pins every satellite's two ring-neighbour links (s-1, s+1 in its plane) to
/// strength 1. Other intra-plane candidates are pinned to 0, so only
/// inter-plane edges remain decision variables.
inline IntraplaneMask fixed_intraplane_mask(const CandidateEdgeSet& edges, int degree_budget) {
  const int ns = edges.sats_per_plane();
  if (ns < 3) throw ConfigError("fixed_intraplane", "needs at least 3 satellites per plane");
  if (degree_budget < 2) throw ConfigError("degree_budget", "fixed intra-plane links need D >= 2");
  IntraplaneMask out;
  out.mask.assign(static_cast<std::size_t>(edges.n_edges()), EdgeFix::free);
  out.inter_budget = degree_budget - 2;
  for (int node = 0; node < edges.n_nodes(); ++node) {
    const int plane = node / ns, idx = node % ns;
    const int next = plane * ns + (idx + 1) % ns;
    const int k = edges.find(node, next);
    if (k < 0)
      throw ConfigError("fixed_intraplane", "satellite (" + std::to_string(plane) + "," + std::to_string(idx) +
                                                ") lacks an intra-plane ring link");
    out.mask[k] = EdgeFix::one;
  }
  for (const auto& e : edges.edges()) {
    if (out.mask[e.index] == EdgeFix::one) out.fixed_edges.push_back(e.index);
    else if (e.kind == EdgeKind::intra_plane) out.mask[e.index] = EdgeFix::zero;
  }
  return out;
}

inline void apply_fix(StrengthVector& x, const FixMask* mask) {
  if (mask == nullptr) return;
  for (std::size_t k = 0; k < mask->size(); ++k) {
    if ((*mask)[k] == EdgeFix::one) x[static_cast<Eigen::Index>(k)] = 1.0;
    else if ((*mask)[k] == EdgeFix::zero) x[static_cast<Eigen::Index>(k)] = 0.0;
  }
}

/// 1.0 on selected edges, `background` elsewhere.
inline StrengthVector warm_start(const Topology& topology, const CandidateEdgeSet& edges, double background = 0.0) {
  if (&topology.candidates() != &edges && topology.candidates().n_edges() != edges.n_edges())
    throw ArgumentError("topology is not drawn from this candidate set");
  StrengthVector x = StrengthVector::Constant(edges.n_edges(), background);
  for (int k : topology.selected()) x[k] = 1.0;
  return x;
}

// ---------------------------------------------------------------------------
// Iteration

struct PgaState {
  StrengthVector x;
  Eigen::VectorXd m;
  int t = 0;
  Eigen::MatrixXd eigvec_cache;  ///< nontrivial eigenvectors of the previous step
  int pairs = 0;                 ///< eigenpairs requested last step

  static PgaState start(const StrengthVector& x0) {
    PgaState s;
    s.x = x0;
    s.m = Eigen::VectorXd::Zero(x0.size());
    return s;
  }
};

struct PgaRecord {
  int t = 0;
  double lambda2 = 0.0;
  double penalty = 0.0;
  double objective = 0.0;
  double max_violation = 0.0;
  double rho = 0.0;
  double eta = 0.0;
  int cluster_size = 0;
};

using PgaTrace = std::vector<PgaRecord>;

/// Eigenpairs with enough headroom to hold the whole lambda_2 cluster.
struct ClusterEigen {
  EigenResult eig;
  std::vector<int> cluster;
  double lambda2 = 0.0;
};

inline ClusterEigen cluster_eigenpairs(const SparseMatrix& l, const PgaConfig& cfg, PgaState& state) {
  const int n = static_cast<int>(l.rows());
  if (n < 2) throw ArgumentError("optimization needs at least two nodes");
  int q = std::min(n, std::max(cfg.min_pairs, state.pairs));
  for (;;) {
    const Eigen::MatrixXd* warm = state.eigvec_cache.size() > 0 ? &state.eigvec_cache : nullptr;
    ClusterEigen out;
    out.eig = smallest_eigenpairs(l, q, cfg.eigen, warm);
    out.lambda2 = out.eig.values[1];
    out.cluster = active_cluster(out.eig.values, cluster_epsilon(out.lambda2, cfg));
    state.eigvec_cache = out.eig.block.cols() > 0 ? out.eig.block
                                                  : Eigen::MatrixXd(out.eig.vectors.rightCols(out.eig.vectors.cols() - 1));
    const bool saturated = out.cluster.back() == q - 1 && q < n;
    if (!saturated) {
      // Shrink back towards the minimum once the cluster is comfortably inside.
      state.pairs = std::max(cfg.min_pairs, static_cast<int>(out.cluster.size()) + 3);
      return out;
    }
    q = std::min(n, q + 4);
    state.pairs = q;
  }
}

inline PgaRecord make_record(const CandidateEdgeSet& edges, const PgaConfig& cfg, const PgaState& s,
                             const ClusterEigen& ce) {
  PgaRecord r;
  r.t = s.t;
  r.lambda2 = ce.lambda2;
  r.penalty = penalty(edges, s.x, cfg.degree_budget);
  r.rho = rho_at(s.t, cfg);
  r.eta = eta_at(s.t, cfg);
  r.objective = r.lambda2 - r.rho * r.penalty;
  r.max_violation = max_violation(edges, s.x, cfg.degree_budget);
  r.cluster_size = static_cast<int>(ce.cluster.size());
  return r;
}

namespace detail {

inline PgaState pga_update(const PgaState& state, const CandidateEdgeSet& edges, const PgaConfig& cfg,
                           const FixMask* fixed, const ClusterEigen& ce) {
  PgaState next = state;
  const Eigen::VectorXd g = spectral_subgradient(edges, ce.eig, ce.cluster) -
                            rho_at(state.t, cfg) * penalty_gradient(edges, state.x, cfg.degree_budget);
  next.m = cfg.momentum * state.m + eta_at(state.t, cfg) * g;
  if (fixed != nullptr)
    for (std::size_t k = 0; k < fixed->size(); ++k)
      if ((*fixed)[k] != EdgeFix::free) next.m[static_cast<Eigen::Index>(k)] = 0.0;
  next.x = project_unit_box(state.x + next.m);
  apply_fix(next.x, fixed);
  next.t = state.t + 1;
  return next;
}

}  // namespace detail

/// One heavy-ball projected ascent step:
///   g = grad(lambda_2) - rho_t grad(Phi);  m' = mu m + eta_t g;  x' = clamp(x + m').
/// Fixed entries keep their pinned value and zero momentum.
inline PgaState pga_step(const PgaState& state, const CandidateEdgeSet& edges, const PgaConfig& cfg,
                         const FixMask* fixed = nullptr) {
  PgaState work = state;
  const auto ce = cluster_eigenpairs(laplacian(edges, state.x), cfg, work);
  return detail::pga_update(work, edges, cfg, fixed, ce);
}

struct PgaResult {
  StrengthVector x;
  PgaTrace trace;
  double lambda2 = 0.0;
  int iterations = 0;
};

class PgaFailure : public NumericalError {
 public:
  PgaFailure(const NumericalError& cause, PgaTrace trace)
      : NumericalError(std::string("PGA eigensolve failed: ") + cause.what(), cause.best_residual()),
        trace_(std::move(trace)) {}
  const PgaTrace& trace() const { return trace_; }

 private:
  PgaTrace trace_;
};

/// Runs t_max steps (or until the optional plateau stop) from x0.
inline PgaResult run_pga(const CandidateEdgeSet& edges, const PgaConfig& cfg, const StrengthVector& x0,
                         const FixMask* fixed = nullptr) {
  cfg.validate();
  check_strength_length(edges, x0);
  if ((x0.array() < 0.0).any() || (x0.array() > 1.0).any()) throw ArgumentError("x0 must lie in [0,1]^M");
  if (fixed != nullptr && static_cast<int>(fixed->size()) != edges.n_edges())
    throw ArgumentError("fixed mask length differs from edge count");

  PgaState state = PgaState::start(x0);
  apply_fix(state.x, fixed);
  PgaResult result;
  std::vector<double> objective_history;
  try {
    for (;;) {
      const auto ce = cluster_eigenpairs(laplacian(edges, state.x), cfg, state);
      const bool finished = state.t >= cfg.t_max;
      if (state.t % cfg.trace_stride == 0 || (finished && cfg.plateau_stop))
        result.trace.push_back(make_record(edges, cfg, state, ce));
      if (finished) {
        result.lambda2 = ce.lambda2;
        break;
      }
      if (cfg.plateau_stop) {
        const double j = ce.lambda2 - rho_at(state.t, cfg) * penalty(edges, state.x, cfg.degree_budget);
        objective_history.push_back(j);
        const auto w = static_cast<std::size_t>(cfg.plateau_window);
        if (objective_history.size() > w &&
            std::abs(j - objective_history[objective_history.size() - 1 - w]) < cfg.plateau_tol) {
          result.lambda2 = ce.lambda2;
          result.trace.push_back(make_record(edges, cfg, state, ce));
          break;
        }
      }
      state = detail::pga_update(state, edges, cfg, fixed, ce);
    }
  } catch (const NumericalError& e) {
    throw PgaFailure(e, std::move(result.trace));
  }
  result.x = state.x;
  result.iterations = state.t;
  return result;
}

}  // namespace isltopo
