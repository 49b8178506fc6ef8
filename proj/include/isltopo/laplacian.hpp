#pragma once

// Incidence and weighted Laplacian construction over a candidate edge set.

#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "isltopo/error.hpp"
#include "isltopo/graph.hpp"

namespace isltopo {

/// Edge strengths x_k in [0,1], aligned with candidate edge indices.
using StrengthVector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Signed N x M incidence matrix: column k has +1 at row u and -1 at row v (u < v).
inline SparseMatrix incidence_matrix(const CandidateEdgeSet& edges) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(2 * static_cast<std::size_t>(edges.n_edges()));
  for (const auto& e : edges.edges()) {
    trip.emplace_back(e.u, e.index, 1.0);
    trip.emplace_back(e.v, e.index, -1.0);
  }
  SparseMatrix b(edges.n_nodes(), edges.n_edges());
  b.setFromTriplets(trip.begin(), trip.end());
  return b;
}

inline void check_strength_length(const CandidateEdgeSet& edges, const StrengthVector& x) {
  if (x.size() != edges.n_edges())
    throw ArgumentError("strength vector length " + std::to_string(x.size()) + " != edge count " +
                        std::to_string(edges.n_edges()));
}

/// Weighted Laplacian built entry by entry: L_ii = sum of incident strengths,
/// L_uv = -x_uv.
inline SparseMatrix laplacian(const CandidateEdgeSet& edges, const StrengthVector& x) {
  check_strength_length(edges, x);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(4 * static_cast<std::size_t>(edges.n_edges()) + static_cast<std::size_t>(edges.n_nodes()));
  std::vector<double> diag(static_cast<std::size_t>(edges.n_nodes()), 0.0);
  for (const auto& e : edges.edges()) {
    const double w = x[e.index];
    diag[e.u] += w;
    diag[e.v] += w;
    trip.emplace_back(e.u, e.v, -w);
    trip.emplace_back(e.v, e.u, -w);
  }
  for (int i = 0; i < edges.n_nodes(); ++i) trip.emplace_back(i, i, diag[i]);
  SparseMatrix l(edges.n_nodes(), edges.n_nodes());
  l.setFromTriplets(trip.begin(), trip.end());
  return l;
}

/// The same Laplacian assembled as B * diag(x) * B^T.
inline SparseMatrix laplacian_from_incidence(const SparseMatrix& incidence, const StrengthVector& x) {
  if (x.size() != incidence.cols()) throw ArgumentError("strength vector length does not match incidence columns");
  SparseMatrix weighted = incidence * x.asDiagonal();
  return SparseMatrix(weighted * incidence.transpose());
}

/// s_i: total strength of the edges incident to node i.
inline Eigen::VectorXd node_strengths(const CandidateEdgeSet& edges, const StrengthVector& x) {
  check_strength_length(edges, x);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(edges.n_nodes());
  for (const auto& e : edges.edges()) {
    s[e.u] += x[e.index];
    s[e.v] += x[e.index];
  }
  return s;
}

inline double infinity_norm(const SparseMatrix& m) {
  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(m.rows());
  for (int c = 0; c < m.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(m, c); it; ++it) row_sums[it.row()] += std::abs(it.value());
  return m.rows() == 0 ? 0.0 : row_sums.maxCoeff();
}

}  // namespace isltopo
