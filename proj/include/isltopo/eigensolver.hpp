#pragma once

// Lowest eigenpairs of a graph Laplacian.
//
// The trivial pair (0, 1/sqrt(N) * ones) is known exactly, so both routes solve
// on the orthogonal complement of the all-ones vector and prepend it:
//   * LOBPCG (block, Jacobi-preconditioned, warm-startable) for production;
//   * a dense self-adjoint solve, used for small N and as a test oracle.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "isltopo/error.hpp"
#include "isltopo/laplacian.hpp"

namespace isltopo {

enum class EigenMethod { automatic, lobpcg, dense };

struct EigenOptions {
  double tol = 1e-8;  ///< residual tolerance, relative to max(1, ||L||_inf)
  int max_iterations = 1000;
  int guard_vectors = 2;  ///< extra block columns beyond the wanted pairs
  EigenMethod method = EigenMethod::automatic;
  /// On LOBPCG non-convergence, retry densely when N is at most this.
  int dense_fallback_max_n = 3000;
  std::uint64_t seed = 0x5eed;
};

struct EigenResult {
  Eigen::VectorXd values;   ///< ascending, values[0] == 0
  Eigen::MatrixXd vectors;  ///< orthonormal columns
  Eigen::VectorXd residuals;
  Eigen::MatrixXd block;    ///< full iterate block (wanted + guard vectors), for warm starts
  int iterations = 0;
  bool used_dense = false;

  int size() const { return static_cast<int>(values.size()); }
};

namespace detail {

inline void deflate_ones(Eigen::MatrixXd& block) {
  if (block.rows() == 0) return;
  const Eigen::RowVectorXd means = block.colwise().mean();
  block.rowwise() -= means;
}

inline EigenResult with_trivial_pair(const SparseMatrix& l, const Eigen::VectorXd& values,
                                     const Eigen::MatrixXd& vectors, int iterations, bool dense) {
  const auto n = l.rows();
  const auto q = values.size() + 1;
  EigenResult out;
  out.values.resize(q);
  out.vectors.resize(n, q);
  out.values[0] = 0.0;
  out.vectors.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
  out.values.tail(q - 1) = values;
  out.vectors.rightCols(q - 1) = vectors;
  const Eigen::MatrixXd lv = l * out.vectors;
  out.residuals.resize(q);
  for (Eigen::Index k = 0; k < q; ++k) out.residuals[k] = (lv.col(k) - out.values[k] * out.vectors.col(k)).norm();
  out.iterations = iterations;
  out.used_dense = dense;
  return out;
}

}  // namespace detail

/// Dense route: the all-ones direction is shifted above the spectrum, then the
/// q-1 smallest eigenpairs of the shifted matrix are the deflated spectrum.
inline EigenResult dense_smallest_eigenpairs(const SparseMatrix& l, int q) {
  const auto n = static_cast<int>(l.rows());
  if (q < 1 || q > n) throw ArgumentError("requested " + std::to_string(q) + " eigenpairs of a " + std::to_string(n) + "-node Laplacian");
  Eigen::MatrixXd dense = Eigen::MatrixXd(l);
  const double shift = 2.0 * infinity_norm(l) + 1.0;
  dense.array() += shift / n;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success) throw NumericalError("dense eigensolver failed", std::numeric_limits<double>::infinity());
  Eigen::VectorXd values = solver.eigenvalues().head(q - 1);
  Eigen::MatrixXd vectors = solver.eigenvectors().leftCols(q - 1);
  detail::deflate_ones(vectors);
  for (int k = 0; k < q - 1; ++k) vectors.col(k).normalize();
  return detail::with_trivial_pair(l, values, vectors, 1, true);
}

/// Block LOBPCG on the complement of the all-ones vector. `warm` columns (if
/// any) seed the block; the rest are random. Throws NumericalError carrying the
/// best residual when the wanted pairs do not converge.
inline EigenResult lobpcg_smallest_eigenpairs(const SparseMatrix& l, int q, const EigenOptions& opt,
                                              const Eigen::MatrixXd* warm = nullptr) {
  const auto n = static_cast<int>(l.rows());
  const int wanted = q - 1;
  const int block = std::min(wanted + opt.guard_vectors, n - 1);
  const double scale = std::max(1.0, infinity_norm(l));
  const double threshold = opt.tol * scale;

  Eigen::VectorXd inv_diag(n);
  {
    const Eigen::VectorXd d = l.diagonal();
    const double floor = std::max(1e-12, 1e-3 * d.mean());
    for (int i = 0; i < n; ++i) inv_diag[i] = 1.0 / std::max(d[i], floor);
  }

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd x(n, block);
  int filled = 0;
  if (warm != nullptr && warm->rows() == n) {
    for (Eigen::Index c = 0; c < warm->cols() && filled < block; ++c) {
      Eigen::VectorXd col = warm->col(c);
      col.array() -= col.mean();
      if (col.norm() > 1e-8) x.col(filled++) = col;
    }
  }
  for (; filled < block; ++filled)
    for (int i = 0; i < n; ++i) x(i, filled) = gauss(rng);
  detail::deflate_ones(x);

  // Orthonormal basis of span(cols), orthogonal to ones. Cholesky QR twice
  // when the Gram matrix is well conditioned, pivoted Householder otherwise.
  auto orthonormal_basis = [n](Eigen::MatrixXd s) {
    detail::deflate_ones(s);
    for (Eigen::Index c = 0; c < s.cols(); ++c) {
      const double nc = s.col(c).norm();
      if (nc > 0.0) s.col(c) /= nc;
    }
    {
      Eigen::MatrixXd q = s;
      bool ok = true;
      for (int pass = 0; pass < 2 && ok; ++pass) {
        Eigen::LLT<Eigen::MatrixXd> llt(q.transpose() * q);
        if (llt.info() != Eigen::Success) {
          ok = false;
          break;
        }
        const Eigen::VectorXd d = llt.matrixLLT().diagonal();
        if (d.minCoeff() < 1e-6 * d.maxCoeff()) {
          ok = false;
          break;
        }
        q = llt.matrixL().solve(q.transpose()).transpose();
      }
      if (ok) return q;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(s);
    qr.setThreshold(1e-10);
    const auto rank = qr.rank();
    Eigen::MatrixXd q_basis = qr.householderQ() * Eigen::MatrixXd::Identity(n, rank);
    detail::deflate_ones(q_basis);
    // One re-orthonormalization pass after deflation.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr2(q_basis);
    Eigen::MatrixXd out = qr2.householderQ() * Eigen::MatrixXd::Identity(n, rank);
    return out;
  };

  auto rayleigh_ritz = [&](const Eigen::MatrixXd& basis, Eigen::MatrixXd& vecs, Eigen::VectorXd& vals) {
    const Eigen::MatrixXd lb = l * basis;
    Eigen::MatrixXd small = basis.transpose() * lb;
    small = 0.5 * (small + small.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(small);
    const int take = std::min<int>(block, static_cast<int>(basis.cols()));
    vals = es.eigenvalues().head(take);
    vecs = basis * es.eigenvectors().leftCols(take);
  };

  Eigen::MatrixXd basis = orthonormal_basis(x);
  Eigen::VectorXd theta;
  rayleigh_ritz(basis, x, theta);

  Eigen::MatrixXd p;
  double best = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opt.max_iterations; ++it) {
    const Eigen::MatrixXd lx = l * x;
    Eigen::MatrixXd r = lx - x * theta.asDiagonal();
    double worst = 0.0;
    for (int k = 0; k < wanted; ++k) worst = std::max(worst, r.col(k).norm());
    best = std::min(best, worst);
    if (worst <= threshold) {
      Eigen::VectorXd vals = theta.head(wanted);
      Eigen::MatrixXd vecs = x.leftCols(wanted);
      auto out = detail::with_trivial_pair(l, vals, vecs, it, false);
      out.block = x;
      return out;
    }
    Eigen::MatrixXd w = inv_diag.asDiagonal() * r;
    const auto extra = p.cols();
    Eigen::MatrixXd s(n, x.cols() + w.cols() + extra);
    s << x, w, p;
    basis = orthonormal_basis(s);
    const Eigen::MatrixXd x_old = x;
    rayleigh_ritz(basis, x, theta);
    p = x - x_old * (x_old.transpose() * x);
  }
  throw NumericalError("LOBPCG did not converge in " + std::to_string(opt.max_iterations) + " iterations", best);
}

/// q smallest eigenpairs of the Laplacian L, ascending, trivial pair first.
inline EigenResult smallest_eigenpairs(const SparseMatrix& l, int q, const EigenOptions& opt = {},
                                       const Eigen::MatrixXd* warm = nullptr) {
  const auto n = static_cast<int>(l.rows());
  if (q < 1 || q > n) throw ArgumentError("requested " + std::to_string(q) + " eigenpairs of a " + std::to_string(n) + "-node Laplacian");
  if (q == 1) return detail::with_trivial_pair(l, Eigen::VectorXd(0), Eigen::MatrixXd(n, 0), 0, false);
  const int block = q - 1 + opt.guard_vectors;
  const bool small = 3 * block + 2 > n;
  if (opt.method == EigenMethod::dense || (opt.method == EigenMethod::automatic && small))
    return dense_smallest_eigenpairs(l, q);
  try {
    return lobpcg_smallest_eigenpairs(l, q, opt, warm);
  } catch (const NumericalError&) {
    if (n <= opt.dense_fallback_max_n) return dense_smallest_eigenpairs(l, q);
    throw;
  }
}

inline double algebraic_connectivity(const CandidateEdgeSet& edges, const StrengthVector& x,
                                     const EigenOptions& opt = {}) {
  if (edges.n_nodes() < 2) return 0.0;
  const auto res = smallest_eigenpairs(laplacian(edges, x), 2, opt);
  return std::max(0.0, res.values[1]);
}

}  // namespace isltopo
