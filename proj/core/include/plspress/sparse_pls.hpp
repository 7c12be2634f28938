#pragma once

// One-component sparse PLS: a lasso-penalised rank-one approximation of
// M = X^T Y solved by alternating soft-thresholded power steps.

#include "plspress/numkernel.hpp"
#include "plspress/pls.hpp"

#include <vector>

namespace plspress {

struct SparseOptions {
  /// Stop when max_j |u_new - u_old| <= tol * max(1, ||u_new||_inf).
  double tol = 1e-8;
  int max_iter = 500;
  /// Record the objective after every half-step in SparseFit::objective_trace.
  bool trace_objective = false;
};

struct SparseFit {
  Vector u_sparse;  ///< length p, unnormalised
  Vector v_unit;    ///< length q, unit norm
  double gamma = 0.0;
  Index nnz = 0;
  int iterations = 0;
  bool converged = false;
  /// 0.5 ||M - u v^T||_F^2 + gamma ||u||_1, starting at the warm start.
  std::vector<double> objective_trace;

  std::vector<Index> support() const;
};

/// sign(z_j) * max(|z_j| - gamma, 0). Throws InputError for negative gamma.
Vector soft_threshold(const Vector& z, double gamma);

/// Penalised objective 0.5 ||M - u v^T||_F^2 + gamma ||u||_1.
double sparse_objective(const Matrix& M, const Vector& u, const Vector& v, double gamma);

/// Solves from the leading singular pair of M.
SparseFit sparse_rank_one(const Matrix& M, double gamma, const SparseOptions& options = {});

/// Solves from a precomputed leading singular pair (rank >= 1). Lets callers
/// share one SVD across a gamma grid.
SparseFit sparse_rank_one(const Matrix& M, const SvdTruncated& warm, double gamma,
                          const SparseOptions& options = {});

/// Smallest penalty that zeroes u at the first step: max_j |(M v1)_j|.
double gamma_max(const Matrix& M, const SvdTruncated& warm);

/// `count` evenly spaced penalties from 0 to gamma_max, ascending.
std::vector<double> gamma_grid(const Matrix& M, Index count);

/// beta = u D q^T for the one-component model on normalised u_sparse.
/// Rows of beta are exactly zero where u_sparse is zero. Throws
/// DegeneracyError for a fully shrunk fit.
Matrix sparse_beta(const DataBlock& data, const SparseFit& fit);

/// Normalised u_sparse as a p x 1 direction matrix.
Matrix sparse_direction(const SparseFit& fit);

}  // namespace plspress
