#pragma once

// Leave-one-out prediction error for OLS and two-block PLS.
//
// press_pls computes every leave-one-out residual from a single fit by
// downdating the inner-model and Y-loading least-squares problems with
// Sherman-Morrison-Woodbury, holding the directions U, V fixed. The two
// oracles refit explicitly: loocv_pls_fixed_subspace keeps U, V and re-solves
// the least squares on n-1 rows; loocv_pls_full recentres and recomputes the
// SVD for every deletion.

#include "plspress/numkernel.hpp"
#include "plspress/pls.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace plspress {

enum class PressMethod { analytic, oracle_fixed_subspace, oracle_full };

std::string_view to_string(PressMethod method);

struct PressResult {
  Matrix loo_residuals;  ///< n x q, row i is e(i)
  double press_value = 0.0;  ///< (1/n) sum_i ||e(i)||^2
  PressMethod method = PressMethod::analytic;
  double elapsed_seconds = 0.0;
};

/// Mean squared row norm of a residual matrix.
double mean_squared_row_norm(const Matrix& residuals);

/// Singular-value stability of the normalised cross-covariance under
/// single-row deletion.
struct PerturbationReport {
  /// max over r <= R of |g_r(M_n) - g_r(M_{n,-i})|
  Vector per_obs_gap;
  /// ||M_n - M_{n,-i}||_2, the norm of the exact perturbation. Bounds
  /// per_obs_gap[i] for every i.
  Vector rank_one_norms;
  /// ||x_i|| ||y_i|| / (n - 1), the norm of the removed outer product alone.
  Vector removed_term_norms;
  double max_gap = 0.0;
};

/// OLS leave-one-out residuals e_i / (1 - h_i). X is used as given (no
/// intercept or centering is added). Requires n > p and a well-conditioned
/// X^T X; throws DegeneracyError or LeverageError otherwise.
PressResult press_ols(const Matrix& X, const Matrix& Y);

/// Analytic PRESS for a fitted model. `fit` must come from `data`.
PressResult press_pls(const PlsFit& fit, const DataBlock& data);

/// Analytic PRESS for fixed directions U (p x R) and V (q x R).
PressResult press_on_directions(const DataBlock& data, const Matrix& U, const Matrix& V);

/// Oracle: U, V from the full fit; D and Q re-solved on the n-1 remaining rows.
PressResult loocv_pls_fixed_subspace(const DataBlock& data, Index R);

/// Oracle: full refit per deletion, recentring the n-1 training rows and
/// centring the held-out row with the training means.
PressResult loocv_pls_full(const DataBlock& data, Index R, int threads = 1);

/// Analytic PRESS for R = 1..R_max from one SVD. Entry R-1 is empty when the
/// R-component model is degenerate or has a pivotal observation.
std::vector<std::optional<PressResult>> press_pls_path(const DataBlock& data, Index R_max);

/// Full LOOCV for R = 1..R_max, sharing one SVD per deletion across ranks.
/// Entry R-1 is empty when any deletion fails at that rank.
std::vector<std::optional<PressResult>> loocv_pls_full_path(const DataBlock& data, Index R_max,
                                                            int threads = 1);

/// Gaps between the top-R singular values of M_n = X^T Y / n and of
/// M_{n,-i} = (X^T Y - x_i^T y_i) / (n - 1), for every i.
PerturbationReport sv_perturbation_gap(const DataBlock& data, Index R, int threads = 1);

/// Training block with row i removed and recentred. The held-out row is
/// returned in the coordinates of `data`.
struct Deletion {
  DataBlock train;
  RowVector x_out;
  RowVector y_out;
};
Deletion leave_one_out(const DataBlock& data, Index i);

}  // namespace plspress
