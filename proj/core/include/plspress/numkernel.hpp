#pragma once

// Dense kernels shared by the PLS, PRESS and sparse modules.

#include <Eigen/Core>

#include <string_view>

namespace plspress {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Leverage at or above 1 - kLeverageMargin is treated as singular.
inline constexpr double kLeverageMargin = 1e-10;

/// Leading R singular triplets of a matrix, g descending.
///
/// Each pair (u_r, v_r) is sign-normalised so that the entry of u_r with the
/// largest magnitude is positive (lowest index wins ties).
struct SvdTruncated {
  Matrix U;
  Matrix V;
  Vector g;

  Index rank() const noexcept { return g.size(); }
};

/// Inverse of a small symmetric positive-definite Gram matrix.
struct SmwState {
  Matrix P;
  Matrix gram;

  /// Throws DegeneracyError if gram is not positive definite.
  static SmwState from_gram(const Matrix& gram);
};

/// Result of removing one row x from the Gram matrix.
struct Downdate {
  Matrix P_down;
  double leverage = 0.0;
};

/// Throws InputError naming `what` if any entry is NaN or infinite.
void require_finite(const Eigen::Ref<const Matrix>& m, std::string_view what);

/// Best rank-R approximation of M. Throws DimensionError for R outside
/// [1, min(rows, cols)] and InputError for non-finite M.
SvdTruncated svd_truncated(const Matrix& M, Index rank);

/// All min(rows, cols) singular values, descending.
Vector singular_values(const Matrix& M);

/// Largest singular value (spectral norm).
double spectral_norm(const Matrix& M);

/// Flip (u_r, v_r) jointly so the largest-magnitude entry of u_r is positive.
void apply_sign_convention(Matrix& U, Matrix& V);

/// Gram-Schmidt orthonormalisation with one re-orthogonalisation pass.
/// Column r of the result depends only on columns 0..r of A, and the implied
/// triangular factor has a positive diagonal. Throws DegeneracyError when a
/// column's residual falls below 1e-12 times its original norm.
Matrix qr_orthonormalize(const Matrix& A);

/// Sherman-Morrison-Woodbury downdate: returns (gram - x x^T)^{-1} computed as
/// P + P x x^T P / (1 - h) with h = x^T P x. Throws LeverageError (observation
/// index -1) when h >= 1 - kLeverageMargin.
Downdate smw_downdate(const SmwState& state, const Eigen::Ref<const Vector>& x);

}  // namespace plspress
