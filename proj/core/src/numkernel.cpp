#include "plspress/numkernel.hpp"

#include "plspress/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace plspress {

void require_finite(const Eigen::Ref<const Matrix>& m, std::string_view what) {
  if (!m.allFinite()) {
    throw InputError(std::string(what) + " contains non-finite entries");
  }
}

SmwState SmwState::from_gram(const Matrix& gram) {
  if (gram.rows() != gram.cols() || gram.rows() == 0) {
    throw DimensionError("Gram matrix must be square and non-empty");
  }
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw DegeneracyError("Gram matrix is not positive definite");
  }
  SmwState state;
  state.gram = gram;
  state.P = llt.solve(Matrix::Identity(gram.rows(), gram.cols()));
  // Symmetrise; the solve leaves asymmetry at rounding level.
  state.P = 0.5 * (state.P + state.P.transpose()).eval();
  return state;
}

void apply_sign_convention(Matrix& U, Matrix& V) {
  for (Index r = 0; r < U.cols(); ++r) {
    Index arg = 0;
    double best = -1.0;
    for (Index j = 0; j < U.rows(); ++j) {
      const double a = std::abs(U(j, r));
      if (a > best) {  // strict: lowest index wins ties
        best = a;
        arg = j;
      }
    }
    if (U(arg, r) < 0.0) {
      U.col(r) = -U.col(r);
      if (r < V.cols()) V.col(r) = -V.col(r);
    }
  }
}

namespace {

// Orthonormalises the columns of W in place, left to right. A column that is
// numerically zero after projection is replaced by the first coordinate
// direction not yet spanned, so the result is always orthonormal.
void orthonormalize_columns(Matrix& W) {
  for (Index r = 0; r < W.cols(); ++r) {
    const double original = W.col(r).norm();
    for (int pass = 0; pass < 2 && r > 0; ++pass) {
      const Vector c = W.leftCols(r).transpose() * W.col(r);
      W.col(r).noalias() -= W.leftCols(r) * c;
    }
    double norm = W.col(r).norm();
    for (Index e = 0; !(norm > 1e-12 * original) || !(norm > 0.0); ++e) {
      W.col(r) = Vector::Unit(W.rows(), e);
      for (int pass = 0; pass < 2 && r > 0; ++pass) {
        const Vector c = W.leftCols(r).transpose() * W.col(r);
        W.col(r).noalias() -= W.leftCols(r) * c;
      }
      norm = W.col(r).norm();
      if (norm > 0.5) break;
    }
    W.col(r) /= norm;
  }
}

}  // namespace

SvdTruncated svd_truncated(const Matrix& M, Index rank) {
  const Index k = std::min(M.rows(), M.cols());
  if (rank < 1 || rank > k) {
    throw DimensionError("svd_truncated: rank " + std::to_string(rank) +
                         " outside [1, " + std::to_string(k) + "]");
  }
  require_finite(M, "svd_truncated input");

  // Dominant eigenpairs of the smaller Gram matrix give one side of the
  // decomposition; the other side is M times it, orthonormalised.
  const bool tall = M.rows() >= M.cols();
  const Matrix gram = tall ? Matrix(M.transpose() * M) : Matrix(M * M.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  if (eig.info() != Eigen::Success) {
    throw DegeneracyError("svd_truncated: eigensolver did not converge");
  }
  const Index m = gram.rows();
  Matrix small = eig.eigenvectors().rightCols(rank).rowwise().reverse();
  Vector g(rank);
  for (Index r = 0; r < rank; ++r) g(r) = std::sqrt(std::max(0.0, eig.eigenvalues()(m - 1 - r)));

  Matrix large = tall ? Matrix(M * small) : Matrix(M.transpose() * small);
  orthonormalize_columns(large);

  SvdTruncated out;
  out.g = std::move(g);
  if (tall) {
    out.U = std::move(large);
    out.V = std::move(small);
  } else {
    out.U = std::move(small);
    out.V = std::move(large);
  }
  apply_sign_convention(out.U, out.V);
  return out;
}

Vector singular_values(const Matrix& M) {
  require_finite(M, "singular_values input");
  Eigen::BDCSVD<Matrix> svd(M);
  return svd.singularValues();
}

double spectral_norm(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  return singular_values(M)(0);
}

Matrix qr_orthonormalize(const Matrix& A) {
  if (A.cols() > A.rows()) {
    throw DimensionError("qr_orthonormalize: more columns than rows");
  }
  require_finite(A, "qr_orthonormalize input");

  Matrix Q(A.rows(), A.cols());
  for (Index r = 0; r < A.cols(); ++r) {
    Vector w = A.col(r);
    const double original = w.norm();
    // Two classical Gram-Schmidt sweeps keep Q orthonormal to rounding.
    for (int pass = 0; pass < 2; ++pass) {
      if (r > 0) {
        const Vector c = Q.leftCols(r).transpose() * w;
        w.noalias() -= Q.leftCols(r) * c;
      }
    }
    const double residual = w.norm();
    if (original == 0.0 || residual < 1e-12 * original) {
      throw DegeneracyError(
          "qr_orthonormalize: column " + std::to_string(r) + " is linearly dependent", r);
    }
    Q.col(r) = w / residual;
  }
  return Q;
}

Downdate smw_downdate(const SmwState& state, const Eigen::Ref<const Vector>& x) {
  if (x.size() != state.P.rows()) {
    throw DimensionError("smw_downdate: vector length does not match state");
  }
  const Vector Px = state.P * x;
  const double h = x.dot(Px);
  if (!(h < 1.0 - kLeverageMargin)) {
    throw LeverageError("smw_downdate: leverage " + std::to_string(h) +
                            " too close to 1; downdated Gram matrix is singular",
                        -1, "gram");
  }
  Downdate out;
  out.leverage = h;
  out.P_down = state.P + (Px * Px.transpose()) / (1.0 - h);
  return out;
}

}  // namespace plspress
