#pragma once

// Two-block PLS: directions from the SVD of X^T Y, a diagonal inner model
// S = T D + H and Y-loadings Q fitted jointly by least squares.

#include "plspress/numkernel.hpp"

namespace plspress {

/// Paired covariate (n x p) and response (n x q) blocks.
struct DataBlock {
  Matrix X;
  Matrix Y;
  bool centered = false;
  Vector mean_x;  ///< column means removed from X (length p)
  Vector mean_y;  ///< column means removed from Y (length q)

  Index n() const noexcept { return X.rows(); }
  Index p() const noexcept { return X.cols(); }
  Index q() const noexcept { return Y.cols(); }
};

/// Removes column means. Requires matching row counts and n >= 3.
DataBlock center(const Matrix& Xraw, const Matrix& Yraw);

/// Fitted model. T = X U, S = Y V, beta = U D Q^T.
struct PlsFit {
  Index R = 0;
  Matrix U;        ///< p x R
  Matrix V;        ///< q x R
  Vector g;        ///< R singular values of X^T Y
  Matrix T;        ///< n x R X-latent factors
  Matrix S;        ///< n x R Y-latent factors
  Matrix D;        ///< R x R diagonal inner coefficients
  Matrix Q;        ///< q x R Y-loadings
  Matrix P_load;   ///< p x R X-loadings, X^T T (T^T T)^{-1}
  Matrix beta;     ///< p x q
  Matrix H_resid;  ///< S - T D
  Matrix Ey_resid; ///< Y - X beta
};

/// Fits R components from the top-R singular subspace of X^T Y, without
/// deflation between components.
PlsFit fit_pls(const DataBlock& data, Index R);

/// Same model with caller-supplied directions (columns of U and V). Used when
/// the directions come from elsewhere, e.g. a sparse decomposition or a
/// shared SVD. `g` may be empty.
PlsFit fit_pls_on_directions(const DataBlock& data, const Matrix& U, const Matrix& V,
                             const Vector& g = Vector());

/// (Xnew - mean_x) beta + mean_y, using the means stored in `means`.
Matrix predict(const PlsFit& fit, const Matrix& Xnew, const DataBlock& means);

namespace detail {

/// Centering without the n >= 3 requirement (n >= 2), for leave-one-out
/// training sets of small datasets.
DataBlock center_rows(const Matrix& Xraw, const Matrix& Yraw);

/// The pieces of a fit needed for prediction only: D (diagonal, as a vector),
/// Q and beta. Arithmetic is identical to fit_pls so callers that only need
/// coefficients get bitwise-equal beta.
struct PlsCoefficients {
  Vector d;
  Matrix Q;
  Matrix beta;
};

PlsCoefficients fit_coefficients(const Matrix& X, const Matrix& Y, const Matrix& U,
                                 const Matrix& V);

/// Same, starting from the latent factors T = X U and S = Y V.
PlsCoefficients coefficients_from_factors(const Matrix& T, const Matrix& S,
                                          const Matrix& Y, const Matrix& U);

}  // namespace detail

}  // namespace plspress
