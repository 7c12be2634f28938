#include "plspress/pls.hpp"

#include "plspress/errors.hpp"

#include <Eigen/Cholesky>

#include <string>

namespace plspress {

namespace {

constexpr double kDegenerateFactor = 1e-12;

void check_directions(const DataBlock& data, const Matrix& U, const Matrix& V) {
  if (!data.centered) {
    throw InputError("PLS fit requires centered data; call center() first");
  }
  if (U.rows() != data.p() || V.rows() != data.q()) {
    throw DimensionError("direction matrices do not match the data dimensions");
  }
  if (U.cols() != V.cols() || U.cols() < 1) {
    throw DimensionError("U and V must have the same, positive, number of columns");
  }
}

}  // namespace

DataBlock center(const Matrix& Xraw, const Matrix& Yraw) {
  if (Xraw.rows() != Yraw.rows()) {
    throw DimensionError("center: X has " + std::to_string(Xraw.rows()) + " rows but Y has " +
                         std::to_string(Yraw.rows()));
  }
  if (Xraw.rows() < 3) {
    throw DimensionError("center: need at least 3 observations, got " +
                         std::to_string(Xraw.rows()));
  }
  return detail::center_rows(Xraw, Yraw);
}

namespace detail {

DataBlock center_rows(const Matrix& Xraw, const Matrix& Yraw) {
  if (Xraw.rows() != Yraw.rows() || Xraw.rows() < 2) {
    throw DimensionError("center: need matching row counts and at least 2 rows");
  }
  if (Xraw.cols() < 1 || Yraw.cols() < 1) {
    throw DimensionError("center: X and Y need at least one column");
  }
  require_finite(Xraw, "X");
  require_finite(Yraw, "Y");

  DataBlock out;
  out.mean_x = Xraw.colwise().mean().transpose();
  out.mean_y = Yraw.colwise().mean().transpose();
  out.X = Xraw.rowwise() - out.mean_x.transpose();
  out.Y = Yraw.rowwise() - out.mean_y.transpose();
  out.centered = true;
  return out;
}

PlsCoefficients coefficients_from_factors(const Matrix& T, const Matrix& S, const Matrix& Y,
                                          const Matrix& U) {
  const Index R = T.cols();
  PlsCoefficients out;
  out.d.resize(R);
  for (Index r = 0; r < R; ++r) {
    const double tt = T.col(r).squaredNorm();
    if (!(tt > kDegenerateFactor)) {
      throw DegeneracyError("degenerate X-latent factor: component " + std::to_string(r + 1) +
                                " has t^T t = " + std::to_string(tt),
                            r);
    }
    out.d(r) = T.col(r).dot(S.col(r)) / tt;
  }

  const Matrix StS = S.transpose() * S;
  Eigen::LLT<Matrix> llt(StS);
  if (llt.info() != Eigen::Success) {
    throw DegeneracyError("Y-latent factors are linearly dependent (S^T S singular)");
  }
  const Matrix Qt = llt.solve(S.transpose() * Y);
  out.Q = Qt.transpose();

  Matrix D = Matrix::Zero(R, R);
  D.diagonal() = out.d;
  out.beta = (U * D) * out.Q.transpose();
  return out;
}

PlsCoefficients fit_coefficients(const Matrix& X, const Matrix& Y, const Matrix& U,
                                 const Matrix& V) {
  return coefficients_from_factors(X * U, Y * V, Y, U);
}

}  // namespace detail

PlsFit fit_pls_on_directions(const DataBlock& data, const Matrix& U, const Matrix& V,
                             const Vector& g) {
  check_directions(data, U, V);
  const Index R = U.cols();

  PlsFit fit;
  fit.R = R;
  fit.U = U;
  fit.V = V;
  fit.g = g;
  fit.T = data.X * U;
  fit.S = data.Y * V;

  auto coef = detail::coefficients_from_factors(fit.T, fit.S, data.Y, U);
  fit.D = Matrix::Zero(R, R);
  fit.D.diagonal() = coef.d;
  fit.Q = std::move(coef.Q);
  fit.beta = std::move(coef.beta);

  const Matrix TtT = fit.T.transpose() * fit.T;
  fit.P_load = TtT.llt().solve(fit.T.transpose() * data.X).transpose();

  fit.H_resid = fit.S - fit.T * fit.D;
  fit.Ey_resid = data.Y - data.X * fit.beta;
  return fit;
}

PlsFit fit_pls(const DataBlock& data, Index R) {
  if (!data.centered) {
    throw InputError("fit_pls requires centered data; call center() first");
  }
  const Index k = std::min(data.p(), data.q());
  if (R < 1 || R > k) {
    throw DimensionError("fit_pls: R = " + std::to_string(R) + " outside [1, " +
                         std::to_string(k) + "]");
  }
  const Matrix M = data.X.transpose() * data.Y;
  const SvdTruncated svd = svd_truncated(M, R);
  return fit_pls_on_directions(data, svd.U, svd.V, svd.g);
}

Matrix predict(const PlsFit& fit, const Matrix& Xnew, const DataBlock& means) {
  if (Xnew.cols() != fit.beta.rows()) {
    throw DimensionError("predict: Xnew has " + std::to_string(Xnew.cols()) +
                         " columns, model expects " + std::to_string(fit.beta.rows()));
  }
  if (means.mean_x.size() != fit.beta.rows() || means.mean_y.size() != fit.beta.cols()) {
    throw DimensionError("predict: stored means do not match the model dimensions");
  }
  Matrix out = (Xnew.rowwise() - means.mean_x.transpose()) * fit.beta;
  out.rowwise() += means.mean_y.transpose();
  return out;
}

}  // namespace plspress
