#include "plspress/press.hpp"

#include "plspress/errors.hpp"
#include "plspress/parallel.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace plspress {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

PressResult make_result(Matrix residuals, PressMethod method, Clock::time_point start) {
  PressResult out;
  out.press_value = mean_squared_row_norm(residuals);
  out.loo_residuals = std::move(residuals);
  out.method = method;
  out.elapsed_seconds = seconds_since(start);
  return out;
}

void require_rank(const DataBlock& data, Index R, const char* who) {
  if (!data.centered) {
    throw InputError(std::string(who) + " requires centered data");
  }
  const Index k = std::min(data.p(), data.q());
  if (R < 1 || R > k) {
    throw DimensionError(std::string(who) + ": R = " + std::to_string(R) + " outside [1, " +
                         std::to_string(k) + "]");
  }
}

Matrix remove_row(const Matrix& A, Index i) {
  Matrix out(A.rows() - 1, A.cols());
  out.topRows(i) = A.topRows(i);
  out.bottomRows(A.rows() - 1 - i) = A.bottomRows(A.rows() - 1 - i);
  return out;
}

}  // namespace

std::string_view to_string(PressMethod method) {
  switch (method) {
    case PressMethod::analytic:
      return "analytic";
    case PressMethod::oracle_fixed_subspace:
      return "oracle_fixed_subspace";
    case PressMethod::oracle_full:
      return "oracle_full";
  }
  return "unknown";
}

double mean_squared_row_norm(const Matrix& residuals) {
  if (residuals.rows() == 0) return 0.0;
  return residuals.rowwise().squaredNorm().sum() / static_cast<double>(residuals.rows());
}

Deletion leave_one_out(const DataBlock& data, Index i) {
  if (i < 0 || i >= data.n()) {
    throw DimensionError("leave_one_out: observation index out of range");
  }
  Deletion out;
  out.train = detail::center_rows(remove_row(data.X, i), remove_row(data.Y, i));
  out.x_out = data.X.row(i);
  out.y_out = data.Y.row(i);
  return out;
}

PressResult press_ols(const Matrix& X, const Matrix& Y) {
  const auto start = Clock::now();
  if (X.rows() != Y.rows()) throw DimensionError("press_ols: X and Y row counts differ");
  if (X.rows() <= X.cols()) throw DimensionError("press_ols: need n > p");
  require_finite(X, "X");
  require_finite(Y, "Y");

  const Matrix XtX = X.transpose() * X;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(XtX, Eigen::EigenvaluesOnly);
  const Vector& ev = eig.eigenvalues();
  if (!(ev(0) > 1e-12 * ev(ev.size() - 1))) {
    throw DegeneracyError("press_ols: X^T X is singular or ill-conditioned");
  }
  const SmwState state = SmwState::from_gram(XtX);
  const Matrix beta = state.P * (X.transpose() * Y);
  const Matrix E = Y - X * beta;

  Matrix loo(E.rows(), E.cols());
  for (Index i = 0; i < X.rows(); ++i) {
    const double h = X.row(i).dot(state.P * X.row(i).transpose());
    if (!(h < 1.0 - kLeverageMargin)) {
      throw LeverageError("press_ols: observation " + std::to_string(i) + " is pivotal (h = " +
                              std::to_string(h) + ")",
                          i, "X");
    }
    loo.row(i) = E.row(i) / (1.0 - h);
  }
  return make_result(std::move(loo), PressMethod::analytic, start);
}

PressResult press_on_directions(const DataBlock& data, const Matrix& U, const Matrix& V) {
  const auto start = Clock::now();
  if (!data.centered) throw InputError("press: data must be centered");
  if (U.rows() != data.p() || V.rows() != data.q() || U.cols() != V.cols() || U.cols() < 1) {
    throw DimensionError("press: direction matrices do not match the data");
  }
  const Index n = data.n();
  const Index R = U.cols();

  const Matrix T = data.X * U;
  const Matrix S = data.Y * V;
  const auto coef = detail::coefficients_from_factors(T, S, data.Y, U);
  const Matrix Qt = coef.Q.transpose();  // R x q

  // Per-component inverse Gram (t_r^T t_r)^{-1} for the diagonal inner model.
  const Vector p_t = T.colwise().squaredNorm().cwiseInverse().transpose();
  const SmwState p_s = SmwState::from_gram(S.transpose() * S);

  Matrix loo(n, data.q());
  Vector d_i(R);
  for (Index i = 0; i < n; ++i) {
    const auto t_i = T.row(i);
    const auto s_i = S.row(i);

    for (Index r = 0; r < R; ++r) {
      const double h_t = p_t(r) * t_i(r) * t_i(r);
      if (!(h_t < 1.0 - kLeverageMargin)) {
        throw LeverageError("press: observation " + std::to_string(i) +
                                " is pivotal in the X-latent block (component " +
                                std::to_string(r + 1) + ")",
                            i, "X-latent");
      }
      const double inner_resid = s_i(r) - t_i(r) * coef.d(r);
      d_i(r) = coef.d(r) - inner_resid * p_t(r) * t_i(r) / (1.0 - h_t);
    }

    double h_s = 0.0;
    try {
      h_s = smw_downdate(p_s, s_i.transpose()).leverage;
    } catch (const LeverageError&) {
      throw LeverageError("press: observation " + std::to_string(i) +
                              " is pivotal in the Y-latent block",
                          i, "Y-latent");
    }
    const Vector Ps_s = p_s.P * s_i.transpose();
    const RowVector outer_resid = data.Y.row(i) - s_i * Qt;
    const Matrix Qt_i = Qt - (Ps_s * outer_resid) / (1.0 - h_s);

    const RowVector latent = t_i.cwiseProduct(d_i.transpose());
    loo.row(i) = data.Y.row(i) - latent * Qt_i;
  }
  return make_result(std::move(loo), PressMethod::analytic, start);
}

PressResult press_pls(const PlsFit& fit, const DataBlock& data) {
  return press_on_directions(data, fit.U, fit.V);
}

PressResult loocv_pls_fixed_subspace(const DataBlock& data, Index R) {
  const auto start = Clock::now();
  require_rank(data, R, "loocv_pls_fixed_subspace");
  const Matrix M = data.X.transpose() * data.Y;
  const SvdTruncated svd = svd_truncated(M, R);
  const Matrix T = data.X * svd.U;
  const Matrix S = data.Y * svd.V;

  Matrix loo(data.n(), data.q());
  for (Index i = 0; i < data.n(); ++i) {
    const Matrix T_i = remove_row(T, i);
    const Matrix S_i = remove_row(S, i);
    const Matrix Y_i = remove_row(data.Y, i);
    detail::PlsCoefficients coef;
    try {
      coef = detail::coefficients_from_factors(T_i, S_i, Y_i, svd.U);
    } catch (const DegeneracyError& e) {
      throw DegeneracyError("deletion of observation " + std::to_string(i) + ": " + e.what(),
                            e.component());
    }
    const RowVector latent = T.row(i).cwiseProduct(coef.d.transpose());
    loo.row(i) = data.Y.row(i) - latent * coef.Q.transpose();
  }
  return make_result(std::move(loo), PressMethod::oracle_fixed_subspace, start);
}

PressResult loocv_pls_full(const DataBlock& data, Index R, int threads) {
  const auto start = Clock::now();
  require_rank(data, R, "loocv_pls_full");

  Matrix loo(data.n(), data.q());
  parallel_for(data.n(), threads, [&](Index i) {
    const Deletion del = leave_one_out(data, i);
    PlsFit fit;
    try {
      fit = fit_pls(del.train, R);
    } catch (const DegeneracyError& e) {
      throw DegeneracyError("deletion of observation " + std::to_string(i) + ": " + e.what(),
                            e.component());
    }
    loo.row(i) = del.y_out - predict(fit, del.x_out, del.train);
  });
  return make_result(std::move(loo), PressMethod::oracle_full, start);
}

std::vector<std::optional<PressResult>> press_pls_path(const DataBlock& data, Index R_max) {
  require_rank(data, R_max, "press_pls_path");
  const auto start = Clock::now();
  const SvdTruncated svd = svd_truncated(data.X.transpose() * data.Y, R_max);
  const double svd_seconds = std::chrono::duration<double>(Clock::now() - start).count();

  std::vector<std::optional<PressResult>> out(static_cast<std::size_t>(R_max));
  for (Index R = 1; R <= R_max; ++R) {
    try {
      PressResult res = press_on_directions(data, svd.U.leftCols(R), svd.V.leftCols(R));
      res.elapsed_seconds += svd_seconds;
      out[static_cast<std::size_t>(R - 1)] = std::move(res);
    } catch (const DegeneracyError&) {
    } catch (const LeverageError&) {
    }
  }
  return out;
}

std::vector<std::optional<PressResult>> loocv_pls_full_path(const DataBlock& data, Index R_max,
                                                            int threads) {
  require_rank(data, R_max, "loocv_pls_full_path");
  const auto start = Clock::now();
  const Index n = data.n();
  const auto ranks = static_cast<std::size_t>(R_max);

  std::vector<Matrix> loo(ranks, Matrix(n, data.q()));
  // failed[i * R_max + (R - 1)] marks a degenerate deletion at rank R.
  std::vector<char> failed(static_cast<std::size_t>(n) * ranks, 0);

  parallel_for(n, threads, [&](Index i) {
    const Deletion del = leave_one_out(data, i);
    const SvdTruncated svd = svd_truncated(del.train.X.transpose() * del.train.Y, R_max);
    const RowVector x_c = del.x_out - del.train.mean_x.transpose();
    for (Index R = 1; R <= R_max; ++R) {
      const auto slot = static_cast<std::size_t>(R - 1);
      try {
        const auto coef = detail::fit_coefficients(del.train.X, del.train.Y, svd.U.leftCols(R),
                                                   svd.V.leftCols(R));
        const RowVector pred = x_c * coef.beta + del.train.mean_y.transpose();
        loo[slot].row(i) = del.y_out - pred;
      } catch (const DegeneracyError&) {
        failed[static_cast<std::size_t>(i) * ranks + slot] = 1;
      }
    }
  });

  const double elapsed = seconds_since(start);
  std::vector<std::optional<PressResult>> out(ranks);
  for (std::size_t slot = 0; slot < ranks; ++slot) {
    bool ok = true;
    for (Index i = 0; i < n && ok; ++i) {
      ok = failed[static_cast<std::size_t>(i) * ranks + slot] == 0;
    }
    if (!ok) continue;
    PressResult res;
    res.press_value = mean_squared_row_norm(loo[slot]);
    res.loo_residuals = std::move(loo[slot]);
    res.method = PressMethod::oracle_full;
    res.elapsed_seconds = elapsed;
    out[slot] = std::move(res);
  }
  return out;
}

PerturbationReport sv_perturbation_gap(const DataBlock& data, Index R, int threads) {
  const Index n = data.n();
  if (n < 3) throw DimensionError("sv_perturbation_gap: need n >= 3");
  if (data.Y.rows() != n) throw DimensionError("sv_perturbation_gap: row counts differ");
  const Index k = std::min(data.p(), data.q());
  if (R < 1 || R > k) throw DimensionError("sv_perturbation_gap: R out of range");
  require_finite(data.X, "X");
  require_finite(data.Y, "Y");

  const Matrix XtY = data.X.transpose() * data.Y;
  const Matrix M_n = XtY / static_cast<double>(n);
  const Vector g_n = singular_values(M_n).head(R);
  const double scale = 1.0 / static_cast<double>(n - 1);

  PerturbationReport out;
  out.per_obs_gap.resize(n);
  out.rank_one_norms.resize(n);
  out.removed_term_norms.resize(n);
  parallel_for(n, threads, [&](Index i) {
    const Matrix M_i = (XtY - data.X.row(i).transpose() * data.Y.row(i)) * scale;
    const Vector g_i = singular_values(M_i).head(R);
    out.per_obs_gap(i) = (g_n - g_i).cwiseAbs().maxCoeff();
    out.rank_one_norms(i) = spectral_norm(M_n - M_i);
    out.removed_term_norms(i) = data.X.row(i).norm() * data.Y.row(i).norm() * scale;
  });
  out.max_gap = out.per_obs_gap.maxCoeff();
  return out;
}

}  // namespace plspress
