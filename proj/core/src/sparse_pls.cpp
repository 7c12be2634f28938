#include "plspress/sparse_pls.hpp"

#include "plspress/errors.hpp"

#include <cmath>
#include <string>

namespace plspress {

std::vector<Index> SparseFit::support() const {
  std::vector<Index> out;
  for (Index j = 0; j < u_sparse.size(); ++j) {
    if (u_sparse(j) != 0.0) out.push_back(j);
  }
  return out;
}

Vector soft_threshold(const Vector& z, double gamma) {
  if (!(gamma >= 0.0)) throw InputError("soft_threshold: gamma must be >= 0");
  require_finite(z, "soft_threshold input");
  Vector out(z.size());
  for (Index j = 0; j < z.size(); ++j) {
    const double shrunk = std::abs(z(j)) - gamma;
    out(j) = shrunk > 0.0 ? std::copysign(shrunk, z(j)) : 0.0;
  }
  return out;
}

double sparse_objective(const Matrix& M, const Vector& u, const Vector& v, double gamma) {
  return 0.5 * (M - u * v.transpose()).squaredNorm() + gamma * u.lpNorm<1>();
}

double gamma_max(const Matrix& M, const SvdTruncated& warm) {
  return (M * warm.V.col(0)).cwiseAbs().maxCoeff();
}

SparseFit sparse_rank_one(const Matrix& M, const SvdTruncated& warm, double gamma,
                          const SparseOptions& options) {
  if (!(gamma >= 0.0)) throw InputError("sparse_rank_one: gamma must be >= 0");
  if (!(options.tol > 0.0)) throw InputError("sparse_rank_one: tol must be > 0");
  if (options.max_iter < 1) throw InputError("sparse_rank_one: max_iter must be >= 1");
  if (warm.rank() < 1 || warm.U.rows() != M.rows() || warm.V.rows() != M.cols()) {
    throw DimensionError("sparse_rank_one: warm start does not match M");
  }

  SparseFit fit;
  fit.gamma = gamma;
  Vector u = warm.U.col(0);
  Vector v = warm.V.col(0);
  if (options.trace_objective) fit.objective_trace.push_back(sparse_objective(M, u, v, gamma));

  for (int it = 1; it <= options.max_iter; ++it) {
    fit.iterations = it;
    Vector u_next = soft_threshold(M * v, gamma);
    if (options.trace_objective) {
      fit.objective_trace.push_back(sparse_objective(M, u_next, v, gamma));
    }
    if (u_next.isZero(0.0)) {
      fit.u_sparse = std::move(u_next);
      fit.v_unit = v;
      fit.nnz = 0;
      fit.converged = true;
      return fit;
    }
    const Vector w = M.transpose() * u_next;
    const double w_norm = w.norm();
    if (w_norm > 0.0) v = w / w_norm;
    if (options.trace_objective) {
      fit.objective_trace.push_back(sparse_objective(M, u_next, v, gamma));
    }

    const double change = (u_next - u).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, u_next.cwiseAbs().maxCoeff());
    u = std::move(u_next);
    if (change <= options.tol * scale) {
      fit.converged = true;
      break;
    }
  }

  fit.u_sparse = std::move(u);
  fit.v_unit = std::move(v);
  fit.nnz = static_cast<Index>((fit.u_sparse.array() != 0.0).count());
  return fit;
}

SparseFit sparse_rank_one(const Matrix& M, double gamma, const SparseOptions& options) {
  require_finite(M, "sparse_rank_one input");
  return sparse_rank_one(M, svd_truncated(M, 1), gamma, options);
}

std::vector<double> gamma_grid(const Matrix& M, Index count) {
  if (count < 2) throw DimensionError("gamma_grid: count must be >= 2");
  const double top = gamma_max(M, svd_truncated(M, 1));
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (Index k = 0; k < count; ++k) {
    grid[static_cast<std::size_t>(k)] =
        top * static_cast<double>(k) / static_cast<double>(count - 1);
  }
  grid.back() = top;
  return grid;
}

Matrix sparse_direction(const SparseFit& fit) {
  const double norm = fit.u_sparse.norm();
  if (fit.nnz == 0 || !(norm > 0.0)) {
    throw DegeneracyError("sparse fit is fully shrunk (nnz = 0)");
  }
  return fit.u_sparse / norm;
}

Matrix sparse_beta(const DataBlock& data, const SparseFit& fit) {
  if (!data.centered) throw InputError("sparse_beta: data must be centered");
  if (fit.u_sparse.size() != data.p() || fit.v_unit.size() != data.q()) {
    throw DimensionError("sparse_beta: fit does not match data dimensions");
  }
  const Matrix u = sparse_direction(fit);
  return detail::fit_coefficients(data.X, data.Y, u, fit.v_unit).beta;
}

}  // namespace plspress
