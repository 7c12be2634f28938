#include "plspress/simgen.hpp"

#include "plspress/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace plspress {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed ^ (stream * 0x9E3779B97F4A7C15ULL);
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : engine_(derive_seed(seed, stream)) {}

double Rng::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double Rng::normal(double mean, double sd) {
  return std::normal_distribution<double>(mean, sd)(engine_);
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
}

Index draw_R(Rng& rng) { return static_cast<Index>(rng.uniform_int(2, 8)); }

double draw_j(Rng& rng) {
  // uniform_real_distribution is half-open; [1, 2) lies inside [1, 2].
  return rng.uniform(1.0, 2.0);
}

Index support_size(Index p, double j) {
  return static_cast<Index>(std::llround(static_cast<double>(p) / j));
}

std::vector<double> SimConfig::resolved_cov_schedule() const {
  if (!cov_schedule.empty()) {
    return {cov_schedule.begin(),
            cov_schedule.begin() + std::min<std::ptrdiff_t>(
                                       static_cast<std::ptrdiff_t>(cov_schedule.size()), R_true)};
  }
  std::vector<double> out(static_cast<std::size_t>(std::max<Index>(R_true, 0)));
  for (std::size_t r = 0; r < out.size(); ++r) {
    out[r] = 10.0 * std::pow(0.7, static_cast<double>(r));
  }
  return out;
}

void SimConfig::validate() const {
  if (n < 3) throw DimensionError("simulate: n must be >= 3");
  if (p < 1 || q < 1) throw DimensionError("simulate: p and q must be >= 1");
  if (R_true < 1 || R_true > std::min(p, q)) {
    throw DimensionError("simulate: R_true must lie in [1, min(p, q)]");
  }
  if (!cov_schedule.empty() && static_cast<Index>(cov_schedule.size()) < R_true) {
    throw InputError("simulate: cov_schedule has fewer than R_true entries");
  }
  const auto cov = resolved_cov_schedule();
  for (std::size_t r = 0; r < cov.size(); ++r) {
    if (!(cov[r] > 0.0) || !std::isfinite(cov[r])) {
      throw InputError("simulate: covariances must be positive and finite");
    }
    if (r > 0 && !(cov[r] < cov[r - 1])) {
      throw InputError("simulate: cov_schedule must be strictly descending");
    }
  }
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
    throw InputError("simulate: noise_sd must be finite and >= 0");
  }
  if (!(latent_correlation > 0.0 && latent_correlation <= 1.0)) {
    throw InputError("simulate: latent_correlation must lie in (0, 1]");
  }
  if (!(mean_low <= mean_high)) throw InputError("simulate: mean_low > mean_high");
  if (sparsity_j) {
    if (!(*sparsity_j >= 1.0) || !std::isfinite(*sparsity_j)) {
      throw InputError("simulate: sparsity j must be >= 1");
    }
    if (support_size(p, *sparsity_j) < R_true) {
      throw DimensionError("simulate: sparse support round(p / j) = " +
                           std::to_string(support_size(p, *sparsity_j)) +
                           " is smaller than R_true");
    }
  }
}

namespace {

Matrix uniform_matrix(Rng& rng, Index rows, Index cols) {
  Matrix out(rows, cols);
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) out(r, c) = rng.uniform(0.0, 1.0);
  }
  return out;
}

Matrix noise_matrix(Rng& rng, Index rows, Index cols, double sd) {
  Matrix out = Matrix::Zero(rows, cols);
  if (sd == 0.0) return out;
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) out(r, c) = rng.normal(0.0, sd);
  }
  return out;
}

std::vector<Index> choose_support(Rng& rng, Index p, Index size) {
  std::vector<Index> idx(static_cast<std::size_t>(p));
  for (Index j = 0; j < p; ++j) idx[static_cast<std::size_t>(j)] = j;
  for (Index k = 0; k < size; ++k) {
    const auto pick = static_cast<std::size_t>(rng.uniform_int(k, p - 1));
    std::swap(idx[static_cast<std::size_t>(k)], idx[pick]);
  }
  idx.resize(static_cast<std::size_t>(size));
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

SimData simulate(const SimConfig& config) {
  config.validate();
  const Index n = config.n;
  const Index R = config.R_true;
  const auto cov = config.resolved_cov_schedule();
  const double rho = config.latent_correlation;
  Rng rng(config.seed);

  SimData out;
  out.config = config;
  SimTruth& truth = out.truth;

  // Latent pairs: t = mu_t + sd z1, s = mu_s + sd (rho z1 + sqrt(1 - rho^2) z2),
  // so Cov(t, s) = rho sd^2 = cov_r.
  truth.T_true.resize(n, R);
  truth.S_true.resize(n, R);
  truth.mean_t.resize(R);
  truth.mean_s.resize(R);
  const double independent = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  for (Index r = 0; r < R; ++r) {
    const double sd = std::sqrt(cov[static_cast<std::size_t>(r)] / rho);
    const double mu_t = rng.uniform(config.mean_low, config.mean_high);
    const double mu_s = rng.uniform(config.mean_low, config.mean_high);
    truth.mean_t(r) = mu_t;
    truth.mean_s(r) = mu_s;
    for (Index i = 0; i < n; ++i) {
      const double z1 = rng.normal();
      const double z2 = rng.normal();
      truth.T_true(i, r) = mu_t + sd * z1;
      truth.S_true(i, r) = mu_s + sd * (rho * z1 + independent * z2);
    }
  }

  Matrix U = uniform_matrix(rng, config.p, R);
  Matrix V = uniform_matrix(rng, config.q, R);
  if (config.sparsity_j) {
    // One support shared by every column, so orthonormalisation keeps the
    // zero rows exactly zero.
    truth.support_true = choose_support(rng, config.p, support_size(config.p, *config.sparsity_j));
    Matrix masked = Matrix::Zero(config.p, R);
    for (Index j : truth.support_true) masked.row(j) = U.row(j);
    U = std::move(masked);
  } else {
    truth.support_true.resize(static_cast<std::size_t>(config.p));
    for (Index j = 0; j < config.p; ++j) truth.support_true[static_cast<std::size_t>(j)] = j;
  }
  truth.U_true = qr_orthonormalize(U);
  truth.V_true = qr_orthonormalize(V);

  const Matrix E_x = noise_matrix(rng, n, config.p, config.noise_sd);
  const Matrix E_y = noise_matrix(rng, n, config.q, config.noise_sd);
  out.X_raw = truth.T_true * truth.U_true.transpose() + E_x;
  out.Y_raw = truth.S_true * truth.V_true.transpose() + E_y;
  out.data = center(out.X_raw, out.Y_raw);
  return out;
}

}  // namespace plspress
