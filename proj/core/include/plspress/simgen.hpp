#pragma once

// Synthetic data from the two-block latent-factor model
//   X = T U^T + E_x,  Y = S V^T + E_y
// with ground truth retained for scoring model selection.

#include "plspress/numkernel.hpp"
#include "plspress/pls.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace plspress {

/// Seeded generator. Independent streams come from splitmix64-mixing the
/// master seed with a stream index, so trial k of an experiment always sees
/// the same numbers regardless of which thread runs it.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  double uniform(double lo, double hi);
  double normal(double mean = 0.0, double sd = 1.0);
  /// Integer uniform on [lo, hi], both ends inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finaliser applied to seed ^ (golden-ratio multiple of stream).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

struct SimConfig {
  Index n = 100;
  Index p = 20;
  Index q = 20;
  Index R_true = 3;
  /// Sparse mode when set: u has round(p / j) nonzero rows, j >= 1.
  std::optional<double> sparsity_j;
  double noise_sd = 1.0;
  std::uint64_t seed = 0;
  /// Cov(t_r, s_r) per factor, strictly descending and positive. Empty means
  /// 10 * 0.7^(r-1).
  std::vector<double> cov_schedule;
  /// Correlation of each (t_r, s_r) pair, in (0, 1]. Both variances are
  /// cov_r / latent_correlation. 1 makes S = T up to the means.
  double latent_correlation = 0.9;
  /// Latent-factor means are drawn from U(mean_low, mean_high).
  double mean_low = 0.0;
  double mean_high = 5.0;

  /// cov_schedule, or the default when empty.
  std::vector<double> resolved_cov_schedule() const;
  /// Throws InputError / DimensionError on an invalid configuration.
  void validate() const;
};

struct SimTruth {
  Matrix U_true;  ///< p x R_true, orthonormal columns
  Matrix V_true;  ///< q x R_true, orthonormal columns
  Matrix T_true;  ///< n x R_true
  Matrix S_true;  ///< n x R_true
  Vector mean_t;  ///< drawn mean of each t_r
  Vector mean_s;  ///< drawn mean of each s_r
  /// Rows of U_true allowed to be nonzero (all rows in dense mode).
  std::vector<Index> support_true;
};

struct SimData {
  Matrix X_raw;
  Matrix Y_raw;
  DataBlock data;  ///< centered X_raw, Y_raw
  SimTruth truth;
  SimConfig config;
};

/// Deterministic given config (including seed).
SimData simulate(const SimConfig& config);

/// Uniform integer in {2, ..., 8}.
Index draw_R(Rng& rng);
/// Uniform real in [1, 2].
double draw_j(Rng& rng);

/// round(p / j), the sparse-mode support size.
Index support_size(Index p, double j);

}  // namespace plspress
