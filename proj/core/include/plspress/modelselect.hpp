#pragma once

// Grid search over the number of components R or the sparsity penalty gamma,
// scored by analytic PRESS or full leave-one-out refits, plus the Monte Carlo
// sensitivity experiment comparing the two scorers against simulated truth.

#include "plspress/numkernel.hpp"
#include "plspress/pls.hpp"
#include "plspress/simgen.hpp"
#include "plspress/sparse_pls.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace plspress {

enum class SelectionMethod { press, loocv_full };
enum class SelectionKind { rank, gamma };

std::string_view to_string(SelectionMethod method);
std::string_view to_string(SelectionKind kind);

struct SelectionResult {
  std::vector<double> grid;    ///< ascending candidates
  std::vector<double> scores;  ///< +inf for failed candidates
  double chosen = 0.0;
  std::size_t chosen_index = 0;
  SelectionMethod method = SelectionMethod::press;
  double elapsed_seconds = 0.0;
  /// One message per failed candidate.
  std::vector<std::string> failures;
  /// Support of the full-data sparse fit at the chosen gamma (gamma search only).
  std::vector<Index> chosen_support;
};

/// Index of the smallest score; ties go to the earlier (simpler) candidate.
/// Throws DegeneracyError when no score is finite.
std::size_t argmin_score(const std::vector<double>& scores);

/// Scores R = 1..R_max.
SelectionResult select_R(const DataBlock& data, Index R_max, SelectionMethod method,
                         int threads = 1);

struct GammaSearchOptions {
  SparseOptions sparse;
  int threads = 1;
};

/// Scores a gamma_grid of `grid_size` penalties. PRESS holds the sparse
/// directions fixed across deletions; LOOCV repeats the sparse solve on every
/// deletion. Fully shrunk candidates score +inf.
SelectionResult select_gamma(const DataBlock& data, Index grid_size, SelectionMethod method,
                             const GammaSearchOptions& options = {});

/// 2 |A n B| / (|A| + |B|); 1 when both are empty. Inputs must be sorted.
double f1_score(const std::vector<Index>& selected, const std::vector<Index>& truth);
/// |A n B| / |B|. Inputs must be sorted.
double recall(const std::vector<Index>& selected, const std::vector<Index>& truth);

struct SensitivityOptions {
  Index R_max = 10;
  Index grid_size = 100;
  /// A gamma trial is a hit when F1(selected, true support) >= f1_hit.
  double f1_hit = 0.9;
  Index batches = 10;
  int threads = 1;
  /// Noise, covariance schedule and latent correlation for every trial;
  /// n, p, q, R_true, sparsity and seed are overwritten per trial.
  SimConfig base;
  GammaSearchOptions gamma;
};

struct TrialOutcome {
  std::uint64_t seed = 0;
  bool failed = false;
  std::string failure;
  double truth = 0.0;  ///< R_true or j
  double chosen_press = 0.0;
  double chosen_loocv = 0.0;
  bool hit_press = false;
  bool hit_loocv = false;
  /// Support scores (gamma search only).
  double f1_press = 0.0;
  double f1_loocv = 0.0;
  double recall_press = 0.0;
  double recall_loocv = 0.0;
  double f1_between = 0.0;
};

struct SensitivityRecord {
  SelectionKind kind = SelectionKind::rank;
  Index n = 0, p = 0, q = 0;
  Index trials = 0;
  Index failures = 0;
  Index hits_press = 0;
  Index hits_loocv = 0;
  /// pi_PRESS / pi_LOOCV; empty when LOOCV scored no hits.
  std::optional<double> ratio;
  /// Standard deviation of per-batch ratios; NaN with fewer than two usable batches.
  double se = 0.0;
  std::uint64_t seed = 0;
  double elapsed_seconds = 0.0;
  std::vector<TrialOutcome> outcomes;
};

/// Runs `trials` simulations. Trial k uses derive_seed(seed, k); for the rank
/// search R_true is drawn from {2..8}, for the gamma search j from U(1, 2)
/// with R_true = 1. Failed trials are counted and excluded.
SensitivityRecord sensitivity_experiment(SelectionKind kind, Index n, Index p, Index q,
                                         Index trials, std::uint64_t seed,
                                         const SensitivityOptions& options = {});

}  // namespace plspress
