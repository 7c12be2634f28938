#include "oracles.hpp"

#include "plspress/errors.hpp"
#include "plspress/modelselect.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

using namespace plspress;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SimData simulated(Index n, Index p, Index q, Index R, std::uint64_t seed, double noise,
                  double rho, std::optional<double> j = std::nullopt) {
  SimConfig config;
  config.n = n;
  config.p = p;
  config.q = q;
  config.R_true = R;
  config.noise_sd = noise;
  config.latent_correlation = rho;
  config.sparsity_j = j;
  config.seed = seed;
  return simulate(config);
}

}  // namespace

TEST(ArgminScore, TiesGoToSmallerCandidate) {
  EXPECT_EQ(argmin_score({3.0, 1.0, 1.0, 2.0}), 1u);
  EXPECT_EQ(argmin_score({kInf, 5.0, 5.0}), 1u);
  EXPECT_EQ(argmin_score({0.0, 0.0}), 0u);
  EXPECT_THROW(argmin_score({kInf, kInf}), DegeneracyError);
}

TEST(SelectR, NoiseFreeDataRecoversRank) {
  const SimData sim = simulated(100, 20, 20, 3, 4, 0.0, 1.0);
  for (SelectionMethod method : {SelectionMethod::press, SelectionMethod::loocv_full}) {
    const SelectionResult result = select_R(sim.data, 6, method);
    EXPECT_EQ(result.chosen, 3.0) << to_string(method);
    EXPECT_EQ(result.grid.size(), 6u);
    EXPECT_EQ(result.grid.front(), 1.0);
    EXPECT_EQ(result.method, method);
  }
}

TEST(SelectR, SingletonGrid) {
  const SimData sim = simulated(50, 10, 10, 2, 5, 1.0, 0.9);
  const SelectionResult result = select_R(sim.data, 1, SelectionMethod::press);
  EXPECT_EQ(result.chosen, 1.0);
  EXPECT_EQ(result.chosen_index, 0u);
}

TEST(SelectR, RejectsRankOutOfRange) {
  const SimData sim = simulated(50, 5, 4, 2, 6, 1.0, 0.9);
  EXPECT_THROW(select_R(sim.data, 0, SelectionMethod::press), DimensionError);
  EXPECT_THROW(select_R(sim.data, 5, SelectionMethod::press), DimensionError);
}

TEST(SelectR, ChosenMinimisesScores) {
  const SimData sim = simulated(80, 15, 15, 3, 7, 1.0, 0.9);
  const SelectionResult result = select_R(sim.data, 8, SelectionMethod::loocv_full);
  for (double score : result.scores) EXPECT_GE(score, result.scores[result.chosen_index]);
  EXPECT_EQ(result.chosen, result.grid[result.chosen_index]);
}

TEST(SelectR, PressWorkloadGrowsAtMostLinearly) {
  std::vector<double> logs_n, logs_t;
  for (Index n : {200, 400, 800, 1600}) {
    const SimData sim = simulated(n, 30, 30, 3, 8, 1.0, 0.9);
    std::vector<double> times;
    for (int rep = 0; rep < 5; ++rep) {
      const auto start = std::chrono::steady_clock::now();
      select_R(sim.data, 10, SelectionMethod::press);
      times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    logs_n.push_back(std::log(static_cast<double>(n)));
    logs_t.push_back(std::log(oracle::median(times)));
  }
  const double mx = std::accumulate(logs_n.begin(), logs_n.end(), 0.0) / 4.0;
  const double my = std::accumulate(logs_t.begin(), logs_t.end(), 0.0) / 4.0;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    sxy += (logs_n[k] - mx) * (logs_t[k] - my);
    sxx += (logs_n[k] - mx) * (logs_n[k] - mx);
  }
  RecordProperty("loglog_slope", std::to_string(sxy / sxx));
  EXPECT_LE(sxy / sxx, 1.25);
}

TEST(SelectGamma, TwoPointGridChoosesZero) {
  const SimData sim = simulated(60, 12, 8, 1, 9, 1.0, 0.9, 1.5);
  for (SelectionMethod method : {SelectionMethod::press, SelectionMethod::loocv_full}) {
    const SelectionResult result = select_gamma(sim.data, 2, method);
    ASSERT_EQ(result.grid.size(), 2u);
    EXPECT_EQ(result.grid[0], 0.0);
    EXPECT_TRUE(std::isinf(result.scores[1]));
    EXPECT_EQ(result.chosen, 0.0);
    EXPECT_EQ(result.chosen_support.size(), 12u);
  }
}

TEST(SelectGamma, PureNoisePrefersHeavyShrinkage) {
  std::vector<double> loocv_positions, press_positions;
  for (unsigned seed = 0; seed < 20; ++seed) {
    const DataBlock data =
        center(oracle::random_matrix(60, 20, seed), oracle::random_matrix(60, 20, seed + 500));
    const SelectionResult loocv = select_gamma(data, 100, SelectionMethod::loocv_full);
    const SelectionResult press = select_gamma(data, 100, SelectionMethod::press);
    loocv_positions.push_back(static_cast<double>(loocv.chosen_index) / 99.0);
    press_positions.push_back(static_cast<double>(press.chosen_index) / 99.0);
  }
  RecordProperty("press_median_position", std::to_string(oracle::median(press_positions)));
  EXPECT_GE(oracle::median(loocv_positions), 0.5);
}

TEST(SelectGamma, StrongSignalRecoversSupport) {
  std::vector<double> sensitivity;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed, 1);
    const double j = draw_j(rng);
    const SimData sim = simulated(200, 100, 100, 1, derive_seed(31, seed), 1.0, 0.9, j);
    const SelectionResult result = select_gamma(sim.data, 100, SelectionMethod::press);
    sensitivity.push_back(recall(result.chosen_support, sim.truth.support_true));
  }
  EXPECT_GE(oracle::median(sensitivity), 0.8);
}

TEST(SupportScores, F1AndRecall) {
  EXPECT_DOUBLE_EQ(f1_score({1, 2, 3}, {1, 2, 3}), 1.0);
  EXPECT_DOUBLE_EQ(f1_score({1, 2}, {2, 3}), 0.5);
  EXPECT_DOUBLE_EQ(f1_score({}, {}), 1.0);
  EXPECT_DOUBLE_EQ(f1_score({}, {4}), 0.0);
  EXPECT_DOUBLE_EQ(recall({1, 2, 5, 7}, {2, 7}), 1.0);
  EXPECT_DOUBLE_EQ(recall({1}, {2, 7}), 0.0);
}

TEST(Sensitivity, SingleTrialIsDeterministic) {
  SensitivityOptions options;
  options.R_max = 6;
  const SensitivityRecord a =
      sensitivity_experiment(SelectionKind::rank, 60, 15, 15, 1, 42, options);
  const SensitivityRecord b =
      sensitivity_experiment(SelectionKind::rank, 60, 15, 15, 1, 42, options);
  ASSERT_EQ(a.outcomes.size(), 1u);
  EXPECT_EQ(a.outcomes[0].chosen_press, b.outcomes[0].chosen_press);
  EXPECT_EQ(a.outcomes[0].chosen_loocv, b.outcomes[0].chosen_loocv);
  EXPECT_EQ(a.hits_press, b.hits_press);
  EXPECT_EQ(a.hits_loocv, b.hits_loocv);
  EXPECT_EQ(a.trials, 1);
  EXPECT_TRUE(std::isnan(a.se));
}

TEST(Sensitivity, CountsStayInRange) {
  SensitivityOptions options;
  options.R_max = 6;
  options.batches = 2;
  const SensitivityRecord rec =
      sensitivity_experiment(SelectionKind::rank, 60, 15, 15, 4, 7, options);
  EXPECT_EQ(rec.trials, 4);
  EXPECT_LE(rec.hits_press, rec.trials - rec.failures);
  EXPECT_LE(rec.hits_loocv, rec.trials - rec.failures);
  if (rec.hits_loocv == 0) {
    EXPECT_FALSE(rec.ratio.has_value());
  } else {
    EXPECT_NEAR(*rec.ratio, static_cast<double>(rec.hits_press) / rec.hits_loocv, 1e-15);
  }
  for (const TrialOutcome& o : rec.outcomes) {
    EXPECT_GE(o.truth, 2.0);
    EXPECT_LE(o.truth, 8.0);
  }
}

TEST(Sensitivity, ThreadCountDoesNotChangeRecord) {
  SensitivityOptions one;
  one.R_max = 5;
  SensitivityOptions three = one;
  three.threads = 3;
  const SensitivityRecord a = sensitivity_experiment(SelectionKind::gamma, 50, 20, 10, 3, 8, one);
  const SensitivityRecord b =
      sensitivity_experiment(SelectionKind::gamma, 50, 20, 10, 3, 8, three);
  ASSERT_EQ(a.outcomes.size(), b.outcomes.size());
  for (std::size_t k = 0; k < a.outcomes.size(); ++k) {
    EXPECT_EQ(a.outcomes[k].chosen_press, b.outcomes[k].chosen_press);
    EXPECT_EQ(a.outcomes[k].chosen_loocv, b.outcomes[k].chosen_loocv);
  }
}
