#include "oracles.hpp"

#include "plspress/errors.hpp"
#include "plspress/press.hpp"
#include "plspress/simgen.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <numeric>
#include <random>

using namespace plspress;

namespace {

DataBlock random_block(Index n, Index p, Index q, unsigned seed) {
  return center(oracle::random_matrix(n, p, seed), oracle::random_matrix(n, q, seed + 1000));
}

SimData simulated(Index n, Index p, Index q, Index R, std::uint64_t seed, double noise = 1.0,
                  double rho = 0.9) {
  SimConfig config;
  config.n = n;
  config.p = p;
  config.q = q;
  config.R_true = R;
  config.noise_sd = noise;
  config.latent_correlation = rho;
  config.seed = seed;
  return simulate(config);
}

double max_abs(const Matrix& A) { return A.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(PressOls, HandExample) {
  const Matrix X = Matrix::Ones(3, 1);
  Matrix y(3, 1);
  y << 0, 0, 3;
  const PressResult r = press_ols(X, y);
  EXPECT_NEAR(r.loo_residuals(0, 0), -1.5, 1e-14);
  EXPECT_NEAR(r.loo_residuals(1, 0), -1.5, 1e-14);
  EXPECT_NEAR(r.loo_residuals(2, 0), 3.0, 1e-14);
  EXPECT_NEAR(r.press_value, 4.5, 1e-14);
  EXPECT_LE(max_abs(r.loo_residuals - oracle::ols_loo_explicit(X, y)), 1e-14);
  EXPECT_EQ(r.method, PressMethod::analytic);
}

TEST(PressOls, ExactFitHasZeroPress) {
  const Matrix X = oracle::random_matrix(30, 4, 1);
  const Matrix Y = X * oracle::random_matrix(4, 2, 2);
  const PressResult r = press_ols(X, Y);
  EXPECT_LE(max_abs(r.loo_residuals), 1e-10);
  EXPECT_LE(r.press_value, 1e-20);
}

TEST(PressOls, MatchesExplicitDeletionOverSeeds) {
  for (unsigned seed = 0; seed < 10; ++seed) {
    const Matrix X = oracle::random_matrix(50, 10, 10 + seed);
    const Matrix Y = oracle::random_matrix(50, 3, 100 + seed);
    const PressResult r = press_ols(X, Y);
    EXPECT_LE(max_abs(r.loo_residuals - oracle::ols_loo_explicit(X, Y)), 1e-10) << seed;
    EXPECT_NEAR(r.press_value, mean_squared_row_norm(r.loo_residuals), 1e-12);
  }
}

TEST(PressOls, PivotalObservationThrows) {
  Matrix X = Matrix::Zero(6, 2);
  X.col(0).setOnes();
  X(3, 1) = 1.0;  // only row 3 informs the second coefficient
  try {
    press_ols(X, oracle::random_matrix(6, 1, 3));
    FAIL() << "expected LeverageError";
  } catch (const LeverageError& e) {
    EXPECT_EQ(e.observation(), 3);
  }
}

TEST(PressOls, SingularDesignThrows) {
  Matrix X = oracle::random_matrix(10, 3, 4);
  X.col(2) = X.col(0);
  EXPECT_THROW(press_ols(X, oracle::random_matrix(10, 1, 5)), DegeneracyError);
  EXPECT_THROW(press_ols(oracle::random_matrix(3, 3, 6), oracle::random_matrix(3, 1, 7)),
               DimensionError);
}

TEST(PressPls, MatchesFixedSubspaceOracle) {
  for (Index R : {1, 3, 5}) {
    const SimData sim = simulated(100, 20, 20, 3, 50 + R);
    const PressResult analytic = press_pls(fit_pls(sim.data, R), sim.data);
    const PressResult oracle = loocv_pls_fixed_subspace(sim.data, R);
    EXPECT_EQ(oracle.method, PressMethod::oracle_fixed_subspace);
    EXPECT_LE(std::abs(analytic.press_value - oracle.press_value), 1e-8 * oracle.press_value);
    for (Index i = 0; i < sim.data.n(); ++i) {
      const double diff = max_abs(analytic.loo_residuals.row(i) - oracle.loo_residuals.row(i));
      EXPECT_LE(diff, 1e-8 * (1.0 + sim.data.Y.row(i).norm())) << "R=" << R << " i=" << i;
    }
  }
}

TEST(PressPls, SingleResponseEqualsOlsOnLatentFactor) {
  // With q = 1 and R = 1, s = +-y, Q(i) never changes and D(i) is the
  // leave-one-out slope of y on t.
  for (unsigned seed = 0; seed < 5; ++seed) {
    const Matrix X = oracle::random_matrix(40, 6, 60 + seed);
    const Matrix Y = X * oracle::random_matrix(6, 1, 70 + seed) +
                     oracle::random_matrix(40, 1, 80 + seed);
    const DataBlock data = center(X, Y);
    const PlsFit fit = fit_pls(data, 1);
    const PressResult pls = press_pls(fit, data);
    const PressResult ols = press_ols(fit.T, data.Y);
    EXPECT_LE(max_abs(pls.loo_residuals - ols.loo_residuals), 1e-10);
  }
}

TEST(PressPls, AlignedLatentFactorsEqualOls) {
  // S = cT exactly: y is a multiple of t, so both statistics vanish together.
  const Matrix X = oracle::random_matrix(30, 4, 90);
  const DataBlock base = center(X, Matrix::Zero(30, 1));
  const Matrix y = 2.5 * base.X * Vector::Unit(4, 1);
  const DataBlock data = center(base.X, y);
  const PlsFit fit = fit_pls(data, 1);
  const PressResult pls = press_pls(fit, data);
  EXPECT_LE(max_abs(pls.loo_residuals - press_ols(fit.T, data.Y).loo_residuals), 1e-10);
}

TEST(PressPls, ExactModelHasZeroPress) {
  const SimData sim = simulated(80, 15, 15, 3, 91, 0.0, 1.0);
  EXPECT_LE(press_pls(fit_pls(sim.data, 3), sim.data).press_value, 1e-8);
}

TEST(PressPls, PivotalObservationNamesBlock) {
  // Built by hand (not centred) so that t = XU has a single nonzero entry.
  DataBlock data;
  data.X = Matrix::Zero(6, 2);
  data.X(0, 0) = 1.0;
  data.X.col(1) = oracle::random_matrix(6, 1, 92).col(0);
  data.Y = oracle::random_matrix(6, 2, 93);
  data.mean_x = Vector::Zero(2);
  data.mean_y = Vector::Zero(2);
  data.centered = true;
  const Matrix U = Vector::Unit(2, 0);
  const Matrix V = Vector::Unit(2, 0);
  try {
    press_on_directions(data, U, V);
    FAIL() << "expected LeverageError";
  } catch (const LeverageError& e) {
    EXPECT_EQ(e.observation(), 0);
    EXPECT_EQ(e.block(), "X-latent");
  }
}

TEST(PressPls, InvariantToRowPermutation) {
  const DataBlock data = random_block(40, 6, 5, 94);
  std::vector<Index> order(40);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), std::mt19937(9));
  Matrix Xp(40, 6), Yp(40, 5);
  for (Index i = 0; i < 40; ++i) {
    Xp.row(i) = data.X.row(order[i]);
    Yp.row(i) = data.Y.row(order[i]);
  }
  const DataBlock permuted = center(Xp, Yp);
  const PressResult a = press_pls(fit_pls(data, 2), data);
  const PressResult b = press_pls(fit_pls(permuted, 2), permuted);
  EXPECT_NEAR(a.press_value, b.press_value, 1e-12 * std::max(1.0, a.press_value));
  for (Index i = 0; i < 40; ++i) {
    EXPECT_LE(max_abs(b.loo_residuals.row(i) - a.loo_residuals.row(order[i])), 1e-10);
  }
}

TEST(FixedSubspace, MatchesScalarLoopOracle) {
  const DataBlock data = random_block(50, 10, 10, 95);
  const PlsFit fit = fit_pls(data, 1);
  const Matrix expected =
      oracle::fixed_subspace_r1_loops(data.X, data.Y, fit.U.col(0), fit.V.col(0));
  EXPECT_LE(max_abs(loocv_pls_fixed_subspace(data, 1).loo_residuals - expected), 1e-10);
}

TEST(FixedSubspace, NullObservationMatchesFullRefit) {
  // A zero row appended to centred data keeps the data centred, so deleting
  // it leaves M unchanged.
  const DataBlock base = random_block(29, 5, 4, 96);
  Matrix X = Matrix::Zero(30, 5);
  Matrix Y = Matrix::Zero(30, 4);
  X.topRows(29) = base.X;
  Y.topRows(29) = base.Y;
  const DataBlock data = center(X, Y);
  const PressResult fixed = loocv_pls_fixed_subspace(data, 2);
  const PressResult full = loocv_pls_full(data, 2);
  EXPECT_LE(max_abs(fixed.loo_residuals.row(29) - full.loo_residuals.row(29)), 1e-12);
}

TEST(LoocvFull, ThreeObservationScriptedOracle) {
  Matrix X(3, 2), Y(3, 2);
  X << 1.0, 2.0, -0.5, 0.3, 2.2, -1.0;
  Y << 0.4, 1.1, 2.0, -0.7, -1.3, 0.2;
  const DataBlock data = center(X, Y);
  const PressResult r = loocv_pls_full(data, 1);
  for (Index i = 0; i < 3; ++i) {
    const Matrix Xt = oracle::drop_row(X, i);
    const Matrix Yt = oracle::drop_row(Y, i);
    const Eigen::RowVectorXd mx = Xt.colwise().mean();
    const Eigen::RowVectorXd my = Yt.colwise().mean();
    const Matrix Xc = Xt.rowwise() - mx;
    const Matrix Yc = Yt.rowwise() - my;
    const Eigen::JacobiSVD<Matrix> svd(Xc.transpose() * Yc, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector u = svd.matrixU().col(0);
    const Vector v = svd.matrixV().col(0);
    const Vector t = Xc * u;
    const Vector s = Yc * v;
    const double d = t.dot(s) / t.dot(t);
    const Eigen::RowVectorXd qT = (s.transpose() * Yc) / s.dot(s);
    const double t_out = (X.row(i) - mx).dot(u.transpose());
    const Eigen::RowVectorXd pred = my + t_out * d * qT;
    const Eigen::RowVectorXd expected = Y.row(i) - pred;
    EXPECT_LE(max_abs(r.loo_residuals.row(i) - expected), 1e-12) << "i=" << i;
  }
  EXPECT_EQ(r.method, PressMethod::oracle_full);
}

TEST(LoocvFull, DuplicatedRowsShrinkPress) {
  const DataBlock data = random_block(30, 5, 4, 98);
  Matrix X2(60, 5), Y2(60, 4);
  X2 << data.X, data.X;
  Y2 << data.Y, data.Y;
  const double single = loocv_pls_full(data, 2).press_value;
  const double doubled = loocv_pls_full(center(X2, Y2), 2).press_value;
  EXPECT_LE(doubled, single);
}

TEST(LoocvFull, ExactModelHasZeroPress) {
  const SimData sim = simulated(60, 10, 10, 2, 99, 0.0, 1.0);
  EXPECT_LE(loocv_pls_full(sim.data, 2).press_value, 1e-8);
}

TEST(LoocvFull, ThreadCountDoesNotChangeResult) {
  const SimData sim = simulated(60, 10, 10, 2, 100);
  const PressResult one = loocv_pls_full(sim.data, 2, 1);
  const PressResult three = loocv_pls_full(sim.data, 2, 3);
  EXPECT_EQ(one.loo_residuals, three.loo_residuals);
  EXPECT_EQ(one.press_value, three.press_value);
}

TEST(LoocvFull, RelativeGapToPressIsSmall) {
  const SimData sim = simulated(100, 20, 20, 3, 101);
  const double press = press_pls(fit_pls(sim.data, 3), sim.data).press_value;
  const double loocv = loocv_pls_full(sim.data, 3).press_value;
  EXPECT_LE(std::abs(press - loocv) / loocv, 0.15);
}

TEST(Paths, AgreeWithSingleRankCalls) {
  const SimData sim = simulated(50, 8, 8, 2, 102);
  const auto press_path = press_pls_path(sim.data, 4);
  const auto loocv_path = loocv_pls_full_path(sim.data, 4);
  ASSERT_EQ(press_path.size(), 4u);
  for (Index R = 1; R <= 4; ++R) {
    ASSERT_TRUE(press_path[R - 1].has_value());
    ASSERT_TRUE(loocv_path[R - 1].has_value());
    const PressResult p = press_pls(fit_pls(sim.data, R), sim.data);
    const PressResult l = loocv_pls_full(sim.data, R);
    EXPECT_LE(max_abs(press_path[R - 1]->loo_residuals - p.loo_residuals), 1e-10);
    EXPECT_LE(max_abs(loocv_path[R - 1]->loo_residuals - l.loo_residuals), 1e-10);
  }
}

TEST(SvPerturbation, BoundHoldsOnRandomAndDuplicatedData) {
  for (unsigned seed = 0; seed < 5; ++seed) {
    const DataBlock data = random_block(40, 6, 5, 200 + seed);
    const PerturbationReport report = sv_perturbation_gap(data, 3);
    for (Index i = 0; i < data.n(); ++i) {
      EXPECT_LE(report.per_obs_gap(i), report.rank_one_norms(i) + 1e-9);
    }
    EXPECT_DOUBLE_EQ(report.max_gap, report.per_obs_gap.maxCoeff());
  }
  const DataBlock data = random_block(20, 4, 4, 210);
  Matrix X3(60, 4), Y3(60, 4);
  X3 << data.X, data.X, data.X;
  Y3 << data.Y, data.Y, data.Y;
  const PerturbationReport report = sv_perturbation_gap(center(X3, Y3), 2);
  for (Index i = 0; i < 60; ++i) EXPECT_LE(report.per_obs_gap(i), report.rank_one_norms(i) + 1e-9);
}

TEST(SvPerturbation, ThreeObservationDeletionOracle) {
  Matrix X(3, 2), Y(3, 2);
  X << 1.0, 0.5, -2.0, 1.5, 1.0, -2.0;
  Y << 0.3, -1.0, 1.2, 0.4, -1.5, 0.6;
  const DataBlock data = center(X, Y);
  const PerturbationReport report = sv_perturbation_gap(data, 2);
  const Matrix Mn = data.X.transpose() * data.Y / 3.0;
  const Eigen::JacobiSVD<Matrix> full(Mn);
  for (Index i = 0; i < 3; ++i) {
    const Matrix Mi = (oracle::drop_row(data.X, i).transpose() * oracle::drop_row(data.Y, i)) / 2.0;
    const Eigen::JacobiSVD<Matrix> del(Mi);
    const double gap =
        (full.singularValues().head(2) - del.singularValues().head(2)).cwiseAbs().maxCoeff();
    EXPECT_NEAR(report.per_obs_gap(i), gap, 1e-12);
    EXPECT_NEAR(report.rank_one_norms(i), Eigen::JacobiSVD<Matrix>(Mn - Mi).singularValues()(0),
                1e-12);
  }
}

TEST(SvPerturbation, MedianGapDecreasesWithN) {
  double previous = std::numeric_limits<double>::infinity();
  for (Index n : {50, 100, 200, 400}) {
    std::vector<double> gaps;
    for (unsigned seed = 0; seed < 20; ++seed) {
      const DataBlock data = random_block(n, 20, 20, 1000 * static_cast<unsigned>(n) + seed);
      gaps.push_back(sv_perturbation_gap(data, 3).max_gap);
    }
    const double med = oracle::median(gaps);
    EXPECT_LT(med, previous) << "n=" << n;
    previous = med;
  }
}
