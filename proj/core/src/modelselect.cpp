#include "plspress/modelselect.hpp"

#include "plspress/errors.hpp"
#include "plspress/parallel.hpp"
#include "plspress/press.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace plspress {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void finish(SelectionResult& res, Clock::time_point start) {
  res.chosen_index = argmin_score(res.scores);
  res.chosen = res.grid[res.chosen_index];
  res.elapsed_seconds = seconds_since(start);
}

std::size_t intersection_size(const std::vector<Index>& a, const std::vector<Index>& b) {
  std::size_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

}  // namespace

std::string_view to_string(SelectionMethod method) {
  return method == SelectionMethod::press ? "press" : "loocv_full";
}

std::string_view to_string(SelectionKind kind) {
  return kind == SelectionKind::rank ? "select_R" : "select_gamma";
}

std::size_t argmin_score(const std::vector<double>& scores) {
  std::size_t best = scores.size();
  for (std::size_t k = 0; k < scores.size(); ++k) {
    if (!std::isfinite(scores[k])) continue;
    if (best == scores.size() || scores[k] < scores[best]) best = k;
  }
  if (best == scores.size()) {
    throw DegeneracyError("model selection: no candidate produced a finite score");
  }
  return best;
}

SelectionResult select_R(const DataBlock& data, Index R_max, SelectionMethod method,
                         int threads) {
  const auto start = Clock::now();
  const Index k = std::min(data.p(), data.q());
  if (R_max < 1 || R_max > k) {
    throw DimensionError("select_R: R_max = " + std::to_string(R_max) + " outside [1, " +
                         std::to_string(k) + "]");
  }

  const auto path = method == SelectionMethod::press ? press_pls_path(data, R_max)
                                                     : loocv_pls_full_path(data, R_max, threads);
  SelectionResult res;
  res.method = method;
  for (Index R = 1; R <= R_max; ++R) {
    const auto& entry = path[static_cast<std::size_t>(R - 1)];
    res.grid.push_back(static_cast<double>(R));
    if (entry) {
      res.scores.push_back(entry->press_value);
    } else {
      res.scores.push_back(kInf);
      res.failures.push_back("R=" + std::to_string(R) + ": degenerate or pivotal fit");
    }
  }
  finish(res, start);
  return res;
}

SelectionResult select_gamma(const DataBlock& data, Index grid_size, SelectionMethod method,
                             const GammaSearchOptions& options) {
  const auto start = Clock::now();
  if (!data.centered) throw InputError("select_gamma: data must be centered");
  if (grid_size < 2) throw DimensionError("select_gamma: grid_size must be >= 2");

  const Matrix M = data.X.transpose() * data.Y;
  const SvdTruncated warm = svd_truncated(M, 1);
  const std::vector<double> grid = gamma_grid(M, grid_size);
  const auto K = grid.size();

  SelectionResult res;
  res.method = method;
  res.grid = grid;
  res.scores.assign(K, kInf);

  // Full-data fits are needed for PRESS scoring and for the chosen support.
  std::vector<SparseFit> fits;
  fits.reserve(K);
  for (double gamma : grid) fits.push_back(sparse_rank_one(M, warm, gamma, options.sparse));

  if (method == SelectionMethod::press) {
    for (std::size_t k = 0; k < K; ++k) {
      if (fits[k].nnz == 0) continue;
      try {
        res.scores[k] =
            press_on_directions(data, sparse_direction(fits[k]), fits[k].v_unit).press_value;
      } catch (const Error& e) {
        res.failures.push_back("gamma[" + std::to_string(k) + "]: " + e.what());
      }
    }
  } else {
    const Index n = data.n();
    Matrix sq_err = Matrix::Zero(n, static_cast<Index>(K));
    std::vector<char> failed(static_cast<std::size_t>(n) * K, 0);
    parallel_for(n, options.threads, [&](Index i) {
      const Deletion del = leave_one_out(data, i);
      const Matrix M_i = del.train.X.transpose() * del.train.Y;
      const SvdTruncated warm_i = svd_truncated(M_i, 1);
      const RowVector x_c = del.x_out - del.train.mean_x.transpose();
      for (std::size_t k = 0; k < K; ++k) {
        const SparseFit fit = sparse_rank_one(M_i, warm_i, grid[k], options.sparse);
        if (fit.nnz == 0) {
          failed[static_cast<std::size_t>(i) * K + k] = 1;
          continue;
        }
        try {
          const auto coef = detail::fit_coefficients(del.train.X, del.train.Y,
                                                     sparse_direction(fit), fit.v_unit);
          const RowVector pred = x_c * coef.beta + del.train.mean_y.transpose();
          sq_err(i, static_cast<Index>(k)) = (del.y_out - pred).squaredNorm();
        } catch (const DegeneracyError&) {
          failed[static_cast<std::size_t>(i) * K + k] = 1;
        }
      }
    });
    for (std::size_t k = 0; k < K; ++k) {
      bool ok = true;
      for (Index i = 0; i < n && ok; ++i) ok = failed[static_cast<std::size_t>(i) * K + k] == 0;
      if (ok) res.scores[k] = sq_err.col(static_cast<Index>(k)).mean();
    }
  }

  for (std::size_t k = 0; k < K; ++k) {
    if (!std::isfinite(res.scores[k]) && fits[k].nnz == 0) {
      res.failures.push_back("gamma[" + std::to_string(k) + "]: fully shrunk");
    }
  }
  finish(res, start);
  res.chosen_support = fits[res.chosen_index].support();
  return res;
}

double f1_score(const std::vector<Index>& selected, const std::vector<Index>& truth) {
  if (selected.empty() && truth.empty()) return 1.0;
  const double common = static_cast<double>(intersection_size(selected, truth));
  return 2.0 * common / static_cast<double>(selected.size() + truth.size());
}

double recall(const std::vector<Index>& selected, const std::vector<Index>& truth) {
  if (truth.empty()) return 1.0;
  return static_cast<double>(intersection_size(selected, truth)) /
         static_cast<double>(truth.size());
}

SensitivityRecord sensitivity_experiment(SelectionKind kind, Index n, Index p, Index q,
                                         Index trials, std::uint64_t seed,
                                         const SensitivityOptions& options) {
  const auto start = Clock::now();
  if (trials < 1) throw DimensionError("sensitivity_experiment: trials must be >= 1");

  SensitivityRecord rec;
  rec.kind = kind;
  rec.n = n;
  rec.p = p;
  rec.q = q;
  rec.trials = trials;
  rec.seed = seed;
  rec.outcomes.resize(static_cast<std::size_t>(trials));

  parallel_for(trials, options.threads, [&](Index trial) {
    TrialOutcome& out = rec.outcomes[static_cast<std::size_t>(trial)];
    out.seed = derive_seed(seed, static_cast<std::uint64_t>(trial));
    Rng draws(out.seed, 1);

    SimConfig cfg = options.base;
    cfg.n = n;
    cfg.p = p;
    cfg.q = q;
    cfg.seed = out.seed;
    try {
      if (kind == SelectionKind::rank) {
        cfg.R_true = draw_R(draws);
        cfg.sparsity_j.reset();
        out.truth = static_cast<double>(cfg.R_true);
        const SimData sim = simulate(cfg);
        const Index R_max = std::min({options.R_max, p, q});
        const auto press = select_R(sim.data, R_max, SelectionMethod::press);
        const auto loocv = select_R(sim.data, R_max, SelectionMethod::loocv_full);
        out.chosen_press = press.chosen;
        out.chosen_loocv = loocv.chosen;
        out.hit_press = press.chosen == out.truth;
        out.hit_loocv = loocv.chosen == out.truth;
      } else {
        const double j = draw_j(draws);
        cfg.R_true = 1;
        cfg.sparsity_j = j;
        out.truth = j;
        const SimData sim = simulate(cfg);
        const auto press =
            select_gamma(sim.data, options.grid_size, SelectionMethod::press, options.gamma);
        const auto loocv =
            select_gamma(sim.data, options.grid_size, SelectionMethod::loocv_full, options.gamma);
        const auto& truth = sim.truth.support_true;
        out.chosen_press = press.chosen;
        out.chosen_loocv = loocv.chosen;
        out.f1_press = f1_score(press.chosen_support, truth);
        out.f1_loocv = f1_score(loocv.chosen_support, truth);
        out.recall_press = recall(press.chosen_support, truth);
        out.recall_loocv = recall(loocv.chosen_support, truth);
        out.f1_between = f1_score(press.chosen_support, loocv.chosen_support);
        out.hit_press = out.f1_press >= options.f1_hit;
        out.hit_loocv = out.f1_loocv >= options.f1_hit;
      }
    } catch (const Error& e) {
      out.failed = true;
      out.failure = e.what();
    }
  });

  std::vector<const TrialOutcome*> valid;
  for (const auto& o : rec.outcomes) {
    if (o.failed) {
      ++rec.failures;
    } else {
      valid.push_back(&o);
      rec.hits_press += o.hit_press ? 1 : 0;
      rec.hits_loocv += o.hit_loocv ? 1 : 0;
    }
  }
  if (rec.hits_loocv > 0) {
    rec.ratio = static_cast<double>(rec.hits_press) / static_cast<double>(rec.hits_loocv);
  }

  // Spread of the ratio across contiguous batches of valid trials.
  std::vector<double> batch_ratios;
  const auto batches = static_cast<std::size_t>(std::max<Index>(options.batches, 1));
  const std::size_t per_batch = valid.size() / batches;
  if (per_batch > 0) {
    for (std::size_t b = 0; b < batches; ++b) {
      Index hp = 0, hl = 0;
      const std::size_t end = b + 1 == batches ? valid.size() : (b + 1) * per_batch;
      for (std::size_t k = b * per_batch; k < end; ++k) {
        hp += valid[k]->hit_press ? 1 : 0;
        hl += valid[k]->hit_loocv ? 1 : 0;
      }
      if (hl > 0) batch_ratios.push_back(static_cast<double>(hp) / static_cast<double>(hl));
    }
  }
  if (batch_ratios.size() >= 2) {
    double mean = 0.0;
    for (double r : batch_ratios) mean += r;
    mean /= static_cast<double>(batch_ratios.size());
    double ss = 0.0;
    for (double r : batch_ratios) ss += (r - mean) * (r - mean);
    rec.se = std::sqrt(ss / static_cast<double>(batch_ratios.size() - 1));
  } else {
    rec.se = std::numeric_limits<double>::quiet_NaN();
  }
  rec.elapsed_seconds = seconds_since(start);
  return rec;
}

}  // namespace plspress
