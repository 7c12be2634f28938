#include "commands.hpp"

#include "dataset_io.hpp"
#include "plspress/errors.hpp"
#include "plspress/parallel.hpp"
#include "plspress/press.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace plspress::cli {

using nlohmann::json;

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string extension(Format f) { return f == Format::json ? ".json" : ".csv"; }

std::string csv_number(double v) { return std::isfinite(v) ? format_double(v) : "NA"; }

json source_json(const DataSource& s) {
  json j;
  if (s.dir) j["data"] = s.dir->string();
  if (s.x) j["x"] = s.x->string();
  if (s.y) j["y"] = s.y->string();
  return j;
}

// "# key=value" lines echoing the resolved configuration.
std::string csv_header(const json& config) {
  std::string out;
  for (const auto& [key, value] : config.items()) {
    out += "# " + key + "=" + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
  }
  return out;
}

json press_json(const PressResult& res, const json& config, bool residuals) {
  json j;
  j["config"] = config;
  j["method"] = std::string(to_string(res.method));
  j["press_value"] = res.press_value;
  j["elapsed_seconds"] = res.elapsed_seconds;
  j["n"] = res.loo_residuals.rows();
  j["q"] = res.loo_residuals.cols();
  if (residuals) j["loo_residuals"] = to_json(res.loo_residuals);
  return j;
}

Artifact press_artifact(const std::string& name, const PressResult& res, const json& config,
                        const PressOptions& options) {
  if (options.format == Format::json) {
    return {name + ".json", press_json(res, config, options.residuals).dump(2) + "\n"};
  }
  json header = config;
  header["method"] = std::string(to_string(res.method));
  header["press_value"] = format_double(res.press_value);
  header["elapsed_seconds"] = format_double(res.elapsed_seconds);
  std::string out = csv_header(header) + "observation,squared_norm\n";
  const Vector sq = res.loo_residuals.rowwise().squaredNorm();
  for (Index i = 0; i < sq.size(); ++i) {
    out += std::to_string(i) + "," + format_double(sq(i)) + "\n";
  }
  return {name + ".csv", out};
}

Artifact selection_artifact(const std::string& name, const SelectionResult& res,
                            const json& config, Format format) {
  if (format == Format::json) {
    json j;
    j["config"] = config;
    j["method"] = std::string(to_string(res.method));
    j["grid"] = res.grid;
    j["scores"] = res.scores;  // +inf serialises as null
    j["chosen"] = res.chosen;
    j["chosen_index"] = res.chosen_index;
    j["elapsed_seconds"] = res.elapsed_seconds;
    j["failures"] = res.failures;
    if (!res.chosen_support.empty()) j["chosen_support"] = res.chosen_support;
    return {name + ".json", j.dump(2) + "\n"};
  }
  json header = config;
  header["method"] = std::string(to_string(res.method));
  header["chosen"] = format_double(res.chosen);
  header["failures"] = res.failures.size();
  std::string out = csv_header(header) + "candidate,score\n";
  for (std::size_t k = 0; k < res.grid.size(); ++k) {
    out += format_double(res.grid[k]) + "," + csv_number(res.scores[k]) + "\n";
  }
  return {name + ".csv", out};
}

}  // namespace

DataBlock load_data(const DataSource& source) {
  std::filesystem::path x_path, y_path;
  if (source.x && source.y) {
    x_path = *source.x;
    y_path = *source.y;
  } else if (source.dir) {
    x_path = *source.dir / "X.csv";
    y_path = *source.dir / "Y.csv";
  } else {
    throw FormatError("no input data: pass --data DIR or both --x and --y");
  }
  return center(read_csv_matrix(x_path), read_csv_matrix(y_path));
}

SimConfig cmd_simulate(SimulateOptions options) {
  SimConfig& cfg = options.config;
  if (options.sparse && !cfg.sparsity_j) {
    Rng rng(cfg.seed, 1);
    cfg.sparsity_j = draw_j(rng);
  }
  const SimData sim = simulate(cfg);
  write_dataset(options.out, sim);
  return cfg;
}

Artifact cmd_fit(const FitOptions& options) {
  const DataBlock data = load_data(options.data);
  const PlsFit fit = fit_pls(data, options.R);

  json config = source_json(options.data);
  config["command"] = "fit";
  config["R"] = options.R;

  const double resid = fit.Ey_resid.norm();
  const double y_norm = data.Y.norm();
  json j;
  j["config"] = config;
  j["n"] = data.n();
  j["p"] = data.p();
  j["q"] = data.q();
  j["R"] = fit.R;
  j["g"] = to_json(fit.g);
  j["D"] = to_json(Vector(fit.D.diagonal()));
  j["beta_frobenius"] = fit.beta.norm();
  j["residual_norm"] = resid;
  j["relative_residual"] = y_norm > 0.0 ? resid / y_norm : 0.0;
  j["inner_residual_norm"] = fit.H_resid.norm();

  if (options.format == Format::json) return {"fit.json", j.dump(2) + "\n"};

  json header = config;
  for (const char* key : {"beta_frobenius", "residual_norm", "relative_residual",
                          "inner_residual_norm"}) {
    header[key] = format_double(j[key].get<double>());
  }
  std::string out = csv_header(header) + "component,g,D\n";
  for (Index r = 0; r < fit.R; ++r) {
    out += std::to_string(r + 1) + "," + format_double(fit.g(r)) + "," +
           format_double(fit.D(r, r)) + "\n";
  }
  return {"fit.csv", out};
}

Artifact cmd_press(const PressOptions& options) {
  const DataBlock data = load_data(options.data);
  const auto start = std::chrono::steady_clock::now();
  const PlsFit fit = fit_pls(data, options.R);
  PressResult res = press_pls(fit, data);
  // Report the whole cost of a PRESS evaluation, including the single fit.
  res.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json config = source_json(options.data);
  config["command"] = "press";
  config["R"] = options.R;
  return press_artifact("press", res, config, options);
}

Artifact cmd_loocv(const PressOptions& options) {
  const DataBlock data = load_data(options.data);
  const PressResult res = loocv_pls_full(data, options.R, options.threads);
  json config = source_json(options.data);
  config["command"] = "loocv";
  config["R"] = options.R;
  config["threads"] = options.threads;
  return press_artifact("loocv", res, config, options);
}

Artifact cmd_select_r(const SelectOptions& options) {
  const DataBlock data = load_data(options.data);
  const Index R_max = std::min({options.R_max, data.p(), data.q()});
  const SelectionResult res = select_R(data, R_max, options.method, options.threads);
  json config = source_json(options.data);
  config["command"] = "select-r";
  config["R_max"] = R_max;
  config["threads"] = options.threads;
  return selection_artifact("select_r", res, config, options.format);
}

Artifact cmd_select_gamma(const SelectOptions& options) {
  const DataBlock data = load_data(options.data);
  GammaSearchOptions search;
  search.threads = options.threads;
  const SelectionResult res = select_gamma(data, options.grid_size, options.method, search);
  json config = source_json(options.data);
  config["command"] = "select-gamma";
  config["grid_size"] = options.grid_size;
  config["threads"] = options.threads;
  return selection_artifact("select_gamma", res, config, options.format);
}

Artifact cmd_bench_sensitivity(const SensitivityBenchOptions& options) {
  if (options.n_values.empty() || options.pq_values.empty()) {
    throw InputError("bench-sensitivity: --n and --pq lists must be non-empty");
  }
  json rows = json::array();
  std::string csv =
      "n,p,q,mode,trials,ratio,se,seed,hits_press,hits_loocv,failures\n";
  for (Index n : options.n_values) {
    for (Index pq : options.pq_values) {
      const SensitivityRecord rec = sensitivity_experiment(options.kind, n, pq, pq, options.trials,
                                                           options.seed, options.experiment);
      const double ratio = rec.ratio.value_or(std::numeric_limits<double>::quiet_NaN());
      json row;
      row["n"] = n;
      row["p"] = pq;
      row["q"] = pq;
      row["mode"] = std::string(to_string(rec.kind));
      row["trials"] = rec.trials;
      row["ratio"] = ratio;
      row["se"] = rec.se;
      row["seed"] = rec.seed;
      row["hits_press"] = rec.hits_press;
      row["hits_loocv"] = rec.hits_loocv;
      row["failures"] = rec.failures;
      rows.push_back(row);
      csv += std::to_string(n) + "," + std::to_string(pq) + "," + std::to_string(pq) + "," +
             std::string(to_string(rec.kind)) + "," + std::to_string(rec.trials) + "," +
             csv_number(ratio) + "," + csv_number(rec.se) + "," + std::to_string(rec.seed) +
             "," + std::to_string(rec.hits_press) + "," + std::to_string(rec.hits_loocv) + "," +
             std::to_string(rec.failures) + "\n";
    }
  }

  json config;
  config["command"] = "bench-sensitivity";
  config["mode"] = std::string(to_string(options.kind));
  config["trials"] = options.trials;
  config["seed"] = options.seed;
  config["R_max"] = options.experiment.R_max;
  config["grid_size"] = options.experiment.grid_size;
  config["f1_hit"] = options.experiment.f1_hit;
  config["batches"] = options.experiment.batches;
  config["threads"] = options.experiment.threads;
  config["noise_sd"] = options.experiment.base.noise_sd;
  config["latent_correlation"] = options.experiment.base.latent_correlation;
  config["cov_schedule"] = options.experiment.base.cov_schedule;
  config["se_estimator"] = "sd of per-batch ratios";

  if (options.format == Format::json) {
    return {"bench_sensitivity.json", json{{"config", config}, {"rows", rows}}.dump(2) + "\n"};
  }
  return {"bench_sensitivity.csv", csv_header(config) + csv};
}

std::string hardware_fingerprint() {
  std::string model = "unknown-cpu";
  std::ifstream cpuinfo("/proc/cpuinfo");
  std::string line;
  while (std::getline(cpuinfo, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) model = line.substr(colon + 2);
      break;
    }
  }
  return model + "; hardware_threads=" + std::to_string(std::thread::hardware_concurrency());
}

Artifact cmd_bench_timing(const TimingBenchOptions& options) {
  if (options.n_values.empty()) throw InputError("bench-timing: --n list must be non-empty");
  if (options.repeats < 5) throw InputError("bench-timing: --repeats must be >= 5");

  using Clock = std::chrono::steady_clock;
  struct Row {
    std::string method;
    Index n;
    double seconds;
  };
  std::vector<Row> rows;
  for (Index n : options.n_values) {
    SimConfig cfg;
    cfg.n = n;
    cfg.p = options.p;
    cfg.q = options.q;
    cfg.R_true = std::min({options.R, options.p, options.q});
    cfg.seed = derive_seed(options.seed, static_cast<std::uint64_t>(n));
    const SimData sim = simulate(cfg);

    std::vector<double> press_times, loocv_times;
    for (int rep = 0; rep <= options.repeats; ++rep) {
      auto t0 = Clock::now();
      const PlsFit fit = fit_pls(sim.data, options.R);
      const double press_value = press_pls(fit, sim.data).press_value;
      auto t1 = Clock::now();
      const double loocv_value = loocv_pls_full(sim.data, options.R, options.threads).press_value;
      auto t2 = Clock::now();
      if (!(std::isfinite(press_value) && std::isfinite(loocv_value))) {
        throw DegeneracyError("bench-timing: non-finite PRESS or LOOCV value");
      }
      if (rep == 0) continue;  // warm-up
      press_times.push_back(std::chrono::duration<double>(t1 - t0).count());
      loocv_times.push_back(std::chrono::duration<double>(t2 - t1).count());
    }
    rows.push_back({"loocv", n, median(loocv_times)});
    rows.push_back({"press", n, median(press_times)});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.method != b.method ? a.method < b.method : a.n < b.n;
  });

  json config;
  config["command"] = "bench-timing";
  config["p"] = options.p;
  config["q"] = options.q;
  config["R"] = options.R;
  config["repeats"] = options.repeats;
  config["seed"] = options.seed;
  config["threads"] = options.threads;
  config["hardware"] = hardware_fingerprint();
  config["methodology"] = "median of timed repeats; one warm-up run excluded";

  if (options.format == Format::json) {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back({{"n", r.n}, {"method", r.method}, {"seconds", r.seconds}});
    return {"bench_timing.json", json{{"config", config}, {"rows", arr}}.dump(2) + "\n"};
  }
  std::string out = csv_header(config) + "n,method,seconds\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + "," + r.method + "," + format_double(r.seconds) + "\n";
  }
  return {"bench_timing.csv", out};
}

ErrorBenchResult run_error_bench(const ErrorBenchOptions& options) {
  if (options.n_values.empty()) throw InputError("bench-error: --n list must be non-empty");
  if (options.seeds < 1) throw InputError("bench-error: --seeds must be >= 1");

  ErrorBenchResult result;
  for (Index n : options.n_values) {
    std::vector<double> gaps(static_cast<std::size_t>(options.seeds),
                             std::numeric_limits<double>::quiet_NaN());
    parallel_for(options.seeds, options.threads, [&](Index s) {
      SimConfig cfg = options.base;
      cfg.n = n;
      cfg.p = options.p;
      cfg.q = options.q;
      cfg.R_true = std::min({options.R, options.p, options.q});
      cfg.seed = derive_seed(options.seed, static_cast<std::uint64_t>(s));
      try {
        const SimData sim = simulate(cfg);
        const double press = press_pls(fit_pls(sim.data, options.R), sim.data).press_value;
        const double loocv = loocv_pls_full(sim.data, options.R).press_value;
        gaps[static_cast<std::size_t>(s)] = std::abs(press - loocv) / loocv;
      } catch (const Error&) {
      }
    });
    ErrorBenchRow row;
    row.n = n;
    std::vector<double> ok;
    for (double g : gaps) {
      if (std::isfinite(g)) ok.push_back(g);
    }
    row.seeds = static_cast<Index>(ok.size());
    row.failures = options.seeds - row.seeds;
    row.median_gap = median(ok);
    result.rows.push_back(row);
  }

  // Slope of log(gap) against log(sqrt(log n / n)).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& row : result.rows) {
    if (!(row.median_gap > 0.0) || row.n < 2) continue;
    const double x = 0.5 * std::log(std::log(static_cast<double>(row.n)) / static_cast<double>(row.n));
    const double y = std::log(row.median_gap);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  const double denom = m * sxx - sx * sx;
  result.loglog_slope = m >= 2 && denom != 0.0 ? (m * sxy - sx * sy) / denom
                                               : std::numeric_limits<double>::quiet_NaN();
  return result;
}

Artifact cmd_bench_error(const ErrorBenchOptions& options) {
  const ErrorBenchResult res = run_error_bench(options);
  json config;
  config["command"] = "bench-error";
  config["p"] = options.p;
  config["q"] = options.q;
  config["R"] = options.R;
  config["seeds"] = options.seeds;
  config["seed"] = options.seed;
  config["threads"] = options.threads;
  config["gap"] = "|PRESS - LOOCV| / LOOCV";

  if (options.format == Format::json) {
    json arr = json::array();
    for (const auto& r : res.rows) {
      arr.push_back({{"n", r.n}, {"median_gap", r.median_gap}, {"seeds", r.seeds},
                     {"failures", r.failures}});
    }
    return {"bench_error.json",
            json{{"config", config}, {"rows", arr}, {"loglog_slope", res.loglog_slope}}.dump(2) +
                "\n"};
  }
  config["loglog_slope"] = csv_number(res.loglog_slope);
  std::string out = csv_header(config) + "n,median_gap,seeds,failures\n";
  for (const auto& r : res.rows) {
    out += std::to_string(r.n) + "," + csv_number(r.median_gap) + "," + std::to_string(r.seeds) +
           "," + std::to_string(r.failures) + "\n";
  }
  return {"bench_error.csv", out};
}

}  // namespace plspress::cli
