// plspress: two-block PLS with analytic PRESS, from the command line.

#include "commands.hpp"
#include "dataset_io.hpp"
#include "plspress/errors.hpp"
#include "plspress/parallel.hpp"

#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"

namespace {

using namespace plspress;
using namespace plspress::cli;

const std::map<std::string, Format> kFormats{{"json", Format::json}, {"csv", Format::csv}};
const std::map<std::string, SelectionMethod> kMethods{{"press", SelectionMethod::press},
                                                      {"loocv", SelectionMethod::loocv_full}};
const std::map<std::string, SelectionKind> kModes{{"r", SelectionKind::rank},
                                                  {"gamma", SelectionKind::gamma}};

void emit(const Artifact& artifact, const std::string& out_dir) {
  if (out_dir.empty()) {
    std::cout << artifact.content;
    return;
  }
  std::filesystem::create_directories(out_dir);
  const auto path = std::filesystem::path(out_dir) / artifact.filename;
  std::ofstream out(path);
  if (!out) throw FormatError(path.string() + ": cannot open for writing");
  out << artifact.content;
  std::cerr << "wrote " << path.string() << "\n";
}

void add_data_options(CLI::App* cmd, DataSource& source, std::string& dir, std::string& x,
                      std::string& y) {
  cmd->add_option("--data", dir, "Directory containing X.csv and Y.csv");
  cmd->add_option("--x", x, "Covariate CSV (overrides --data)");
  cmd->add_option("--y", y, "Response CSV (overrides --data)");
  cmd->callback([&source, &dir, &x, &y] {
    if (!dir.empty()) source.dir = dir;
    if (!x.empty()) source.x = x;
    if (!y.empty()) source.y = y;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-block PLS regression with an analytic PRESS statistic"};
  app.require_subcommand(1);

  std::string out_dir;
  Format format = Format::json;
  int threads = default_thread_count();

  // simulate
  SimulateOptions sim;
  std::uint64_t sim_seed = 0;
  double sim_j = 0.0;
  auto* simulate_cmd = app.add_subcommand("simulate", "Generate a synthetic dataset");
  simulate_cmd->add_option("--n", sim.config.n, "Observations")->capture_default_str();
  simulate_cmd->add_option("--p", sim.config.p, "Covariates")->capture_default_str();
  simulate_cmd->add_option("--q", sim.config.q, "Responses")->capture_default_str();
  simulate_cmd->add_option("--r", sim.config.R_true, "True number of factors")->capture_default_str();
  simulate_cmd->add_option("--noise-sd", sim.config.noise_sd, "Noise standard deviation")
      ->capture_default_str();
  simulate_cmd->add_option("--latent-correlation", sim.config.latent_correlation,
                           "Correlation of each (t, s) pair")
      ->capture_default_str();
  simulate_cmd->add_option("--cov", sim.config.cov_schedule,
                           "Descending covariance per factor (default 10*0.7^(r-1))");
  simulate_cmd->add_flag("--sparse", sim.sparse, "Sparse X-loadings; j ~ U(1,2) unless --j");
  simulate_cmd->add_option("--j", sim_j, "Sparsity divisor j >= 1 (implies --sparse)");
  simulate_cmd->add_option("--seed", sim_seed, "Random seed")->required();
  simulate_cmd->add_option("--out", out_dir, "Output directory")->required();

  // fit
  FitOptions fit;
  std::string fit_dir, fit_x, fit_y;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a PLS model and report it");
  add_data_options(fit_cmd, fit.data, fit_dir, fit_x, fit_y);
  fit_cmd->add_option("--r", fit.R, "Number of factors")->required();

  // press / loocv
  PressOptions press;
  std::string press_dir, press_x, press_y;
  auto* press_cmd = app.add_subcommand("press", "Analytic PRESS from one fit");
  add_data_options(press_cmd, press.data, press_dir, press_x, press_y);
  press_cmd->add_option("--r", press.R, "Number of factors")->required();
  press_cmd->add_flag("--residuals", press.residuals, "Include per-observation residuals");

  PressOptions loocv;
  std::string loocv_dir, loocv_x, loocv_y;
  auto* loocv_cmd = app.add_subcommand("loocv", "Leave-one-out CV by explicit refits");
  add_data_options(loocv_cmd, loocv.data, loocv_dir, loocv_x, loocv_y);
  loocv_cmd->add_option("--r", loocv.R, "Number of factors")->required();
  loocv_cmd->add_flag("--residuals", loocv.residuals, "Include per-observation residuals");

  // select-r / select-gamma
  SelectOptions select_r_opts;
  std::string sr_dir, sr_x, sr_y, sr_method = "press";
  auto* select_r_cmd = app.add_subcommand("select-r", "Choose the number of factors");
  add_data_options(select_r_cmd, select_r_opts.data, sr_dir, sr_x, sr_y);
  select_r_cmd->add_option("--r-max", select_r_opts.R_max, "Largest R considered")
      ->capture_default_str();
  select_r_cmd->add_option("--method", sr_method, "press | loocv")
      ->check(CLI::IsMember({"press", "loocv"}))
      ->capture_default_str();

  SelectOptions select_g_opts;
  std::string sg_dir, sg_x, sg_y, sg_method = "press";
  auto* select_g_cmd = app.add_subcommand("select-gamma", "Choose the sparsity penalty");
  add_data_options(select_g_cmd, select_g_opts.data, sg_dir, sg_x, sg_y);
  select_g_cmd->add_option("--grid", select_g_opts.grid_size, "Number of gamma values")
      ->capture_default_str();
  select_g_cmd->add_option("--method", sg_method, "press | loocv")
      ->check(CLI::IsMember({"press", "loocv"}))
      ->capture_default_str();

  // bench-sensitivity
  SensitivityBenchOptions sens;
  std::string sens_mode = "r";
  auto* sens_cmd = app.add_subcommand("bench-sensitivity", "Sensitivity ratio table");
  sens_cmd->add_option("--mode", sens_mode, "r | gamma")
      ->check(CLI::IsMember({"r", "gamma"}))
      ->capture_default_str();
  sens_cmd->add_option("--n", sens.n_values, "Sample sizes")->expected(1, -1);
  sens_cmd->add_option("--pq", sens.pq_values, "Dimensions (p = q)")->expected(1, -1);
  sens_cmd->add_option("--trials", sens.trials, "Trials per cell")->capture_default_str();
  sens_cmd->add_option("--r-max", sens.experiment.R_max, "Largest R considered")
      ->capture_default_str();
  sens_cmd->add_option("--grid", sens.experiment.grid_size, "Number of gamma values")
      ->capture_default_str();
  sens_cmd->add_option("--f1-hit", sens.experiment.f1_hit, "F1 threshold for a gamma hit")
      ->capture_default_str();
  sens_cmd->add_option("--noise-sd", sens.experiment.base.noise_sd, "Noise standard deviation")
      ->capture_default_str();
  sens_cmd->add_option("--latent-correlation", sens.experiment.base.latent_correlation,
                       "Correlation of each (t, s) pair")
      ->capture_default_str();
  sens_cmd->add_option("--cov", sens.experiment.base.cov_schedule, "Covariance schedule");
  sens_cmd->add_option("--seed", sens.seed, "Master seed")->required();

  // bench-timing
  TimingBenchOptions timing;
  int timing_threads = 1;
  auto* timing_cmd = app.add_subcommand("bench-timing", "PRESS vs LOOCV wall time");
  timing_cmd->add_option("--n", timing.n_values, "Sample sizes")->expected(1, -1);
  timing_cmd->add_option("--p", timing.p, "Covariates")->capture_default_str();
  timing_cmd->add_option("--q", timing.q, "Responses")->capture_default_str();
  timing_cmd->add_option("--r", timing.R, "Number of factors")->capture_default_str();
  timing_cmd->add_option("--repeats", timing.repeats, "Timed repeats (>= 5)")
      ->capture_default_str();
  timing_cmd->add_option("--timing-threads", timing_threads,
                         "Threads inside LOOCV (default 1 for clean scaling)")
      ->capture_default_str();
  timing_cmd->add_option("--seed", timing.seed, "Random seed")->required();

  // bench-error
  ErrorBenchOptions error;
  auto* error_cmd = app.add_subcommand("bench-error", "PRESS vs LOOCV gap as n grows");
  error_cmd->add_option("--n", error.n_values, "Sample sizes")->expected(1, -1);
  error_cmd->add_option("--p", error.p, "Covariates")->capture_default_str();
  error_cmd->add_option("--q", error.q, "Responses")->capture_default_str();
  error_cmd->add_option("--r", error.R, "Number of factors")->capture_default_str();
  error_cmd->add_option("--seeds", error.seeds, "Seeds per n")->capture_default_str();
  error_cmd->add_option("--seed", error.seed, "Master seed")->required();

  for (auto* cmd : {fit_cmd, press_cmd, loocv_cmd, select_r_cmd, select_g_cmd, sens_cmd,
                    timing_cmd, error_cmd}) {
    cmd->add_option("--out", out_dir, "Write the artifact into this directory");
    cmd->add_option("--format", format, "Output format")
        ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case).description(""))
        ->type_name("json|csv");
  }
  for (auto* cmd : {loocv_cmd, select_r_cmd, select_g_cmd, sens_cmd, error_cmd}) {
    cmd->add_option("--threads", threads, "Worker threads")->capture_default_str();
  }
  // Bench commands default to CSV unless --format is given.
  for (auto* cmd : {sens_cmd, timing_cmd, error_cmd}) {
    cmd->preparse_callback([&format](std::size_t) { format = Format::csv; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate_cmd) {
      sim.config.seed = sim_seed;
      sim.out = out_dir;
      if (simulate_cmd->count("--j") > 0) sim.config.sparsity_j = sim_j;
      const SimConfig resolved = cmd_simulate(sim);
      std::cerr << "wrote X.csv, Y.csv, truth.json to " << out_dir << " (seed " << resolved.seed
                << ")\n";
    } else if (*fit_cmd) {
      fit.format = format;
      emit(cmd_fit(fit), out_dir);
    } else if (*press_cmd) {
      press.format = format;
      emit(cmd_press(press), out_dir);
    } else if (*loocv_cmd) {
      loocv.format = format;
      loocv.threads = threads;
      emit(cmd_loocv(loocv), out_dir);
    } else if (*select_r_cmd) {
      select_r_opts.format = format;
      select_r_opts.threads = threads;
      select_r_opts.method = kMethods.at(sr_method);
      emit(cmd_select_r(select_r_opts), out_dir);
    } else if (*select_g_cmd) {
      select_g_opts.format = format;
      select_g_opts.threads = threads;
      select_g_opts.method = kMethods.at(sg_method);
      emit(cmd_select_gamma(select_g_opts), out_dir);
    } else if (*sens_cmd) {
      sens.format = format;
      sens.kind = kModes.at(sens_mode);
      sens.experiment.threads = threads;
      emit(cmd_bench_sensitivity(sens), out_dir);
    } else if (*timing_cmd) {
      timing.format = format;
      timing.threads = timing_threads;
      emit(cmd_bench_timing(timing), out_dir);
    } else if (*error_cmd) {
      error.format = format;
      error.threads = threads;
      emit(cmd_bench_error(error), out_dir);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
