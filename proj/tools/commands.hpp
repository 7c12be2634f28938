#pragma once

// Subcommand implementations. Each returns the artifact text; the caller
// decides whether it goes to stdout or to a file under --out.

#include "plspress/modelselect.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace plspress::cli {

enum class Format { json, csv };

struct Artifact {
  std::string filename;  ///< used when writing into --out
  std::string content;
};

struct DataSource {
  std::optional<std::filesystem::path> dir;  ///< holds X.csv and Y.csv
  std::optional<std::filesystem::path> x;
  std::optional<std::filesystem::path> y;
};

/// Loads and centres the (X, Y) pair.
DataBlock load_data(const DataSource& source);

struct SimulateOptions {
  SimConfig config;
  bool sparse = false;  ///< draw j from U(1, 2) unless config.sparsity_j is set
  std::filesystem::path out;
};
/// Writes X.csv, Y.csv, truth.json; returns the resolved config.
SimConfig cmd_simulate(SimulateOptions options);

struct FitOptions {
  DataSource data;
  Index R = 1;
  Format format = Format::json;
};
Artifact cmd_fit(const FitOptions& options);

struct PressOptions {
  DataSource data;
  Index R = 1;
  Format format = Format::json;
  bool residuals = false;  ///< include the n x q residual matrix
  int threads = 1;         ///< used by loocv only
};
Artifact cmd_press(const PressOptions& options);
Artifact cmd_loocv(const PressOptions& options);

struct SelectOptions {
  DataSource data;
  SelectionMethod method = SelectionMethod::press;
  Index R_max = 10;       ///< select-r, capped at min(p, q)
  Index grid_size = 100;  ///< select-gamma
  Format format = Format::json;
  int threads = 1;
};
Artifact cmd_select_r(const SelectOptions& options);
Artifact cmd_select_gamma(const SelectOptions& options);

struct SensitivityBenchOptions {
  SelectionKind kind = SelectionKind::rank;
  std::vector<Index> n_values{200};
  std::vector<Index> pq_values{100};  ///< p = q
  Index trials = 50;
  std::uint64_t seed = 0;
  SensitivityOptions experiment;
  Format format = Format::csv;
};
Artifact cmd_bench_sensitivity(const SensitivityBenchOptions& options);

struct TimingBenchOptions {
  std::vector<Index> n_values{100, 200, 400, 800};
  Index p = 50;
  Index q = 50;
  Index R = 3;
  int repeats = 5;  ///< timed repeats after one warm-up
  std::uint64_t seed = 0;
  int threads = 1;
  Format format = Format::csv;
};
Artifact cmd_bench_timing(const TimingBenchOptions& options);

struct ErrorBenchOptions {
  std::vector<Index> n_values{50, 100, 200, 400, 800};
  Index p = 20;
  Index q = 20;
  Index R = 3;
  Index seeds = 20;
  std::uint64_t seed = 0;
  int threads = 1;
  SimConfig base;
  Format format = Format::csv;
};

struct ErrorBenchRow {
  Index n = 0;
  double median_gap = 0.0;
  Index seeds = 0;
  Index failures = 0;
};
struct ErrorBenchResult {
  std::vector<ErrorBenchRow> rows;
  /// Least-squares slope of log(median gap) on log(sqrt(log n / n)).
  double loglog_slope = 0.0;
};
/// Median relative gap |PRESS - LOOCV| / LOOCV per n.
ErrorBenchResult run_error_bench(const ErrorBenchOptions& options);
Artifact cmd_bench_error(const ErrorBenchOptions& options);

/// CPU model and thread count, for timing headers.
std::string hardware_fingerprint();

}  // namespace plspress::cli
