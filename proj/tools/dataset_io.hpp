#pragma once

// Dataset files: headerless numeric CSV (one observation per row) for X and
// Y, and truth.json for simulated ground truth.

#include "plspress/numkernel.hpp"
#include "plspress/simgen.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace plspress::cli {

/// Malformed or unreadable input file. The message names the file, and the
/// row and column when the problem is a single field.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest text that parses back to exactly `value` (at most 17 significant digits).
std::string format_double(double value);

Matrix read_csv_matrix(const std::filesystem::path& path);
void write_csv_matrix(const std::filesystem::path& path, const Matrix& m);

nlohmann::json to_json(const Matrix& m);
nlohmann::json to_json(const Vector& v);
nlohmann::json config_json(const SimConfig& config);

/// Writes X.csv, Y.csv and truth.json into `dir`, creating it if needed.
void write_dataset(const std::filesystem::path& dir, const SimData& sim);

}  // namespace plspress::cli
