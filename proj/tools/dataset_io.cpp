#include "dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace plspress::cli {

std::string format_double(double value) {
  char buf[64];
  // Shortest round-trip form never needs more than 17 significant digits.
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

Matrix read_csv_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path.string() + ": cannot open file");

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    std::size_t col = 0;
    while (std::getline(ss, field, ',')) {
      ++col;
      const std::string text = trim(field);
      double value = 0.0;
      const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
      if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw FormatError(path.string() + ": row " + std::to_string(line_no) + ", column " +
                          std::to_string(col) + ": cannot parse '" + text + "' as a number");
      }
      if (!std::isfinite(value)) {
        throw FormatError(path.string() + ": row " + std::to_string(line_no) + ", column " +
                          std::to_string(col) + ": non-finite value");
      }
      row.push_back(value);
    }
    if (!line.empty() && line.back() == ',') {
      throw FormatError(path.string() + ": row " + std::to_string(line_no) + ", column " +
                        std::to_string(col + 1) + ": empty field");
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw FormatError(path.string() + ": row " + std::to_string(line_no) + " has " +
                        std::to_string(row.size()) + " columns, expected " +
                        std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError(path.string() + ": no data rows");

  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return m;
}

void write_csv_matrix(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw FormatError(path.string() + ": cannot open for writing");
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  if (!out) throw FormatError(path.string() + ": write failed");
}

nlohmann::json to_json(const Matrix& m) {
  auto rows = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json to_json(const Vector& v) {
  auto out = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

nlohmann::json config_json(const SimConfig& c) {
  nlohmann::json j;
  j["n"] = c.n;
  j["p"] = c.p;
  j["q"] = c.q;
  j["R_true"] = c.R_true;
  j["sparsity_j"] = c.sparsity_j ? nlohmann::json(*c.sparsity_j) : nlohmann::json(nullptr);
  j["noise_sd"] = c.noise_sd;
  j["seed"] = c.seed;
  j["cov_schedule"] = c.resolved_cov_schedule();
  j["latent_correlation"] = c.latent_correlation;
  j["mean_range"] = {c.mean_low, c.mean_high};
  return j;
}

void write_dataset(const std::filesystem::path& dir, const SimData& sim) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw FormatError(dir.string() + ": cannot create directory: " + ec.message());

  write_csv_matrix(dir / "X.csv", sim.X_raw);
  write_csv_matrix(dir / "Y.csv", sim.Y_raw);

  nlohmann::json truth;
  truth["config"] = config_json(sim.config);
  truth["U_true"] = to_json(sim.truth.U_true);
  truth["V_true"] = to_json(sim.truth.V_true);
  truth["support"] = sim.truth.support_true;
  truth["sparse"] = sim.config.sparsity_j.has_value();
  std::ofstream out(dir / "truth.json");
  if (!out) throw FormatError((dir / "truth.json").string() + ": cannot open for writing");
  out << truth.dump(2) << '\n';
}

}  // namespace plspress::cli
