#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace plspress {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A count or shape argument is out of range (R > min(p, q), mismatched rows, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input values are unusable: non-finite entries, uncentered data, negative penalty.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A latent factor or design is numerically degenerate.
class DegeneracyError : public Error {
 public:
  explicit DegeneracyError(const std::string& what, Eigen::Index component = -1)
      : Error(what), component_(component) {}

  /// Zero-based component index, or -1 when not tied to one component.
  Eigen::Index component() const noexcept { return component_; }

 private:
  Eigen::Index component_;
};

/// Removing one observation makes a Gram matrix singular (leverage h >= 1 - 1e-10).
class LeverageError : public Error {
 public:
  LeverageError(const std::string& what, Eigen::Index observation, std::string block)
      : Error(what), observation_(observation), block_(std::move(block)) {}

  Eigen::Index observation() const noexcept { return observation_; }
  const std::string& block() const noexcept { return block_; }

 private:
  Eigen::Index observation_;
  std::string block_;
};

}  // namespace plspress
