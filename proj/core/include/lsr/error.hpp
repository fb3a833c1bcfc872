#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lsr {

enum class ErrorKind {
  domain,
  solver_failure,
  contraction_failure,
  singular_system,
  eigensolver_failure,
  truncation,
  grid_mismatch,
  validation,
  config,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base class of every error raised by the library. The kind is what the
/// CLI maps onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

/// Shooting bracket did not close within the iteration budget.
class ShootingFailure : public Error {
 public:
  ShootingFailure(const std::string& what, double lo, double hi)
      : Error(ErrorKind::solver_failure, what), lo_(lo), hi_(hi) {}
  double bracket_lo() const noexcept { return lo_; }
  double bracket_hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

class ContractionFailure : public Error {
 public:
  ContractionFailure(const std::string& what, std::vector<double> history)
      : Error(ErrorKind::contraction_failure, what), history_(std::move(history)) {}
  const std::vector<double>& update_history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

class SingularSystem : public Error {
 public:
  SingularSystem(const std::string& what, double condition_estimate)
      : Error(ErrorKind::singular_system, what), condition_(condition_estimate) {}
  double condition_estimate() const noexcept { return condition_; }

 private:
  double condition_;
};

class EigensolverFailure : public Error {
 public:
  EigensolverFailure(const std::string& what, std::vector<double> residuals)
      : Error(ErrorKind::eigensolver_failure, what), residuals_(std::move(residuals)) {}
  const std::vector<double>& residuals() const noexcept { return residuals_; }

 private:
  std::vector<double> residuals_;
};

class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double required_half_width)
      : Error(ErrorKind::truncation, what), required_(required_half_width) {}
  double required_half_width() const noexcept { return required_; }

 private:
  double required_;
};

class GridMismatch : public Error {
 public:
  explicit GridMismatch(const std::string& what) : Error(ErrorKind::grid_mismatch, what) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

}  // namespace lsr
