#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace phmgp {

/// Bad inputs: non-finite values, size mismatches, invalid parameters.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Gram matrix could not be factored even after jitter escalation.
/// Carries the last jitter magnitude that was tried.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double final_jitter)
      : std::runtime_error(what), final_jitter_(final_jitter) {}
  double final_jitter() const noexcept { return final_jitter_; }

 private:
  double final_jitter_;
};

/// Evaluation outside a basis function's domain.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive quadrature failed to converge within the depth limit.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Basis design matrix too close to singular after column scaling.
class IllConditionedBasis : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coefficient statistics need at least two trajectories.
class InsufficientTrajectories : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every optimizer start failed; carries one diagnostic line per start.
class TrainingFailed : public std::runtime_error {
 public:
  TrainingFailed(const std::string& what, std::vector<std::string> diagnostics)
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}
  const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

/// Malformed data file; carries the 1-based row number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long row) : std::runtime_error(what), row_(row) {}
  long row() const noexcept { return row_; }

 private:
  long row_;
};

/// Structurally invalid manifest, config, or model file.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace phmgp
