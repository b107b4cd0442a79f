#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace boxgauge {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: out-of-range arguments, violated preconditions, malformed
/// configuration. The CLI maps these to exit status 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class RangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidArgument : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ConfigurationError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A numerical procedure failed on valid input. The CLI maps these to exit
/// status 3.
class NumericalFailure : public Error {
 public:
  explicit NumericalFailure(const std::string& what,
                            std::optional<std::pair<double, double>> bracket = std::nullopt)
      : Error(what), bracket_(bracket) {}

  /// Search interval at the time of failure, when the failure came from a root finder.
  const std::optional<std::pair<double, double>>& bracket() const noexcept { return bracket_; }

 private:
  std::optional<std::pair<double, double>> bracket_;
};

/// A wavepacket reached the edge of its periodic grid window.
class HorizonError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

/// The defect-index classifier could not decide integrability.
class AnalysisError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace boxgauge
