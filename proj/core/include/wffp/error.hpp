#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wffp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (non-finite x, v0 <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Vector or coefficient array has the wrong length for the layout it is used with.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Diffusion or reaction coefficient violates ellipticity (a <= 0, b < 0, ...).
class CoefficientError : public Error {
 public:
  using Error::Error;
};

/// Preconditioner exponent incompatible with the requested wiring mode.
class WiringError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment specification, preset name or config file.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, std::vector<std::string> diagnostics = {})
      : Error(what), diagnostics_(std::move(diagnostics)) {}
  const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

/// Dense materialization refused because the operator is too large.
class SizeGuardError : public Error {
 public:
  using Error::Error;
};

/// Power iteration for frame bounds ran out of budget; carries the best estimates.
class FrameBoundsError : public Error {
 public:
  FrameBoundsError(const std::string& what, double lower, double upper)
      : Error(what), lower_(lower), upper_(upper) {}
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

 private:
  double lower_;
  double upper_;
};

/// Dense SVD failed; carries whatever singular values were produced.
class SpectrumError : public Error {
 public:
  SpectrumError(const std::string& what, std::vector<double> partial)
      : Error(what), partial_(std::move(partial)) {}
  const std::vector<double>& partial() const noexcept { return partial_; }

 private:
  std::vector<double> partial_;
};

}  // namespace wffp
