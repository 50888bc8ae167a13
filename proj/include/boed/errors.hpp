#ifndef BOED_ERRORS_HPP
#define BOED_ERRORS_HPP

#include <limits>
#include <stdexcept>
#include <string>

namespace boed {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Incompatible matrix/vector dimensions.
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(what) {}
};

/// A covariance failed its symmetry/PSD/PD requirement.
class NotPsdError : public Error {
 public:
  explicit NotPsdError(const std::string& what) : Error(what) {}
};

/// An iterative solver exhausted its budget. `last_estimate` carries the
/// final iterate's scalar summary where one exists (e.g. the last spectral
/// radius estimate), NaN otherwise.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_estimate)
      : Error(what), last_estimate_(last_estimate) {}
  explicit ConvergenceError(const std::string& what)
      : ConvergenceError(what, std::numeric_limits<double>::quiet_NaN()) {}
  double last_estimate() const { return last_estimate_; }

 private:
  double last_estimate_;
};

/// A model violates the asymptotic-stability gate.
class StabilityError : public Error {
 public:
  StabilityError(const std::string& what, double rho)
      : Error(what), spectral_radius_(rho) {}
  double spectral_radius() const { return spectral_radius_; }

 private:
  double spectral_radius_;
};

}  // namespace boed

#endif
