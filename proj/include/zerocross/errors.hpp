#pragma once

#include <stdexcept>
#include <string>

namespace zerocross {

/// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
/// Carries the best available estimate and the bound on its error.
class QuadratureBudgetError : public std::runtime_error {
 public:
  QuadratureBudgetError(const std::string& what, double best, double bound)
      : std::runtime_error(what), best_estimate(best), error_bound(bound) {}
  double best_estimate;
  double error_bound;
};

/// An image/eigenfunction series failed its stopping rule within the
/// configured number of terms.
class SeriesBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace zerocross
